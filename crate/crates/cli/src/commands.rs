//! The five subcommands, each producing an exit code and report text.

use std::path::{Path, PathBuf};

use polysmith::matrix::{check_certificate, determinant, minor_report, rank, smith_form, CertificateCheck};
use polysmith::residue::Irreducibility;
use polysmith::{
    check_hypothesis, generate, smith_reduce, BarMap, Budget, Field, GeneratorConfig, ModulusP, Poly, PolyRing,
    PrimeField, Rationals, ReductionOutcome, SearchConfig, TermOrder, VarSet,
};
use serde::Serialize;
use serde_json::json;

use crate::error::*;
use crate::files::{to_json, write_atomic, CertificateFile, CertificateMeta, FieldSpec, Loaded, ProblemFile};

/// Flags shared by every subcommand.
#[derive(Clone, Debug)]
pub struct GlobalOpts {
    pub order: TermOrder,
    pub budget_ms: Option<u64>,
    pub seed: u64,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts { order: TermOrder::Grevlex, budget_ms: None, seed: 0 }
    }
}

impl GlobalOpts {
    fn budget(&self) -> Budget {
        match self.budget_ms {
            Some(ms) => Budget::with_time(ms),
            None => Budget::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { code: EXIT_OK, stdout, stderr: String::new() }
    }
}

macro_rules! with_field {
    ($spec:expr, |$k:ident| $body:expr) => {
        match $spec {
            FieldSpec::Q => {
                let $k = Rationals;
                $body
            }
            FieldSpec::Fp(q) => {
                let $k = PrimeField::new(q).ok_or_else(|| CliError::Parse(format!("{q} is not a supported prime")))?;
                $body
            }
        }
    };
}

fn require_modulus<K: Field>(loaded: &Loaded<K>) -> Result<&ModulusP<K>, CliError> {
    loaded.modulus.as_ref().ok_or_else(|| CliError::Hypothesis("the problem has no modulus p".into()))
}

fn order_name(o: TermOrder) -> &'static str {
    o.name()
}

#[derive(Serialize)]
struct MinorSummary {
    order: usize,
    d: String,
    #[serde(rename = "unit_I")]
    unit_i: bool,
    #[serde(rename = "unit_J")]
    unit_j: bool,
}

#[derive(Serialize)]
struct SmithSummary {
    rank: usize,
    d: Vec<String>,
    phi: Vec<String>,
    exponents: Option<Vec<u32>>,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct ModulusSummary {
    p: String,
    irreducibility: String,
}

#[derive(Serialize)]
struct Hypothesis {
    holds: bool,
    detail: String,
}

#[derive(Serialize)]
struct AnalysisReport {
    shape: [usize; 2],
    det: Option<String>,
    rank: usize,
    minors: Vec<MinorSummary>,
    smith: SmithSummary,
    modulus: Option<ModulusSummary>,
    hypothesis: Hypothesis,
    verdict_preview: String,
}

pub fn analyze(problem: &ProblemFile, opts: &GlobalOpts) -> Result<Output, CliError> {
    with_field!(problem.field, |k| analyze_in(&problem.parse_in(k, opts.order)?, opts))
}

fn analyze_in<K: Field>(loaded: &Loaded<K>, opts: &GlobalOpts) -> Result<Output, CliError> {
    let f = &loaded.f;
    let budget = opts.budget();
    let det = if f.is_square() { Some(determinant(f)?.to_string()) } else { None };
    let r = rank(f);
    let mut minors = Vec::new();
    for i in 1..=f.rows().min(f.cols()) {
        let rep = minor_report(f, i, opts.order, &budget)?;
        minors.push(MinorSummary { order: i, d: rep.d.to_string(), unit_i: rep.unit_i, unit_j: rep.unit_j });
    }
    let sf = smith_form(f, loaded.modulus.as_ref())?;
    let strings = |v: &[Poly<K>]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let smith = SmithSummary {
        rank: sf.rank,
        d: strings(&sf.d),
        phi: strings(&sf.phi),
        exponents: sf.exponents.clone(),
        matrix: sf.matrix().to_strings(),
    };
    let modulus = loaded.modulus.as_ref().map(|m| ModulusSummary {
        p: m.poly().to_string(),
        irreducibility: match m.status() {
            Irreducibility::Certified(q) => format!("certified modulo {q}"),
            Irreducibility::Asserted => "asserted".into(),
        },
    });
    let (hypothesis, verdict) = match &loaded.modulus {
        None => (Hypothesis { holds: false, detail: "no modulus p".into() }, "no modulus supplied".to_string()),
        Some(m) => match check_hypothesis(f, m) {
            Err(e) => {
                let e = CliError::from(e);
                if e.exit_code() == EXIT_BUDGET {
                    return Err(e);
                }
                (Hypothesis { holds: false, detail: e.to_string() }, "outside the p-power class".to_string())
            }
            Ok(r) => {
                let detail = if f.is_square() && r == f.rows() {
                    format!("det = c * {}^t", m.poly())
                } else {
                    format!("d_{r} = c * {}^t", m.poly())
                };
                let failed = minors.iter().take(r).find(|s| !s.unit_j).map(|s| s.order);
                let verdict = match failed {
                    Some(i) => format!("not equivalent (J_{i} is a proper ideal)"),
                    None if *f == sf.matrix() => "equivalent (trivially)".to_string(),
                    None => "equivalent (all J_i are the unit ideal)".to_string(),
                };
                (Hypothesis { holds: true, detail }, verdict)
            }
        },
    };
    let report = AnalysisReport {
        shape: [f.rows(), f.cols()],
        det,
        rank: r,
        minors,
        smith,
        modulus,
        hypothesis,
        verdict_preview: verdict,
    };
    Ok(Output::ok(to_json(&report)))
}

#[derive(Clone, Debug)]
pub struct ReduceOpts {
    pub out: Option<PathBuf>,
    pub degree_bound: u32,
    pub max_attempts: usize,
}

impl Default for ReduceOpts {
    fn default() -> Self {
        let d = SearchConfig::default();
        ReduceOpts { out: None, degree_bound: d.degree_bound, max_attempts: d.max_attempts }
    }
}

pub fn reduce(problem: &ProblemFile, opts: &GlobalOpts, ropts: &ReduceOpts) -> Result<Output, CliError> {
    with_field!(problem.field, |k| reduce_in(&problem.parse_in(k, opts.order)?, opts, ropts))
}

fn reduce_in<K: Field>(loaded: &Loaded<K>, opts: &GlobalOpts, ropts: &ReduceOpts) -> Result<Output, CliError> {
    let m = require_modulus(loaded)?;
    let cfg = SearchConfig {
        degree_bound: ropts.degree_bound,
        seed: opts.seed,
        budget_ms: opts.budget_ms,
        max_attempts: ropts.max_attempts,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    match smith_reduce(&loaded.f, m, &cfg)? {
        ReductionOutcome::Certified(cert) => {
            let meta = CertificateMeta {
                seed: opts.seed,
                config: json!({
                    "command": "reduce",
                    "degree_bound": cfg.degree_bound,
                    "max_attempts": cfg.max_attempts,
                    "budget_ms": cfg.budget_ms,
                    "order": order_name(opts.order),
                }),
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
            };
            let text = to_json(&CertificateFile::from_certificate(&cert, meta));
            match &ropts.out {
                Some(path) => {
                    write_atomic(path, &text)?;
                    Ok(Output::ok(format!("certified: S = {}\n", cert.s)))
                }
                None => Ok(Output::ok(text)),
            }
        }
        out @ ReductionOutcome::NotEquivalent { .. } => {
            let ReductionOutcome::NotEquivalent { witness, .. } = &out else { unreachable!() };
            let basis: Vec<String> = witness.basis().iter().map(|p| p.to_string()).collect();
            Ok(Output {
                code: EXIT_NOT_EQUIVALENT,
                stdout: format!("{out}\nwitness basis: [{}]\n", basis.join(", ")),
                stderr: String::new(),
            })
        }
        out @ ReductionOutcome::Unknown { .. } => {
            let ReductionOutcome::Unknown { diagnostics, .. } = &out else { unreachable!() };
            let mut s = format!("{out}\n");
            for d in diagnostics {
                s.push_str(&format!("  {d}\n"));
            }
            Ok(Output { code: EXIT_UNKNOWN, stdout: s, stderr: String::new() })
        }
    }
}

pub fn verify(problem: &ProblemFile, cert: &CertificateFile, opts: &GlobalOpts) -> Result<Output, CliError> {
    with_field!(problem.field, |k| {
        let loaded = problem.parse_in(k, opts.order)?;
        let c = cert.parse_in(&loaded.ring)?;
        match check_certificate(&loaded.f, &c)? {
            CertificateCheck::Verified => Ok(Output::ok("verified\n".into())),
            other => Ok(Output { code: EXIT_VERIFY_FAILED, stdout: format!("{other}\n"), stderr: String::new() }),
        }
    })
}

#[derive(Clone, Debug)]
pub struct GenerateOpts {
    pub field: FieldSpec,
    pub vars: usize,
    pub rows: usize,
    pub cols: usize,
    pub p: String,
    pub exps: Vec<u32>,
    pub factors: usize,
    pub deg: u32,
    pub out: Option<PathBuf>,
    pub cert: Option<PathBuf>,
    pub no_cert: bool,
}

impl Default for GenerateOpts {
    fn default() -> Self {
        GenerateOpts {
            field: FieldSpec::Q,
            vars: 2,
            rows: 2,
            cols: 2,
            p: "x1".into(),
            exps: vec![0, 1],
            factors: 3,
            deg: 2,
            out: None,
            cert: None,
            no_cert: false,
        }
    }
}

/// Sibling path `<stem>.cert.json` of a problem file.
pub fn default_cert_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "problem".into());
    out.with_file_name(format!("{stem}.cert.json"))
}

/// The generated problem and its ground-truth certificate as files.
pub fn generate_files(opts: &GlobalOpts, g: &GenerateOpts) -> Result<(ProblemFile, CertificateFile), CliError> {
    if g.vars == 0 {
        return Err(CliError::Usage("--vars must be at least 1".into()));
    }
    with_field!(g.field, |k| {
        let ring = PolyRing::new(VarSet::standard(g.vars), k, opts.order);
        let m = ModulusP::new(&Poly::parse(&g.p, &ring)?)?;
        let cfg = GeneratorConfig {
            rows: g.rows,
            cols: g.cols,
            exponents: g.exps.clone(),
            factors: g.factors,
            degree: g.deg,
            seed: opts.seed,
        };
        let inst = generate(&ring, &m, &cfg).map_err(|e| CliError::Usage(e.to_string()))?;
        let problem = ProblemFile {
            variables: ring.vars.names().to_vec(),
            field: g.field,
            matrix: inst.f.to_strings(),
            p: Some(m.poly().to_string()),
            assert_irreducible: (!m.is_certified()).then_some(true),
            seed: Some(opts.seed),
        };
        let meta = CertificateMeta {
            seed: opts.seed,
            config: json!({
                "command": "generate",
                "vars": g.vars,
                "size": [g.rows, g.cols],
                "p": m.poly().to_string(),
                "exps": g.exps,
                "factors": g.factors,
                "deg": g.deg,
                "order": order_name(opts.order),
            }),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        };
        Ok((problem, CertificateFile::from_certificate(&inst.certificate, meta)))
    })
}

pub fn generate_cmd(opts: &GlobalOpts, g: &GenerateOpts) -> Result<Output, CliError> {
    let (problem, cert) = generate_files(opts, g)?;
    let cert_path = if g.no_cert { None } else { g.cert.clone().or_else(|| g.out.as_deref().map(default_cert_path)) };
    if let Some(path) = &cert_path {
        write_atomic(path, &to_json(&cert))?;
    }
    match &g.out {
        Some(path) => {
            write_atomic(path, &to_json(&problem))?;
            let mut s = format!("problem written to {}\n", path.display());
            if let Some(c) = &cert_path {
                s.push_str(&format!("certificate written to {}\n", c.display()));
            }
            Ok(Output::ok(s))
        }
        None => Ok(Output::ok(to_json(&problem))),
    }
}

fn field_label(f: FieldSpec) -> String {
    match f {
        FieldSpec::Q => "Q".into(),
        FieldSpec::Fp(q) => format!("F_{q}"),
    }
}

#[derive(Serialize)]
struct BarReport {
    variables: Vec<String>,
    residue_field: String,
    matrix: Vec<Vec<String>>,
    rank: usize,
}

pub fn bar(problem: &ProblemFile, opts: &GlobalOpts) -> Result<Output, CliError> {
    with_field!(problem.field, |k| {
        let loaded = problem.parse_in(k, opts.order)?;
        let m = require_modulus(&loaded)?;
        let map = BarMap::new(&loaded.ring, m);
        let fb = map.bar_matrix(&loaded.f);
        let report = BarReport {
            variables: map.target().vars.names().to_vec(),
            residue_field: format!("{}[{}]/({})", field_label(problem.field), loaded.ring.vars.names()[0], m.poly()),
            matrix: fb.to_strings(),
            rank: rank(&fb),
        };
        Ok(Output::ok(to_json(&report)))
    })
}
