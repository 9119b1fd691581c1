//! Command-line surface for polysmith: JSON problem and certificate files,
//! the `analyze`, `reduce`, `verify`, `generate` and `bar` commands, and a
//! fixed exit-code table.

pub mod commands;
pub mod error;
pub mod files;

use std::ffi::OsString;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use polysmith::TermOrder;

pub use commands::{GenerateOpts, GlobalOpts, Output, ReduceOpts};
pub use error::CliError;
pub use files::{CertificateFile, CertificateMeta, FieldSpec, ProblemFile};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Grevlex,
    Lex,
}

#[derive(Parser, Debug)]
#[command(name = "polysmith", version, about = "Smith forms and equivalence certificates for polynomial matrices")]
struct Cli {
    /// Monomial order used for every Groebner basis.
    #[arg(long, global = true, value_enum, default_value = "grevlex")]
    order: OrderArg,
    /// Wall-clock budget in milliseconds.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget_ms: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Report determinant, minors, Smith data and the equivalence conditions.
    Analyze { problem: PathBuf },
    /// Search for a certificate reducing the matrix to its Smith form.
    Reduce {
        problem: PathBuf,
        /// Where to write the certificate; printed to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        degree_bound: u32,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        max_attempts: u64,
    },
    /// Check `U * F * V == S` with `U`, `V` unimodular.
    Verify { problem: PathBuf, cert: PathBuf },
    /// Random instance `U0 * S * V0` with its ground-truth certificate.
    Generate {
        /// `Q` or a prime `q` for the field with `q` elements.
        #[arg(long, default_value = "Q", value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long, default_value_t = 2)]
        vars: usize,
        /// `l` or `l,m`.
        #[arg(long, default_value = "2", value_parser = parse_size)]
        size: (usize, usize),
        #[arg(long, default_value = "x1")]
        p: String,
        /// Nondecreasing exponents `s1,s2,...`.
        #[arg(long, value_delimiter = ',', required = true)]
        exps: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        factors: usize,
        #[arg(long, default_value_t = 2)]
        deg: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Certificate path; defaults to `<stem>.cert.json` next to `--out`.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        no_cert: bool,
    },
    /// Print the matrix modulo `p` and its rank.
    Bar { problem: PathBuf },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    if s.eq_ignore_ascii_case("q") {
        return Ok(FieldSpec::Q);
    }
    let t = s.trim_start_matches("Fp:").trim_start_matches("fp:");
    t.parse::<u64>().map(FieldSpec::Fp).map_err(|_| format!("expected Q or a prime, got '{s}'"))
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad size '{s}'"));
    match parts.as_slice() {
        [l] => {
            let l = num(l)?;
            Ok((l, l))
        }
        [l, m] => Ok((num(l)?, num(m)?)),
        _ => Err(format!("bad size '{s}'")),
    }
}

fn dispatch(cli: Cli) -> Result<Output, CliError> {
    let opts = GlobalOpts {
        order: match cli.order {
            OrderArg::Grevlex => TermOrder::Grevlex,
            OrderArg::Lex => TermOrder::Lex,
        },
        budget_ms: cli.budget_ms,
        seed: cli.seed,
    };
    match cli.cmd {
        Cmd::Analyze { problem } => commands::analyze(&ProblemFile::load(&problem)?, &opts),
        Cmd::Reduce { problem, out, degree_bound, max_attempts } => {
            commands::reduce(&ProblemFile::load(&problem)?, &opts, &ReduceOpts { out, degree_bound, max_attempts: max_attempts as usize })
        }
        Cmd::Verify { problem, cert } => {
            commands::verify(&ProblemFile::load(&problem)?, &CertificateFile::load(&cert)?, &opts)
        }
        Cmd::Generate { field, vars, size, p, exps, factors, deg, out, cert, no_cert } => {
            let g = GenerateOpts { field, vars, rows: size.0, cols: size.1, p, exps, factors, deg, out, cert, no_cert };
            commands::generate_cmd(&opts, &g)
        }
        Cmd::Bar { problem } => commands::bar(&ProblemFile::load(&problem)?, &opts),
    }
}

fn panic_message(payload: &(dyn std::any::Any + Send)) -> String {
    payload
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| payload.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

/// Parses arguments (including the program name) and runs one command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Output { code: error::EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => Output { code: error::EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    // arithmetic modulo a reducible p that was asserted irreducible panics on
    // a missing inverse
    match catch_unwind(AssertUnwindSafe(|| dispatch(cli))) {
        Ok(Ok(out)) => out,
        Ok(Err(e)) => Output { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
        Err(p) => Output {
            code: error::EXIT_HYPOTHESIS,
            stdout: String::new(),
            stderr: format!("error: arithmetic failed ({}); is p irreducible?\n", panic_message(p.as_ref())),
        },
    }
}
