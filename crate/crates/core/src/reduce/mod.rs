//! Reduction of a matrix to its Smith form with explicit unimodular
//! transformations.
//!
//! Every search here is bounded. A positive answer is always checked by
//! multiplying the certificate out; a negative answer always carries a
//! Gröbner basis showing that some ideal of reduced minors is proper.

mod complete;
mod euclid;
mod lifting;
mod pivot;
mod work;

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::ReduceError;
use crate::ideal::{buchberger_with_lift, Budget, GroebnerBasis};
use crate::matrix::{determinant, rank, reduced_minors, EquivCertificate, PolyMatrix};
use crate::poly::{Field, Poly};
use crate::residue::{BarMap, ModulusP};

pub use complete::complete_unimodular;
pub use euclid::{zlp_rank1_factorize, Rank1Factors};
pub use lifting::{compress_rect, extract_left_factor, smith_reduce, smith_reduce_traced};
pub use pivot::attempt_diagonalize;

/// Knobs for the bounded searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest total degree of an unknown coefficient in an ansatz.
    pub degree_bound: u32,
    pub seed: u64,
    /// Wall-clock cap for one reduction; `None` means no cap.
    pub budget_ms: Option<u64>,
    /// Cap on randomized candidates tried per search.
    pub max_attempts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { degree_bound: 3, seed: 0, budget_ms: None, max_attempts: 200 }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        SearchConfig { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), ReduceError> {
        if self.degree_bound == 0 || self.max_attempts == 0 || self.budget_ms == Some(0) {
            return Err(ReduceError::HypothesisViolated("search limits must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum ReductionOutcome<K: Field> {
    Certified(EquivCertificate<K>),
    /// `J_index(F)` is a proper ideal; `witness` is its reduced basis.
    NotEquivalent { index: usize, witness: GroebnerBasis<K> },
    Unknown { stage: String, diagnostics: Vec<String> },
}

impl<K: Field> ReductionOutcome<K> {
    pub fn is_certified(&self) -> bool {
        matches!(self, ReductionOutcome::Certified(_))
    }

    pub fn certificate(&self) -> Option<&EquivCertificate<K>> {
        match self {
            ReductionOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ReductionOutcome::Certified(_) => "certified",
            ReductionOutcome::NotEquivalent { .. } => "not_equivalent",
            ReductionOutcome::Unknown { .. } => "unknown",
        }
    }

    pub(crate) fn unknown(stage: &str, diagnostics: Vec<String>) -> Self {
        ReductionOutcome::Unknown { stage: stage.to_string(), diagnostics }
    }
}

impl<K: Field> fmt::Display for ReductionOutcome<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionOutcome::Certified(c) => write!(f, "certified: S = {}", c.s),
            ReductionOutcome::NotEquivalent { index, witness } => {
                let b: Vec<String> = witness.basis().iter().map(|p| p.to_string()).collect();
                write!(f, "not equivalent: J_{} = <{}> is proper", index, b.join(", "))
            }
            ReductionOutcome::Unknown { stage, .. } => write!(f, "unknown (stage: {stage})"),
        }
    }
}

/// `x_i -> x_i + x_n^{r_i}` for `i = 2, ..., n-1`; `x_1` and `x_n` are fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismSpec {
    pub exponents: Vec<u32>,
}

impl AutomorphismSpec {
    pub fn identity(nvars: usize) -> Self {
        AutomorphismSpec { exponents: vec![0; nvars.saturating_sub(2)] }
    }

    /// Same exponent `r` for every moved variable.
    pub fn uniform(nvars: usize, r: u32) -> Self {
        AutomorphismSpec { exponents: vec![r; nvars.saturating_sub(2)] }
    }

    fn images<K: Field>(&self, ring: &crate::poly::Ring<K>, sign: i64) -> Result<Vec<Poly<K>>, ReduceError> {
        let n = ring.nvars();
        if self.exponents.len() != n.saturating_sub(2) {
            return Err(ReduceError::HypothesisViolated(format!(
                "automorphism needs {} exponents for {} variables",
                n.saturating_sub(2),
                n
            )));
        }
        let mut out: Vec<Poly<K>> = (0..n).map(|i| Poly::var(ring, i)).collect();
        for (k, &r) in self.exponents.iter().enumerate() {
            if r == 0 {
                continue;
            }
            let shift = Poly::var(ring, n - 1).pow(r).scale(&ring.field.from_i64(sign));
            out[k + 1] = &out[k + 1] + &shift;
        }
        Ok(out)
    }

    pub fn apply<K: Field>(&self, f: &PolyMatrix<K>) -> Result<PolyMatrix<K>, ReduceError> {
        Ok(f.substitute(&self.images(f.ring(), 1)?)?)
    }

    pub fn apply_inverse<K: Field>(&self, f: &PolyMatrix<K>) -> Result<PolyMatrix<K>, ReduceError> {
        Ok(f.substitute(&self.images(f.ring(), -1)?)?)
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|&r| r == 0)
    }
}

/// `(θ(U), θ(V), θ(S))`, which certifies `θ(F)`.
pub fn transport_automorphism<K: Field>(
    f: &PolyMatrix<K>,
    cert: &EquivCertificate<K>,
    theta: &AutomorphismSpec,
) -> Result<EquivCertificate<K>, ReduceError> {
    if !crate::matrix::verify_certificate(f, cert)? {
        return Err(ReduceError::InvalidCertificate);
    }
    Ok(EquivCertificate { u: theta.apply(&cert.u)?, v: theta.apply(&cert.v)?, s: theta.apply(&cert.s)? })
}

/// Exponent `t` with `g = c * p^t`, `c` a nonzero constant.
pub(crate) fn power_of_p<K: Field>(g: &Poly<K>, modulus: &ModulusP<K>) -> Option<u32> {
    let (e, rest) = modulus.valuation(g)?;
    rest.is_nonzero_constant().then_some(e)
}

/// Checks that the determinant (or the last nonzero determinantal divisor)
/// is a power of `p`, returning the rank.
pub fn check_hypothesis<K: Field>(f: &PolyMatrix<K>, modulus: &ModulusP<K>) -> Result<usize, ReduceError> {
    if !crate::poly::same_ring(f.ring(), modulus.poly().ring()) {
        return Err(ReduceError::HypothesisViolated("matrix and modulus live in different rings".into()));
    }
    let d = if f.is_square() { determinant(f)? } else { Poly::zero(f.ring()) };
    if !d.is_zero() {
        if power_of_p(&d, modulus).is_none() {
            return Err(ReduceError::HypothesisViolated(format!("determinant {d} is not a power of {}", modulus.poly())));
        }
        return Ok(f.rows());
    }
    let r = rank(f);
    if r == 0 {
        return Err(ReduceError::HypothesisViolated("zero matrix".into()));
    }
    let (_, d, _) = reduced_minors(f, r)?;
    if power_of_p(&d, modulus).is_none() {
        return Err(ReduceError::HypothesisViolated(format!("d_{r} = {d} is not a power of {}", modulus.poly())));
    }
    Ok(r)
}

/// Unit-ideal status of `J_i(F)` for `i = 1..=rank`, with the reduced basis
/// of each ideal.
pub(crate) fn condition_bases<K: Field>(
    f: &PolyMatrix<K>,
    modulus: &ModulusP<K>,
    budget: &Budget,
) -> Result<Vec<(usize, GroebnerBasis<K>)>, ReduceError> {
    let r = check_hypothesis(f, modulus)?;
    let mut out = Vec::with_capacity(r);
    for i in 1..=r {
        let (_, _, reduced) = reduced_minors(f, i)?;
        let gb = buchberger_with_lift(&reduced, f.ring().order, budget)?;
        out.push((i, gb));
    }
    Ok(out)
}

/// `(i, J_i(F) == A)` for `i = 1..=rank`.
pub fn check_conditions<K: Field>(
    f: &PolyMatrix<K>,
    modulus: &ModulusP<K>,
    cfg: &SearchConfig,
) -> Result<Vec<(usize, bool)>, ReduceError> {
    let budget = Budget { deadline: deadline_of(cfg), ..Budget::default() };
    Ok(condition_bases(f, modulus, &budget)?.into_iter().map(|(i, gb)| (i, gb.is_unit())).collect())
}

pub(crate) fn deadline_of(cfg: &SearchConfig) -> Option<Instant> {
    cfg.budget_ms.map(|ms| Instant::now() + Duration::from_millis(ms))
}

/// Shared state of one reduction run.
pub(crate) struct Ctx<K: Field> {
    pub bar: BarMap<K>,
    pub modulus: ModulusP<K>,
    pub cfg: SearchConfig,
    pub rng: ChaCha8Rng,
    pub deadline: Option<Instant>,
    pub notes: Vec<String>,
}

impl<K: Field> Ctx<K> {
    pub fn new(modulus: &ModulusP<K>, cfg: &SearchConfig) -> Self {
        Ctx {
            bar: BarMap::new(modulus.poly().ring(), modulus),
            modulus: modulus.clone(),
            cfg: cfg.clone(),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            deadline: deadline_of(cfg),
            notes: Vec::new(),
        }
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn check_time(&self) -> Result<(), ReduceError> {
        if self.expired() {
            Err(ReduceError::BudgetExceeded("wall-clock limit reached".into()))
        } else {
            Ok(())
        }
    }

    /// Budget for one auxiliary basis computation.
    pub fn budget(&self) -> Budget {
        Budget { max_pairs: 5_000, deadline: self.deadline }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::test_util::*;

    #[test]
    fn conditions_examples() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        let cfg = SearchConfig::default();
        let f = mat(&r, &[&["x1", "x2"], &["0", "x1"]]);
        assert_eq!(check_conditions(&f, &m, &cfg).unwrap(), vec![(1, false), (2, true)]);
        let g = mat(&r, &[&["1", "0"], &["0", "x1"]]);
        assert_eq!(check_conditions(&g, &m, &cfg).unwrap(), vec![(1, true), (2, true)]);
        let h = mat(&r, &[&["x1", "0"], &["0", "x2"]]);
        assert!(matches!(check_conditions(&h, &m, &cfg), Err(ReduceError::HypothesisViolated(_))));
    }

    #[test]
    fn automorphism_round_trip() {
        let r = ring(3);
        let f = mat(&r, &[&["x2", "x1*x3"], &["1", "x2^2"]]);
        let t = AutomorphismSpec { exponents: vec![2] };
        let g = t.apply(&f).unwrap();
        assert_eq!(g.get(0, 0), &p(&r, "x2 + x3^2"));
        assert_eq!(t.apply_inverse(&g).unwrap(), f);
        assert!(AutomorphismSpec::identity(3).is_identity());
        assert!(AutomorphismSpec { exponents: vec![] }.apply(&f).is_err());
    }

    #[test]
    fn transport_keeps_certificates_valid() {
        let r = ring(3);
        let f = mat(&r, &[&["1", "0"], &["x2", "x1"]]);
        let cert = EquivCertificate {
            u: mat(&r, &[&["1", "0"], &["-x2", "1"]]),
            v: PolyMatrix::identity(&r, 2),
            s: mat(&r, &[&["1", "0"], &["0", "x1"]]),
        };
        let t = AutomorphismSpec { exponents: vec![1] };
        let moved = transport_automorphism(&f, &cert, &t).unwrap();
        assert!(crate::matrix::verify_certificate(&t.apply(&f).unwrap(), &moved).unwrap());
        let bad = EquivCertificate { u: PolyMatrix::identity(&r, 2), ..cert };
        assert_eq!(transport_automorphism(&f, &bad, &t), Err(ReduceError::InvalidCertificate));
        let id = AutomorphismSpec::identity(3);
        let c2 = EquivCertificate {
            u: mat(&r, &[&["1", "0"], &["-x2", "1"]]),
            v: PolyMatrix::identity(&r, 2),
            s: mat(&r, &[&["1", "0"], &["0", "x1"]]),
        };
        assert_eq!(transport_automorphism(&f, &c2, &id).unwrap(), c2);
    }
}
