//! Random instances `F = U0 * S * V0` with a known certificate.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenerateError;
use crate::matrix::{EquivCertificate, PolyMatrix};
use crate::poly::{Field, Monomial, Poly, Ring};
use crate::residue::ModulusP;

const COEFFS: [i64; 4] = [1, -1, 2, -2];
const SCALES: [i64; 3] = [1, -1, 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub rows: usize,
    pub cols: usize,
    /// Exponents of `p` on the diagonal; the rest of the diagonal is zero.
    pub exponents: Vec<u32>,
    /// Number of random elementary factors in each of `U0` and `V0`.
    pub factors: usize,
    /// Degree bound of the off-diagonal entry of each elementary factor.
    pub degree: u32,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct GeneratedInstance<K: Field> {
    pub f: PolyMatrix<K>,
    /// `u * f * v == s`.
    pub certificate: EquivCertificate<K>,
}

/// A random polynomial of total degree at most `d` with one to three terms.
pub fn random_poly<K: Field>(ring: &Ring<K>, d: u32, rng: &mut ChaCha8Rng) -> Poly<K> {
    let n = ring.nvars();
    let terms = rng.gen_range(1..=3);
    let mut out = Poly::zero(ring);
    for _ in 0..terms {
        let mut e = vec![0u32; n];
        let deg = rng.gen_range(0..=d);
        for _ in 0..deg {
            e[rng.gen_range(0..n)] += 1;
        }
        let c = ring.field.from_i64(*COEFFS.choose(rng).unwrap());
        out = &out + &Poly::monomial(ring, Monomial::from_exponents(e), c);
    }
    out
}

/// Product of `k` random factors, each an elementary transvection or a
/// constant row scaling, and its inverse.
fn random_unimodular<K: Field>(
    ring: &Ring<K>,
    size: usize,
    k: usize,
    d: u32,
    rng: &mut ChaCha8Rng,
) -> (PolyMatrix<K>, PolyMatrix<K>) {
    let mut m = PolyMatrix::identity(ring, size);
    let mut inv = PolyMatrix::identity(ring, size);
    for _ in 0..k {
        if size < 2 || rng.gen_bool(0.2) {
            let i = rng.gen_range(0..size);
            let c = ring.field.from_i64(*SCALES.choose(rng).unwrap());
            let Some(ci) = ring.field.inv(&c) else { continue };
            m.scale_row(i, &c);
            inv.scale_col(i, &ci);
            continue;
        }
        let i = rng.gen_range(0..size);
        let j = (i + rng.gen_range(1..size)) % size;
        let q = random_poly(ring, d, rng);
        m.add_row_multiple(i, j, &q);
        inv.add_col_multiple(j, i, &q.neg());
    }
    (m, inv)
}

pub fn generate<K: Field>(
    ring: &Ring<K>,
    modulus: &ModulusP<K>,
    cfg: &GeneratorConfig,
) -> Result<GeneratedInstance<K>, GenerateError> {
    let (l, m) = (cfg.rows, cfg.cols);
    if l == 0 || m == 0 {
        return Err(GenerateError::EmptyShape);
    }
    if cfg.exponents.len() > l.min(m) {
        return Err(GenerateError::TooManyExponents { count: cfg.exponents.len(), rows: l, cols: m });
    }
    if cfg.exponents.windows(2).any(|w| w[0] > w[1]) {
        return Err(GenerateError::UnsortedExponents);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let diag: Vec<Poly<K>> = cfg.exponents.iter().map(|&e| modulus.power(e)).collect();
    let s = PolyMatrix::diagonal(ring, l, m, &diag);
    let (u0, u0_inv) = random_unimodular(ring, l, cfg.factors, cfg.degree, &mut rng);
    let (v0, v0_inv) = random_unimodular(ring, m, cfg.factors, cfg.degree, &mut rng);
    let f = &(&u0 * &s) * &v0;
    Ok(GeneratedInstance { f, certificate: EquivCertificate { u: u0_inv, v: v0_inv, s } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::test_util::*;
    use crate::matrix::{smith_form, verify_certificate};

    fn cfg(rows: usize, cols: usize, exps: &[u32], factors: usize, seed: u64) -> GeneratorConfig {
        GeneratorConfig { rows, cols, exponents: exps.to_vec(), factors, degree: 2, seed }
    }

    #[test]
    fn no_factors_gives_the_diagonal() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        let g = generate(&r, &m, &cfg(2, 2, &[0, 1], 0, 1)).unwrap();
        assert_eq!(g.f, mat(&r, &[&["1", "0"], &["0", "x1"]]));
    }

    #[test]
    fn certificates_verify_and_smith_form_matches() {
        let r = ring(3);
        let m = ModulusP::new(&p(&r, "x1^2 + 1")).unwrap();
        for seed in 0..10 {
            let g = generate(&r, &m, &cfg(3, 3, &[1, 1, 2], 4, seed)).unwrap();
            assert!(verify_certificate(&g.f, &g.certificate).unwrap());
            assert_eq!(smith_form(&g.f, Some(&m)).unwrap().exponents, Some(vec![1, 1, 2]));
        }
        let g = generate(&r, &m, &cfg(2, 3, &[1], 3, 5)).unwrap();
        assert!(verify_certificate(&g.f, &g.certificate).unwrap());
    }

    #[test]
    fn deterministic_per_seed() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        let a = generate(&r, &m, &cfg(2, 2, &[0, 1], 4, 7)).unwrap();
        let b = generate(&r, &m, &cfg(2, 2, &[0, 1], 4, 7)).unwrap();
        assert_eq!(a.f, b.f);
        assert_eq!(a.certificate, b.certificate);
    }

    #[test]
    fn invalid_configs() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        assert_eq!(generate(&r, &m, &cfg(2, 2, &[2, 1], 1, 0)).unwrap_err(), GenerateError::UnsortedExponents);
        assert!(matches!(generate(&r, &m, &cfg(2, 2, &[0, 1, 1], 1, 0)), Err(GenerateError::TooManyExponents { .. })));
    }
}
