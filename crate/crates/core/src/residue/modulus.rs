use crate::error::ResidueError;
use crate::poly::{is_prime_u64, Field, Poly, PrimeField};

use super::field::{uni_derivative, uni_divrem, uni_gcdext, uni_mul, uni_sub, uni_trim, ResidueField};

/// Largest prime tried when looking for a modular irreducibility witness.
pub const WITNESS_PRIME_BOUND: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `p` reduced modulo this prime is squarefree, keeps its degree and is
    /// irreducible, so `p` is irreducible over the coefficient field.
    Certified(u64),
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Certified(u64),
    /// Trusted on the caller's word; every report carries a warning.
    Asserted,
}

/// The univariate irreducible `p` in the first variable, normalized monic.
#[derive(Clone, Debug)]
pub struct ModulusP<K: Field> {
    poly: Poly<K>,
    coeffs: Vec<K::Elem>,
    status: Irreducibility,
    residue: ResidueField<K>,
}

impl<K: Field> ModulusP<K> {
    pub fn new(p: &Poly<K>) -> Result<Self, ResidueError> {
        let coeffs = univariate_coeffs(p)?;
        let status = match irreducibility_witness(p)? {
            Witness::Certified(q) => Irreducibility::Certified(q),
            Witness::Unknown => Irreducibility::Asserted,
        };
        let k = p.field().clone();
        let name = p.ring().vars.names()[0].clone();
        let residue = ResidueField::new(k, coeffs.clone(), &name);
        Ok(ModulusP { poly: p.monic(), coeffs, status, residue })
    }

    pub fn poly(&self) -> &Poly<K> {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn status(&self) -> Irreducibility {
        self.status
    }

    pub fn is_certified(&self) -> bool {
        matches!(self.status, Irreducibility::Certified(_))
    }

    pub fn residue_field(&self) -> &ResidueField<K> {
        &self.residue
    }

    /// `p^e`.
    pub fn power(&self, e: u32) -> Poly<K> {
        self.poly.pow(e)
    }

    /// Largest `e` with `p^e | f`, and the cofactor. `None` for `f = 0`.
    pub fn valuation(&self, f: &Poly<K>) -> Option<(u32, Poly<K>)> {
        if f.is_zero() {
            return None;
        }
        let mut e = 0;
        let mut cur = f.clone();
        while let Ok(q) = cur.exact_div(&self.poly) {
            cur = q;
            e += 1;
        }
        Some((e, cur))
    }
}

/// Monic coefficient vector (lowest degree first) after validating that `p`
/// is a nonconstant squarefree polynomial in the first variable only.
fn univariate_coeffs<K: Field>(p: &Poly<K>) -> Result<Vec<K::Elem>, ResidueError> {
    if p.is_constant() {
        return Err(ResidueError::ConstantPolynomial);
    }
    if (1..p.nvars()).any(|v| p.uses_var(v)) {
        return Err(ResidueError::NotUnivariate);
    }
    let k = p.field();
    let deg = p.degree_in(0).unwrap() as usize;
    let mut coeffs = vec![k.zero(); deg + 1];
    for (m, c) in p.terms() {
        coeffs[m.exponents()[0] as usize] = c.clone();
    }
    let inv = k.inv_strict(&coeffs[deg]);
    let coeffs: Vec<K::Elem> = coeffs.iter().map(|c| k.mul(c, &inv)).collect();
    let (g, _) = uni_gcdext(k, &coeffs, &uni_derivative(k, &coeffs));
    if g.len() != 1 {
        return Err(ResidueError::NotSquarefree);
    }
    Ok(coeffs)
}

/// Searches for a prime modulo which `p` stays squarefree of the same degree
/// and is irreducible. Over a prime field the test is run directly.
pub fn irreducibility_witness<K: Field>(p: &Poly<K>) -> Result<Witness, ResidueError> {
    let coeffs = univariate_coeffs(p)?;
    let k = p.field();
    let ch = k.characteristic();
    if ch != 0 {
        let modp: Vec<u64> = coeffs
            .iter()
            .map(|c| k.reduce_mod_prime(c, ch))
            .collect::<Option<_>>()
            .ok_or(ResidueError::Reducible)?;
        return if rabin_irreducible(&PrimeField::new(ch).unwrap(), &modp) {
            Ok(Witness::Certified(ch))
        } else {
            Err(ResidueError::Reducible)
        };
    }
    for q in (2..=WITNESS_PRIME_BOUND).filter(|&q| is_prime_u64(q)) {
        let fq = PrimeField::new(q).unwrap();
        let Some(mut red) = coeffs.iter().map(|c| k.reduce_mod_prime(c, q)).collect::<Option<Vec<u64>>>() else {
            continue;
        };
        uni_trim(&fq, &mut red);
        if red.len() != coeffs.len() {
            continue;
        }
        let (g, _) = uni_gcdext(&fq, &red, &uni_derivative(&fq, &red));
        if g.len() != 1 {
            continue;
        }
        if rabin_irreducible(&fq, &red) {
            return Ok(Witness::Certified(q));
        }
    }
    Ok(Witness::Unknown)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `h^q mod f` where `q` is the field size.
fn frobenius(fq: &PrimeField, h: &[u64], f: &[u64]) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = h.to_vec();
    let mut e = fq.modulus();
    while e > 0 {
        if e & 1 == 1 {
            acc = uni_divrem(fq, &uni_mul(fq, &acc, &base), f).1;
        }
        e >>= 1;
        if e > 0 {
            base = uni_divrem(fq, &uni_mul(fq, &base, &base), f).1;
        }
    }
    acc
}

/// Rabin's test for a monic-able polynomial over a prime field.
pub(crate) fn rabin_irreducible(fq: &PrimeField, f: &[u64]) -> bool {
    let mut f = f.to_vec();
    uni_trim(fq, &mut f);
    if f.len() < 2 {
        return false;
    }
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    let inv = fq.inv(f.last().unwrap()).unwrap();
    let f: Vec<u64> = f.iter().map(|c| fq.mul(c, &inv)).collect();
    let x = vec![0u64, 1];
    // powers[k] = x^(q^k) mod f
    let mut powers = vec![x.clone()];
    for _ in 0..d {
        let next = frobenius(fq, powers.last().unwrap(), &f);
        powers.push(next);
    }
    if !uni_sub(fq, &powers[d], &x).is_empty() {
        return false;
    }
    for r in prime_divisors(d) {
        let h = uni_sub(fq, &powers[d / r], &x);
        let (g, _) = uni_gcdext(fq, &h, &f);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{PolyRing, Rationals, Ring, TermOrder, VarSet};

    fn ring() -> Ring<Rationals> {
        PolyRing::new(VarSet::standard(2), Rationals, TermOrder::Grevlex)
    }

    fn p(s: &str) -> Poly<Rationals> {
        Poly::parse(s, &ring()).unwrap()
    }

    /// Irreducibility of a quadratic over F_q by enumerating roots.
    fn quadratic_has_root(q: u64, c: &[u64; 3]) -> bool {
        (0..q).any(|x| (c[0] + c[1] * x + c[2] * x * x).is_multiple_of(q))
    }

    #[test]
    fn witnesses() {
        assert_eq!(irreducibility_witness(&p("x1")), Ok(Witness::Certified(2)));
        assert_eq!(irreducibility_witness(&p("x1^2")), Err(ResidueError::NotSquarefree));
        // x^2+1 = (x+1)^2 mod 2; root-free mod 3
        assert!(!quadratic_has_root(3, &[1, 0, 1]));
        assert!(quadratic_has_root(2, &[1, 0, 1]));
        assert_eq!(irreducibility_witness(&p("x1^2 + 1")), Ok(Witness::Certified(3)));
        assert_eq!(irreducibility_witness(&p("3")), Err(ResidueError::ConstantPolynomial));
        assert_eq!(irreducibility_witness(&p("x1 + x2")), Err(ResidueError::NotUnivariate));
    }

    #[test]
    fn reducible_over_q_is_unknown() {
        // (x-1)(x+1) splits modulo every prime
        assert_eq!(irreducibility_witness(&p("x1^2 - 1")), Ok(Witness::Unknown));
        let m = ModulusP::new(&p("x1^2 - 1")).unwrap();
        assert_eq!(m.status(), Irreducibility::Asserted);
    }

    #[test]
    fn rabin_matches_root_enumeration() {
        for q in [3u64, 5, 7, 11] {
            let fq = PrimeField::new(q).unwrap();
            for a in 0..q {
                for b in 0..q {
                    let c = [b, a, 1];
                    assert_eq!(rabin_irreducible(&fq, &c), !quadratic_has_root(q, &c), "q={q} c={c:?}");
                }
            }
        }
        // x^4 + x + 1 is irreducible over F_2, x^4 + x^2 + 1 = (x^2+x+1)^2 is not
        let f2 = PrimeField::new(2).unwrap();
        assert!(rabin_irreducible(&f2, &[1, 1, 0, 0, 1]));
        assert!(!rabin_irreducible(&f2, &[1, 0, 1, 0, 1]));
    }

    #[test]
    fn prime_field_modulus() {
        let r = PolyRing::new(VarSet::standard(1), PrimeField::new(3).unwrap(), TermOrder::Grevlex);
        let f = Poly::parse("x1^2 + 1", &r).unwrap();
        assert_eq!(irreducibility_witness(&f), Ok(Witness::Certified(3)));
        let g = Poly::parse("x1^2 - 1", &r).unwrap();
        assert_eq!(irreducibility_witness(&g), Err(ResidueError::Reducible));
    }

    #[test]
    fn modulus_is_normalized() {
        let m = ModulusP::new(&p("2*x1 + 4")).unwrap();
        assert_eq!(m.poly(), &p("x1 + 2"));
        assert_eq!(m.valuation(&p("(x1 + 2)^3*x2")).unwrap().0, 3);
    }
}
