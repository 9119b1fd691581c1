//! The residue field `K[x1]/<p>`.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::ResidueError;
use crate::poly::Field;

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
pub(crate) type Uni<E> = Vec<E>;

pub(crate) fn uni_trim<K: Field>(k: &K, v: &mut Uni<K::Elem>) {
    while v.last().is_some_and(|c| k.is_zero(c)) {
        v.pop();
    }
}

pub(crate) fn uni_add<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Uni<K::Elem> {
    let n = a.len().max(b.len());
    let mut out: Vec<K::Elem> = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => k.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    uni_trim(k, &mut out);
    out
}

pub(crate) fn uni_neg<K: Field>(k: &K, a: &[K::Elem]) -> Uni<K::Elem> {
    a.iter().map(|x| k.neg(x)).collect()
}

pub(crate) fn uni_sub<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Uni<K::Elem> {
    uni_add(k, a, &uni_neg(k, b))
}

pub(crate) fn uni_mul<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> Uni<K::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    uni_trim(k, &mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn uni_divrem<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> (Uni<K::Elem>, Uni<K::Elem>) {
    let db = b.len() - 1;
    let lb_inv = k.inv_strict(&b[db]);
    let mut r = a.to_vec();
    uni_trim(k, &mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![k.zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = k.mul(&r[dr], &lb_inv);
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = k.sub(&r[j + shift], &k.mul(&c, bj));
        }
        q[shift] = c;
        uni_trim(k, &mut r);
    }
    uni_trim(k, &mut q);
    (q, r)
}

/// Extended Euclid: `(g, s)` with `s*a ≡ g (mod b)`, `g` monic gcd.
pub(crate) fn uni_gcdext<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem]) -> (Uni<K::Elem>, Uni<K::Elem>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    uni_trim(k, &mut r0);
    uni_trim(k, &mut r1);
    let mut s0 = vec![k.one()];
    let mut s1: Uni<K::Elem> = Vec::new();
    while !r1.is_empty() {
        let (q, r) = uni_divrem(k, &r0, &r1);
        let s = uni_sub(k, &s0, &uni_mul(k, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if let Some(lc) = r0.last().cloned() {
        let inv = k.inv_strict(&lc);
        r0 = r0.iter().map(|c| k.mul(c, &inv)).collect();
        s0 = s0.iter().map(|c| k.mul(c, &inv)).collect();
    }
    (r0, s0)
}

pub(crate) fn uni_derivative<K: Field>(k: &K, a: &[K::Elem]) -> Uni<K::Elem> {
    let mut out: Vec<K::Elem> = a.iter().enumerate().skip(1).map(|(i, c)| k.mul(c, &k.from_i64(i as i64))).collect();
    uni_trim(k, &mut out);
    out
}

struct ResidueInner<K: Field> {
    base: K,
    /// monic, lowest degree first
    modulus: Vec<K::Elem>,
    var_name: String,
}

/// `K[x1]/<p>` for a monic univariate `p`. Elements are canonical
/// representatives of degree below `deg p`, lowest degree first.
#[derive(Clone)]
pub struct ResidueField<K: Field> {
    inner: Arc<ResidueInner<K>>,
}

impl<K: Field> fmt::Debug for ResidueField<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueField({:?} mod {:?})", self.inner.base, self.inner.modulus)
    }
}

impl<K: Field> PartialEq for ResidueField<K> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.base == other.inner.base && self.inner.modulus == other.inner.modulus)
    }
}

impl<K: Field> ResidueField<K> {
    /// `modulus` must be monic of degree at least 1 (lowest degree first).
    pub(crate) fn new(base: K, modulus: Vec<K::Elem>, var_name: &str) -> Self {
        assert!(modulus.len() >= 2, "modulus must have positive degree");
        assert!(base.is_one(modulus.last().unwrap()), "modulus must be monic");
        ResidueField { inner: Arc::new(ResidueInner { base, modulus, var_name: var_name.to_string() }) }
    }

    pub fn base(&self) -> &K {
        &self.inner.base
    }

    pub fn degree(&self) -> usize {
        self.inner.modulus.len() - 1
    }

    /// Canonical representative of an arbitrary univariate polynomial.
    pub fn reduce(&self, a: &[K::Elem]) -> Vec<K::Elem> {
        uni_divrem(&self.inner.base, a, &self.inner.modulus).1
    }

    /// Inverse with the two failure modes distinguished.
    pub fn ext_inverse(&self, a: &[K::Elem]) -> Result<Vec<K::Elem>, ResidueError> {
        let k = &self.inner.base;
        let a = self.reduce(a);
        if a.is_empty() {
            return Err(ResidueError::ZeroInverse);
        }
        let (g, s) = uni_gcdext(k, &a, &self.inner.modulus);
        if g.len() != 1 {
            return Err(ResidueError::NotInvertible);
        }
        Ok(self.reduce(&s))
    }
}

impl<K: Field> Field for ResidueField<K> {
    type Elem = Vec<K::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }
    fn one(&self) -> Self::Elem {
        vec![self.inner.base.one()]
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        let c = self.inner.base.from_i64(n);
        if self.inner.base.is_zero(&c) {
            Vec::new()
        } else {
            vec![c]
        }
    }
    fn from_rational(&self, r: &BigRational) -> Option<Self::Elem> {
        let c = self.inner.base.from_rational(r)?;
        Some(if self.inner.base.is_zero(&c) { Vec::new() } else { vec![c] })
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        uni_add(&self.inner.base, a, b)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        uni_sub(&self.inner.base, a, b)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let prod = uni_mul(&self.inner.base, a, b);
        if prod.len() < self.inner.modulus.len() {
            prod
        } else {
            self.reduce(&prod)
        }
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        uni_neg(&self.inner.base, a)
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.ext_inverse(a).ok()
    }
    fn characteristic(&self) -> u64 {
        self.inner.base.characteristic()
    }
    fn render(&self, a: &Self::Elem) -> (String, bool) {
        let k = &self.inner.base;
        if a.is_empty() {
            return ("0".into(), true);
        }
        let mut parts = Vec::new();
        for (i, c) in a.iter().enumerate().rev() {
            if k.is_zero(c) {
                continue;
            }
            let neg = k.is_negative(c);
            let abs = if neg { k.neg(c) } else { c.clone() };
            let (cs, atomic) = k.render(&abs);
            let mono = match i {
                0 => String::new(),
                1 => self.inner.var_name.clone(),
                _ => format!("{}^{}", self.inner.var_name, i),
            };
            let body = if mono.is_empty() {
                cs
            } else if k.is_one(&abs) {
                mono
            } else if atomic {
                format!("{cs}*{mono}")
            } else {
                format!("({cs})*{mono}")
            };
            let sign = if parts.is_empty() {
                if neg { "-" } else { "" }
            } else if neg {
                " - "
            } else {
                " + "
            };
            parts.push(format!("{sign}{body}"));
        }
        let s = parts.concat();
        let single = parts.len() == 1 && !s.starts_with('-');
        (s, single)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{PrimeField, Rationals};

    fn q(n: i64) -> BigRational {
        Rationals.from_i64(n)
    }

    #[test]
    fn inverse_of_x_mod_x2_plus_1() {
        let f = ResidueField::new(Rationals, vec![q(1), q(0), q(1)], "x1");
        assert_eq!(f.ext_inverse(&[q(1)]).unwrap(), vec![q(1)]);
        // x * (-x) = -x^2 = 1
        assert_eq!(f.ext_inverse(&[q(0), q(1)]).unwrap(), vec![q(0), q(-1)]);
        assert_eq!(f.ext_inverse(&[]), Err(ResidueError::ZeroInverse));
    }

    #[test]
    fn reducible_modulus_detected() {
        // x^2 - 1 = (x - 1)(x + 1)
        let f = ResidueField::new(Rationals, vec![q(-1), q(0), q(1)], "x1");
        assert_eq!(f.ext_inverse(&[q(-1), q(1)]), Err(ResidueError::NotInvertible));
    }

    #[test]
    fn field_axioms_mod_prime() {
        let k = PrimeField::new(5).unwrap();
        // x^2 + 2 is irreducible mod 5
        let f = ResidueField::new(k, vec![2, 0, 1], "x1");
        let elems: Vec<Vec<u64>> = (0..25u64)
            .map(|i| {
                let mut v = vec![i % 5, i / 5];
                uni_trim(&k, &mut v);
                v
            })
            .collect();
        for a in &elems {
            if !a.is_empty() {
                assert_eq!(f.mul(a, &f.inv(a).unwrap()), f.one());
            }
            for b in &elems {
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
    }

    #[test]
    fn renders_representatives() {
        let f = ResidueField::new(Rationals, vec![q(1), q(0), q(1)], "x1");
        assert_eq!(f.render(&vec![q(1), q(-2)]).0, "-2*x1 + 1");
        assert_eq!(f.render(&vec![q(0), q(1)]).0, "x1");
    }
}
