//! Coefficient fields.
//!
//! A [`Field`] is a runtime descriptor that knows how to operate on its
//! element type. Descriptors are cheap to clone; elements do not carry a
//! back-reference to their field, so every operation goes through the
//! descriptor.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// `None` when the rational has no image (denominator divisible by the
    /// characteristic).
    fn from_rational(&self, r: &BigRational) -> Option<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero, and for non-units when the field descriptor is not
    /// actually a field (a reducible residue modulus).
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    /// Printable form. `atomic` is true when the string needs no
    /// parentheses as a product factor.
    fn render(&self, a: &Self::Elem) -> (String, bool);

    /// True when `render` should print the element with a leading minus.
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }

    /// Image of `a` in the prime field with `q` elements, if defined.
    fn reduce_mod_prime(&self, _a: &Self::Elem, _q: u64) -> Option<u64> {
        None
    }

    /// Inverse of this element, panicking on a broken residue modulus.
    fn inv_strict(&self, a: &Self::Elem) -> Self::Elem {
        match self.inv(a) {
            Some(x) => x,
            None if self.is_zero(a) => panic!("division by zero in coefficient field"),
            None => panic!("modulus integrity failure: nonzero residue is not invertible (p is reducible)"),
        }
    }
}

/// The rational numbers with arbitrary precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(&self, r: &BigRational) -> Option<BigRational> {
        Some(r.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn render(&self, a: &BigRational) -> (String, bool) {
        let s = if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        };
        let atomic = !a.is_negative();
        (s, atomic)
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
    fn reduce_mod_prime(&self, a: &BigRational, q: u64) -> Option<u64> {
        PrimeField::new(q)?.from_rational(a)
    }
}

/// The prime field with `q` elements, residues stored in `[0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// Returns `None` unless `q` is a prime below 2^62.
    pub fn new(q: u64) -> Option<Self> {
        if !(2..(1 << 62)).contains(&q) || !is_prime_u64(q) {
            return None;
        }
        Some(PrimeField { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    fn reduce_big(&self, n: &BigInt) -> u64 {
        let q = BigInt::from(self.q);
        n.mod_floor(&q).to_u64().unwrap()
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, q);
        }
        base = mulmod(base, base, q);
        exp >>= 1;
    }
    acc
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.q as i128) as u64
    }
    fn from_rational(&self, r: &BigRational) -> Option<u64> {
        let num = self.reduce_big(r.numer());
        let den = self.reduce_big(r.denom());
        self.inv(&den).map(|d| mulmod(num, d, self.q))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.q)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.q - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(powmod(*a, self.q - 2, self.q))
        }
    }
    fn characteristic(&self) -> u64 {
        self.q
    }
    fn render(&self, a: &u64) -> (String, bool) {
        (a.to_string(), true)
    }
    fn reduce_mod_prime(&self, a: &u64, q: u64) -> Option<u64> {
        (q == self.q).then_some(*a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(PrimeField::new(7).is_some());
        assert!(PrimeField::new(9).is_none());
        assert!(PrimeField::new(1).is_none());
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(13).unwrap();
        for a in 1..13 {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
        assert_eq!(f.from_i64(-1), 12);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_rational(&half), Some(7));
    }

    #[test]
    fn rational_render() {
        let q = Rationals;
        assert_eq!(q.render(&q.from_i64(-3)).0, "-3");
        let r = BigRational::new(3.into(), (-4).into());
        assert_eq!(q.render(&r).0, "-3/4");
    }
}
