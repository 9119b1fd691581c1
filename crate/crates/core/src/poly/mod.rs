//! Sparse multivariate polynomials over a coefficient field.

mod field;
mod gcd;
mod monomial;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use field::{Field, PrimeField, Rationals};
pub(crate) use field::is_prime_u64;
pub(crate) use gcd::gcd_many;
pub use monomial::{Monomial, TermOrder};

use crate::error::PolyError;

/// Ordered list of distinct variable names, `x1` first by convention.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, PolyError> {
        if names.is_empty() {
            return Err(PolyError::InvalidVarSet("no variables".into()));
        }
        let vs = Self::new_unchecked(names.iter().map(|s| s.as_ref().to_string()).collect());
        vs.validate()?;
        Ok(vs)
    }

    /// Variable sets produced internally (the residue ring drops `x1` and may be
    /// left with no variables at all).
    pub(crate) fn new_unchecked(names: Vec<String>) -> Self {
        VarSet { names }
    }

    fn validate(&self) -> Result<(), PolyError> {
        for (i, n) in self.names.iter().enumerate() {
            let mut chars = n.chars();
            let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(PolyError::InvalidVarSet(format!("bad identifier '{n}'")));
            }
            if self.names[..i].contains(n) {
                return Err(PolyError::InvalidVarSet(format!("duplicate variable '{n}'")));
            }
        }
        Ok(())
    }

    /// `x1, ..., xn`.
    pub fn standard(n: usize) -> Self {
        VarSet { names: (1..=n).map(|i| format!("x{i}")).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// The ring `K[x1, ..., xn]` together with its session term order.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<K: Field> {
    pub vars: VarSet,
    pub field: K,
    pub order: TermOrder,
}

pub type Ring<K> = Arc<PolyRing<K>>;

impl<K: Field> PolyRing<K> {
    pub fn new(vars: VarSet, field: K, order: TermOrder) -> Ring<K> {
        Arc::new(PolyRing { vars, field, order })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
}

pub(crate) fn same_ring<K: Field>(a: &Ring<K>, b: &Ring<K>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone)]
pub struct Poly<K: Field> {
    ring: Ring<K>,
    terms: BTreeMap<Monomial, K::Elem>,
}

impl<K: Field> PartialEq for Poly<K> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_ring(&self.ring, &other.ring)
    }
}

impl<K: Field> Eq for Poly<K> {}

impl<K: Field> Poly<K> {
    pub fn zero(ring: &Ring<K>) -> Self {
        Poly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Ring<K>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &Ring<K>, c: K::Elem) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_i64(ring: &Ring<K>, n: i64) -> Self {
        Self::constant(ring, ring.field.from_i64(n))
    }

    pub fn var(ring: &Ring<K>, var: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), var, 1), ring.field.one())
    }

    pub fn monomial(ring: &Ring<K>, m: Monomial, c: K::Elem) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity does not match ring");
        let mut terms = BTreeMap::new();
        if !ring.field.is_zero(&c) {
            terms.insert(m, c);
        }
        Poly { ring: ring.clone(), terms }
    }

    /// Sums duplicate monomials and drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, K::Elem)>>(ring: &Ring<K>, terms: I) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> &Ring<K> {
        &self.ring
    }

    pub fn field(&self) -> &K {
        &self.ring.field
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| self.ring.field.is_one(c))
    }

    /// True for constants, including zero.
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The constant value, or `None` if the polynomial is not constant.
    pub fn as_constant(&self) -> Option<&K::Elem> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c);
            }
        }
        None
    }

    pub fn is_nonzero_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of monomials.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K::Elem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> K::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.field.zero())
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: TermOrder) -> Vec<(&Monomial, &K::Elem)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree in one variable; `None` stands for minus infinity (zero polynomial).
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exponents()[var]).max()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponents()[var] > 0)
    }

    pub fn leading_term(&self, order: TermOrder) -> Result<(Monomial, K::Elem), PolyError> {
        let (m, c) = self.leading_term_ref(order).ok_or(PolyError::ZeroPolynomial)?;
        Ok((m.clone(), c.clone()))
    }

    pub(crate) fn leading_term_ref(&self, order: TermOrder) -> Option<(&Monomial, &K::Elem)> {
        match order {
            TermOrder::Lex => self.terms.iter().next_back(),
            TermOrder::Grevlex => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
    }

    /// Leading monomial under the ring order.
    pub fn lm(&self) -> Option<&Monomial> {
        self.leading_term_ref(self.ring.order).map(|t| t.0)
    }

    /// Leading coefficient under the ring order.
    pub fn lc(&self) -> Option<&K::Elem> {
        self.leading_term_ref(self.ring.order).map(|t| t.1)
    }

    fn check_ctx(&self, other: &Self) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::MixedContext)
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &K::Elem) {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = f.add(e.get(), c);
                if f.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ctx(other)?;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c);
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ctx(other)?;
        let f = &self.ring.field;
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), &f.neg(c));
        }
        Ok(r)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ctx(other)?;
        let f = &self.ring.field;
        let mut r = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(ma.mul(mb), &f.mul(ca, cb));
            }
        }
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        let f = &self.ring.field;
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), f.mul(a, c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &K::Elem) -> Self {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, x)| (a.mul(m), f.mul(x, c))).collect(),
        }
    }

    /// Scales so the leading coefficient under the ring order is 1.
    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(c) => {
                let inv = self.ring.field.inv_strict(c);
                self.scale(&inv)
            }
        }
    }

    /// Multivariate division by a single divisor under the ring order.
    pub fn div_rem(&self, g: &Self) -> Result<(Self, Self), PolyError> {
        self.check_ctx(g)?;
        let order = self.ring.order;
        let f = &self.ring.field;
        let (glm, glc) = g.leading_term_ref(order).ok_or(PolyError::DivisionByZero)?;
        let glc_inv = f.inv_strict(glc);
        let mut q = Self::zero(&self.ring);
        let mut rem = Self::zero(&self.ring);
        let mut p = self.clone();
        while let Ok((m, c)) = p.leading_term(order) {
            if let Some(t) = glm.quotient_of(&m) {
                let coef = f.mul(&c, &glc_inv);
                p = &p - &g.mul_term(&t, &coef);
                q.add_term(t, &coef);
            } else {
                p.terms.remove(&m);
                rem.add_term(m, &c);
            }
        }
        Ok((q, rem))
    }

    /// `q` with `q * g == self`.
    pub fn exact_div(&self, g: &Self) -> Result<Self, PolyError> {
        self.check_ctx(g)?;
        if g.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if let Some(c) = g.as_constant() {
            return Ok(self.scale(&self.ring.field.inv_strict(c)));
        }
        let order = self.ring.order;
        let f = &self.ring.field;
        let (glm, glc) = g.leading_term_ref(order).unwrap();
        let glc_inv = f.inv_strict(glc);
        let mut q = Self::zero(&self.ring);
        let mut p = self.clone();
        while let Some((m, c)) = p.leading_term_ref(order) {
            let t = glm.quotient_of(m).ok_or(PolyError::NotDivisible)?;
            let coef = f.mul(c, &glc_inv);
            p = &p - &g.mul_term(&t, &coef);
            q.add_term(t, &coef);
        }
        Ok(q)
    }

    /// Ring homomorphism sending variable `i` to `images[i]`.
    pub fn substitute(&self, images: &[Poly<K>]) -> Result<Poly<K>, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::MixedContext);
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => return Ok(self.clone()),
        };
        if images.iter().any(|p| !same_ring(&p.ring, &target)) || self.ring.field != target.field {
            return Err(PolyError::MixedContext);
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Poly<K>>> = images.iter().map(|p| vec![Poly::one(&target), p.clone()]).collect();
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = &mut powers[v];
                while pw.len() <= e as usize {
                    let next = &pw[pw.len() - 1] * &pw[1];
                    pw.push(next);
                }
                t = &t * &pw[e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `var`;
    /// entry `d` is the coefficient of `var^d` (it does not involve `var`).
    pub fn coefficients_in(&self, var: usize) -> Vec<Poly<K>> {
        let deg = match self.degree_in(var) {
            None => return Vec::new(),
            Some(d) => d as usize,
        };
        let mut out = vec![Poly::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.exponents().to_vec();
            let d = e[var] as usize;
            e[var] = 0;
            out[d].terms.insert(Monomial::from_exponents(e), c.clone());
        }
        out
    }

    pub fn from_coefficients_in(ring: &Ring<K>, var: usize, coeffs: &[Poly<K>]) -> Poly<K> {
        let mut out = Poly::zero(ring);
        for (d, c) in coeffs.iter().enumerate() {
            let shift = Monomial::var(ring.nvars(), var, d as u32);
            for (m, x) in &c.terms {
                out.add_term(m.mul(&shift), x);
            }
        }
        out
    }

    /// Leading coefficient with respect to a single variable.
    pub fn leading_coefficient_in(&self, var: usize) -> Poly<K> {
        self.coefficients_in(var).pop().unwrap_or_else(|| Poly::zero(&self.ring))
    }

    pub fn evaluate(&self, point: &[K::Elem]) -> K::Elem {
        let f = &self.ring.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = f.mul(&t, &point[v]);
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Re-homes the polynomial into `target`, mapping coefficients and
    /// exponent vectors.
    pub fn map_into<L: Field>(
        &self,
        target: &Ring<L>,
        mut coeff: impl FnMut(&K::Elem) -> L::Elem,
        mut mono: impl FnMut(&Monomial) -> Monomial,
    ) -> Poly<L> {
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            out.add_term(mono(m), &coeff(c));
        }
        out
    }

    /// Moves the polynomial into a ring with the same variables and field but
    /// possibly a different term order.
    pub fn with_ring(&self, ring: &Ring<K>) -> Poly<K> {
        assert_eq!(ring.nvars(), self.nvars());
        assert!(ring.field == self.ring.field);
        Poly { ring: ring.clone(), terms: self.terms.clone() }
    }

    /// Parses an expression in the grammar described in [`parse`].
    pub fn parse(text: &str, ring: &Ring<K>) -> Result<Poly<K>, PolyError> {
        parse::parse(text, ring)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        gcd::gcd(self, other)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl<K: Field> fmt::Display for Poly<K> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let f = &self.ring.field;
        let names = self.ring.vars.names();
        for (i, (m, c)) in self.sorted_terms(self.ring.order).into_iter().enumerate() {
            let neg = f.is_negative(c);
            let c_abs = if neg { f.neg(c) } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(out, "-")?;
                }
            } else if neg {
                write!(out, " - ")?;
            } else {
                write!(out, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let unit = f.is_one(&c_abs);
            if !unit || m.is_one() {
                let (s, atomic) = f.render(&c_abs);
                if atomic || m.is_one() {
                    factors.push(s);
                } else {
                    factors.push(format!("({s})"));
                }
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{}", names[v], e)),
                }
            }
            write!(out, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<K: Field> Add for &Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: &Poly<K>) -> Poly<K> {
        self.try_add(rhs).expect("polynomials from different rings")
    }
}

impl<K: Field> Sub for &Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: &Poly<K>) -> Poly<K> {
        self.try_sub(rhs).expect("polynomials from different rings")
    }
}

impl<K: Field> Mul for &Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: &Poly<K>) -> Poly<K> {
        self.try_mul(rhs).expect("polynomials from different rings")
    }
}

impl<K: Field> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        Poly::neg(self)
    }
}

impl<K: Field> Add for Poly<K> {
    type Output = Poly<K>;
    fn add(self, rhs: Poly<K>) -> Poly<K> {
        &self + &rhs
    }
}

impl<K: Field> Sub for Poly<K> {
    type Output = Poly<K>;
    fn sub(self, rhs: Poly<K>) -> Poly<K> {
        &self - &rhs
    }
}

impl<K: Field> Mul for Poly<K> {
    type Output = Poly<K>;
    fn mul(self, rhs: Poly<K>) -> Poly<K> {
        &self * &rhs
    }
}

/// Compares two polynomials by size: total degree, then number of terms.
pub(crate) fn size_cmp<K: Field>(a: &Poly<K>, b: &Poly<K>) -> Ordering {
    let da = a.total_degree().map(|d| d as i64).unwrap_or(-1);
    let db = b.total_degree().map(|d| d as i64).unwrap_or(-1);
    da.cmp(&db).then(a.num_terms().cmp(&b.num_terms()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize) -> Ring<Rationals> {
        PolyRing::new(VarSet::standard(n), Rationals, TermOrder::Grevlex)
    }

    fn p(s: &str, r: &Ring<Rationals>) -> Poly<Rationals> {
        Poly::parse(s, r).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let r = ring(2);
        assert!((&p("x1", &r) + &p("-x1", &r)).is_zero());
        assert_eq!(&p("x1 + x2", &r) * &p("x1 - x2", &r), p("x1^2 - x2^2", &r));
        assert_eq!(p("x1 + 1", &r).pow(0), Poly::one(&r));
        assert_eq!(p("x1 + 1", &r).pow(3), p("x1^3 + 3*x1^2 + 3*x1 + 1", &r));
    }

    #[test]
    fn mixed_context_is_an_error() {
        let r2 = ring(2);
        let r3 = ring(3);
        assert_eq!(p("x1", &r2).try_add(&p("x1", &r3)), Err(PolyError::MixedContext));
        let fp = PolyRing::new(VarSet::standard(2), Rationals, TermOrder::Lex);
        // different session order is still a different ring
        assert_eq!(p("x1", &r2).try_mul(&Poly::var(&fp, 0)), Err(PolyError::MixedContext));
    }

    #[test]
    fn exact_division() {
        let r = ring(2);
        assert_eq!(p("x1^2*x2", &r).exact_div(&p("x1", &r)), Ok(p("x1*x2", &r)));
        assert_eq!(p("x1 + x2", &r).exact_div(&p("x1", &r)), Err(PolyError::NotDivisible));
        assert_eq!(p("x1", &r).exact_div(&Poly::zero(&r)), Err(PolyError::DivisionByZero));
        assert_eq!(p("6*x1", &r).exact_div(&p("3", &r)), Ok(p("2*x1", &r)));
    }

    #[test]
    fn leading_terms_and_degrees() {
        let r = ring(3);
        let (m, c) = p("x1 + x2^2", &r).leading_term(TermOrder::Grevlex).unwrap();
        assert_eq!(m, Monomial::from_exponents(vec![0, 2, 0]));
        assert!(Rationals.is_one(&c));
        assert_eq!(p("x1^3*x2 + x2^4", &r).degree_in(0), Some(3));
        assert_eq!(Poly::zero(&r).degree_in(0), None);
        assert_eq!(p("x1*x3^2 + x2*x3", &r).leading_coefficient_in(2), p("x1", &r));
        assert_eq!(Poly::zero(&r).leading_term(TermOrder::Lex), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn substitution() {
        let r = ring(3);
        let images = vec![p("x1", &r), p("x2 + x3^2", &r), p("x3", &r)];
        assert_eq!(p("x1*x2", &r).substitute(&images).unwrap(), p("x1*x2 + x1*x3^2", &r));
        let id: Vec<_> = (0..3).map(|i| Poly::var(&r, i)).collect();
        let f = p("x1^2*x3 - 7*x2 + 1", &r);
        assert_eq!(f.substitute(&id).unwrap(), f);
    }

    #[test]
    fn division_with_remainder() {
        let r = ring(2);
        let (q, rem) = p("x1^2 + x2", &r).div_rem(&p("x1", &r)).unwrap();
        assert_eq!(q, p("x1", &r));
        assert_eq!(rem, p("x2", &r));
    }

    #[test]
    fn univariate_views() {
        let r = ring(2);
        let f = p("x1^2*x2 + x2 + x1", &r);
        let cs = f.coefficients_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[2], p("x2", &r));
        assert_eq!(Poly::from_coefficients_in(&r, 0, &cs), f);
    }
}
