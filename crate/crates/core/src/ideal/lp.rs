//! Term lists kept sorted by a term order, leading term first.

use crate::poly::{Field, Monomial, Poly, Ring, TermOrder};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Lp<K: Field> {
    pub terms: Vec<(Monomial, K::Elem)>,
}

impl<K: Field> Lp<K> {
    pub fn zero() -> Self {
        Lp { terms: Vec::new() }
    }

    pub fn constant(c: K::Elem, nvars: usize) -> Self {
        Lp { terms: vec![(Monomial::one(nvars), c)] }
    }

    pub fn from_poly(p: &Poly<K>, order: TermOrder) -> Self {
        let mut terms: Vec<(Monomial, K::Elem)> = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Lp { terms }
    }

    pub fn to_poly(&self, ring: &Ring<K>) -> Poly<K> {
        Poly::from_terms(ring, self.terms.iter().cloned())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, K::Elem)> {
        self.terms.first()
    }

    pub fn scale(&mut self, k: &K, c: &K::Elem) {
        if k.is_one(c) {
            return;
        }
        for t in &mut self.terms {
            t.1 = k.mul(&t.1, c);
        }
    }

    /// `self - c * m * other`.
    pub fn sub_mul_term(&self, k: &K, order: TermOrder, other: &Lp<K>, m: &Monomial, c: &K::Elem) -> Lp<K> {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = other.terms.iter().map(|(bm, bc)| (bm.mul(m), k.mul(bc, c))).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (bm, bc) = b.next().unwrap();
                    out.push((bm, k.neg(&bc)));
                }
                (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => {
                        let (bm, bc) = b.next().unwrap();
                        out.push((bm, k.neg(&bc)));
                    }
                    Ordering::Equal => {
                        let (am, ac) = a.next().unwrap();
                        let (_, bc) = b.next().unwrap();
                        let v = k.sub(ac, &bc);
                        if !k.is_zero(&v) {
                            out.push((am.clone(), v));
                        }
                    }
                },
            }
        }
        Lp { terms: out }
    }
}
