//! Multivariate gcd by recursive content / primitive-part reduction.
//!
//! The polynomials are viewed as univariate in their last occurring
//! variable with coefficients in the remaining variables; contents are
//! computed recursively and the primitive parts go through a primitive
//! pseudo-remainder sequence. Results are monic under the ring order.

use super::{Field, Poly};

pub(super) fn gcd<K: Field>(f: &Poly<K>, g: &Poly<K>) -> Poly<K> {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    let ring = f.ring().clone();
    if f.is_constant() || g.is_constant() {
        return Poly::one(&ring);
    }
    if f == g {
        return f.monic();
    }
    let n = f.nvars();
    let v = (0..n).rev().find(|&i| f.uses_var(i) || g.uses_var(i)).expect("nonconstant input");

    let fc = f.coefficients_in(v);
    let gc = g.coefficients_in(v);
    let cf = content(&fc);
    let cg = content(&gc);
    let c = gcd(&cf, &cg);
    let mut a = primitive(fc, &cf);
    let mut b = primitive(gc, &cg);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    if b.len() > 1 && coprime_image(&a, &b) {
        return c.monic();
    }
    while b.len() > 1 {
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            b = Vec::new();
            break;
        }
        let cr = content(&r);
        b = normalize(primitive(r, &cr));
    }
    let pp = if b.is_empty() {
        Poly::from_coefficients_in(&ring, v, &a)
    } else {
        // nonzero remainder of degree 0: primitive parts are coprime
        Poly::one(&ring)
    };
    (&c * &pp).monic()
}

/// gcd of a list of polynomials, monic; zero for an all-zero list.
pub(crate) fn gcd_many<'a, K: Field>(items: impl IntoIterator<Item = &'a Poly<K>>, zero: Poly<K>) -> Poly<K> {
    let mut acc = zero;
    for p in items {
        if acc.is_one() {
            break;
        }
        acc = gcd(&acc, p);
    }
    acc
}

/// Evaluates the coefficients at a few fixed points; a constant gcd of the
/// univariate images (with nonvanishing leading coefficients) forces the
/// primitive parts to be coprime.
fn coprime_image<K: Field>(a: &[Poly<K>], b: &[Poly<K>]) -> bool {
    let field = a[0].field().clone();
    let n = a[0].nvars();
    for attempt in 0..3i64 {
        let point: Vec<K::Elem> = (0..n as i64).map(|j| field.from_i64(2 + 3 * j + 5 * attempt + j * j * attempt)).collect();
        let ea: Vec<K::Elem> = a.iter().map(|c| c.evaluate(&point)).collect();
        let eb: Vec<K::Elem> = b.iter().map(|c| c.evaluate(&point)).collect();
        if field.is_zero(ea.last().unwrap()) || field.is_zero(eb.last().unwrap()) {
            continue;
        }
        if univariate_gcd_degree(&field, ea, eb) == 0 {
            return true;
        }
    }
    false
}

fn univariate_gcd_degree<K: Field>(field: &K, mut a: Vec<K::Elem>, mut b: Vec<K::Elem>) -> usize {
    let strip = |v: &mut Vec<K::Elem>| {
        while v.last().is_some_and(|c| field.is_zero(c)) {
            v.pop();
        }
    };
    strip(&mut a);
    strip(&mut b);
    while !b.is_empty() {
        let inv = field.inv_strict(b.last().unwrap());
        while a.len() >= b.len() {
            let q = field.mul(a.last().unwrap(), &inv);
            let shift = a.len() - b.len();
            for (j, bj) in b.iter().enumerate() {
                a[j + shift] = field.sub(&a[j + shift], &field.mul(&q, bj));
            }
            strip(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn content<K: Field>(coeffs: &[Poly<K>]) -> Poly<K> {
    let ring = coeffs[0].ring().clone();
    gcd_many(coeffs.iter().filter(|c| !c.is_zero()), Poly::zero(&ring))
}

fn primitive<K: Field>(coeffs: Vec<Poly<K>>, content: &Poly<K>) -> Vec<Poly<K>> {
    if content.is_one() {
        return coeffs;
    }
    coeffs
        .into_iter()
        .map(|c| c.exact_div(content).expect("content divides every coefficient"))
        .collect()
}

/// Scales by a field constant so the leading coefficient (in the main
/// variable) is monic under the ring order. Keeps rational coefficients small.
fn normalize<K: Field>(coeffs: Vec<Poly<K>>) -> Vec<Poly<K>> {
    let lc = match coeffs.last().and_then(|c| c.lc()) {
        Some(c) => c.clone(),
        None => return coeffs,
    };
    let f = coeffs[0].field().clone();
    if f.is_one(&lc) {
        return coeffs;
    }
    let inv = f.inv_strict(&lc);
    coeffs.into_iter().map(|c| c.scale(&inv)).collect()
}

fn trim<K: Field>(v: &mut Vec<Poly<K>>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Pseudo-remainder of `a` by `b` (coefficient vectors, low degree first).
fn prem<K: Field>(a: &[Poly<K>], b: &[Poly<K>]) -> Vec<Poly<K>> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<Poly<K>> = a.to_vec();
    trim(&mut r);
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = &r[j + shift] - &(&lr * bj);
        }
        trim(&mut r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::super::{PolyRing, Rationals, Ring, TermOrder, VarSet};
    use super::*;

    fn ring(n: usize) -> Ring<Rationals> {
        PolyRing::new(VarSet::standard(n), Rationals, TermOrder::Grevlex)
    }

    fn p(s: &str, r: &Ring<Rationals>) -> Poly<Rationals> {
        Poly::parse(s, r).unwrap()
    }

    #[test]
    fn examples() {
        let r = ring(2);
        assert_eq!(gcd(&p("x1*x2", &r), &p("x1^2", &r)), p("x1", &r));
        assert_eq!(gcd(&p("x1", &r), &p("x2", &r)), p("1", &r));
        assert_eq!(gcd(&Poly::zero(&r), &Poly::zero(&r)), Poly::zero(&r));
        assert_eq!(gcd(&p("3*x1 + 3", &r), &Poly::zero(&r)), p("x1 + 1", &r));
    }

    #[test]
    fn common_factor_recovered() {
        let r = ring(3);
        let h = p("x1*x3 - x2^2 + 2", &r);
        let f = p("x2 + x3 + 1", &r);
        let g = p("x1^2 - x3", &r);
        assert_eq!(gcd(&(&h * &f), &(&h * &g)), h.monic());
        let h2 = p("(x1 + x2)^2*(x3 - 1)", &r);
        assert_eq!(gcd(&(&h2 * &p("x1 - x3", &r)), &(&h2 * &p("x2^3 + 1", &r))), h2.monic());
    }

    #[test]
    fn univariate_coprime() {
        let r = ring(1);
        assert!(gcd(&p("x1^2 + 1", &r), &p("x1^3 - x1", &r)).is_one());
        assert_eq!(gcd(&p("x1^2 - 1", &r), &p("x1^3 - x1", &r)), p("x1^2 - 1", &r));
    }
}
