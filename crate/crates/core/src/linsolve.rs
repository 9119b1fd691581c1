//! Exact linear algebra over the coefficient field, and the bounded-degree
//! ansatz for polynomial combinations.

use std::collections::HashMap;

use crate::poly::{Field, Monomial, Poly};

/// One solution of `a x = b` over `k`, or `None` if inconsistent.
/// Free variables are set to zero.
pub fn solve_linear<K: Field>(k: &K, mut a: Vec<Vec<K::Elem>>, mut b: Vec<K::Elem>) -> Option<Vec<K::Elem>> {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !k.is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(p, r);
        b.swap(p, r);
        let inv = k.inv_strict(&a[r][c]);
        for j in c..cols {
            a[r][j] = k.mul(&a[r][j], &inv);
        }
        b[r] = k.mul(&b[r], &inv);
        for i in 0..rows {
            if i == r || k.is_zero(&a[i][c]) {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..cols {
                if !k.is_zero(&a[r][j]) {
                    a[i][j] = k.sub(&a[i][j], &k.mul(&f, &a[r][j]));
                }
            }
            b[i] = k.sub(&b[i], &k.mul(&f, &b[r]));
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|x| !k.is_zero(x)) {
        return None;
    }
    let mut x = vec![k.zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

/// Monomials in `n` variables of total degree at most `d`, graded.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut cur = vec![0u32; n];
        fill(&mut out, &mut cur, 0, deg);
    }
    out
}

fn fill(out: &mut Vec<Monomial>, cur: &mut Vec<u32>, var: usize, left: u32) {
    if var + 1 >= cur.len() {
        if let Some(last) = cur.len().checked_sub(1) {
            cur[last] = left;
            out.push(Monomial::from_exponents(cur.clone()));
            cur[last] = 0;
        } else if left == 0 {
            out.push(Monomial::from_exponents(Vec::new()));
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[var] = e;
        fill(out, cur, var + 1, left - e);
    }
    cur[var] = 0;
}

/// Finds `c` with `Σ c_i * gens[i] = target` and every `deg c_i <= d`.
pub fn ansatz_solve<K: Field>(gens: &[Poly<K>], target: &Poly<K>, d: u32) -> Option<Vec<Poly<K>>> {
    let ring = target.ring();
    let k = &ring.field;
    let monos = monomials_up_to(ring.nvars(), d);
    let nunk = gens.len() * monos.len();
    let mut row_of: HashMap<Monomial, usize> = HashMap::new();
    let mut order: Vec<Monomial> = Vec::new();
    let mut entries: Vec<(usize, usize, K::Elem)> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        for (mi, m) in monos.iter().enumerate() {
            let col = gi * monos.len() + mi;
            for (gm, gc) in g.terms() {
                let prod = gm.mul(m);
                let row = *row_of.entry(prod.clone()).or_insert_with(|| {
                    order.push(prod);
                    order.len() - 1
                });
                entries.push((row, col, gc.clone()));
            }
        }
    }
    for (tm, _) in target.terms() {
        if !row_of.contains_key(tm) {
            // the target has a monomial no product can reach
            return None;
        }
    }
    let nrows = order.len();
    let mut a = vec![vec![k.zero(); nunk]; nrows];
    for (r, c, v) in entries {
        a[r][c] = k.add(&a[r][c], &v);
    }
    let b: Vec<K::Elem> = order.iter().map(|m| target.coefficient(m)).collect();
    let x = solve_linear(k, a, b)?;
    Some(
        (0..gens.len())
            .map(|gi| {
                Poly::from_terms(
                    ring,
                    monos.iter().enumerate().map(|(mi, m)| (m.clone(), x[gi * monos.len() + mi].clone())),
                )
            })
            .collect(),
    )
}

/// Smallest-degree ansatz solution with degree at most `max_d`.
pub fn ansatz_combination<K: Field>(gens: &[Poly<K>], target: &Poly<K>, max_d: u32) -> Option<Vec<Poly<K>>> {
    (0..=max_d).find_map(|d| ansatz_solve(gens, target, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{PolyRing, Rationals, TermOrder, VarSet};

    #[test]
    fn linear_system() {
        let k = Rationals;
        let q = |n| k.from_i64(n);
        // x + y = 3, x - y = 1
        let x = solve_linear(&k, vec![vec![q(1), q(1)], vec![q(1), q(-1)]], vec![q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(solve_linear(&k, vec![vec![q(1)], vec![q(1)]], vec![q(1), q(2)]).is_none());
    }

    #[test]
    fn monomial_count() {
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomials_up_to(1, 3).len(), 4);
        assert_eq!(monomials_up_to(0, 3).len(), 1);
    }

    #[test]
    fn unit_combination_by_ansatz() {
        let r = PolyRing::new(VarSet::standard(2), Rationals, TermOrder::Grevlex);
        let g: Vec<_> = ["x2", "x1*x2 + 1"].iter().map(|s| Poly::parse(s, &r).unwrap()).collect();
        let c = ansatz_combination(&g, &Poly::one(&r), 2).unwrap();
        let s = &(&c[0] * &g[0]) + &(&c[1] * &g[1]);
        assert!(s.is_one());
        let g2: Vec<_> = ["x1", "x2"].iter().map(|s| Poly::parse(s, &r).unwrap()).collect();
        assert!(ansatz_combination(&g2, &Poly::one(&r), 3).is_none());
    }
}
