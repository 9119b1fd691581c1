use crate::error::MatrixError;
use crate::ideal::{is_unit_ideal, Budget};
use crate::poly::{gcd_many, Field, Poly, TermOrder};

use super::linalg::det_unchecked;
use super::PolyMatrix;

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Every `i x i` minor, row sets outermost, both in lexicographic order.
pub fn all_minors<K: Field>(f: &PolyMatrix<K>, i: usize) -> Result<Vec<Poly<K>>, MatrixError> {
    let max = f.rows().min(f.cols());
    if i == 0 || i > max {
        return Err(MatrixError::OrderOutOfRange { order: i, max });
    }
    let rs = subsets(f.rows(), i);
    let cs = subsets(f.cols(), i);
    let mut out = Vec::with_capacity(rs.len() * cs.len());
    for r in &rs {
        for c in &cs {
            out.push(det_unchecked(&f.submatrix(r, c)));
        }
    }
    Ok(out)
}

/// Minors of one order together with their gcd and the reduced minors.
#[derive(Clone, Debug)]
pub struct MinorReport<K: Field> {
    pub order: usize,
    pub minors: Vec<Poly<K>>,
    pub d: Poly<K>,
    pub reduced: Vec<Poly<K>>,
    /// The minors generate the unit ideal.
    pub unit_i: bool,
    /// The reduced minors generate the unit ideal.
    pub unit_j: bool,
}

/// `(minors, d, reduced)` with `minors[j] = d * reduced[j]`. When every minor
/// vanishes `d = 0` and the reduced list repeats the zeros.
pub(crate) fn reduced_minors<K: Field>(
    f: &PolyMatrix<K>,
    i: usize,
) -> Result<(Vec<Poly<K>>, Poly<K>, Vec<Poly<K>>), MatrixError> {
    let minors = all_minors(f, i)?;
    let d = gcd_many(minors.iter(), Poly::zero(f.ring()));
    let reduced = if d.is_zero() || d.is_one() {
        minors.clone()
    } else {
        minors.iter().map(|a| a.exact_div(&d)).collect::<Result<Vec<_>, _>>()?
    };
    Ok((minors, d, reduced))
}

pub fn minor_report<K: Field>(
    f: &PolyMatrix<K>,
    i: usize,
    order: TermOrder,
    budget: &Budget,
) -> Result<MinorReport<K>, MatrixError> {
    let (minors, d, reduced) = reduced_minors(f, i)?;
    let unit_i = is_unit_ideal(&minors, order, budget)?;
    let unit_j = if d.is_zero() {
        false
    } else if d.is_one() {
        unit_i
    } else {
        is_unit_ideal(&reduced, order, budget)?
    };
    Ok(MinorReport { order: i, minors, d, reduced, unit_i, unit_j })
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::*;

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn report_examples() {
        let r = ring(2);
        let b = Budget::default();
        let f = mat(&r, &[&["x1", "x2"], &["0", "x1"]]);
        let rep = minor_report(&f, 1, TermOrder::Grevlex, &b).unwrap();
        assert_eq!(rep.minors, vec![p(&r, "x1"), p(&r, "x2"), p(&r, "0"), p(&r, "x1")]);
        assert!(rep.d.is_one());
        assert_eq!(rep.reduced, rep.minors);
        assert!(!rep.unit_j);
        let rep2 = minor_report(&f, 2, TermOrder::Grevlex, &b).unwrap();
        assert_eq!(rep2.d, p(&r, "x1^2"));
        assert!(rep2.unit_j && !rep2.unit_i);

        let g = mat(&r, &[&["x1", "0"], &["0", "x1"]]);
        let rep = minor_report(&g, 1, TermOrder::Grevlex, &b).unwrap();
        assert_eq!(rep.d, p(&r, "x1"));
        assert_eq!(rep.reduced, vec![p(&r, "1"), p(&r, "0"), p(&r, "0"), p(&r, "1")]);
        assert!(rep.unit_j);

        let h = PolyMatrix::identity(&r, 3);
        assert_eq!(all_minors(&h, 2).unwrap().len(), 9);
        assert!(matches!(all_minors(&h, 4), Err(MatrixError::OrderOutOfRange { .. })));
    }
}
