//! Fraction-free elimination: determinant, rank, pivots and kernels.

use crate::error::MatrixError;
use crate::poly::{gcd_many, Field, Poly};

use super::PolyMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Bareiss determinant; pivot is the first nonzero entry of the current column.
pub fn determinant<K: Field>(f: &PolyMatrix<K>) -> Result<Poly<K>, MatrixError> {
    if !f.is_square() {
        return Err(MatrixError::NotSquare(f.rows(), f.cols()));
    }
    Ok(det_unchecked(f))
}

pub(crate) fn det_unchecked<K: Field>(f: &PolyMatrix<K>) -> Poly<K> {
    let n = f.rows();
    let ring = f.ring();
    match n {
        0 => return Poly::one(ring),
        1 => return f.get(0, 0).clone(),
        2 => return &(f.get(0, 0) * f.get(1, 1)) - &(f.get(0, 1) * f.get(1, 0)),
        _ => {}
    }
    let mut m = f.clone();
    let mut negate = false;
    let mut prev = Poly::one(ring);
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !m.get(i, k).is_zero()) else {
            return Poly::zero(ring);
        };
        if p != k {
            m.swap_rows(p, k);
            negate = !negate;
        }
        let pivot = m.get(k, k).clone();
        for i in k + 1..n {
            let mik = m.get(i, k).clone();
            for j in k + 1..n {
                let num = &(m.get(i, j) * &pivot) - &(&mik * m.get(k, j));
                let v = if prev.is_one() { num } else { num.exact_div(&prev).expect("Bareiss division is exact") };
                m.set(i, j, v);
            }
            m.set(i, k, Poly::zero(ring));
        }
        prev = pivot;
    }
    let d = m.get(n - 1, n - 1).clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Rank and pivot positions: `(pivot_rows, pivot_cols)` index a nonsingular
/// `r x r` submatrix of the input, in original indices.
pub fn echelon_pivots<K: Field>(f: &PolyMatrix<K>) -> (Vec<usize>, Vec<usize>) {
    let (rows, cols) = f.shape();
    let ring = f.ring();
    let mut m = f.clone();
    let mut orig: Vec<usize> = (0..rows).collect();
    let mut prev = Poly::one(ring);
    let mut r = 0;
    let mut pcols = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        m.swap_rows(p, r);
        orig.swap(p, r);
        let pivot = m.get(r, c).clone();
        for i in r + 1..rows {
            let mic = m.get(i, c).clone();
            for j in c + 1..cols {
                let num = &(m.get(i, j) * &pivot) - &(&mic * m.get(r, j));
                let v = if prev.is_one() { num } else { num.exact_div(&prev).expect("fraction-free division is exact") };
                m.set(i, j, v);
            }
            m.set(i, c, Poly::zero(ring));
        }
        prev = pivot;
        pcols.push(c);
        r += 1;
    }
    let mut prows: Vec<usize> = orig[..r].to_vec();
    prows.sort_unstable();
    (prows, pcols)
}

/// Rank over the fraction field.
pub fn rank<K: Field>(f: &PolyMatrix<K>) -> usize {
    echelon_pivots(f).1.len()
}

/// Basis of the kernel over the fraction field, with denominators cleared
/// and content removed. Each vector has as many entries as `f` has rows
/// (left) or columns (right).
pub fn kernel_vectors<K: Field>(f: &PolyMatrix<K>, side: Side) -> Vec<Vec<Poly<K>>> {
    match side {
        Side::Right => right_kernel(f),
        Side::Left => right_kernel(&f.transpose()),
    }
}

fn right_kernel<K: Field>(f: &PolyMatrix<K>) -> Vec<Vec<Poly<K>>> {
    let ring = f.ring();
    let (prows, pcols) = echelon_pivots(f);
    let r = pcols.len();
    let base = f.submatrix(&prows, &pcols);
    let d = det_unchecked(&base);
    let mut out = Vec::new();
    for free in (0..f.cols()).filter(|c| !pcols.contains(c)) {
        let mut v = vec![Poly::zero(ring); f.cols()];
        v[free] = d.clone();
        for j in 0..r {
            let mut m = base.clone();
            for (a, &i) in prows.iter().enumerate() {
                m.set(a, j, f.get(i, free).clone());
            }
            v[pcols[j]] = det_unchecked(&m).neg();
        }
        out.push(primitive_vector(v));
    }
    out
}

/// Divides out the gcd of the entries and scales the first nonzero entry to
/// a monic leading coefficient.
pub(crate) fn primitive_vector<K: Field>(v: Vec<Poly<K>>) -> Vec<Poly<K>> {
    let Some(first) = v.iter().find(|p| !p.is_zero()) else {
        return v;
    };
    let g = gcd_many(v.iter(), Poly::zero(first.ring()));
    let v: Vec<Poly<K>> = if g.is_one() { v } else { v.iter().map(|p| p.exact_div(&g).expect("gcd divides")).collect() };
    let first = v.iter().find(|p| !p.is_zero()).unwrap();
    let k = first.field().clone();
    let lc = first.lc().unwrap().clone();
    if k.is_one(&lc) {
        return v;
    }
    let inv = k.inv_strict(&lc);
    v.iter().map(|p| p.scale(&inv)).collect()
}

/// Matrix of signed cofactors, transposed: `adj(F)·F = det(F)·I`.
pub fn adjugate<K: Field>(f: &PolyMatrix<K>) -> Result<PolyMatrix<K>, MatrixError> {
    if !f.is_square() {
        return Err(MatrixError::NotSquare(f.rows(), f.cols()));
    }
    let n = f.rows();
    let mut out = PolyMatrix::zeros(f.ring(), n, n);
    if n == 1 {
        out.set(0, 0, Poly::one(f.ring()));
        return Ok(out);
    }
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&x| x != i).collect();
            let cols: Vec<usize> = (0..n).filter(|&x| x != j).collect();
            let c = det_unchecked(&f.submatrix(&rows, &cols));
            out.set(j, i, if (i + j) % 2 == 0 { c } else { c.neg() });
        }
    }
    Ok(out)
}

pub fn is_unimodular<K: Field>(f: &PolyMatrix<K>) -> Result<bool, MatrixError> {
    Ok(determinant(f)?.is_nonzero_constant())
}

/// Inverse of a unimodular matrix; `None` when the determinant is not a
/// nonzero constant.
pub fn inverse_unimodular<K: Field>(f: &PolyMatrix<K>) -> Result<Option<PolyMatrix<K>>, MatrixError> {
    let d = determinant(f)?;
    let Some(c) = d.as_constant().filter(|_| !d.is_zero()) else {
        return Ok(None);
    };
    let inv = f.ring().field.inv_strict(c);
    let adj = adjugate(f)?;
    Ok(Some(adj.map(|p| p.scale(&inv))))
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::*;

    fn cofactor_det(m: &PolyMatrix<crate::poly::Rationals>) -> Poly<crate::poly::Rationals> {
        let n = m.rows();
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = Poly::zero(m.ring());
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&x| x != j).collect();
            let t = m.get(0, j) * &cofactor_det(&m.submatrix(&rows, &cols));
            acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
        }
        acc
    }

    #[test]
    fn determinant_examples() {
        let r = ring(2);
        assert_eq!(determinant(&mat(&r, &[&["x1", "x2"], &["0", "x1"]])).unwrap(), p(&r, "x1^2"));
        assert!(determinant(&PolyMatrix::identity(&r, 4)).unwrap().is_one());
        assert!(determinant(&mat(&r, &[&["1", "2"]])).is_err());
        let m = mat(&r, &[&["0", "x1", "1"], &["x2", "0", "x1"], &["1", "x2", "0"]]);
        assert_eq!(determinant(&m).unwrap(), cofactor_det(&m));
        let z = mat(&r, &[&["0", "x1", "1"], &["0", "0", "x1"], &["0", "x2", "0"]]);
        assert!(determinant(&z).unwrap().is_zero());
        let m4 = mat(
            &r,
            &[&["x1", "1", "0", "x2"], &["1", "x2", "x1", "0"], &["0", "x1", "x2^2", "1"], &["x2", "0", "1", "x1"]],
        );
        assert_eq!(determinant(&m4).unwrap(), cofactor_det(&m4));
    }

    #[test]
    fn rank_examples() {
        let r = ring(2);
        assert_eq!(rank(&PolyMatrix::zeros(&r, 2, 3)), 0);
        assert_eq!(rank(&PolyMatrix::identity(&r, 3)), 3);
        let outer = mat(&r, &[&["x1*x2", "x2^2"], &["x1^2", "x1*x2"]]);
        assert_eq!(rank(&outer), 1);
        let wide = mat(&r, &[&["0", "x1", "x2"], &["0", "x1^2", "x1*x2"]]);
        assert_eq!(echelon_pivots(&wide), (vec![0], vec![1]));
    }

    #[test]
    fn kernels_annihilate() {
        let r = ring(2);
        let m = mat(&r, &[&["x1", "x2", "1"], &["x1^2", "x1*x2", "x1"]]);
        let right = kernel_vectors(&m, Side::Right);
        assert_eq!(right.len(), 2);
        for v in &right {
            let col = PolyMatrix::from_rows(&r, v.iter().map(|x| vec![x.clone()]).collect()).unwrap();
            assert!((&m * &col).is_zero());
        }
        let left = kernel_vectors(&m, Side::Left);
        assert_eq!(left, vec![vec![p(&r, "x1"), p(&r, "-1")]]);
        assert!(kernel_vectors(&PolyMatrix::identity(&r, 2), Side::Left).is_empty());
    }

    #[test]
    fn unimodular_inverse() {
        let r = ring(2);
        let u = mat(&r, &[&["1", "x1"], &["x2", "1 + x1*x2"]]);
        assert!(is_unimodular(&u).unwrap());
        let inv = inverse_unimodular(&u).unwrap().unwrap();
        assert_eq!(&u * &inv, PolyMatrix::identity(&r, 2));
        assert!(!is_unimodular(&mat(&r, &[&["1", "0"], &["0", "x1"]])).unwrap());
        assert!(inverse_unimodular(&mat(&r, &[&["2"]])).unwrap().is_some());
    }
}
