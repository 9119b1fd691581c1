//! Dense matrices of polynomials and the invariants built on their minors.

mod certificate;
mod linalg;
mod minors;
mod smith;

use std::fmt;
use std::ops::Mul;

pub use certificate::{check_certificate, verify_certificate, CertificateCheck, EquivCertificate};
pub use linalg::{adjugate, determinant, echelon_pivots, inverse_unimodular, is_unimodular, kernel_vectors, rank, Side};
pub use minors::{all_minors, minor_report, subsets, MinorReport};
pub(crate) use minors::reduced_minors;
pub use smith::{smith_form, SmithFormData};

use crate::error::MatrixError;
use crate::error::PolyError;
use crate::poly::{same_ring, Field, Poly, Ring};

#[derive(Clone, PartialEq)]
pub struct PolyMatrix<K: Field> {
    ring: Ring<K>,
    rows: usize,
    cols: usize,
    data: Vec<Poly<K>>,
}

impl<K: Field> PolyMatrix<K> {
    pub fn zeros(ring: &Ring<K>, rows: usize, cols: usize) -> Self {
        PolyMatrix { ring: ring.clone(), rows, cols, data: vec![Poly::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Ring<K>, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, Poly::one(ring));
        }
        m
    }

    /// `rows x cols` matrix with `diag` on the main diagonal.
    pub fn diagonal(ring: &Ring<K>, rows: usize, cols: usize, diag: &[Poly<K>]) -> Self {
        assert!(diag.len() <= rows.min(cols));
        let mut m = Self::zeros(ring, rows, cols);
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_rows(ring: &Ring<K>, rows: Vec<Vec<Poly<K>>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if r == 0 || c == 0 {
            return Err(MatrixError::ShapeMismatch("matrix must be nonempty".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::ShapeMismatch("rows have different lengths".into()));
        }
        let data: Vec<Poly<K>> = rows.into_iter().flatten().collect();
        if data.iter().any(|p| !same_ring(p.ring(), ring)) {
            return Err(MatrixError::Poly(PolyError::MixedContext));
        }
        Ok(PolyMatrix { ring: ring.clone(), rows: r, cols: c, data })
    }

    /// Parses a grid of expression strings.
    pub fn parse<S: AsRef<str>>(ring: &Ring<K>, rows: &[Vec<S>]) -> Result<Self, MatrixError> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| Poly::parse(s.as_ref(), ring)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(ring, parsed)
    }

    pub fn ring(&self) -> &Ring<K> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<K> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<K>) {
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly<K>> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> Vec<Poly<K>> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Poly<K>> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Poly<K>>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if !same_ring(&self.ring, &other.ring) {
            return Err(MatrixError::Poly(PolyError::MixedContext));
        }
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(&self.ring);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.ring, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&Poly<K>) -> Poly<K>) -> Self {
        let data: Vec<Poly<K>> = self.data.iter().map(f).collect();
        let ring = data.first().map(|p| p.ring().clone()).unwrap_or_else(|| self.ring.clone());
        PolyMatrix { ring, rows: self.rows, cols: self.cols, data }
    }

    pub fn try_map<E>(&self, f: impl Fn(&Poly<K>) -> Result<Poly<K>, E>) -> Result<Self, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(PolyMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data })
    }

    /// Entry-wise image under the substitution `x_i -> images[i]`.
    pub fn substitute(&self, images: &[Poly<K>]) -> Result<Self, PolyError> {
        self.try_map(|p| p.substitute(images))
    }

    /// Entry-wise exact division by `g`.
    pub fn exact_div(&self, g: &Poly<K>) -> Result<Self, PolyError> {
        self.try_map(|p| p.exact_div(g))
    }

    pub fn scale(&self, c: &Poly<K>) -> Self {
        self.map(|p| p * c)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[src]`.
    pub fn add_row_multiple(&mut self, target: usize, src: usize, factor: &Poly<K>) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.get(target, j) + &(factor * s);
            self.set(target, j, v);
        }
    }

    /// `col[target] += factor * col[src]`.
    pub fn add_col_multiple(&mut self, target: usize, src: usize, factor: &Poly<K>) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s.is_zero() {
                continue;
            }
            let v = self.get(i, target) + &(factor * s);
            self.set(i, target, v);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &K::Elem) {
        for j in 0..self.cols {
            let v = self.get(i, j).scale(c);
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &K::Elem) {
        for i in 0..self.rows {
            let v = self.get(i, j).scale(c);
            self.set(i, j, v);
        }
    }

    /// `I_offset ⊕ self` padded to `size x size`; `self` must be square and fit.
    pub fn embed(&self, size: usize) -> Self {
        assert!(self.is_square() && self.rows <= size);
        let off = size - self.rows;
        let mut out = Self::identity(&self.ring, size);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(off + i, off + j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Maximum total degree over all entries; `None` for the zero matrix.
    pub fn max_degree(&self) -> Option<u32> {
        self.data.iter().filter_map(|p| p.total_degree()).max()
    }

    /// Size measure used by searches: sum over entries of (degree + 1) and term counts.
    pub(crate) fn weight(&self) -> (u64, u64) {
        let deg: u64 = self.data.iter().map(|p| p.total_degree().map(|d| d as u64 + 1).unwrap_or(0)).sum();
        let terms: u64 = self.data.iter().map(|p| p.num_terms() as u64).sum();
        (deg, terms)
    }
}

impl<K: Field> Mul for &PolyMatrix<K> {
    type Output = PolyMatrix<K>;
    fn mul(self, rhs: &PolyMatrix<K>) -> PolyMatrix<K> {
        self.try_mul(rhs).expect("incompatible matrix product")
    }
}

impl<K: Field> fmt::Display for PolyMatrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<K: Field> fmt::Debug for PolyMatrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix{self}")
    }
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::*;
    use crate::poly::{PolyRing, Rationals, TermOrder, VarSet};

    pub fn ring(n: usize) -> Ring<Rationals> {
        PolyRing::new(VarSet::standard(n), Rationals, TermOrder::Grevlex)
    }

    pub fn mat(r: &Ring<Rationals>, rows: &[&[&str]]) -> PolyMatrix<Rationals> {
        let rows: Vec<Vec<&str>> = rows.iter().map(|x| x.to_vec()).collect();
        PolyMatrix::parse(r, &rows).unwrap()
    }

    pub fn p(r: &Ring<Rationals>, s: &str) -> Poly<Rationals> {
        Poly::parse(s, r).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_util::*;
    use super::*;

    #[test]
    fn product_and_transpose() {
        let r = ring(2);
        let a = mat(&r, &[&["1", "x1"], &["0", "1"]]);
        let b = mat(&r, &[&["x2", "0"], &["1", "x1"]]);
        assert_eq!(&a * &b, mat(&r, &[&["x2 + x1", "x1^2"], &["1", "x1"]]));
        assert_eq!(a.transpose(), mat(&r, &[&["1", "0"], &["x1", "1"]]));
        assert!(a.try_mul(&mat(&r, &[&["1", "2", "3"]])).is_err());
    }

    #[test]
    fn elementary_operations() {
        let r = ring(2);
        let mut a = mat(&r, &[&["1", "x1"], &["x2", "1"]]);
        a.add_row_multiple(1, 0, &p(&r, "-x2"));
        assert_eq!(a, mat(&r, &[&["1", "x1"], &["0", "1 - x1*x2"]]));
        a.swap_cols(0, 1);
        assert_eq!(a.get(1, 0), &p(&r, "1 - x1*x2"));
    }

    #[test]
    fn ragged_rows_rejected() {
        let r = ring(2);
        let rows = vec![vec![p(&r, "1")], vec![p(&r, "1"), p(&r, "2")]];
        assert!(PolyMatrix::from_rows(&r, rows).is_err());
    }
}
