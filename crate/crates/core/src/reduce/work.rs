//! A matrix together with the transformations applied to reach it.

use crate::matrix::PolyMatrix;
use crate::poly::{Field, Poly};

/// `u * F * v == m` for the matrix `F` the work started from.
#[derive(Clone, Debug)]
pub(crate) struct Work<K: Field> {
    pub m: PolyMatrix<K>,
    pub u: PolyMatrix<K>,
    pub v: PolyMatrix<K>,
}

impl<K: Field> Work<K> {
    pub fn new(f: &PolyMatrix<K>) -> Self {
        Work { m: f.clone(), u: PolyMatrix::identity(f.ring(), f.rows()), v: PolyMatrix::identity(f.ring(), f.cols()) }
    }

    pub fn rows(&self) -> usize {
        self.m.rows()
    }

    pub fn cols(&self) -> usize {
        self.m.cols()
    }

    /// `row[t] += q * row[s]`.
    pub fn row_add(&mut self, t: usize, s: usize, q: &Poly<K>) {
        self.m.add_row_multiple(t, s, q);
        self.u.add_row_multiple(t, s, q);
    }

    /// `col[t] += q * col[s]`.
    pub fn col_add(&mut self, t: usize, s: usize, q: &Poly<K>) {
        self.m.add_col_multiple(t, s, q);
        self.v.add_col_multiple(t, s, q);
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    pub fn scale_row(&mut self, i: usize, c: &K::Elem) {
        self.m.scale_row(i, c);
        self.u.scale_row(i, c);
    }

    pub fn left_mul(&mut self, p: &PolyMatrix<K>) {
        self.m = p * &self.m;
        self.u = p * &self.u;
    }

    pub fn right_mul(&mut self, q: &PolyMatrix<K>) {
        self.m = &self.m * q;
        self.v = &self.v * q;
    }

    /// Replaces columns `a`, `b` by `(x*col_a + y*col_b, z*col_a + w*col_b)`.
    pub fn mix_cols(&mut self, a: usize, b: usize, x: &Poly<K>, y: &Poly<K>, z: &Poly<K>, w: &Poly<K>) {
        for mat in [&mut self.m, &mut self.v] {
            for i in 0..mat.rows() {
                let ca = mat.get(i, a).clone();
                let cb = mat.get(i, b).clone();
                mat.set(i, a, &(x * &ca) + &(y * &cb));
                mat.set(i, b, &(z * &ca) + &(w * &cb));
            }
        }
    }

    /// The same work seen from the transposed side.
    pub fn transposed(self) -> Work<K> {
        Work { m: self.m.transpose(), u: self.v.transpose(), v: self.u.transpose() }
    }

    /// First nonzero constant entry in row-major order.
    pub fn constant_entry(&self) -> Option<(usize, usize)> {
        (0..self.rows())
            .flat_map(|i| (0..self.cols()).map(move |j| (i, j)))
            .find(|&(i, j)| self.m.get(i, j).is_nonzero_constant())
    }

    /// Moves the entry at `(i, j)` to `(0, 0)` and scales it to 1 when it is
    /// a nonzero constant.
    pub fn bring_to_corner(&mut self, i: usize, j: usize) {
        self.swap_rows(0, i);
        self.swap_cols(0, j);
        if let Some(c) = self.m.get(0, 0).as_constant() {
            let inv = self.m.ring().field.inv_strict(c);
            self.scale_row(0, &inv);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::test_util::*;

    #[test]
    fn invariant_survives_operations() {
        let r = ring(2);
        let f = mat(&r, &[&["x1", "x2", "1"], &["x2^2", "0", "x1"]]);
        let mut w = Work::new(&f);
        w.row_add(1, 0, &p(&r, "x2"));
        w.col_add(2, 0, &p(&r, "-x1"));
        w.swap_rows(0, 1);
        w.swap_cols(1, 2);
        w.mix_cols(0, 1, &p(&r, "1"), &p(&r, "x1"), &p(&r, "0"), &p(&r, "1"));
        assert_eq!(&(&w.u * &f) * &w.v, w.m);
        let t = w.transposed();
        assert_eq!(&(&t.u * &f.transpose()) * &t.v, t.m);
    }

    #[test]
    fn corner() {
        let r = ring(2);
        let f = mat(&r, &[&["x1", "x2"], &["3", "x1"]]);
        let mut w = Work::new(&f);
        let (i, j) = w.constant_entry().unwrap();
        w.bring_to_corner(i, j);
        assert!(w.m.get(0, 0).is_one());
        assert_eq!(&(&w.u * &f) * &w.v, w.m);
    }
}
