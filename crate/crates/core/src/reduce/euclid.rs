//! Euclidean elimination over `Ā = (K[x1]/p)[x2, ..., xn]`, with every
//! elementary operation lifted to `A` and applied there.

use std::cmp::Ordering;

use crate::error::ReduceError;
use crate::ideal::{is_unit_ideal, Budget};
use crate::matrix::{rank, PolyMatrix};
use crate::poly::{gcd_many, size_cmp, Field, Poly};
use crate::residue::{BarMap, BarPoly, ResidueField};

use super::work::Work;

const MAX_ROUNDS: usize = 200;

/// `Fbar = g1 * g2` with `g1` a column and `g2` a row.
#[derive(Clone, Debug)]
pub struct Rank1Factors<K: Field> {
    pub g1: PolyMatrix<ResidueField<K>>,
    pub g2: PolyMatrix<ResidueField<K>>,
    /// Whether the entries of `g2` generate the unit ideal.
    pub zlp: bool,
}

/// Factors a rank-one matrix over `Ā` through the primitive part of its
/// first nonzero row.
pub fn zlp_rank1_factorize<K: Field>(
    fbar: &PolyMatrix<ResidueField<K>>,
    budget: &Budget,
) -> Result<Rank1Factors<K>, ReduceError> {
    if fbar.is_zero() || rank(fbar) != 1 {
        return Err(ReduceError::NotRankOne);
    }
    let ring = fbar.ring();
    let lead = (0..fbar.rows()).find(|&i| fbar.row(i).iter().any(|x| !x.is_zero())).unwrap();
    let first = fbar.row(lead);
    let g = gcd_many(first.iter(), Poly::zero(ring));
    let row: Vec<BarPoly<K>> = first.iter().map(|x| x.exact_div(&g)).collect::<Result<_, _>>()?;
    let j0 = row.iter().position(|x| !x.is_zero()).unwrap();
    let mut col = Vec::with_capacity(fbar.rows());
    for i in 0..fbar.rows() {
        let e = fbar.get(i, j0).exact_div(&row[j0]).map_err(|_| ReduceError::NotRankOne)?;
        if (0..fbar.cols()).any(|j| &(&e * &row[j]) != fbar.get(i, j)) {
            return Err(ReduceError::NotRankOne);
        }
        col.push(vec![e]);
    }
    let zlp = is_unit_ideal(&row, ring.order, budget)?;
    Ok(Rank1Factors {
        g1: PolyMatrix::from_rows(ring, col)?,
        g2: PolyMatrix::from_rows(ring, vec![row])?,
        zlp,
    })
}

fn is_unit<K: Field>(x: &BarPoly<K>) -> bool {
    x.is_nonzero_constant()
}

fn smaller<K: Field>(a: &BarPoly<K>, b: &BarPoly<K>) -> bool {
    size_cmp(a, b) == Ordering::Less
}

/// Row operations (lifted) that leave at most one entry of column `col`
/// in rows `from..` nonzero mod `p`, moved to row `from`. `false` when the
/// division steps stop making progress.
pub(crate) fn euclid_column<K: Field>(w: &mut Work<K>, bar: &BarMap<K>, col: usize, from: usize) -> bool {
    for _ in 0..MAX_ROUNDS {
        let e: Vec<BarPoly<K>> = (from..w.rows()).map(|i| bar.bar(w.m.get(i, col))).collect();
        let nz: Vec<usize> = (0..e.len()).filter(|&i| !e[i].is_zero()).collect();
        if nz.len() <= 1 {
            if let Some(&i) = nz.first() {
                w.swap_rows(from, from + i);
            }
            return true;
        }
        let piv = match nz.iter().copied().find(|&i| is_unit(&e[i])) {
            Some(i) => i,
            None => nz.iter().copied().fold(nz[0], |best, i| if smaller(&e[i], &e[best]) { i } else { best }),
        };
        let mut progress = false;
        for &j in nz.iter().filter(|&&j| j != piv) {
            let Ok((q, _)) = e[j].div_rem(&e[piv]) else { continue };
            if !q.is_zero() {
                w.row_add(from + j, from + piv, &bar.lift(&q).neg());
                progress = true;
            }
        }
        if !progress {
            return false;
        }
    }
    false
}

/// Column version of [`euclid_column`] acting on row `row`.
pub(crate) fn euclid_row<K: Field>(w: &mut Work<K>, bar: &BarMap<K>, row: usize, from: usize) -> bool {
    let mut t = std::mem::replace(w, placeholder(w)).transposed();
    let ok = euclid_column(&mut t, bar, row, from);
    *w = t.transposed();
    ok
}

fn placeholder<K: Field>(w: &Work<K>) -> Work<K> {
    let r = w.m.ring();
    Work { m: PolyMatrix::zeros(r, 0, 0), u: PolyMatrix::zeros(r, 0, 0), v: PolyMatrix::zeros(r, 0, 0) }
}

/// Lifted row operations bringing the matrix to echelon form mod `p`.
/// Returns the number of rows that stay nonzero mod `p`; the remaining
/// rows are divisible by `p`.
pub(crate) fn bar_row_echelon<K: Field>(w: &mut Work<K>, bar: &BarMap<K>) -> Option<usize> {
    let mut r = 0;
    for col in 0..w.cols() {
        if r == w.rows() {
            break;
        }
        if !euclid_column(w, bar, col, r) {
            return None;
        }
        if !bar.bar(w.m.get(r, col)).is_zero() {
            r += 1;
        }
    }
    Some(r)
}

/// Lifted row and column operations making the corner a unit mod `p`.
pub(crate) fn bar_unit_corner<K: Field>(w: &mut Work<K>, bar: &BarMap<K>) -> bool {
    for _ in 0..MAX_ROUNDS {
        let mb = bar.bar_matrix(&w.m);
        let cells = (0..mb.rows()).flat_map(|i| (0..mb.cols()).map(move |j| (i, j)));
        if let Some((i, j)) = cells.clone().find(|&(i, j)| is_unit(mb.get(i, j))) {
            w.swap_rows(0, i);
            w.swap_cols(0, j);
            return true;
        }
        let Some((i, j)) = cells
            .filter(|&(i, j)| !mb.get(i, j).is_zero())
            .reduce(|a, b| if smaller(mb.get(b.0, b.1), mb.get(a.0, a.1)) { b } else { a })
        else {
            return false;
        };
        w.swap_rows(0, i);
        w.swap_cols(0, j);
        if !euclid_column(w, bar, 0, 0) || !euclid_row(w, bar, 0, 0) {
            return false;
        }
        let mb = bar.bar_matrix(&w.m);
        let corner = mb.get(0, 0).clone();
        if is_unit(&corner) {
            return true;
        }
        let col_clear = (1..mb.rows()).all(|i| mb.get(i, 0).is_zero());
        if col_clear {
            if corner.is_zero() {
                return false;
            }
            // every entry must be a multiple of the corner unless it is a unit
            let stray = (1..mb.rows())
                .find(|&i| (1..mb.cols()).any(|j| mb.get(i, j).exact_div(&corner).is_err()));
            match stray {
                Some(i) => w.row_add(0, i, &Poly::one(w.m.ring())),
                None => return false,
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::test_util::*;
    use crate::residue::ModulusP;

    fn check(w: &Work<crate::poly::Rationals>, f: &PolyMatrix<crate::poly::Rationals>) {
        assert_eq!(&(&w.u * f) * &w.v, w.m);
    }

    #[test]
    fn rank_one_examples() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        let bar = BarMap::new(&r, &m);
        let b = Budget::default();
        let f = bar.bar_matrix(&mat(&r, &[&["0", "x2"], &["0", "0"]]));
        let fac = zlp_rank1_factorize(&f, &b).unwrap();
        assert_eq!(fac.g1.to_strings(), vec![vec!["x2"], vec!["0"]]);
        assert_eq!(fac.g2.to_strings(), vec![vec!["0", "1"]]);
        assert!(fac.zlp);
        let g = bar.bar_matrix(&mat(&r, &[&["x2", "1"], &["x2^2", "x2"]]));
        let fac = zlp_rank1_factorize(&g, &b).unwrap();
        assert_eq!(&fac.g1 * &fac.g2, g);
        let one = bar.bar_matrix(&mat(&r, &[&["1", "0"], &["0", "0"]]));
        let fac = zlp_rank1_factorize(&one, &b).unwrap();
        assert_eq!(fac.g1.to_strings(), vec![vec!["1"], vec!["0"]]);
        assert!(fac.zlp);
        let full = bar.bar_matrix(&PolyMatrix::identity(&r, 2));
        assert!(matches!(zlp_rank1_factorize(&full, &b), Err(ReduceError::NotRankOne)));
    }

    #[test]
    fn echelon_leaves_rows_divisible_by_p() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1^2 + 1")).unwrap();
        let bar = BarMap::new(&r, &m);
        let f = mat(&r, &[&["x2 + x1", "x2^2 + 1"], &["x2^2 + x1*x2 + x1^2 + 1", "x2^3 + x2 + x1^2 + 1"]]);
        let mut w = Work::new(&f);
        assert_eq!(bar_row_echelon(&mut w, &bar), Some(1));
        check(&w, &f);
        assert!(bar.bar(w.m.get(1, 0)).is_zero() && bar.bar(w.m.get(1, 1)).is_zero());
    }

    #[test]
    fn unit_corner_found() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        let bar = BarMap::new(&r, &m);
        let f = mat(&r, &[&["x2^2", "x2 + x1"], &["x2 + 1", "x1*x2"]]);
        let mut w = Work::new(&f);
        assert!(bar_unit_corner(&mut w, &bar));
        check(&w, &f);
        assert!(bar.bar(w.m.get(0, 0)).is_nonzero_constant());
    }
}
