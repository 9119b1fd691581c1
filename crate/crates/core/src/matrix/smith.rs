use crate::error::MatrixError;
use crate::poly::{gcd_many, Field, Poly};
use crate::residue::ModulusP;

use super::linalg::echelon_pivots;
use super::minors::all_minors;
use super::PolyMatrix;

/// Determinantal divisors and invariant factors of a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithFormData<K: Field> {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// `d[0] = 1, d[1], ..., d[rank]`
    pub d: Vec<Poly<K>>,
    /// `phi[i-1] = d[i] / d[i-1]`
    pub phi: Vec<Poly<K>>,
    /// `phi[i-1] = p^exponents[i-1]`, when a modulus was supplied and every
    /// invariant factor is a power of it.
    pub exponents: Option<Vec<u32>>,
}

impl<K: Field> SmithFormData<K> {
    /// The diagonal Smith matrix, zero beyond the rank.
    pub fn matrix(&self) -> PolyMatrix<K> {
        let ring = self.d[0].ring();
        PolyMatrix::diagonal(ring, self.rows, self.cols, &self.phi)
    }

    /// Same rank and invariant factors.
    pub fn same_invariants(&self, other: &Self) -> bool {
        self.rank == other.rank && self.phi == other.phi
    }
}

pub fn smith_form<K: Field>(f: &PolyMatrix<K>, modulus: Option<&ModulusP<K>>) -> Result<SmithFormData<K>, MatrixError> {
    if f.is_zero() {
        return Err(MatrixError::ZeroMatrix);
    }
    let ring = f.ring();
    let rank = echelon_pivots(f).1.len();
    let mut d = vec![Poly::one(ring)];
    let mut phi = Vec::with_capacity(rank);
    for i in 1..=rank {
        let minors = all_minors(f, i)?;
        let di = gcd_many(minors.iter(), Poly::zero(ring));
        phi.push(di.exact_div(&d[i - 1])?);
        d.push(di);
    }
    let exponents = modulus.and_then(|m| {
        phi.iter()
            .map(|x| match m.valuation(x) {
                Some((e, rest)) if rest.is_one() => Some(e),
                _ => None,
            })
            .collect::<Option<Vec<u32>>>()
    });
    Ok(SmithFormData { rows: f.rows(), cols: f.cols(), rank, d, phi, exponents })
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::*;

    #[test]
    fn examples() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        let f = mat(&r, &[&["x1", "x2"], &["0", "x1"]]);
        let s = smith_form(&f, Some(&m)).unwrap();
        assert_eq!(s.rank, 2);
        assert_eq!(s.phi, vec![p(&r, "1"), p(&r, "x1^2")]);
        assert_eq!(s.exponents, Some(vec![0, 2]));
        assert_eq!(s.matrix(), mat(&r, &[&["1", "0"], &["0", "x1^2"]]));

        let g = mat(&r, &[&["x1", "x2", "0"], &["x1^2", "x1*x2", "0"]]);
        let s = smith_form(&g, None).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.matrix(), mat(&r, &[&["1", "0", "0"], &["0", "0", "0"]]));
        assert_eq!(s.exponents, None);
        assert!(smith_form(&PolyMatrix::zeros(&r, 2, 2), None).is_err());
    }

    #[test]
    fn non_power_factor_has_no_exponents() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        let f = mat(&r, &[&["1", "0"], &["0", "x1*x2"]]);
        assert_eq!(smith_form(&f, Some(&m)).unwrap().exponents, None);
    }
}
