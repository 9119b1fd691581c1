use std::fmt;

use crate::error::MatrixError;
use crate::poly::Field;

use super::linalg::determinant;
use super::PolyMatrix;

/// Unimodular `U`, `V` and a target `S` with `U * F * V = S`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivCertificate<K: Field> {
    pub u: PolyMatrix<K>,
    pub v: PolyMatrix<K>,
    pub s: PolyMatrix<K>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateCheck {
    Verified,
    UNotUnimodular,
    VNotUnimodular,
    /// 1-based position of the first differing entry.
    ProductMismatch { row: usize, col: usize },
}

impl CertificateCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, CertificateCheck::Verified)
    }
}

impl fmt::Display for CertificateCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateCheck::Verified => write!(f, "verified"),
            CertificateCheck::UNotUnimodular => write!(f, "U not unimodular"),
            CertificateCheck::VNotUnimodular => write!(f, "V not unimodular"),
            CertificateCheck::ProductMismatch { row, col } => write!(f, "product mismatch at ({row},{col})"),
        }
    }
}

/// Exact check of a certificate, reporting the first failed condition.
pub fn check_certificate<K: Field>(
    f: &PolyMatrix<K>,
    cert: &EquivCertificate<K>,
) -> Result<CertificateCheck, MatrixError> {
    let (l, m) = f.shape();
    if cert.u.shape() != (l, l) || cert.v.shape() != (m, m) || cert.s.shape() != (l, m) {
        return Err(MatrixError::ShapeMismatch(format!(
            "certificate shapes U {:?}, V {:?}, S {:?} do not fit a {l}x{m} matrix",
            cert.u.shape(),
            cert.v.shape(),
            cert.s.shape()
        )));
    }
    if !determinant(&cert.u)?.is_nonzero_constant() {
        return Ok(CertificateCheck::UNotUnimodular);
    }
    if !determinant(&cert.v)?.is_nonzero_constant() {
        return Ok(CertificateCheck::VNotUnimodular);
    }
    let prod = cert.u.try_mul(f)?.try_mul(&cert.v)?;
    for i in 0..l {
        for j in 0..m {
            if prod.get(i, j) != cert.s.get(i, j) {
                return Ok(CertificateCheck::ProductMismatch { row: i + 1, col: j + 1 });
            }
        }
    }
    Ok(CertificateCheck::Verified)
}

pub fn verify_certificate<K: Field>(f: &PolyMatrix<K>, cert: &EquivCertificate<K>) -> Result<bool, MatrixError> {
    Ok(check_certificate(f, cert)?.is_verified())
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::*;

    #[test]
    fn identity_certificate() {
        let r = ring(2);
        let f = mat(&r, &[&["1", "0"], &["0", "x1"]]);
        let id = PolyMatrix::identity(&r, 2);
        let cert = EquivCertificate { u: id.clone(), v: id.clone(), s: f.clone() };
        assert!(verify_certificate(&f, &cert).unwrap());

        let bad_u = EquivCertificate { u: f.clone(), v: id.clone(), s: &f * &f };
        assert_eq!(check_certificate(&f, &bad_u).unwrap(), CertificateCheck::UNotUnimodular);

        let tampered = EquivCertificate { u: id.clone(), v: id.clone(), s: mat(&r, &[&["1", "1"], &["0", "x1"]]) };
        let res = check_certificate(&f, &tampered).unwrap();
        assert_eq!(res.to_string(), "product mismatch at (1,2)");

        let wrong_shape = EquivCertificate { u: id.clone(), v: PolyMatrix::identity(&r, 3), s: f.clone() };
        assert!(check_certificate(&f, &wrong_shape).is_err());
    }
}
