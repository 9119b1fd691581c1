//! JSON problem and certificate files.

use std::fs;
use std::io::Write;
use std::path::Path;

use polysmith::matrix::{EquivCertificate, PolyMatrix};
use polysmith::{Field, ModulusP, Poly, PolyRing, Ring, TermOrder, VarSet};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `"Q"` or `{"Fp": q}` on the wire.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Q,
    Fp(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum FieldRepr {
    Name(String),
    Prime { #[serde(rename = "Fp")] fp: u64 },
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FieldSpec::Q => FieldRepr::Name("Q".into()).serialize(s),
            FieldSpec::Fp(q) => FieldRepr::Prime { fp: *q }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match FieldRepr::deserialize(d)? {
            FieldRepr::Name(n) if n == "Q" => Ok(FieldSpec::Q),
            FieldRepr::Name(n) => Err(serde::de::Error::custom(format!("unknown field '{n}', expected \"Q\" or {{\"Fp\": prime}}"))),
            FieldRepr::Prime { fp } => Ok(FieldSpec::Fp(fp)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub field: FieldSpec,
    pub matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assert_irreducible: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateMeta {
    pub seed: u64,
    /// Flags of the run that produced the certificate.
    pub config: serde_json::Value,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    #[serde(rename = "U")]
    pub u: Vec<Vec<String>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<String>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<String>>,
    pub meta: CertificateMeta,
}

/// A parsed problem over a concrete field.
pub struct Loaded<K: Field> {
    pub ring: Ring<K>,
    pub f: PolyMatrix<K>,
    pub modulus: Option<ModulusP<K>>,
}

impl ProblemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn parse_in<K: Field>(&self, field: K, order: TermOrder) -> Result<Loaded<K>, CliError> {
        let vars = VarSet::new(&self.variables)?;
        let ring = PolyRing::new(vars, field, order);
        if self.matrix.is_empty() || self.matrix[0].is_empty() {
            return Err(CliError::Parse("matrix must be nonempty".into()));
        }
        if self.matrix.iter().any(|r| r.len() != self.matrix[0].len()) {
            return Err(CliError::Parse("matrix rows have different lengths".into()));
        }
        let f = PolyMatrix::parse(&ring, &self.matrix)?;
        let modulus = match &self.p {
            None => None,
            Some(text) => {
                let m = ModulusP::new(&Poly::parse(text, &ring)?)?;
                if !m.is_certified() && self.assert_irreducible != Some(true) {
                    return Err(CliError::Hypothesis(format!(
                        "irreducibility of {} could not be certified; set \"assert_irreducible\": true to proceed",
                        m.poly()
                    )));
                }
                Some(m)
            }
        };
        Ok(Loaded { ring, f, modulus })
    }
}

impl CertificateFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn from_certificate<K: Field>(cert: &EquivCertificate<K>, meta: CertificateMeta) -> Self {
        CertificateFile { u: cert.u.to_strings(), v: cert.v.to_strings(), s: cert.s.to_strings(), meta }
    }

    pub fn parse_in<K: Field>(&self, ring: &Ring<K>) -> Result<EquivCertificate<K>, CliError> {
        let m = |rows: &Vec<Vec<String>>, name: &str| -> Result<PolyMatrix<K>, CliError> {
            if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len() || r.is_empty()) {
                return Err(CliError::Parse(format!("{name} is not a nonempty rectangular matrix")));
            }
            Ok(PolyMatrix::parse(ring, rows)?)
        };
        Ok(EquivCertificate { u: m(&self.u, "U")?, v: m(&self.v, "V")?, s: m(&self.s, "S")? })
    }
}

/// Serializes to pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use polysmith::Rationals;

    #[test]
    fn field_spec_wire_format() {
        assert_eq!(serde_json::to_string(&FieldSpec::Q).unwrap(), "\"Q\"");
        assert_eq!(serde_json::to_string(&FieldSpec::Fp(7)).unwrap(), "{\"Fp\":7}");
        assert_eq!(serde_json::from_str::<FieldSpec>("{\"Fp\": 3}").unwrap(), FieldSpec::Fp(3));
        assert!(serde_json::from_str::<FieldSpec>("\"R\"").is_err());
    }

    #[test]
    fn problem_validation() {
        let mut p: ProblemFile =
            serde_json::from_str(r#"{"variables":["x1","x2"],"field":"Q","matrix":[["x1","x2"],["0"]]}"#).unwrap();
        assert!(matches!(p.parse_in(Rationals, TermOrder::Grevlex), Err(CliError::Parse(_))));
        p.matrix = vec![vec!["x1 +".into()]];
        assert!(matches!(p.parse_in(Rationals, TermOrder::Grevlex), Err(CliError::Parse(_))));
        p.matrix = vec![vec!["x1".into()]];
        p.p = Some("x1*x2".into());
        assert!(matches!(p.parse_in(Rationals, TermOrder::Grevlex), Err(CliError::Hypothesis(_))));
    }
}
