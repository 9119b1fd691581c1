use std::cmp::Ordering;
use std::fmt;

/// Exponent vector; position `i` belongs to the `i`-th variable of the ring.
///
/// The derived `Ord` is lexicographic with the first variable most
/// significant, which is also [`TermOrder::Lex`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(nvars: usize, var: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[var] = exp;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Panics on exponent overflow.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("monomial exponent overflow"))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|a| a.checked_mul(k).expect("monomial exponent overflow"))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if self.divides(other) {
            Some(Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Monomial order. Variable priority follows the ring's declared order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum TermOrder {
    Lex,
    #[default]
    Grevlex,
}

impl TermOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::Grevlex => {
                let da = a.degree();
                let db = b.degree();
                if da != db {
                    return da.cmp(&db);
                }
                // equal degree: the rightmost differing exponent decides, smaller wins
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TermOrder::Lex => "lex",
            TermOrder::Grevlex => "grevlex",
        }
    }
}

impl std::str::FromStr for TermOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(TermOrder::Lex),
            "grevlex" => Ok(TermOrder::Grevlex),
            other => Err(format!("unknown term order '{other}'")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn grevlex_examples() {
        let o = TermOrder::Grevlex;
        // x2^2 > x1 by degree
        assert_eq!(o.cmp(&m(&[0, 2]), &m(&[1, 0])), Ordering::Greater);
        // x1*x3 < x2^2 in grevlex (x3 is the cheapest variable)
        assert_eq!(o.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
        assert_eq!(o.cmp(&m(&[1, 1, 0]), &m(&[0, 2, 0])), Ordering::Greater);
    }

    #[test]
    fn lex_examples() {
        let o = TermOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
    }

    #[test]
    fn divisibility() {
        assert!(m(&[1, 0]).divides(&m(&[2, 1])));
        assert_eq!(m(&[1, 0]).quotient_of(&m(&[2, 1])), Some(m(&[1, 1])));
        assert!(!m(&[0, 2]).divides(&m(&[2, 1])));
        assert!(m(&[2, 0]).is_coprime(&m(&[0, 3])));
    }
}
