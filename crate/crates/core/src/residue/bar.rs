use std::collections::BTreeMap;

use crate::matrix::{kernel_vectors, rank, PolyMatrix, Side};
use crate::poly::{Field, Monomial, Poly, PolyRing, Ring, VarSet};

use super::field::ResidueField;
use super::modulus::ModulusP;

/// A polynomial over the residue field in `x2, ..., xn`.
pub type BarPoly<K> = Poly<ResidueField<K>>;

/// Reduction `A -> Ā` that kills `p`, with canonical lifting back.
#[derive(Clone, Debug)]
pub struct BarMap<K: Field> {
    source: Ring<K>,
    target: Ring<ResidueField<K>>,
    modulus: ModulusP<K>,
}

impl<K: Field> BarMap<K> {
    pub fn new(source: &Ring<K>, modulus: &ModulusP<K>) -> Self {
        let names = source.vars.names()[1..].to_vec();
        let target = PolyRing::new(VarSet::new_unchecked(names), modulus.residue_field().clone(), source.order);
        BarMap { source: source.clone(), target, modulus: modulus.clone() }
    }

    pub fn source(&self) -> &Ring<K> {
        &self.source
    }

    pub fn target(&self) -> &Ring<ResidueField<K>> {
        &self.target
    }

    pub fn modulus(&self) -> &ModulusP<K> {
        &self.modulus
    }

    pub fn bar(&self, f: &Poly<K>) -> BarPoly<K> {
        let k = &self.source.field;
        let mut collected: BTreeMap<Monomial, Vec<K::Elem>> = BTreeMap::new();
        for (m, c) in f.terms() {
            let e = m.exponents();
            let rest = Monomial::from_exponents(e[1..].to_vec());
            let slot = collected.entry(rest).or_default();
            let d = e[0] as usize;
            if slot.len() <= d {
                slot.resize(d + 1, k.zero());
            }
            slot[d] = k.add(&slot[d], c);
        }
        let rf = self.modulus.residue_field();
        Poly::from_terms(&self.target, collected.into_iter().map(|(m, v)| (m, rf.reduce(&v))))
    }

    /// Canonical lift: every coefficient has degree below `deg p` in `x1`.
    pub fn lift(&self, g: &BarPoly<K>) -> Poly<K> {
        let mut terms = Vec::new();
        for (m, rep) in g.terms() {
            for (i, c) in rep.iter().enumerate() {
                let mut e = Vec::with_capacity(m.nvars() + 1);
                e.push(i as u32);
                e.extend_from_slice(m.exponents());
                terms.push((Monomial::from_exponents(e), c.clone()));
            }
        }
        Poly::from_terms(&self.source, terms)
    }

    pub fn bar_matrix(&self, f: &PolyMatrix<K>) -> PolyMatrix<ResidueField<K>> {
        let rows = (0..f.rows()).map(|i| (0..f.cols()).map(|j| self.bar(f.get(i, j))).collect()).collect();
        PolyMatrix::from_rows(&self.target, rows).expect("shape preserved")
    }

    pub fn lift_matrix(&self, g: &PolyMatrix<ResidueField<K>>) -> PolyMatrix<K> {
        let rows = (0..g.rows()).map(|i| (0..g.cols()).map(|j| self.lift(g.get(i, j))).collect()).collect();
        PolyMatrix::from_rows(&self.source, rows).expect("shape preserved")
    }

    /// Rank of the reduced matrix over the fraction field of `Ā`.
    pub fn bar_rank(&self, f: &PolyMatrix<K>) -> usize {
        rank(&self.bar_matrix(f))
    }

    /// Kernel of the reduced matrix, lifted to `A`.
    pub fn lifted_kernel(&self, f: &PolyMatrix<K>, side: Side) -> Vec<Vec<Poly<K>>> {
        kernel_vectors(&self.bar_matrix(f), side)
            .iter()
            .map(|v| v.iter().map(|x| self.lift(x)).collect())
            .collect()
    }
}
