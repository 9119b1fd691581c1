//! Buchberger's algorithm with cofactor tracking.
//!
//! Every basis element carries its expression as a combination of the
//! original generators, so a basis `{1}` yields an explicit unit certificate.

mod lp;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use crate::error::IdealError;
use crate::error::PolyError;
use crate::poly::{same_ring, Field, Monomial, Poly, Ring, TermOrder};

pub(crate) use lp::Lp;

pub const DEFAULT_MAX_PAIRS: usize = 100_000;

/// Resource cap for basis computations.
#[derive(Clone, Debug)]
pub struct Budget {
    pub max_pairs: usize,
    pub deadline: Option<Instant>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pairs: DEFAULT_MAX_PAIRS, deadline: None }
    }
}

impl Budget {
    pub fn with_time(ms: u64) -> Self {
        Budget { max_pairs: DEFAULT_MAX_PAIRS, deadline: Some(Instant::now() + Duration::from_millis(ms)) }
    }

    pub fn unlimited() -> Self {
        Budget { max_pairs: usize::MAX, deadline: None }
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn check(&self, pairs: usize) -> Result<(), IdealError> {
        if pairs > self.max_pairs {
            return Err(IdealError::BudgetExceeded(format!("more than {} S-pair reductions", self.max_pairs)));
        }
        if self.expired() {
            return Err(IdealError::BudgetExceeded("wall-clock limit reached".into()));
        }
        Ok(())
    }
}

/// A reduced Gröbner basis with cofactors:
/// `basis[k] = Σ_j cofactors[k][j] * generators[j]`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<K: Field> {
    ring: Ring<K>,
    generators: Vec<Poly<K>>,
    basis: Vec<Poly<K>>,
    order: TermOrder,
    cofactors: Vec<Vec<Poly<K>>>,
}

impl<K: Field> GroebnerBasis<K> {
    pub fn generators(&self) -> &[Poly<K>] {
        &self.generators
    }

    pub fn basis(&self) -> &[Poly<K>] {
        &self.basis
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn cofactors(&self) -> &[Vec<Poly<K>>] {
        &self.cofactors
    }

    pub fn ring(&self) -> &Ring<K> {
        &self.ring
    }

    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_one()
    }

    pub fn contains(&self, f: &Poly<K>) -> bool {
        normal_form(f, self).is_zero()
    }

    /// Remainder `r` of `f` and coefficients `c` with `f - r = Σ c_j * generators[j]`.
    pub fn lift(&self, f: &Poly<K>) -> (Poly<K>, Vec<Poly<K>>) {
        let k = &self.ring.field;
        let elems: Vec<Elem<K>> = self
            .basis
            .iter()
            .zip(&self.cofactors)
            .map(|(b, c)| Elem {
                poly: Lp::from_poly(b, self.order),
                cof: c.iter().map(|x| Lp::from_poly(x, self.order)).collect(),
                alive: true,
            })
            .collect();
        let start = vec![Lp::zero(); self.generators.len()];
        let (r, cof) = reduce(k, self.order, Lp::from_poly(f, self.order), Some(start), &elems, None, &Budget::unlimited())
            .expect("unlimited budget");
        let coeffs = cof.unwrap().iter().map(|c| c.to_poly(&self.ring).neg()).collect();
        (r.to_poly(&self.ring), coeffs)
    }

    /// True when every cofactor row reproduces its basis element exactly.
    pub fn cofactor_identities_hold(&self) -> bool {
        self.basis.iter().zip(&self.cofactors).all(|(b, row)| {
            let sum = row
                .iter()
                .zip(&self.generators)
                .fold(Poly::zero(&self.ring), |acc, (c, g)| &acc + &(c * g));
            &sum == b
        })
    }

    /// True when all S-polynomials of basis pairs reduce to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        let k = &self.ring.field;
        let lps: Vec<Lp<K>> = self.basis.iter().map(|b| Lp::from_poly(b, self.order)).collect();
        let elems: Vec<Elem<K>> = lps.iter().map(|l| Elem { poly: l.clone(), cof: Vec::new(), alive: true }).collect();
        for i in 0..lps.len() {
            for j in i + 1..lps.len() {
                let s = s_poly(k, self.order, &elems[i], &elems[j], false);
                let (r, _) = reduce(k, self.order, s.poly, None, &elems, None, &Budget::unlimited())
                    .expect("unlimited budget");
                if !r.is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

struct Elem<K: Field> {
    poly: Lp<K>,
    cof: Vec<Lp<K>>,
    alive: bool,
}

struct SPoly<K: Field> {
    poly: Lp<K>,
    cof: Vec<Lp<K>>,
}

fn lead_of<K: Field>(e: &Elem<K>) -> &(Monomial, K::Elem) {
    e.poly.lead().expect("basis elements are nonzero")
}

fn s_poly<K: Field>(k: &K, order: TermOrder, a: &Elem<K>, b: &Elem<K>, with_cof: bool) -> SPoly<K> {
    let (ma, ca) = lead_of(a);
    let (mb, cb) = lead_of(b);
    let l = ma.lcm(mb);
    let qa = ma.quotient_of(&l).unwrap();
    let qb = mb.quotient_of(&l).unwrap();
    let fa = k.neg(&k.inv_strict(ca));
    let fb = k.inv_strict(cb);
    let poly = Lp::zero().sub_mul_term(k, order, &a.poly, &qa, &fa).sub_mul_term(k, order, &b.poly, &qb, &fb);
    let cof = if with_cof {
        a.cof
            .iter()
            .zip(&b.cof)
            .map(|(x, y)| Lp::zero().sub_mul_term(k, order, x, &qa, &fa).sub_mul_term(k, order, y, &qb, &fb))
            .collect()
    } else {
        Vec::new()
    };
    SPoly { poly, cof }
}

/// Full reduction of `f` by the live elements. With `cof`, cofactors are
/// updated alongside. `skip` excludes one element (used in interreduction).
fn reduce<K: Field>(
    k: &K,
    order: TermOrder,
    f: Lp<K>,
    mut cof: Option<Vec<Lp<K>>>,
    basis: &[Elem<K>],
    skip: Option<usize>,
    budget: &Budget,
) -> Result<(Lp<K>, Option<Vec<Lp<K>>>), IdealError> {
    let mut rem: Vec<(Monomial, K::Elem)> = Vec::new();
    let mut cur = f;
    let mut steps = 0usize;
    while let Some((m, c)) = cur.lead().cloned() {
        steps += 1;
        if steps.is_multiple_of(512) && budget.expired() {
            return Err(IdealError::BudgetExceeded("wall-clock limit reached".into()));
        }
        let div = basis
            .iter()
            .enumerate()
            .find(|(i, e)| e.alive && Some(*i) != skip && lead_of(e).0.divides(&m));
        match div {
            Some((_, e)) => {
                let (em, ec) = lead_of(e);
                let q = em.quotient_of(&m).unwrap();
                let factor = k.mul(&c, &k.inv_strict(ec));
                cur = cur.sub_mul_term(k, order, &e.poly, &q, &factor);
                if let Some(cv) = cof.as_mut() {
                    for (x, y) in cv.iter_mut().zip(&e.cof) {
                        *x = x.sub_mul_term(k, order, y, &q, &factor);
                    }
                }
            }
            None => {
                rem.push(cur.terms.remove(0));
            }
        }
    }
    Ok((Lp { terms: rem }, cof))
}

fn make_monic<K: Field>(k: &K, poly: &mut Lp<K>, cof: &mut [Lp<K>]) {
    let lc = poly.lead().unwrap().1.clone();
    if k.is_one(&lc) {
        return;
    }
    let inv = k.inv_strict(&lc);
    poly.scale(k, &inv);
    for c in cof {
        c.scale(k, &inv);
    }
}

fn check_gens<K: Field>(gens: &[Poly<K>]) -> Result<Ring<K>, IdealError> {
    let first = gens.first().ok_or(IdealError::NoGenerators)?;
    if gens.iter().any(|g| !same_ring(g.ring(), first.ring())) {
        return Err(IdealError::Poly(PolyError::MixedContext));
    }
    Ok(first.ring().clone())
}

/// Reduced Gröbner basis of `gens` under `order`, with cofactors.
pub fn buchberger_with_lift<K: Field>(
    gens: &[Poly<K>],
    order: TermOrder,
    budget: &Budget,
) -> Result<GroebnerBasis<K>, IdealError> {
    let ring = check_gens(gens)?;
    let k = ring.field.clone();
    let n = ring.nvars();
    let ng = gens.len();
    let unit_vec = |j: usize| -> Vec<Lp<K>> {
        (0..ng).map(|i| if i == j { Lp::constant(k.one(), n) } else { Lp::zero() }).collect()
    };
    let finish = |basis: Vec<Lp<K>>, cofs: Vec<Vec<Lp<K>>>| GroebnerBasis {
        ring: ring.clone(),
        generators: gens.to_vec(),
        basis: basis.iter().map(|b| b.to_poly(&ring)).collect(),
        order,
        cofactors: cofs.iter().map(|row| row.iter().map(|c| c.to_poly(&ring)).collect()).collect(),
    };

    // a constant generator settles the question at once
    if let Some((j, g)) = gens.iter().enumerate().find(|(_, g)| g.is_nonzero_constant()) {
        let inv = k.inv_strict(g.as_constant().unwrap());
        let mut cof = unit_vec(j);
        cof[j].scale(&k, &inv);
        return Ok(finish(vec![Lp::constant(k.one(), n)], vec![cof]));
    }

    let mut elems: Vec<Elem<K>> = Vec::new();
    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let add = |elems: &mut Vec<Elem<K>>,
               pairs: &mut Vec<(usize, usize, Monomial)>,
               pending: &mut HashSet<(usize, usize)>,
               e: Elem<K>| {
        let t = elems.len();
        for (i, other) in elems.iter().enumerate() {
            let l = lead_of(other).0.lcm(&lead_of(&e).0);
            pairs.push((i, t, l));
            pending.insert((i, t));
        }
        elems.push(e);
    };

    for (j, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut poly = Lp::from_poly(g, order);
        let mut cof = unit_vec(j);
        make_monic(&k, &mut poly, &mut cof);
        add(&mut elems, &mut pairs, &mut pending, Elem { poly, cof, alive: true });
    }

    let mut processed = 0usize;
    while !pairs.is_empty() {
        // normal strategy: smallest lcm, ties by index
        let idx = (0..pairs.len())
            .min_by(|&a, &b| {
                order.cmp(&pairs[a].2, &pairs[b].2).then((pairs[a].0, pairs[a].1).cmp(&(pairs[b].0, pairs[b].1)))
            })
            .unwrap();
        let (i, j, l) = pairs.swap_remove(idx);
        pending.remove(&(i, j));
        let (mi, mj) = (&lead_of(&elems[i]).0, &lead_of(&elems[j]).0);
        if mi.is_coprime(mj) {
            continue;
        }
        let chain = (0..elems.len()).any(|t| {
            t != i
                && t != j
                && lead_of(&elems[t]).0.divides(&l)
                && !pending.contains(&(i.min(t), i.max(t)))
                && !pending.contains(&(j.min(t), j.max(t)))
        });
        if chain {
            continue;
        }
        processed += 1;
        budget.check(processed)?;
        let s = s_poly(&k, order, &elems[i], &elems[j], true);
        let (mut h, cof) = reduce(&k, order, s.poly, Some(s.cof), &elems, None, budget)?;
        if h.is_zero() {
            continue;
        }
        let mut cof = cof.unwrap();
        make_monic(&k, &mut h, &mut cof);
        if h.lead().unwrap().0.is_one() {
            return Ok(finish(vec![h], vec![cof]));
        }
        add(&mut elems, &mut pairs, &mut pending, Elem { poly: h, cof, alive: true });
    }

    // minimize: drop elements whose leading monomial is a multiple of another's
    for a in 0..elems.len() {
        let ma = lead_of(&elems[a]).0.clone();
        let redundant = (0..elems.len()).any(|b| {
            if b == a || !elems[b].alive {
                return false;
            }
            let mb = &lead_of(&elems[b]).0;
            mb.divides(&ma) && (mb != &ma || b < a)
        });
        if redundant {
            elems[a].alive = false;
        }
    }
    // interreduce tails
    for a in 0..elems.len() {
        if !elems[a].alive {
            continue;
        }
        let poly = elems[a].poly.clone();
        let cof = elems[a].cof.clone();
        let (mut h, cof) = reduce(&k, order, poly, Some(cof), &elems, Some(a), budget)?;
        let mut cof = cof.unwrap();
        make_monic(&k, &mut h, &mut cof);
        elems[a].poly = h;
        elems[a].cof = cof;
    }
    let mut live: Vec<Elem<K>> = elems.into_iter().filter(|e| e.alive).collect();
    live.sort_by(|a, b| order.cmp(&lead_of(a).0, &lead_of(b).0));
    let (basis, cofs): (Vec<_>, Vec<_>) = live.into_iter().map(|e| (e.poly, e.cof)).unzip();
    Ok(finish(basis, cofs))
}

/// Remainder of `f` on division by the basis.
pub fn normal_form<K: Field>(f: &Poly<K>, gb: &GroebnerBasis<K>) -> Poly<K> {
    let k = &gb.ring.field;
    let elems: Vec<Elem<K>> = gb
        .basis
        .iter()
        .map(|b| Elem { poly: Lp::from_poly(b, gb.order), cof: Vec::new(), alive: true })
        .collect();
    let (r, _) = reduce(k, gb.order, Lp::from_poly(f, gb.order), None, &elems, None, &Budget::unlimited())
        .expect("unlimited budget");
    r.to_poly(&gb.ring)
}

pub fn is_unit_ideal<K: Field>(gens: &[Poly<K>], order: TermOrder, budget: &Budget) -> Result<bool, IdealError> {
    check_gens(gens)?;
    if gens.iter().any(|g| g.is_nonzero_constant()) {
        return Ok(true);
    }
    if gens.iter().all(|g| g.is_zero()) {
        return Ok(false);
    }
    Ok(buchberger_with_lift(gens, order, budget)?.is_unit())
}

/// Coefficients `c` with `Σ c_i * gens[i] = 1`.
pub fn unit_combination<K: Field>(
    gens: &[Poly<K>],
    order: TermOrder,
    budget: &Budget,
) -> Result<Vec<Poly<K>>, IdealError> {
    let gb = buchberger_with_lift(gens, order, budget)?;
    if !gb.is_unit() {
        return Err(IdealError::NotUnitIdeal);
    }
    Ok(gb.cofactors[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{PolyRing, PrimeField, Rationals, VarSet};

    fn ring(n: usize) -> Ring<Rationals> {
        PolyRing::new(VarSet::standard(n), Rationals, TermOrder::Grevlex)
    }

    fn ps(r: &Ring<Rationals>, xs: &[&str]) -> Vec<Poly<Rationals>> {
        xs.iter().map(|s| Poly::parse(s, r).unwrap()).collect()
    }

    fn combo(c: &[Poly<Rationals>], g: &[Poly<Rationals>]) -> Poly<Rationals> {
        c.iter().zip(g).fold(Poly::zero(g[0].ring()), |a, (x, y)| &a + &(x * y))
    }

    #[test]
    fn trivial_bases() {
        let r = ring(2);
        let gb = buchberger_with_lift(&ps(&r, &["x1"]), TermOrder::Grevlex, &Budget::default()).unwrap();
        assert_eq!(gb.basis(), &ps(&r, &["x1"])[..]);
        assert_eq!(gb.cofactors(), &[ps(&r, &["1"])]);
        let gb = buchberger_with_lift(&ps(&r, &["x1", "x2"]), TermOrder::Lex, &Budget::default()).unwrap();
        assert_eq!(gb.basis().len(), 2);
        assert!(gb.contains(&ps(&r, &["x1*x2 + x2^3"])[0]));
        assert_eq!(normal_form(&ps(&r, &["x1^2 + 1"])[0], &gb), ps(&r, &["1"])[0]);
    }

    #[test]
    fn unit_ideal_with_cofactors() {
        let r = ring(2);
        let g = ps(&r, &["x1*x2 - 1", "x1^2"]);
        let gb = buchberger_with_lift(&g, TermOrder::Grevlex, &Budget::default()).unwrap();
        assert!(gb.is_unit());
        assert!(gb.cofactor_identities_hold());
        assert!(combo(&gb.cofactors()[0], &g).is_one());
    }

    #[test]
    fn lift_expresses_membership() {
        let r = ring(2);
        let g = ps(&r, &["x1^2 - x2", "x1*x2 - 1"]);
        let gb = buchberger_with_lift(&g, TermOrder::Grevlex, &Budget::default()).unwrap();
        for s in ["x1^3*x2 + x2^2", "x1 + x2^3 - 7"] {
            let f = ps(&r, &[s])[0].clone();
            let (rem, c) = gb.lift(&f);
            assert_eq!(rem, normal_form(&f, &gb));
            assert_eq!(&f - &rem, combo(&c, &g));
        }
    }

    #[test]
    fn unit_tests() {
        let r = ring(2);
        let b = Budget::default();
        assert!(is_unit_ideal(&ps(&r, &["x1", "x1 + 1"]), TermOrder::Grevlex, &b).unwrap());
        assert!(!is_unit_ideal(&ps(&r, &["x1", "x2"]), TermOrder::Grevlex, &b).unwrap());
        assert!(is_unit_ideal(&ps(&r, &["1"]), TermOrder::Grevlex, &b).unwrap());
        let g = ps(&r, &["x2", "x1*x2 + 1"]);
        let c = unit_combination(&g, TermOrder::Grevlex, &b).unwrap();
        assert!(combo(&c, &g).is_one());
        assert_eq!(unit_combination(&ps(&r, &["x1", "x2"]), TermOrder::Grevlex, &b), Err(IdealError::NotUnitIdeal));
        assert_eq!(is_unit_ideal::<Rationals>(&[], TermOrder::Grevlex, &b), Err(IdealError::NoGenerators));
    }

    #[test]
    fn reduced_basis_properties() {
        let r = ring(3);
        let g = ps(&r, &["x1^2 + x2*x3", "x1*x2 - x3^2", "x2^2 - x1"]);
        for order in [TermOrder::Grevlex, TermOrder::Lex] {
            let gb = buchberger_with_lift(&g, order, &Budget::default()).unwrap();
            assert!(gb.s_pairs_reduce_to_zero());
            assert!(gb.cofactor_identities_hold());
            for x in &g {
                assert!(gb.contains(x));
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let r = ring(3);
        let g = ps(&r, &["x1^3 + x2*x3 - 1", "x1*x2^2 - x3^3 + x1", "x2^3 - x1*x3 + x2"]);
        let tiny = Budget { max_pairs: 1, deadline: None };
        assert!(matches!(buchberger_with_lift(&g, TermOrder::Grevlex, &tiny), Err(IdealError::BudgetExceeded(_))));
    }

    #[test]
    fn prime_field_basis() {
        let r = PolyRing::new(VarSet::standard(2), PrimeField::new(5).unwrap(), TermOrder::Grevlex);
        let g: Vec<_> = ["x1*x2 - 1", "x2^2 - x1"].iter().map(|s| Poly::parse(s, &r).unwrap()).collect();
        let gb = buchberger_with_lift(&g, TermOrder::Grevlex, &Budget::default()).unwrap();
        assert!(gb.s_pairs_reduce_to_zero());
        assert!(gb.cofactor_identities_hold());
    }
}
