//! Unit combinations and completion of rows to unimodular matrices.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::ReduceError;
use crate::ideal::{unit_combination, Budget};
use crate::linsolve::ansatz_combination;
use crate::matrix::{determinant, rank, PolyMatrix};
use crate::poly::{Field, Monomial, Poly, Ring};

use super::{deadline_of, SearchConfig};

/// `c` with `Σ c_i * gens[i] = 1`: a bounded-degree ansatz first, then a
/// basis computation. `None` when neither finds one within budget.
pub(crate) fn unit_combo<K: Field>(gens: &[Poly<K>], degree_bound: u32, budget: &Budget) -> Option<Vec<Poly<K>>> {
    let ring = gens.first()?.ring().clone();
    if let Some(i) = gens.iter().position(|g| g.is_nonzero_constant()) {
        let mut c = vec![Poly::zero(&ring); gens.len()];
        c[i] = Poly::constant(&ring, ring.field.inv_strict(gens[i].as_constant().unwrap()));
        return Some(c);
    }
    if gens.iter().all(|g| g.is_zero()) {
        return None;
    }
    let small = gens.iter().filter_map(|g| g.total_degree()).max().unwrap_or(0) <= 4;
    if small {
        if let Some(c) = ansatz_combination(gens, &Poly::one(&ring), degree_bound) {
            return Some(c);
        }
    }
    unit_combination(gens, ring.order, budget).ok()
}

/// A random sparse polynomial of degree at most one with small coefficients.
pub(crate) fn random_small<K: Field>(ring: &Ring<K>, rng: &mut ChaCha8Rng) -> Poly<K> {
    const COEFFS: [i64; 4] = [1, -1, 2, -2];
    let c = ring.field.from_i64(COEFFS[rng.gen_range(0..COEFFS.len())]);
    let n = ring.nvars();
    if n == 0 || rng.gen_bool(0.4) {
        return Poly::constant(ring, c);
    }
    Poly::monomial(ring, Monomial::var(n, rng.gen_range(0..n), 1), c)
}

/// Signed cofactors of row `pos` once every other row is known:
/// `det = Σ x_j * cof[j]` for the row `x` placed at `pos`.
fn row_cofactors<K: Field>(others: &PolyMatrix<K>, pos: usize) -> Vec<Poly<K>> {
    let l = others.cols();
    let ring = others.ring();
    (0..l)
        .map(|j| {
            let mut m = PolyMatrix::zeros(ring, l, l);
            for i in 0..l {
                if i != pos {
                    for c in 0..l {
                        m.set(i, c, others.get(i, c).clone());
                    }
                }
            }
            m.set(pos, j, Poly::one(ring));
            determinant(&m).expect("square")
        })
        .collect()
}

pub(crate) fn complete_with<K: Field>(
    ring: &Ring<K>,
    fixed: &[(usize, Vec<Poly<K>>)],
    l: usize,
    degree_bound: u32,
    max_attempts: usize,
    rng: &mut ChaCha8Rng,
    budget: &Budget,
) -> Result<Option<PolyMatrix<K>>, ReduceError> {
    let mut seen = vec![false; l];
    for (pos, row) in fixed {
        if *pos >= l || seen[*pos] || row.len() != l {
            return Err(ReduceError::HypothesisViolated("fixed rows must have distinct positions and length l".into()));
        }
        seen[*pos] = true;
    }
    if fixed.len() >= l {
        return Err(ReduceError::HypothesisViolated("at least one row must be free".into()));
    }
    let fixed_mat = PolyMatrix::from_rows(ring, fixed.iter().map(|(_, r)| r.clone()).collect());
    if let Ok(m) = &fixed_mat {
        if rank(m) < fixed.len() {
            return Err(ReduceError::DependentRows);
        }
    }
    let free: Vec<usize> = (0..l).filter(|i| !seen[*i]).collect();
    let (last, fill) = free.split_last().unwrap();
    let mut base = PolyMatrix::zeros(ring, l, l);
    for (pos, row) in fixed {
        for (j, x) in row.iter().enumerate() {
            base.set(*pos, j, x.clone());
        }
    }
    let unit_row = |j: usize| (0..l).map(|c| if c == j { Poly::one(ring) } else { Poly::zero(ring) }).collect::<Vec<_>>();
    let mut candidates: Vec<Vec<Vec<Poly<K>>>> = Vec::new();
    if fill.is_empty() {
        candidates.push(Vec::new());
    } else {
        for combo in crate::matrix::subsets(l, fill.len()) {
            candidates.push(combo.iter().map(|&j| unit_row(j)).collect());
        }
    }
    let mut attempts = 0;
    let mut idx = 0;
    loop {
        if budget.expired() {
            return Err(ReduceError::BudgetExceeded("wall-clock limit reached".into()));
        }
        let rows = if idx < candidates.len() {
            idx += 1;
            candidates[idx - 1].clone()
        } else {
            if attempts >= max_attempts || fill.is_empty() {
                return Ok(None);
            }
            attempts += 1;
            fill.iter().map(|_| (0..l).map(|_| if rng.gen_bool(0.5) { random_small(ring, rng) } else { Poly::zero(ring) }).collect()).collect()
        };
        let mut m = base.clone();
        for (pos, row) in fill.iter().zip(&rows) {
            for (j, x) in row.iter().enumerate() {
                m.set(*pos, j, x.clone());
            }
        }
        let cof = row_cofactors(&m, *last);
        if cof.iter().all(|c| c.is_zero()) {
            continue;
        }
        if let Some(x) = unit_combo(&cof, degree_bound, budget) {
            for (j, v) in x.into_iter().enumerate() {
                m.set(*last, j, v);
            }
            debug_assert!(determinant(&m).map(|d| d.is_one()).unwrap_or(false));
            return Ok(Some(m));
        }
    }
}

/// A unimodular `l x l` matrix with the given rows at the given positions,
/// or `None` when the search gives up.
pub fn complete_unimodular<K: Field>(
    fixed: &[(usize, Vec<Poly<K>>)],
    l: usize,
    cfg: &SearchConfig,
) -> Result<Option<PolyMatrix<K>>, ReduceError> {
    use rand::SeedableRng;
    let ring = fixed
        .first()
        .and_then(|(_, r)| r.first())
        .map(|p| p.ring().clone())
        .ok_or_else(|| ReduceError::HypothesisViolated("no fixed rows".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let budget = Budget { deadline: deadline_of(cfg), ..Budget::default() };
    complete_with(&ring, fixed, l, cfg.degree_bound, cfg.max_attempts, &mut rng, &budget)
}
