//! The unit-pivot engine and diagonalization against a known target.

use rand::Rng;

use crate::error::ReduceError;
use crate::ideal::buchberger_with_lift;
use crate::matrix::{smith_form, verify_certificate, EquivCertificate, PolyMatrix};
use crate::poly::{Field, Poly};
use crate::residue::ModulusP;

use super::complete::{random_small, unit_combo};
use super::euclid::bar_unit_corner;
use super::work::Work;
use super::{power_of_p, AutomorphismSpec, Ctx, ReductionOutcome, SearchConfig};

const GREEDY_STEPS: usize = 40;
const THETA_EXPONENTS: [u32; 3] = [1, 2, 3];

/// Makes entry `(i, j)` a nonzero constant by adding combinations of the
/// other rows (or columns) when it is congruent to a constant modulo the
/// rest of its column (or row).
fn membership<K: Field>(w: &Work<K>, ctx: &mut Ctx<K>) -> Result<Option<Work<K>>, ReduceError> {
    let (l, m) = (w.rows(), w.cols());
    for i in 0..l {
        for j in 0..m {
            ctx.check_time()?;
            if let Some(done) = member_rows(w, i, j, ctx) {
                return Ok(Some(done));
            }
            let t = w.clone().transposed();
            if let Some(done) = member_rows(&t, j, i, ctx) {
                return Ok(Some(done.transposed()));
            }
        }
    }
    Ok(None)
}

fn member_rows<K: Field>(w: &Work<K>, i: usize, j: usize, ctx: &Ctx<K>) -> Option<Work<K>> {
    let ring = w.m.ring();
    let others: Vec<usize> = (0..w.rows()).filter(|&t| t != i).collect();
    let gens: Vec<Poly<K>> = others.iter().map(|&t| w.m.get(t, j).clone()).collect();
    if gens.iter().all(|g| g.is_zero()) {
        return None;
    }
    let entry = w.m.get(i, j);
    let gb = buchberger_with_lift(&gens, ring.order, &ctx.budget()).ok()?;
    let coeffs = if gb.is_unit() {
        let (rem, c) = gb.lift(&(&Poly::one(ring) - entry));
        debug_assert!(rem.is_zero());
        c
    } else {
        let (rem, c) = gb.lift(entry);
        if !rem.is_nonzero_constant() {
            return None;
        }
        c.iter().map(|x| x.neg()).collect()
    };
    let mut out = w.clone();
    for (&t, c) in others.iter().zip(&coeffs) {
        out.row_add(i, t, c);
    }
    debug_assert!(out.m.get(i, j).is_nonzero_constant());
    out.bring_to_corner(i, j);
    Some(out)
}

/// Unit mod `p` in the corner by lifted Euclidean steps, then a two-column
/// exchange with a partner entry comaximal to the corner.
fn bar_pivot<K: Field>(w: &Work<K>, ctx: &mut Ctx<K>) -> Result<Option<Work<K>>, ReduceError> {
    let mut w = w.clone();
    if !bar_unit_corner(&mut w, &ctx.bar) {
        return Ok(None);
    }
    let bar = ctx.bar.clone();
    let eps = bar.bar(w.m.get(0, 0));
    let k = bar.target().field.clone();
    let inv = Poly::constant(bar.target(), k.inv_strict(eps.as_constant().unwrap()));
    for j in 1..w.cols() {
        let q = &bar.bar(w.m.get(0, j)) * &inv;
        w.col_add(j, 0, &bar.lift(&q).neg());
    }
    if w.m.get(0, 0).is_nonzero_constant() {
        w.bring_to_corner(0, 0);
        return Ok(Some(w));
    }
    for j in 1..w.cols() {
        ctx.check_time()?;
        if let Some(done) = exchange(&w, j, None, ctx) {
            return Ok(Some(done));
        }
    }
    if w.cols() >= 3 {
        let ring = w.m.ring().clone();
        let mut shifts = vec![Poly::one(&ring), Poly::from_i64(&ring, -1)];
        shifts.extend((0..ring.nvars()).map(|v| Poly::var(&ring, v)));
        for j in 1..w.cols() {
            for j2 in (1..w.cols()).filter(|&x| x != j) {
                for t in &shifts {
                    ctx.check_time()?;
                    if let Some(done) = exchange(&w, j, Some((j2, t)), ctx) {
                        return Ok(Some(done));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn exchange<K: Field>(w: &Work<K>, j: usize, shift: Option<(usize, &Poly<K>)>, ctx: &Ctx<K>) -> Option<Work<K>> {
    let mut w = w.clone();
    if let Some((j2, t)) = shift {
        w.col_add(j, j2, t);
    }
    let a = w.m.get(0, 0).clone();
    let b = w.m.get(0, j).clone();
    if b.is_zero() {
        return None;
    }
    let c = unit_combo(&[a.clone(), b.clone()], ctx.cfg.degree_bound, &ctx.budget())?;
    w.mix_cols(0, j, &c[0], &c[1], &b.neg(), &a);
    debug_assert!(w.m.get(0, 0).is_one());
    Some(w)
}

/// Greedy elementary reduction of the total size, stopping at a constant.
fn greedy<K: Field>(w: &Work<K>, ctx: &mut Ctx<K>) -> Result<Option<Work<K>>, ReduceError> {
    let mut w = w.clone();
    for _ in 0..GREEDY_STEPS {
        ctx.check_time()?;
        if let Some((i, j)) = w.constant_entry() {
            w.bring_to_corner(i, j);
            return Ok(Some(w));
        }
        let mut best: Option<(bool, usize, usize, Poly<K>)> = None;
        let mut best_weight = w.m.weight();
        for by_rows in [true, false] {
            let mat = if by_rows { w.m.clone() } else { w.m.transpose() };
            for t in 0..mat.rows() {
                for s in (0..mat.rows()).filter(|&s| s != t) {
                    for c in 0..mat.cols() {
                        let (a, d) = (mat.get(t, c), mat.get(s, c));
                        if a.is_zero() || d.is_zero() {
                            continue;
                        }
                        let Ok((q, _)) = a.div_rem(d) else { continue };
                        if q.is_zero() {
                            continue;
                        }
                        let mut trial = mat.clone();
                        trial.add_row_multiple(t, s, &q.neg());
                        let wt = trial.weight();
                        if wt < best_weight {
                            best_weight = wt;
                            best = Some((by_rows, t, s, q));
                        }
                    }
                }
            }
        }
        match best {
            Some((true, t, s, q)) => w.row_add(t, s, &q.neg()),
            Some((false, t, s, q)) => w.col_add(t, s, &q.neg()),
            None => return Ok(None),
        }
    }
    Ok(None)
}

/// The deterministic strategies, cheapest first.
fn basic_strategies<K: Field>(w: &Work<K>, ctx: &mut Ctx<K>) -> Result<Option<Work<K>>, ReduceError> {
    if let Some((i, j)) = w.constant_entry() {
        let mut w = w.clone();
        w.bring_to_corner(i, j);
        return Ok(Some(w));
    }
    if let Some(done) = bar_pivot(w, ctx)? {
        return Ok(Some(done));
    }
    if let Some(done) = bar_pivot(&w.clone().transposed(), ctx)? {
        return Ok(Some(done.transposed()));
    }
    if let Some(done) = membership(w, ctx)? {
        return Ok(Some(done));
    }
    if let Some(g) = greedy(w, ctx)? {
        return Ok(Some(g));
    }
    Ok(None)
}

/// Unimodular `u`, `v` (in the returned work) with `(u * b * v)[0][0] = 1`.
pub(crate) fn find_pivot<K: Field>(b: &PolyMatrix<K>, ctx: &mut Ctx<K>) -> Result<Option<Work<K>>, ReduceError> {
    let w = Work::new(b);
    if let Some(done) = basic_strategies(&w, ctx)? {
        return Ok(Some(done));
    }
    let n = b.ring().nvars();
    if n >= 3 {
        for r in THETA_EXPONENTS {
            let theta = AutomorphismSpec::uniform(n, r);
            let moved = theta.apply(b)?;
            if let Some(done) = basic_strategies(&Work::new(&moved), ctx)? {
                let mut back = Work { m: theta.apply_inverse(&done.m)?, u: theta.apply_inverse(&done.u)?, v: theta.apply_inverse(&done.v)? };
                back.m = &(&back.u * b) * &back.v;
                ctx.note(format!("pivot found after automorphism r = {r}"));
                return Ok(Some(back));
            }
        }
    }
    let ring = b.ring().clone();
    for _ in 0..ctx.cfg.max_attempts {
        ctx.check_time()?;
        let mut trial = w.clone();
        let steps = ctx.rng.gen_range(1..=2);
        for _ in 0..steps {
            let q = random_small(&ring, &mut ctx.rng);
            if ctx.rng.gen_bool(0.5) && trial.rows() >= 2 {
                let t = ctx.rng.gen_range(0..trial.rows());
                let s = (t + ctx.rng.gen_range(1..trial.rows())) % trial.rows();
                trial.row_add(t, s, &q);
            } else if trial.cols() >= 2 {
                let t = ctx.rng.gen_range(0..trial.cols());
                let s = (t + ctx.rng.gen_range(1..trial.cols())) % trial.cols();
                trial.col_add(t, s, &q);
            }
        }
        if let Some(done) = bar_pivot(&trial, ctx)? {
            return Ok(Some(done));
        }
        if let Some(done) = membership(&trial, ctx)? {
            return Ok(Some(done));
        }
    }
    Ok(None)
}

/// Exponents of the diagonal of `s` as powers of `p`; zero entries end the rank.
pub(crate) fn target_exponents<K: Field>(s: &PolyMatrix<K>, modulus: &ModulusP<K>) -> Result<Vec<u32>, ReduceError> {
    let mut out = Vec::new();
    for i in 0..s.rows().min(s.cols()) {
        let d = s.get(i, i);
        if d.is_zero() {
            break;
        }
        out.push(power_of_p(d, modulus).ok_or_else(|| {
            ReduceError::HypothesisViolated(format!("target entry {d} is not a power of {}", modulus.poly()))
        })?);
    }
    let diag = PolyMatrix::diagonal(s.ring(), s.rows(), s.cols(), &out.iter().map(|&e| modulus.power(e)).collect::<Vec<_>>());
    if &diag != s || out.windows(2).any(|w| w[0] > w[1]) {
        return Err(ReduceError::HypothesisViolated("target is not a Smith diagonal".into()));
    }
    Ok(out)
}

/// Pivot-by-pivot reduction of `f` to `diag(p^e_1, ..., p^e_r)`, pushing
/// every intermediate matrix onto `trace`.
pub(crate) fn diagonalize<K: Field>(
    f: &PolyMatrix<K>,
    exps: &[u32],
    ctx: &mut Ctx<K>,
    trace: &mut Vec<PolyMatrix<K>>,
) -> Result<Option<EquivCertificate<K>>, ReduceError> {
    let (l, m) = f.shape();
    let ring = f.ring().clone();
    let mut w = Work::new(f);
    for (pos, &e) in exps.iter().enumerate() {
        ctx.check_time()?;
        let pe = ctx.modulus.power(e);
        let rows: Vec<usize> = (pos..l).collect();
        let cols: Vec<usize> = (pos..m).collect();
        let block = w
            .m
            .submatrix(&rows, &cols)
            .exact_div(&pe)
            .map_err(|_| ReduceError::HypothesisViolated("Smith mismatch: block not divisible by expected power".into()))?;
        let Some(local) = find_pivot(&block, ctx)? else {
            ctx.note(format!("no unit pivot found at position {}", pos + 1));
            return Ok(None);
        };
        w.left_mul(&local.u.embed(l));
        w.right_mul(&local.v.embed(m));
        debug_assert_eq!(w.m.get(pos, pos), &pe);
        for i in pos + 1..l {
            let q = w.m.get(i, pos).exact_div(&pe)?;
            w.row_add(i, pos, &q.neg());
        }
        for j in pos + 1..m {
            let q = w.m.get(pos, j).exact_div(&pe)?;
            w.col_add(j, pos, &q.neg());
        }
        trace.push(w.m.clone());
    }
    let target = PolyMatrix::diagonal(&ring, l, m, &exps.iter().map(|&e| ctx.modulus.power(e)).collect::<Vec<_>>());
    if w.m != target {
        return Err(ReduceError::HypothesisViolated("Smith mismatch: residual block is not zero".into()));
    }
    let cert = EquivCertificate { u: w.u, v: w.v, s: target };
    Ok(verify_certificate(f, &cert)?.then_some(cert))
}

/// Searches for `U`, `V` with `U * F * V = S` for the given Smith target.
pub fn attempt_diagonalize<K: Field>(
    f: &PolyMatrix<K>,
    s: &PolyMatrix<K>,
    modulus: &ModulusP<K>,
    cfg: &SearchConfig,
) -> Result<ReductionOutcome<K>, ReduceError> {
    cfg.validate()?;
    if f.shape() != s.shape() {
        return Err(ReduceError::HypothesisViolated("target shape differs".into()));
    }
    let exps = target_exponents(s, modulus)?;
    let data = smith_form(f, Some(modulus))?;
    if data.exponents.as_deref() != Some(&exps[..]) {
        return Err(ReduceError::HypothesisViolated("Smith mismatch".into()));
    }
    let mut ctx = Ctx::new(modulus, cfg);
    let mut trace = Vec::new();
    match diagonalize(f, &exps, &mut ctx, &mut trace) {
        Ok(Some(cert)) => Ok(ReductionOutcome::Certified(cert)),
        Ok(None) => Ok(ReductionOutcome::unknown("pivot", ctx.notes)),
        Err(e) if e.is_budget() => Ok(ReductionOutcome::unknown("pivot", vec![e.to_string()])),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::test_util::*;

    #[test]
    fn elementary_example() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        let f = mat(&r, &[&["1", "0"], &["x1", "x1"]]);
        let s = mat(&r, &[&["1", "0"], &["0", "x1"]]);
        let out = attempt_diagonalize(&f, &s, &m, &SearchConfig::default()).unwrap();
        assert!(verify_certificate(&f, out.certificate().unwrap()).unwrap());
    }

    #[test]
    fn scrambled_diag() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        // [[1, x2],[0, 1]] * diag(1, x1) * [[1, 0],[x2 + 1, 1]]
        let u0 = mat(&r, &[&["1", "x2"], &["0", "1"]]);
        let v0 = mat(&r, &[&["1", "0"], &["x2 + 1", "1"]]);
        let s = mat(&r, &[&["1", "0"], &["0", "x1"]]);
        let f = &(&u0 * &s) * &v0;
        let out = attempt_diagonalize(&f, &s, &m, &SearchConfig::default()).unwrap();
        assert!(out.is_certified());
        let wrong = mat(&r, &[&["1", "0"], &["0", "x1^2"]]);
        assert!(attempt_diagonalize(&f, &wrong, &m, &SearchConfig::default()).is_err());
    }

    #[test]
    fn target_must_be_smith_diagonal() {
        let r = ring(2);
        let m = ModulusP::new(&p(&r, "x1")).unwrap();
        assert_eq!(target_exponents(&mat(&r, &[&["1", "0"], &["0", "x1^2"]]), &m).unwrap(), vec![0, 2]);
        assert!(target_exponents(&mat(&r, &[&["x1", "0"], &["0", "1"]]), &m).is_err());
        assert!(target_exponents(&mat(&r, &[&["1", "x1"], &["0", "1"]]), &m).is_err());
        assert_eq!(target_exponents(&mat(&r, &[&["x1", "0", "0"], &["0", "0", "0"]]), &m).unwrap(), vec![1]);
    }
}
