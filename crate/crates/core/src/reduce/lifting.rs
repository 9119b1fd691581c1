//! Left-factor extraction, the level-by-level lifting loop, and the
//! rectangular case.

use crate::error::ReduceError;
use crate::ideal::{is_unit_ideal, Budget};
use crate::matrix::{
    determinant, inverse_unimodular, kernel_vectors, rank, reduced_minors, smith_form, subsets, verify_certificate,
    EquivCertificate, PolyMatrix, Side,
};
use crate::poly::{Field, Poly};
use crate::residue::ModulusP;

use super::complete::complete_with;
use super::euclid::bar_row_echelon;
use super::pivot::diagonalize;
use super::work::Work;
use super::{check_hypothesis, condition_bases, Ctx, ReductionOutcome, SearchConfig};

fn power_diag<K: Field>(ctx: &Ctx<K>, rows: usize, cols: usize, exps: &[u32]) -> PolyMatrix<K> {
    let ring = ctx.modulus.poly().ring();
    PolyMatrix::diagonal(ring, rows, cols, &exps.iter().map(|&e| ctx.modulus.power(e)).collect::<Vec<_>>())
}

/// `block ⊕ I` padded to `size x size`.
fn embed_top<K: Field>(block: &PolyMatrix<K>, size: usize) -> PolyMatrix<K> {
    let mut out = PolyMatrix::identity(block.ring(), size);
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            out.set(i, j, block.get(i, j).clone());
        }
    }
    out
}

/// Divides rows `k..` of `uf` by `p`.
fn split_rows<K: Field>(uf: &PolyMatrix<K>, k: usize, p: &Poly<K>) -> Option<PolyMatrix<K>> {
    let mut g = uf.clone();
    for i in k..uf.rows() {
        for j in 0..uf.cols() {
            g.set(i, j, uf.get(i, j).exact_div(p).ok()?);
        }
    }
    Some(g)
}

/// Kernel rows mod `p` normalized to the identity on some coordinate set,
/// so the completed matrix is a permuted unipotent one.
fn extract_by_kernel<K: Field>(f: &PolyMatrix<K>, k: usize, ctx: &Ctx<K>) -> Option<PolyMatrix<K>> {
    let l = f.rows();
    let bar = &ctx.bar;
    let fb = bar.bar_matrix(f);
    let ker = kernel_vectors(&fb, Side::Left);
    if ker.len() != l - k {
        return None;
    }
    let kb = PolyMatrix::from_rows(bar.target(), ker).ok()?;
    for cols in subsets(l, l - k) {
        let sub = kb.submatrix(&(0..l - k).collect::<Vec<_>>(), &cols);
        let d = determinant(&sub).ok()?;
        if !d.is_nonzero_constant() {
            continue;
        }
        let inv = inverse_unimodular(&sub).ok()??;
        let norm = bar.lift_matrix(&(&inv * &kb));
        let mut u = PolyMatrix::zeros(f.ring(), l, l);
        let keep: Vec<usize> = (0..l).filter(|c| !cols.contains(c)).collect();
        for (r, &c) in keep.iter().enumerate() {
            u.set(r, c, Poly::one(f.ring()));
        }
        for r in 0..l - k {
            for c in 0..l {
                u.set(k + r, c, norm.get(r, c).clone());
            }
        }
        return Some(u);
    }
    None
}

/// Kernel rows mod `p` placed last and the top rows filled by search.
fn extract_by_completion<K: Field>(f: &PolyMatrix<K>, k: usize, ctx: &mut Ctx<K>) -> Result<Option<PolyMatrix<K>>, ReduceError> {
    let l = f.rows();
    let ker = ctx.bar.lifted_kernel(f, Side::Left);
    if ker.len() != l - k {
        return Ok(None);
    }
    let fixed: Vec<(usize, Vec<Poly<K>>)> = ker.into_iter().enumerate().map(|(i, r)| (k + i, r)).collect();
    let ring = f.ring().clone();
    let budget = ctx.budget();
    let (db, tries) = (ctx.cfg.degree_bound, ctx.cfg.max_attempts.min(40));
    match complete_with(&ring, &fixed, l, db, tries, &mut ctx.rng, &budget) {
        Ok(u) => Ok(u),
        Err(ReduceError::DependentRows) => Ok(None),
        Err(e) => Err(e),
    }
}

pub(crate) fn extract<K: Field>(
    f: &PolyMatrix<K>,
    k: usize,
    ctx: &mut Ctx<K>,
) -> Result<Option<(PolyMatrix<K>, PolyMatrix<K>)>, ReduceError> {
    let l = f.rows();
    let p = ctx.modulus.poly().clone();
    if k == l {
        return Ok(Some((PolyMatrix::identity(f.ring(), l), f.clone())));
    }
    let accept = |u: PolyMatrix<K>| -> Option<(PolyMatrix<K>, PolyMatrix<K>)> {
        if !determinant(&u).ok()?.is_nonzero_constant() {
            return None;
        }
        let g = split_rows(&(&u * f), k, &p)?;
        Some((u, g))
    };
    if let Some(found) = extract_by_kernel(f, k, ctx).and_then(accept) {
        return Ok(Some(found));
    }
    let mut w = Work::new(f);
    if bar_row_echelon(&mut w, &ctx.bar) == Some(k) {
        if let Some(found) = accept(w.u) {
            return Ok(Some(found));
        }
    }
    ctx.check_time()?;
    if let Some(u) = extract_by_completion(f, k, ctx)? {
        if let Some(found) = accept(u) {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// `U` unimodular and `G` with `U * F = diag(1, ..., 1, p, ..., p) * G`,
/// `k` ones. `None` when the search gives up.
pub fn extract_left_factor<K: Field>(
    f: &PolyMatrix<K>,
    k: usize,
    modulus: &ModulusP<K>,
    cfg: &SearchConfig,
) -> Result<Option<(PolyMatrix<K>, PolyMatrix<K>)>, ReduceError> {
    cfg.validate()?;
    if !f.is_square() {
        return Err(ReduceError::Matrix(crate::error::MatrixError::NotSquare(f.rows(), f.cols())));
    }
    let mut ctx = Ctx::new(modulus, cfg);
    let fb = ctx.bar.bar_matrix(f);
    if rank(&fb) != k {
        return Err(ReduceError::HypothesisViolated(format!("rank mod p is not {k}")));
    }
    if k > 0 {
        let (_, _, reduced) = reduced_minors(&fb, k)?;
        if !is_unit_ideal(&reduced, fb.ring().order, &ctx.budget())? {
            return Err(ReduceError::HypothesisViolated(format!("J_{k} mod p is not the unit ideal")));
        }
    }
    match extract(f, k, &mut ctx) {
        Err(e) if e.is_budget() => Ok(None),
        other => other,
    }
}

/// Level-by-level lifting: keeps `L * F = D * G` with `D` diagonal in
/// powers of `p`, raising `D` one level at a time until `G` is unimodular.
fn lifting_loop<K: Field>(
    f: &PolyMatrix<K>,
    exps: &[u32],
    ctx: &mut Ctx<K>,
    trace: &mut Vec<PolyMatrix<K>>,
) -> Result<Option<EquivCertificate<K>>, ReduceError> {
    let l = f.rows();
    let ring = f.ring().clone();
    let mut level = exps[0];
    let mut big_l = PolyMatrix::identity(&ring, l);
    let mut g = f.exact_div(&ctx.modulus.power(level))?;
    let mut cur: Vec<u32> = vec![level; l];
    loop {
        ctx.check_time()?;
        if let Some(v) = inverse_unimodular(&g)? {
            let s = power_diag(ctx, l, l, &cur);
            let cert = EquivCertificate { u: big_l, v, s };
            return Ok(verify_certificate(f, &cert)?.then_some(cert));
        }
        if level >= *exps.last().unwrap() {
            ctx.note("lifting: exponents exhausted before reaching a unimodular cofactor");
            return Ok(None);
        }
        let k = exps.iter().filter(|&&s| s <= level).count();
        if ctx.bar.bar_rank(&g) != k {
            ctx.note(format!("lifting: rank mod p differs from {k} at level {level}"));
            return Ok(None);
        }
        let Some((u1, g1)) = extract(&g, k, ctx)? else {
            ctx.note(format!("lifting: no left factor at level {level}"));
            return Ok(None);
        };
        let next: Vec<u32> = exps.iter().map(|&s| s.min(level + 1)).collect();
        if cur.iter().all(|&e| e == level) {
            big_l = &u1 * &big_l;
            g = g1;
        } else {
            let u1_inv = inverse_unimodular(&u1)?.expect("extraction factor is unimodular");
            let mut ones = vec![0u32; l];
            for e in ones.iter_mut().skip(k) {
                *e = 1;
            }
            let b = &(&power_diag(ctx, l, l, &cur) * &u1_inv) * &power_diag(ctx, l, l, &ones);
            let mut inner = Vec::new();
            let Some(c) = diagonalize(&b, &next, ctx, &mut inner)? else {
                ctx.note(format!("lifting: diagonal absorption failed at level {level}"));
                return Ok(None);
            };
            let v_inv = inverse_unimodular(&c.v)?.expect("certificate factor is unimodular");
            big_l = &c.u * &big_l;
            g = &v_inv * &g1;
        }
        cur = next;
        level += 1;
        trace.push(&big_l * f);
    }
}

/// Full reduction with the list of intermediate matrices, each equivalent
/// to `F`.
pub fn smith_reduce_traced<K: Field>(
    f: &PolyMatrix<K>,
    modulus: &ModulusP<K>,
    cfg: &SearchConfig,
) -> Result<(ReductionOutcome<K>, Vec<PolyMatrix<K>>), ReduceError> {
    cfg.validate()?;
    let r = check_hypothesis(f, modulus)?;
    if !f.is_square() || r < f.rows() {
        return Ok((compress_rect(f, modulus, cfg)?, vec![f.clone()]));
    }
    let mut trace = vec![f.clone()];
    if let Some(inv) = inverse_unimodular(f)? {
        let ring = f.ring();
        let cert = EquivCertificate { u: inv, v: PolyMatrix::identity(ring, f.rows()), s: PolyMatrix::identity(ring, f.rows()) };
        return Ok((ReductionOutcome::Certified(cert), trace));
    }
    let mut ctx = Ctx::new(modulus, cfg);
    for (i, gb) in condition_bases(f, modulus, &Budget { deadline: ctx.deadline, ..Budget::default() })? {
        if !gb.is_unit() {
            return Ok((ReductionOutcome::NotEquivalent { index: i, witness: gb }, trace));
        }
    }
    let exps = smith_form(f, Some(modulus))?
        .exponents
        .ok_or_else(|| ReduceError::HypothesisViolated("invariant factors are not powers of p".into()))?;
    let mut stage = "lifting";
    match lifting_loop(f, &exps, &mut ctx, &mut trace) {
        Ok(Some(cert)) => return Ok((ReductionOutcome::Certified(cert), trace)),
        Ok(None) => {}
        Err(e) if e.is_budget() => return Ok((ReductionOutcome::unknown(stage, vec![e.to_string()]), trace)),
        Err(e) => return Err(e),
    }
    stage = "pivot";
    let mut direct = vec![f.clone()];
    match diagonalize(f, &exps, &mut ctx, &mut direct) {
        Ok(Some(cert)) => Ok((ReductionOutcome::Certified(cert), direct)),
        Ok(None) => Ok((ReductionOutcome::unknown(stage, ctx.notes), trace)),
        Err(e) if e.is_budget() => {
            let mut notes = ctx.notes;
            notes.push(e.to_string());
            Ok((ReductionOutcome::unknown(stage, notes), trace))
        }
        Err(e) => Err(e),
    }
}

/// Reduces a square matrix with `det F = c * p^t` to its Smith form.
pub fn smith_reduce<K: Field>(
    f: &PolyMatrix<K>,
    modulus: &ModulusP<K>,
    cfg: &SearchConfig,
) -> Result<ReductionOutcome<K>, ReduceError> {
    Ok(smith_reduce_traced(f, modulus, cfg)?.0)
}

/// Kernel columns placed last in a unimodular matrix, found by search.
fn kernel_completion<K: Field>(f: &PolyMatrix<K>, ctx: &mut Ctx<K>) -> Result<Option<PolyMatrix<K>>, ReduceError> {
    let m = f.cols();
    let ker = kernel_vectors(f, Side::Right);
    if ker.is_empty() {
        return Ok(Some(PolyMatrix::identity(f.ring(), m)));
    }
    let r = m - ker.len();
    let fixed: Vec<(usize, Vec<Poly<K>>)> = ker.into_iter().enumerate().map(|(i, v)| (r + i, v)).collect();
    let budget = ctx.budget();
    let (db, tries) = (ctx.cfg.degree_bound, ctx.cfg.max_attempts.min(40));
    Ok(complete_with(f.ring(), &fixed, m, db, tries, &mut ctx.rng, &budget)?.map(|t| t.transpose()))
}

/// Rectangular or rank-deficient matrices with `d_r(F) = c * p^t`.
pub fn compress_rect<K: Field>(
    f: &PolyMatrix<K>,
    modulus: &ModulusP<K>,
    cfg: &SearchConfig,
) -> Result<ReductionOutcome<K>, ReduceError> {
    cfg.validate()?;
    let r = check_hypothesis(f, modulus)?;
    let mut ctx = Ctx::new(modulus, cfg);
    for (i, gb) in condition_bases(f, modulus, &Budget { deadline: ctx.deadline, ..Budget::default() })? {
        if !gb.is_unit() {
            return Ok(ReductionOutcome::NotEquivalent { index: i, witness: gb });
        }
    }
    let exps = smith_form(f, Some(modulus))?
        .exponents
        .ok_or_else(|| ReduceError::HypothesisViolated("invariant factors are not powers of p".into()))?;
    let mut sink = Vec::new();
    match diagonalize(f, &exps, &mut ctx, &mut sink) {
        Ok(Some(cert)) => return Ok(ReductionOutcome::Certified(cert)),
        Ok(None) => {}
        Err(e) if e.is_budget() => return Ok(ReductionOutcome::unknown("compress", vec![e.to_string()])),
        Err(e) => return Err(e),
    }
    match compress_by_kernels(f, r, &exps, &mut ctx) {
        Ok(Some(cert)) => Ok(ReductionOutcome::Certified(cert)),
        Ok(None) => Ok(ReductionOutcome::unknown("compress", ctx.notes)),
        Err(e) if e.is_budget() => {
            let mut notes = ctx.notes;
            notes.push(e.to_string());
            Ok(ReductionOutcome::unknown("compress", notes))
        }
        Err(e) => Err(e),
    }
}

fn compress_by_kernels<K: Field>(
    f: &PolyMatrix<K>,
    r: usize,
    exps: &[u32],
    ctx: &mut Ctx<K>,
) -> Result<Option<EquivCertificate<K>>, ReduceError> {
    let (l, m) = f.shape();
    let Some(v) = kernel_completion(f, ctx)? else {
        ctx.note("compress: right kernel not completed");
        return Ok(None);
    };
    let Some(ut) = kernel_completion(&f.transpose(), ctx)? else {
        ctx.note("compress: left kernel not completed");
        return Ok(None);
    };
    let u = ut.transpose();
    let full = &(&u * f) * &v;
    let idx: Vec<usize> = (0..r).collect();
    let g = full.submatrix(&idx, &idx);
    let mut inner = Vec::new();
    let Some(c) = diagonalize(&g, exps, ctx, &mut inner)? else {
        ctx.note("compress: square block not reduced");
        return Ok(None);
    };
    let uu = &embed_top(&c.u, l) * &u;
    let vv = &v * &embed_top(&c.v, m);
    let s = power_diag(ctx, l, m, exps);
    let cert = EquivCertificate { u: uu, v: vv, s };
    Ok(verify_certificate(f, &cert)?.then_some(cert))
}
