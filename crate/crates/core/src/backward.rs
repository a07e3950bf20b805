//! structured backward errors of purely imaginary eigenpairs

use std::fmt;

use thiserror::Error;

use crate::linalg::*;
use crate::mappings::{minimal_map_any, real_two_sided_minimal_map, skew_hermitian_minimal_map, MappingError, REAL_RANK_RTOL};
use crate::model::{EigenPairQuery, ModelError, PerturbationBlocks, StructuredPencil};
use crate::scope::{Block, BlockSet, Field, PerturbationScope, StructureClass};

/// relative tolerance of every finiteness condition
pub const COND_RTOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BackwardError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unsupported scope {scope}: {reason}")]
    UnsupportedScope { scope: PerturbationScope, reason: &'static str },
    #[error("rank [{which}, conj({which})] is {rank}, need 2")]
    RankDeficient { which: &'static str, rank: usize },
    #[error(transparent)]
    Mapping(#[from] MappingError),
}

/// a named finiteness condition with its measured residual
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Condition {
    fn new(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Condition { name, residual, tolerance }
    }

    pub fn holds(&self) -> bool {
        self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReportValue {
    Exact(f64),
    Bounds { lower: f64, upper: f64 },
    Infinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackwardErrorReport {
    pub scope: PerturbationScope,
    pub value: ReportValue,
    pub conditions: Vec<Condition>,
    /// perturbation attaining the exact value, or the upper bound
    pub minimizer: Option<PerturbationBlocks>,
    /// bound scopes: least objective over all feasible maps, and where it is attained
    pub feasible_upper: Option<f64>,
    pub feasible_minimizer: Option<PerturbationBlocks>,
}

impl BackwardErrorReport {
    fn infinite(scope: PerturbationScope, conditions: Vec<Condition>) -> Self {
        BackwardErrorReport { scope, value: ReportValue::Infinite, conditions, minimizer: None, feasible_upper: None, feasible_minimizer: None }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.value, ReportValue::Infinite)
    }

    /// exact value or lower bound; +inf when infinite
    pub fn lower(&self) -> f64 {
        match self.value {
            ReportValue::Exact(v) => v,
            ReportValue::Bounds { lower, .. } => lower,
            ReportValue::Infinite => f64::INFINITY,
        }
    }

    /// exact value or upper bound; +inf when infinite
    pub fn upper(&self) -> f64 {
        match self.value {
            ReportValue::Exact(v) => v,
            ReportValue::Bounds { upper, .. } => upper,
            ReportValue::Infinite => f64::INFINITY,
        }
    }

    pub fn exact(&self) -> Option<f64> {
        match self.value {
            ReportValue::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn failed_conditions(&self) -> Vec<&Condition> {
        self.conditions.iter().filter(|c| !c.holds()).collect()
    }
}

impl fmt::Display for ReportValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportValue::Exact(v) => write!(f, "{v:e}"),
            ReportValue::Bounds { lower, upper } => write!(f, "[{lower:e}, {upper:e}]"),
            ReportValue::Infinite => f.write_str("inf"),
        }
    }
}

/// the vectors every scope is built from
struct Parts {
    lambda: C64,
    x1: CVec,
    x2: CVec,
    x3: CVec,
    xnorm: f64,
    /// A x2 + B x3
    r: CVec,
    /// A^H x1 = -(J + R + λE) x1
    s0: CVec,
    /// B^H x1 + S x3
    t: CVec,
}

impl Parts {
    fn new(p: &StructuredPencil, q: &EigenPairQuery) -> Result<Self, ModelError> {
        q.check_dims(p)?;
        let lambda = q.lambda();
        let a = p.a_of(lambda);
        let r = &a * q.x2() + p.b() * q.x3();
        let s0 = a.adjoint() * q.x1();
        let t = p.b().adjoint() * q.x1() + p.s() * q.x3();
        Ok(Parts { lambda, x1: q.x1().clone(), x2: q.x2().clone(), x3: q.x3().clone(), xnorm: q.x_norm(), r, s0, t })
    }

    fn l2(&self) -> f64 {
        self.lambda.norm_sqr()
    }
}

fn cond_x3(pt: &Parts) -> Condition {
    Condition::new("x3 = 0", pt.x3.norm(), COND_RTOL * pt.xnorm)
}

fn cond_bh_x1(p: &StructuredPencil, pt: &Parts, name: &'static str) -> Condition {
    let v = p.b().adjoint() * &pt.x1;
    Condition::new(name, v.norm(), COND_RTOL * fro(p.b()) * pt.x1.norm())
}

/// blocks of the scope as (coefficient in ΔJ - ΔR + λΔE)
fn coefficients(blocks: BlockSet, lambda: C64) -> Vec<(Block, C64)> {
    let mut out = Vec::new();
    if blocks.contains(Block::J) {
        out.push((Block::J, cr(1.0)));
    }
    if blocks.contains(Block::R) {
        out.push((Block::R, cr(-1.0)));
    }
    if blocks.contains(Block::E) {
        out.push((Block::E, lambda));
    }
    out
}

/// Σ |coefficient|² over the scope's J, R, E blocks
pub fn coupling_weight(blocks: BlockSet, lambda: C64) -> f64 {
    coefficients(blocks, lambda).iter().map(|(_, a)| a.norm_sqr()).sum()
}

fn set_block(out: &mut PerturbationBlocks, b: Block, v: CMat) {
    match b {
        Block::J => out.dj = Some(v),
        Block::R => out.dr = Some(v),
        Block::E => out.de = Some(v),
        Block::B => out.db = Some(v),
    }
}

/// least-norm unstructured blocks with ΔJ - ΔR + λΔE = d1 and ΔB = d2
pub fn split_block(blocks: BlockSet, lambda: C64, d1: &CMat, d2: Option<&CMat>) -> PerturbationBlocks {
    let coef = coefficients(blocks, lambda);
    let w: f64 = coef.iter().map(|(_, a)| a.norm_sqr()).sum();
    let mut out = PerturbationBlocks::default();
    for (b, a) in coef {
        set_block(&mut out, b, d1.map(|z| z * a.conj() / w));
    }
    if blocks.has_b() {
        set_block(&mut out, Block::B, d2.cloned().unwrap_or_else(|| CMat::zeros(d1.nrows(), 0)));
    }
    out
}

/// structured blocks realising d1: ΔR = -herm(d1), the skew part shared by ΔJ and λΔE
pub fn split_symmetric(blocks: BlockSet, lambda: C64, d1: &CMat, d2: Option<&CMat>) -> PerturbationBlocks {
    let h = herm_part(d1);
    let k = skew_part(d1);
    let skew_coef: Vec<(Block, C64)> = coefficients(blocks, lambda).into_iter().filter(|(b, _)| *b != Block::R).collect();
    let w: f64 = skew_coef.iter().map(|(_, a)| a.norm_sqr()).sum();
    let mut out = PerturbationBlocks::default();
    for (b, a) in skew_coef {
        set_block(&mut out, b, k.map(|z| z * a.conj() / w));
    }
    if blocks.contains(Block::R) {
        out.dr = Some(-h);
    }
    if blocks.has_b() {
        set_block(&mut out, Block::B, d2.cloned().unwrap_or_else(|| CMat::zeros(d1.nrows(), 0)));
    }
    out
}

/// ‖herm(d1)‖² + ‖skew(d1)‖² / Σ + ‖d2‖², Σ the skew-side coupling weight; its square root
/// is the size of the structured perturbation realising (d1, d2)
pub fn symmetric_objective(blocks: BlockSet, lambda: C64, d1: &CMat, d2: Option<&CMat>) -> f64 {
    let sk: f64 = coefficients(blocks, lambda).iter().filter(|(b, _)| *b != Block::R).map(|(_, a)| a.norm_sqr()).sum();
    let h = herm_part(d1).norm_squared();
    let k = skew_part(d1).norm_squared();
    let b = d2.map(|m| m.norm_squared()).unwrap_or(0.0);
    (h + k / sk + b).sqrt()
}

fn split_cols(d: &CMat, n: usize) -> (CMat, CMat) {
    let p = d.ncols();
    (d.columns(0, n).into_owned(), d.columns(n, p - n).into_owned())
}

fn no_b(blocks: BlockSet) -> bool {
    !blocks.has_b()
}

/// unstructured backward error ‖L(λ)x‖ / (‖x‖ sqrt(1 + |λ|²))
pub fn eta_unstructured(p: &StructuredPencil, q: &EigenPairQuery) -> Result<f64, BackwardError> {
    q.check_dims(p)?;
    let x = q.x();
    let lx = p.evaluate(q.lambda()) * &x;
    Ok(lx.norm() / (x.norm() * (1.0 + q.lambda().norm_sqr()).sqrt()))
}

/// backward error under perturbations keeping M Hermitian and N skew-Hermitian
pub fn eta_even(p: &StructuredPencil, q: &EigenPairQuery) -> Result<f64, BackwardError> {
    q.check_dims(p)?;
    let x = q.x();
    let lx = p.evaluate(q.lambda()) * &x;
    let xx = x.norm_squared();
    let quad = x.dotc(&lx).norm_sqr();
    let num = (2.0 * xx * lx.norm_squared() - quad).max(0.0);
    Ok((num / (xx * xx * (1.0 + q.lambda().norm_sqr()))).sqrt())
}

fn unsupported(scope: PerturbationScope, reason: &'static str) -> BackwardError {
    BackwardError::UnsupportedScope { scope, reason }
}

/// named conditions under which the scope's backward error is finite
pub fn finiteness_check(scope: PerturbationScope, p: &StructuredPencil, q: &EigenPairQuery) -> Result<Vec<Condition>, BackwardError> {
    if !scope.is_supported() {
        return Err(unsupported(scope, "no closed form for this combination"));
    }
    let pt = Parts::new(p, q)?;
    Ok(conditions(scope, p, &pt))
}

fn conditions(scope: PerturbationScope, p: &StructuredPencil, pt: &Parts) -> Vec<Condition> {
    use BlockSet::*;
    let b = scope.blocks;
    match scope.field {
        Field::Complex => {
            if scope.structure == StructureClass::SymmetryPreserving && b == JE {
                let (x, y) = je_symmetric_xy(pt);
                let xp = pinv(&x);
                let yhx = y.adjoint() * &x;
                let ny = fro(&y);
                let bx = p.b().adjoint() * &pt.x1 + p.s() * &pt.x3;
                vec![
                    Condition::new("Y^H X = -X^H Y", fro(&(&yhx + yhx.adjoint())), COND_RTOL * fro(&x) * ny),
                    Condition::new("YX^+X = Y", fro(&(&y * &xp * &x - &y)), COND_RTOL * ny),
                    Condition::new("B^H x1 + S x3 = 0", bx.norm(), COND_RTOL * (fro(p.b()) * pt.x1.norm() + fro(p.s()) * pt.x3.norm())),
                ]
            } else if no_b(b) {
                vec![cond_x3(pt), cond_bh_x1(p, pt, "B^H x1 = 0")]
            } else {
                vec![cond_x3(pt)]
            }
        }
        Field::Real => {
            let mut out = vec![cond_x3(pt)];
            if b == JR {
                out.push(cond_bh_x1(p, pt, "B^T x1 = 0"));
            }
            let x2t = pt.x2.transpose();
            if b == EB {
                let jr = p.j() + p.r();
                let v = (&x2t * (&jr * &pt.x1))[(0, 0)];
                out.push(Condition::new("x2^T (J + R) x1 = 0", v.norm(), COND_RTOL * fro(&jr) * pt.x2.norm() * pt.x1.norm()));
            } else {
                let v = (&x2t * (p.e() * &pt.x1))[(0, 0)] * pt.lambda;
                out.push(Condition::new("λ x2^T E x1 = 0", v.norm(), COND_RTOL * pt.lambda.norm() * fro(p.e()) * pt.x2.norm() * pt.x1.norm()));
            }
            out
        }
    }
}

/// X = [x2, x1], Y = [r, (J + R + λE) x1]
fn je_symmetric_xy(pt: &Parts) -> (CMat, CMat) {
    let x = CMat::from_columns(&[pt.x2.clone(), pt.x1.clone()]);
    let y = CMat::from_columns(&[pt.r.clone(), -pt.s0.clone()]);
    (x, y)
}

/// scaling φ with ΔJ - ΔR + λΔE = φ Δ̂1 for the B-scopes
fn phi(blocks: BlockSet, lambda: C64) -> C64 {
    match blocks {
        BlockSet::EB => lambda,
        BlockSet::JB | BlockSet::RB => cr(1.0),
        _ => cr(coupling_weight(blocks, lambda).sqrt()),
    }
}

/// (u, r, w, s) with Δu = r, Δ^H w = s for Δ = [Δ̂1, ΔB] and ΔJ - ΔR + λΔE = φ Δ̂1
fn scaled_vectors(pt: &Parts, ph: C64) -> (CVec, CVec, CVec, CVec) {
    let u = vcat(&pt.x2.map(|z| z * ph), &pt.x3);
    let s = vcat(&pt.s0.map(|z| z / ph.conj()), &pt.t);
    (u, pt.r.clone(), pt.x1.clone(), s)
}

fn mapping_infinite(scope: PerturbationScope, mut conds: Vec<Condition>, e: MappingError) -> Result<BackwardErrorReport, BackwardError> {
    match e {
        MappingError::Infeasible { what, residual, tolerance } => {
            conds.push(Condition::new(what, residual, tolerance));
            Ok(BackwardErrorReport::infinite(scope, conds))
        }
        MappingError::RankDeficient { which, rank } => Err(BackwardError::RankDeficient { which, rank }),
        other => Err(other.into()),
    }
}

/// structured backward error of (λ, x) within the given scope
pub fn eta(scope: PerturbationScope, p: &StructuredPencil, q: &EigenPairQuery) -> Result<BackwardErrorReport, BackwardError> {
    if !scope.is_supported() {
        return Err(unsupported(scope, "no closed form for this combination"));
    }
    if scope.field == Field::Real && !p.is_real() {
        return Err(unsupported(scope, "real perturbations need a real pencil"));
    }
    let pt = Parts::new(p, q)?;
    if scope.field == Field::Real {
        for (which, v) in [("x1", &pt.x1), ("x2", &pt.x2)] {
            let rk = rank(&with_conj(v), REAL_RANK_RTOL);
            if rk != 2 {
                return Err(BackwardError::RankDeficient { which, rank: rk });
            }
        }
    }
    let conds = conditions(scope, p, &pt);
    if conds.iter().any(|c| !c.holds()) {
        return Ok(BackwardErrorReport::infinite(scope, conds));
    }
    match (scope.field, scope.structure) {
        (Field::Complex, StructureClass::BlockOnly) => complex_block(scope, &pt, conds),
        (Field::Complex, StructureClass::SymmetryPreserving) => complex_symmetric(scope, p, &pt, conds),
        (Field::Real, _) => real_scope(scope, &pt, conds),
    }
}

fn complex_block(scope: PerturbationScope, pt: &Parts, conds: Vec<Condition>) -> Result<BackwardErrorReport, BackwardError> {
    let b = scope.blocks;
    let n = pt.x1.len();
    let (value, minimizer) = if no_b(b) {
        let d = match minimal_map_any(&pt.x2, &pt.r, &pt.x1, &pt.s0) {
            Ok(d) => d,
            Err(e) => return mapping_infinite(scope, conds, e),
        };
        let divisor = coupling_weight(b, pt.lambda).sqrt();
        (fro(&d) / divisor, split_block(b, pt.lambda, &d, None))
    } else {
        let ph = phi(b, pt.lambda);
        let (u, r, w, s) = scaled_vectors(pt, ph);
        let d = match minimal_map_any(&u, &r, &w, &s) {
            Ok(d) => d,
            Err(e) => return mapping_infinite(scope, conds, e),
        };
        let (d1, d2) = split_cols(&d, n);
        (fro(&d), split_block(b, pt.lambda, &d1.map(|z| z * ph), Some(&d2)))
    };
    Ok(BackwardErrorReport {
        scope,
        value: ReportValue::Exact(value),
        conditions: conds,
        minimizer: Some(minimizer),
        feasible_upper: None,
        feasible_minimizer: None,
    })
}

fn complex_symmetric(scope: PerturbationScope, p: &StructuredPencil, pt: &Parts, conds: Vec<Condition>) -> Result<BackwardErrorReport, BackwardError> {
    use BlockSet::*;
    let b = scope.blocks;
    let n = p.n();
    let lam = pt.lambda;
    if b == JE {
        let (x, y) = je_symmetric_xy(pt);
        let sol = match skew_hermitian_minimal_map(&x, &y) {
            Ok(s) => s,
            Err(e) => return mapping_infinite(scope, conds, e),
        };
        let value = sol.closed_form_norm / (1.0 + pt.l2()).sqrt();
        let minimizer = split_symmetric(b, lam, &sol.delta, None);
        return Ok(BackwardErrorReport { scope, value: ReportValue::Exact(value), conditions: conds, minimizer: Some(minimizer), feasible_upper: None, feasible_minimizer: None });
    }
    let (u, r, w, s) = if no_b(b) {
        (pt.x2.clone(), pt.r.clone(), pt.x1.clone(), pt.s0.clone())
    } else {
        scaled_vectors(pt, cr(1.0))
    };
    let d = match minimal_map_any(&u, &r, &w, &s) {
        Ok(d) => d,
        Err(e) => return mapping_infinite(scope, conds, e),
    };
    let (d1, d2) = if no_b(b) { (d.clone(), None) } else {
        let (a, c) = split_cols(&d, n);
        (a, Some(c))
    };
    let minimizer = split_symmetric(b, lam, &d1, d2.as_ref());
    let d2n = d2.as_ref().map(|m| m.norm_squared()).unwrap_or(0.0);
    let value = match b {
        JR | JRB => ReportValue::Exact(fro(&d)),
        RE | REB | JRE | JREB => {
            let h = herm_part(&d1).norm_squared();
            let k = skew_part(&d1).norm_squared();
            let d1n = d1.norm_squared();
            let (lower, upper) = if matches!(b, RE | REB) {
                let ll = pt.l2();
                let lower = if ll <= 1.0 { (d1n + d2n).sqrt() } else { (d1n / ll + d2n).sqrt() };
                (lower, (h + k / ll + d2n).sqrt())
            } else {
                let c1 = 1.0 + pt.l2();
                ((d1n / c1 + d2n).sqrt(), (h + k / c1 + d2n).sqrt())
            };
            ReportValue::Bounds { lower, upper }
        }
        _ => unreachable!("scope support checked above"),
    };
    let (feasible_upper, feasible_minimizer) = if scope.has_bounds() {
        let (v, m) = refine_symmetric(b, lam, &u, &w, &d, n);
        (Some(v), Some(m))
    } else {
        (None, None)
    };
    Ok(BackwardErrorReport { scope, value, conditions: conds, minimizer: Some(minimizer), feasible_upper, feasible_minimizer })
}

/// minimise the structured objective over every map with Δu = r, Δ^H w = s;
/// the family is d + P_w Z P_u, solved as a real least-squares problem in Z
fn refine_symmetric(blocks: BlockSet, lambda: C64, u: &CVec, w: &CVec, d: &CMat, n: usize) -> (f64, PerturbationBlocks) {
    let (nr, nc) = d.shape();
    let proj = |v: &CVec, k: usize| -> CMat {
        if v.norm() == 0.0 {
            CMat::identity(k, k)
        } else {
            CMat::identity(k, k) - outer(v, v).unscale(v.norm_squared())
        }
    };
    let pw = proj(w, nr);
    let pu = proj(u, nc);
    let sk: f64 = coefficients(blocks, lambda).iter().filter(|(b, _)| *b != Block::R).map(|(_, a)| a.norm_sqr()).sum();
    let ks = 1.0 / sk.sqrt();
    let features = |m: &CMat| -> RVec {
        let (m1, m2) = split_cols(m, n);
        let h = herm_part(&m1);
        let k = skew_part(&m1).scale(ks);
        let mut parts: Vec<f64> = Vec::with_capacity(2 * (2 * n * n + m2.len()));
        for z in h.iter().chain(k.iter()).chain(m2.iter()) {
            parts.push(z.re);
            parts.push(z.im);
        }
        RVec::from_vec(parts)
    };
    let c0 = features(d);
    let nparam = 2 * nr * nc;
    let mut g = RMat::zeros(c0.len(), nparam);
    let mut col = 0;
    for i in 0..nr {
        for j in 0..nc {
            for unit in [cr(1.0), I] {
                let mut z = CMat::zeros(nr, nc);
                z[(i, j)] = unit;
                let dir = &pw * z * &pu;
                g.set_column(col, &features(&dir));
                col += 1;
            }
        }
    }
    let zopt = -(pinv_real(&g) * &c0);
    let mut zm = CMat::zeros(nr, nc);
    let mut k = 0;
    for i in 0..nr {
        for j in 0..nc {
            zm[(i, j)] = c(zopt[k], zopt[k + 1]);
            k += 2;
        }
    }
    let best = d + &pw * zm * &pu;
    let (b1, b2) = split_cols(&best, n);
    let b2 = if blocks.has_b() { Some(b2) } else { None };
    let value = symmetric_objective(blocks, lambda, &b1, b2.as_ref());
    let start = {
        let (d1, d2) = split_cols(d, n);
        let d2 = if blocks.has_b() { Some(d2) } else { None };
        symmetric_objective(blocks, lambda, &d1, d2.as_ref())
    };
    if value <= start {
        (value, split_symmetric(blocks, lambda, &b1, b2.as_ref()))
    } else {
        let (d1, d2) = split_cols(d, n);
        let d2 = if blocks.has_b() { Some(d2) } else { None };
        (start, split_symmetric(blocks, lambda, &d1, d2.as_ref()))
    }
}

fn real_scope(scope: PerturbationScope, pt: &Parts, conds: Vec<Condition>) -> Result<BackwardErrorReport, BackwardError> {
    let b = scope.blocks;
    let n = pt.x1.len();
    let ph = if scope.structure == StructureClass::SymmetryPreserving || no_b(b) { cr(1.0) } else { phi(b, pt.lambda) };
    let (u, r, w, s) = if no_b(b) { (pt.x2.clone(), pt.r.clone(), pt.x1.clone(), pt.s0.clone()) } else { scaled_vectors(pt, ph) };
    let sol = match real_two_sided_minimal_map(&u, &r, &w, &s) {
        Ok(s) => s,
        Err(e) => return mapping_infinite(scope, conds, e),
    };
    let d = to_complex(&sol.delta);
    let (d1, d2) = if no_b(b) { (d.clone(), None) } else {
        let (a, c) = split_cols(&d, n);
        (a, Some(c))
    };
    let d1 = d1.map(|z| z * ph);
    let (value, minimizer) = match scope.structure {
        StructureClass::BlockOnly => {
            let v = if no_b(b) { sol.fro_norm / coupling_weight(b, pt.lambda).sqrt() } else { sol.fro_norm };
            (v, split_block(b, pt.lambda, &d1, d2.as_ref()))
        }
        StructureClass::SymmetryPreserving => (sol.fro_norm, split_symmetric(b, pt.lambda, &d1, d2.as_ref())),
    };
    Ok(BackwardErrorReport { scope, value: ReportValue::Exact(value), conditions: conds, minimizer: Some(minimizer), feasible_upper: None, feasible_minimizer: None })
}

pub fn eta_block(blocks: BlockSet, p: &StructuredPencil, q: &EigenPairQuery) -> Result<BackwardErrorReport, BackwardError> {
    eta(PerturbationScope::block(blocks), p, q)
}

pub fn eta_symmetry(blocks: BlockSet, p: &StructuredPencil, q: &EigenPairQuery) -> Result<BackwardErrorReport, BackwardError> {
    eta(PerturbationScope::sym(blocks), p, q)
}

pub fn eta_block_real(blocks: BlockSet, p: &StructuredPencil, q: &EigenPairQuery) -> Result<BackwardErrorReport, BackwardError> {
    eta(PerturbationScope::real_block(blocks), p, q)
}

pub fn eta_symmetry_real(blocks: BlockSet, p: &StructuredPencil, q: &EigenPairQuery) -> Result<BackwardErrorReport, BackwardError> {
    eta(PerturbationScope::real_sym(blocks), p, q)
}

/// the perturbation recorded in the report (exact minimizer or upper-bound witness)
pub fn reconstruct_minimizer(report: &BackwardErrorReport) -> Option<PerturbationBlocks> {
    report.minimizer.clone()
}

/// ‖(L - ΔL)(λ) x‖ with its acceptance tolerance 1e-10 (‖L(λ)‖_F + ‖ΔL(λ)‖_F) ‖x‖
pub fn residual_closure(p: &StructuredPencil, q: &EigenPairQuery, d: &PerturbationBlocks) -> (f64, f64) {
    let l = p.evaluate(q.lambda());
    let dl = d.evaluate(p.n(), p.m(), q.lambda());
    let x = q.x();
    let res = ((&l - &dl) * &x).norm();
    (res, 1e-10 * (fro(&l) + fro(&dl)) * x.norm())
}

/// smallest singular value of (L - ΔL)(λ) and the threshold 1e-10 ‖L(λ)‖_F
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueCertificate {
    pub sigma_min: f64,
    pub tolerance: f64,
    /// right singular vector of (L - ΔL)(λ) for `sigma_min`
    pub vector: CVec,
}

impl EigenvalueCertificate {
    pub fn holds(&self) -> bool {
        self.sigma_min <= self.tolerance
    }
}

pub fn certify_eigenvalue(p: &StructuredPencil, lambda: C64, d: &PerturbationBlocks) -> EigenvalueCertificate {
    let l = p.evaluate(lambda);
    let pert = &l - d.evaluate(p.n(), p.m(), lambda);
    let (sigma_min, vector) = min_right_singular_vector(&pert);
    EigenvalueCertificate { sigma_min, tolerance: 1e-10 * fro(&l), vector }
}

/// eigenvalue backward error together with an eigenvector attaining it
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueBackwardError {
    pub value: f64,
    pub query: EigenPairQuery,
    pub report: BackwardErrorReport,
}

/// inf over x of the scope's backward error at λ, with the attaining x
pub fn eta_eigenvalue(scope: PerturbationScope, p: &StructuredPencil, lambda: C64) -> Result<EigenvalueBackwardError, BackwardError> {
    use BlockSet::*;
    let ok = scope.field == Field::Complex
        && match scope.structure {
            StructureClass::BlockOnly => true,
            StructureClass::SymmetryPreserving => matches!(scope.blocks, JR | JRB),
        };
    if !ok {
        return Err(unsupported(scope, "no eigenvalue formula for this combination"));
    }
    let (n, m) = (p.n(), p.m());
    // validates λ
    let probe = EigenPairQuery::new(lambda, CVec::zeros(n), CVec::from_element(n, cr(1.0)), CVec::zeros(m))?;
    let lambda = probe.lambda();
    let a = p.a_of(lambda);
    let b = scope.blocks;
    let scale = match scope.structure {
        StructureClass::SymmetryPreserving => 1.0,
        StructureClass::BlockOnly if no_b(b) => coupling_weight(b, lambda).sqrt(),
        StructureClass::BlockOnly => phi(b, lambda).norm(),
    };
    let (s_a, v_a) = min_right_singular_vector(&a);
    let mut value = s_a / scale;
    let mut x1 = CVec::zeros(n);
    let mut x2 = v_a;
    if b.has_b() {
        let tall = vstack(&a.adjoint().unscale(scale), &p.b().adjoint());
        let (s_t, v_t) = min_right_singular_vector(&tall);
        if s_t < value {
            value = s_t;
            x1 = v_t;
            x2 = CVec::zeros(n);
        }
    }
    let query = EigenPairQuery::new(lambda, x1, x2, CVec::zeros(m))?;
    let report = eta(scope, p, &query)?;
    Ok(EigenvalueBackwardError { value, query, report })
}

pub fn eta_block_eigenvalue(blocks: BlockSet, p: &StructuredPencil, lambda: C64) -> Result<EigenvalueBackwardError, BackwardError> {
    eta_eigenvalue(PerturbationScope::block(blocks), p, lambda)
}

pub fn eta_symmetry_eigenvalue(blocks: BlockSet, p: &StructuredPencil, lambda: C64) -> Result<EigenvalueBackwardError, BackwardError> {
    eta_eigenvalue(PerturbationScope::sym(blocks), p, lambda)
}
