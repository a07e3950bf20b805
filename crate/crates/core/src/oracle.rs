//! brute-force reference: least-norm structured perturbation by linear least squares
//!
//! The perturbed blocks are expanded in a Frobenius-orthonormal real basis of their
//! structure class, so the backward error is the norm of the least-norm solution of
//! the real linear system ΔL(λ)x = L(λ)x in those coordinates. Nothing here relies
//! on the closed forms in `backward`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::backward::BackwardError;
use crate::linalg::*;
use crate::model::{EigenPairQuery, PerturbationBlocks, StructuredPencil};
use crate::scope::{Block, Field, PerturbationScope, StructureClass};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// random feasible starting points, each driven to the minimum
    pub restarts: usize,
    pub max_iter: usize,
    /// stop when the projected gradient is below tol_opt relative to the iterate
    pub tol_opt: f64,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { restarts: 20, max_iter: 500, tol_opt: 1e-9, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Feasible { value: f64, blocks: PerturbationBlocks, constraint_residual: f64 },
    Infeasible { residual: f64, tolerance: f64 },
}

impl OracleOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            OracleOutcome::Feasible { value, .. } => Some(*value),
            OracleOutcome::Infeasible { .. } => None,
        }
    }
}

#[derive(Clone, Copy)]
enum Kind {
    General,
    Hermitian,
    Skew,
}

fn unit(nr: usize, nc: usize, i: usize, j: usize, v: C64) -> CMat {
    let mut m = CMat::zeros(nr, nc);
    m[(i, j)] = v;
    m
}

/// Frobenius-orthonormal real basis of a matrix class
fn basis(kind: Kind, nr: usize, nc: usize, real: bool) -> Vec<CMat> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::new();
    match kind {
        Kind::General => {
            for i in 0..nr {
                for j in 0..nc {
                    out.push(unit(nr, nc, i, j, cr(1.0)));
                    if !real {
                        out.push(unit(nr, nc, i, j, I));
                    }
                }
            }
        }
        Kind::Hermitian | Kind::Skew => {
            let n = nr;
            let mut herm = Vec::new();
            let mut skew = Vec::new();
            for i in 0..n {
                herm.push(unit(n, n, i, i, cr(1.0)));
                if !real {
                    skew.push(unit(n, n, i, i, I));
                }
                for j in i + 1..n {
                    herm.push((unit(n, n, i, j, cr(1.0)) + unit(n, n, j, i, cr(1.0))).scale(h));
                    skew.push((unit(n, n, i, j, cr(1.0)) - unit(n, n, j, i, cr(1.0))).scale(h));
                    if !real {
                        herm.push((unit(n, n, i, j, I) - unit(n, n, j, i, I)).scale(h));
                        skew.push((unit(n, n, i, j, I) + unit(n, n, j, i, I)).scale(h));
                    }
                }
            }
            out = if matches!(kind, Kind::Hermitian) { herm } else { skew };
        }
    }
    out
}

fn block_kind(b: Block, structure: StructureClass) -> Kind {
    match (b, structure) {
        (Block::B, _) | (_, StructureClass::BlockOnly) => Kind::General,
        (Block::J, StructureClass::SymmetryPreserving) => Kind::Skew,
        (_, StructureClass::SymmetryPreserving) => Kind::Hermitian,
    }
}

fn with_block(b: Block, m: CMat) -> PerturbationBlocks {
    let mut d = PerturbationBlocks::default();
    match b {
        Block::J => d.dj = Some(m),
        Block::R => d.dr = Some(m),
        Block::E => d.de = Some(m),
        Block::B => d.db = Some(m),
    }
    d
}

fn accumulate(d: &mut PerturbationBlocks, b: Block, m: &CMat, n: usize, mm: usize) {
    let slot = match b {
        Block::J => &mut d.dj,
        Block::R => &mut d.dr,
        Block::E => &mut d.de,
        Block::B => &mut d.db,
    };
    let zero = if b == Block::B { CMat::zeros(n, mm) } else { CMat::zeros(n, n) };
    *slot = Some(slot.take().unwrap_or(zero) + m);
}

fn parameters(scope: PerturbationScope, n: usize, m: usize) -> Vec<(Block, CMat)> {
    let real = scope.field == Field::Real;
    let mut params = Vec::new();
    for b in [Block::J, Block::R, Block::E, Block::B] {
        if !scope.blocks.contains(b) {
            continue;
        }
        let (nr, nc) = if b == Block::B { (n, m) } else { (n, n) };
        for e in basis(block_kind(b, scope.structure), nr, nc, real) {
            params.push((b, e));
        }
    }
    params
}

/// the real system A θ = b whose solutions are the feasible perturbations in coordinates
pub fn constraint_system(scope: PerturbationScope, p: &StructuredPencil, q: &EigenPairQuery) -> (RMat, RVec) {
    system(&parameters(scope, p.n(), p.m()), p, q)
}

fn system(params: &[(Block, CMat)], p: &StructuredPencil, q: &EigenPairQuery) -> (RMat, RVec) {
    let (n, m) = (p.n(), p.m());
    let x = q.x();
    let rhs = realify(&(p.evaluate(q.lambda()) * &x));
    let mut a = RMat::zeros(rhs.len(), params.len());
    for (k, (b, e)) in params.iter().enumerate() {
        let col = with_block(*b, e.clone()).evaluate(n, m, q.lambda()) * &x;
        a.set_column(k, &realify(&col));
    }
    (a, rhs)
}

/// least-norm structured ΔL with ΔL(λ)x = L(λ)x, or `Infeasible`; works for any
/// scope combination, including ones without a closed form
pub fn least_norm_feasible(scope: PerturbationScope, p: &StructuredPencil, q: &EigenPairQuery, cfg: &OracleConfig) -> Result<OracleOutcome, BackwardError> {
    q.check_dims(p)?;
    let real = scope.field == Field::Real;
    if real && !p.is_real() {
        return Err(BackwardError::UnsupportedScope { scope, reason: "real perturbations need a real pencil" });
    }
    let (n, m) = (p.n(), p.m());
    let params = parameters(scope, n, m);
    let np = params.len();
    let (a, rhs) = system(&params, p, q);
    let ap = pinv_real(&a);
    let theta0 = &ap * &rhs;
    let resid = |th: &RVec| (&a * th - &rhs).norm();
    let res0 = resid(&theta0);
    let feas_tol = 1e-8 * rhs.norm().max(a.norm() * theta0.norm());
    if res0 > feas_tol {
        return Ok(OracleOutcome::Infeasible { residual: res0, tolerance: feas_tol });
    }
    let null_proj = RMat::identity(np, np) - &ap * &a;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = theta0.clone();
    for _ in 0..cfg.restarts {
        let z = RVec::from_fn(np, |_, _| StandardNormal.sample(&mut rng));
        let mut th = &theta0 + &null_proj * z;
        for _ in 0..cfg.max_iter {
            // projected gradient of ½‖θ‖² with exact line search
            let g = &null_proj * &th;
            if g.norm() <= cfg.tol_opt * th.norm().max(f64::MIN_POSITIVE) {
                break;
            }
            th -= g;
            let corr = &ap * (&rhs - &a * &th);
            th += corr;
        }
        if th.norm() < best.norm() {
            best = th;
        }
    }
    let blocks = blocks_from(&params, &best, n, m);
    Ok(OracleOutcome::Feasible { value: best.norm(), constraint_residual: resid(&best), blocks })
}

fn blocks_from(params: &[(Block, CMat)], theta: &RVec, n: usize, m: usize) -> PerturbationBlocks {
    let mut blocks = PerturbationBlocks::default();
    for (k, (b, e)) in params.iter().enumerate() {
        accumulate(&mut blocks, *b, &e.scale(theta[k]), n, m);
    }
    blocks
}

/// a random feasible structured ΔL (least-norm point plus a Gaussian null-space component
/// of size `spread`), or `None` when (λ, x) cannot be made exact within the scope
pub fn random_feasible_perturbation(scope: PerturbationScope, p: &StructuredPencil, q: &EigenPairQuery, seed: u64, spread: f64) -> Result<Option<PerturbationBlocks>, BackwardError> {
    q.check_dims(p)?;
    let (n, m) = (p.n(), p.m());
    let params = parameters(scope, n, m);
    let (a, rhs) = system(&params, p, q);
    let ap = pinv_real(&a);
    let theta0 = &ap * &rhs;
    let feas_tol = 1e-8 * rhs.norm().max(a.norm() * theta0.norm());
    if (&a * &theta0 - &rhs).norm() > feas_tol {
        return Ok(None);
    }
    let np = params.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = RVec::from_fn(np, |_, _| StandardNormal.sample(&mut rng));
    let null_z = (RMat::identity(np, np) - &ap * &a) * z;
    let nz = null_z.norm();
    let theta = if nz > 0.0 { theta0 + null_z.scale(spread / nz) } else { theta0 };
    Ok(Some(blocks_from(&params, &theta, n, m)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bases_are_orthonormal() {
        for (kind, real, dim) in [
            (Kind::General, false, 18),
            (Kind::General, true, 9),
            (Kind::Hermitian, false, 9),
            (Kind::Skew, false, 9),
            (Kind::Hermitian, true, 6),
            (Kind::Skew, true, 3),
        ] {
            let bs = basis(kind, 3, 3, real);
            assert_eq!(bs.len(), dim);
            for (i, a) in bs.iter().enumerate() {
                for (j, b) in bs.iter().enumerate() {
                    let ip = a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum::<f64>();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - want).abs() < 1e-15);
                }
                match kind {
                    Kind::Hermitian => assert!(herm_deviation(a, 1.0) < 1e-15),
                    Kind::Skew => assert!(herm_deviation(a, -1.0) < 1e-15),
                    Kind::General => {}
                }
            }
        }
    }
}
