//! minimal Frobenius-norm solutions of structured mapping problems

use thiserror::Error;

use crate::linalg::*;

/// rank cutoff for the [v, conj(v)] rank tests of the real map
pub const REAL_RANK_RTOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MappingError {
    #[error("no solution: {what} violated (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    Infeasible { what: &'static str, residual: f64, tolerance: f64 },
    #[error("degenerate input: {0} is zero")]
    DegenerateInput(&'static str),
    #[error("rank [{which}, conj({which})] is {rank}, need 2")]
    RankDeficient { which: &'static str, rank: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewMapSolution {
    pub delta: CMat,
    /// ‖delta‖_F
    pub fro_norm: f64,
    /// sqrt(2‖YX^+‖² - tr(YX^+ (YX^+)^H XX^+))
    pub closed_form_norm: f64,
}

/// skew-Hermitian Δ of least Frobenius norm with ΔX = Y
pub fn skew_hermitian_minimal_map(x: &CMat, y: &CMat) -> Result<SkewMapSolution, MappingError> {
    if x.shape() != y.shape() {
        return Err(MappingError::DimensionMismatch("X and Y differ in shape"));
    }
    let xp = pinv(x);
    let yxp = y * &xp;
    let nx = fro(x);
    let ny = fro(y);
    let range_res = fro(&(&yxp * x - y));
    let range_tol = 1e-10 * ny;
    if range_res > range_tol {
        return Err(MappingError::Infeasible { what: "YX^+X = Y", residual: range_res, tolerance: range_tol });
    }
    let yhx = y.adjoint() * x;
    let skew_res = fro(&(&yhx + yhx.adjoint()));
    let skew_tol = 1e-10 * nx * ny;
    if skew_res > skew_tol {
        return Err(MappingError::Infeasible { what: "Y^H X = -X^H Y", residual: skew_res, tolerance: skew_tol });
    }
    let delta = &yxp - yxp.adjoint() - xp.adjoint() * x.adjoint() * y * &xp;
    let tr = (&yxp * yxp.adjoint() * x * &xp).trace().re;
    let closed = (2.0 * yxp.norm_squared() - tr).max(0.0).sqrt();
    Ok(SkewMapSolution { fro_norm: fro(&delta), delta, closed_form_norm: closed })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedSolution {
    pub delta: CMat,
    /// ‖delta‖_F, computed from the matrix
    pub fro_norm: f64,
    /// max(‖r‖/‖u‖, ‖s‖/‖w‖), the least attainable spectral norm
    pub spectral_inf: f64,
    /// sqrt(‖r‖²/‖u‖² + ‖s‖²/‖w‖² - |s^H u|²/(‖w‖‖u‖)), a frequently quoted variant with
    /// unsquared norms in the last denominator; `None` when the radicand is negative
    pub unsquared_radical: Option<f64>,
    /// the variant above disagrees with `fro_norm` beyond 1e-10 relative
    pub radical_mismatch: bool,
}

pub fn two_sided_tolerance(u: &CVec, r: &CVec, w: &CVec, s: &CVec) -> f64 {
    1e-10 * (1.0 + u.norm() * s.norm() + r.norm() * w.norm())
}

fn check_two_sided_dims(u: &CVec, r: &CVec, w: &CVec, s: &CVec) -> Result<(), MappingError> {
    if u.len() != s.len() {
        return Err(MappingError::DimensionMismatch("u and s must have equal length"));
    }
    if r.len() != w.len() {
        return Err(MappingError::DimensionMismatch("r and w must have equal length"));
    }
    Ok(())
}

/// Δ of least Frobenius norm with Δu = r and Δ^H w = s
pub fn two_sided_minimal_map(u: &CVec, r: &CVec, w: &CVec, s: &CVec) -> Result<TwoSidedSolution, MappingError> {
    check_two_sided_dims(u, r, w, s)?;
    if u.norm() == 0.0 {
        return Err(MappingError::DegenerateInput("u"));
    }
    if w.norm() == 0.0 {
        return Err(MappingError::DegenerateInput("w"));
    }
    let gap = (u.dotc(s) - r.dotc(w)).norm();
    let tol = two_sided_tolerance(u, r, w, s);
    if gap > tol {
        return Err(MappingError::Infeasible { what: "u^H s = r^H w", residual: gap, tolerance: tol });
    }
    let uu = u.norm_squared();
    let ww = w.norm_squared();
    let shu = s.dotc(u);
    let delta = outer(r, u).unscale(uu) + outer(w, s).unscale(ww) - outer(w, u).scale(1.0 / (ww * uu)) * shu;
    let fro_norm = fro(&delta);
    let spectral_inf = (r.norm() / u.norm()).max(s.norm() / w.norm());
    let rad = r.norm_squared() / uu + s.norm_squared() / ww - shu.norm_sqr() / (w.norm() * u.norm());
    let unsquared_radical = if rad >= 0.0 { Some(rad.sqrt()) } else { None };
    let radical_mismatch = match unsquared_radical {
        Some(v) => (v - fro_norm).abs() > 1e-10 * fro_norm.max(f64::MIN_POSITIVE),
        None => true,
    };
    Ok(TwoSidedSolution { delta, fro_norm, spectral_inf, unsquared_radical, radical_mismatch })
}

/// least-norm Δ with Δu = r, Δ^H w = s, allowing u = 0 or w = 0 (the other
/// constraint then has to be trivially consistent)
pub fn minimal_map_any(u: &CVec, r: &CVec, w: &CVec, s: &CVec) -> Result<CMat, MappingError> {
    check_two_sided_dims(u, r, w, s)?;
    let tol = two_sided_tolerance(u, r, w, s);
    match (u.norm() == 0.0, w.norm() == 0.0) {
        (true, true) => Err(MappingError::DegenerateInput("u and w")),
        (false, true) => {
            if s.norm() > tol {
                return Err(MappingError::Infeasible { what: "s = 0 when w = 0", residual: s.norm(), tolerance: tol });
            }
            Ok(outer(r, u).unscale(u.norm_squared()))
        }
        (true, false) => {
            if r.norm() > tol {
                return Err(MappingError::Infeasible { what: "r = 0 when u = 0", residual: r.norm(), tolerance: tol });
            }
            Ok(outer(w, s).unscale(w.norm_squared()))
        }
        (false, false) => two_sided_minimal_map(u, r, w, s).map(|sol| sol.delta),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealMapSolution {
    pub delta: RMat,
    pub fro_norm: f64,
    /// size of the imaginary part dropped from the formula (roundoff only)
    pub imag_residue: f64,
}

/// real Δ of least Frobenius norm with Δu = r and Δ^T w = s
pub fn real_two_sided_minimal_map(u: &CVec, r: &CVec, w: &CVec, s: &CVec) -> Result<RealMapSolution, MappingError> {
    check_two_sided_dims(u, r, w, s)?;
    let uc = with_conj(u);
    let wc = with_conj(w);
    let ru = rank(&uc, REAL_RANK_RTOL);
    if ru != 2 {
        return Err(MappingError::RankDeficient { which: "u", rank: ru });
    }
    let rw = rank(&wc, REAL_RANK_RTOL);
    if rw != 2 {
        return Err(MappingError::RankDeficient { which: "w", rank: rw });
    }
    let tol = two_sided_tolerance(u, r, w, s);
    let gap_h = (u.dotc(s) - r.dotc(w)).norm();
    if gap_h > tol {
        return Err(MappingError::Infeasible { what: "u^H s = r^H w", residual: gap_h, tolerance: tol });
    }
    let gap_t = (u.dot(s) - r.dot(w)).norm();
    if gap_t > tol {
        return Err(MappingError::Infeasible { what: "u^T s = r^T w", residual: gap_t, tolerance: tol });
    }
    let up = pinv(&uc);
    let sw = with_conj(s) * pinv(&wc);
    let swh = sw.adjoint();
    let full = with_conj(r) * &up + &swh - &swh * &uc * &up;
    let imag_residue = max_imag(&full);
    let delta = real_part(&full);
    Ok(RealMapSolution { fro_norm: delta.norm(), delta, imag_residue })
}
