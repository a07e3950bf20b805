//! dense complex helpers on top of nalgebra

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;
pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;

/// relative cutoff used by every pseudoinverse
pub const PINV_RTOL: f64 = 1e-12;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// build a complex matrix from rows of `(re, im)` pairs
pub fn cmat(rows: &[&[(f64, f64)]]) -> CMat {
    let nr = rows.len();
    let nc = if nr == 0 { 0 } else { rows[0].len() };
    CMat::from_fn(nr, nc, |i, j| c(rows[i][j].0, rows[i][j].1))
}

/// build a complex matrix with real entries
pub fn rmat(nr: usize, nc: usize, data: &[f64]) -> CMat {
    CMat::from_row_slice(nr, nc, &data.iter().map(|&x| cr(x)).collect::<Vec<_>>())
}

pub fn cvec(data: &[(f64, f64)]) -> CVec {
    CVec::from_iterator(data.len(), data.iter().map(|&(a, b)| c(a, b)))
}

pub fn rvec(data: &[f64]) -> CVec {
    CVec::from_iterator(data.len(), data.iter().map(|&a| cr(a)))
}

pub fn fro(a: &CMat) -> f64 {
    a.norm()
}

pub fn herm_part(a: &CMat) -> CMat {
    (a + a.adjoint()).scale(0.5)
}

pub fn skew_part(a: &CMat) -> CMat {
    (a - a.adjoint()).scale(0.5)
}

/// largest entrywise deviation of `a` from `a^H` (sign = 1) or `-a^H` (sign = -1)
pub fn herm_deviation(a: &CMat, sign: f64) -> f64 {
    let d = a - a.adjoint().scale(sign);
    d.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_imag(a: &CMat) -> f64 {
    a.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
}

pub fn to_complex(a: &RMat) -> CMat {
    a.map(cr)
}

pub fn real_part(a: &CMat) -> RMat {
    a.map(|z| z.re)
}

pub fn hstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn vstack(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.ncols());
    let mut out = CMat::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

pub fn vcat(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() + b.len());
    out.rows_mut(0, a.len()).copy_from(a);
    out.rows_mut(a.len(), b.len()).copy_from(b);
    out
}

/// `[v, conj(v)]` as an n x 2 matrix
pub fn with_conj(v: &CVec) -> CMat {
    let mut out = CMat::zeros(v.len(), 2);
    out.set_column(0, v);
    out.set_column(1, &v.conjugate());
    out
}

fn to_faer(a: &CMat) -> faer::Mat<C64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn to_faer_real(a: &RMat) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer(a: faer::MatRef<'_, C64>) -> CMat {
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn from_faer_real(a: faer::MatRef<'_, f64>) -> RMat {
    RMat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// full SVD a = U diag(s) V^H, s descending with min(rows, cols) entries
pub fn svd_full(a: &CMat) -> (CMat, Vec<f64>, CMat) {
    let svd = to_faer(a).svd().expect("svd converged");
    let s = (0..svd.S().dim()).map(|k| svd.S()[k].re).collect();
    (from_faer(svd.U()), s, from_faer(svd.V()))
}

/// singular values in descending order
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    to_faer(a).singular_values().expect("svd converged")
}

pub fn sigma_max(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// smallest of the min(rows, cols) singular values
pub fn sigma_min(a: &CMat) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

/// numerical rank with cutoff `rtol * sigma_max`
pub fn rank(a: &CMat, rtol: f64) -> usize {
    let sv = singular_values(a);
    let top = sv.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rtol * top).count()
}

/// Moore-Penrose pseudoinverse, singular values below `PINV_RTOL * sigma_max` dropped
pub fn pinv(a: &CMat) -> CMat {
    let (nr, nc) = a.shape();
    if nr == 0 || nc == 0 {
        return CMat::zeros(nc, nr);
    }
    let svd = to_faer(a).thin_svd().expect("svd converged");
    let (u, v) = (svd.U(), svd.V());
    let k = svd.S().dim();
    let top = if k > 0 { svd.S()[0].re } else { 0.0 };
    let mut out = CMat::zeros(nc, nr);
    for l in 0..k {
        let s = svd.S()[l].re;
        if s <= PINV_RTOL * top || s == 0.0 {
            break;
        }
        for i in 0..nc {
            let vi = v[(i, l)] / s;
            for j in 0..nr {
                out[(i, j)] += vi * u[(j, l)].conj();
            }
        }
    }
    out
}

pub fn pinv_real(a: &RMat) -> RMat {
    let (nr, nc) = a.shape();
    if nr == 0 || nc == 0 {
        return RMat::zeros(nc, nr);
    }
    let svd = to_faer_real(a).thin_svd().expect("svd converged");
    let u = from_faer_real(svd.U());
    let v = from_faer_real(svd.V());
    let k = svd.S().dim();
    let top = if k > 0 { svd.S()[0] } else { 0.0 };
    let kept = (0..k).take_while(|&l| svd.S()[l] > PINV_RTOL * top && svd.S()[l] > 0.0).count();
    let mut vs = v.columns(0, kept).into_owned();
    for l in 0..kept {
        vs.column_mut(l).unscale_mut(svd.S()[l]);
    }
    vs * u.columns(0, kept).transpose()
}

/// orthonormal basis (as columns) of null(a), cutoff `rtol * sigma_max`
pub fn null_space(a: &CMat, rtol: f64) -> CMat {
    let nc = a.ncols();
    if nc == 0 {
        return CMat::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return CMat::identity(nc, nc);
    }
    let (_, s, v) = svd_full(a);
    let top = s.first().copied().unwrap_or(0.0);
    let kept = s.iter().filter(|&&x| top > 0.0 && x > rtol * top).count();
    v.columns(kept, nc - kept).into_owned()
}

/// right singular vector for the smallest singular value of a square or tall matrix
pub fn min_right_singular_vector(a: &CMat) -> (f64, CVec) {
    let (_, s, v) = svd_full(a);
    let k = s.len() - 1;
    (s[k], v.column(k).into_owned())
}

/// eigenvalues of a Hermitian matrix, ascending
pub fn herm_eigenvalues(a: &CMat) -> Vec<f64> {
    to_faer(&herm_part(a)).self_adjoint_eigenvalues(faer::Side::Lower).expect("evd converged")
}

/// eigenvalues of a general complex square matrix
pub fn eigenvalues(a: &CMat) -> Vec<C64> {
    to_faer(a).eigenvalues().expect("evd converged")
}

/// generalized eigenvalues of a x = λ b x as (α, β) pairs with λ = α / β
pub fn generalized_eigenvalues(a: &CMat, b: &CMat) -> Vec<(C64, C64)> {
    let g = to_faer(a).generalized_eigen(to_faer(b)).expect("gevd converged");
    (0..a.nrows()).map(|k| (g.S_a()[k], g.S_b()[k])).collect()
}

pub fn outer(a: &CVec, b: &CVec) -> CMat {
    a * b.adjoint()
}

/// stack real and imaginary parts of a complex vector
pub fn realify(v: &CVec) -> RVec {
    let n = v.len();
    RVec::from_fn(2 * n, |k, _| if k < n { v[k].re } else { v[k - n].im })
}
