//! the structured pencil, eigenpair queries and seeded generators

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::linalg::*;
use crate::scope::{BlockSet, Field, PerturbationScope};

/// relative threshold for the real part of a purely imaginary eigenvalue
pub const IMAG_RTOL: f64 = 1e-12;
pub const LAMBDA_MIN: f64 = 1e-300;
/// generated pencils keep finite eigenvalues at least this far from the imaginary axis
pub const PASSIVITY_MARGIN: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("block {block} is {got_r}x{got_c}, expected {want_r}x{want_c}")]
    DimensionMismatch { block: &'static str, got_r: usize, got_c: usize, want_r: usize, want_c: usize },
    #[error("J is not skew-Hermitian (deviation {0:.3e})")]
    NotSkewHermitian(f64),
    #[error("{0} is not Hermitian (deviation {1:.3e})")]
    NotHermitian(&'static str, f64),
    #[error("S is not positive definite (smallest eigenvalue {0:.3e})")]
    NotPositiveDefinite(f64),
    #[error("block {0} has a non-finite entry")]
    NonFinite(&'static str),
    #[error("λ must lie in iR \\ {{0}} (nonzero, purely imaginary), got {0}")]
    NotImaginary(C64),
    #[error("eigenvector is zero")]
    ZeroVector,
    #[error("no admissible vector: {0} is trivial")]
    EmptyKernel(&'static str),
    #[error("no strictly passive draw after {0} attempts")]
    NotPassive(usize),
}

/// L(z) = M + zN built from J, R, E, B, S
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredPencil {
    j: CMat,
    r: CMat,
    e: CMat,
    b: CMat,
    s: CMat,
    is_real: bool,
}

fn check_shape(name: &'static str, a: &CMat, r: usize, c: usize) -> Result<(), ModelError> {
    if a.shape() != (r, c) {
        return Err(ModelError::DimensionMismatch { block: name, got_r: a.nrows(), got_c: a.ncols(), want_r: r, want_c: c });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(ModelError::NonFinite(name));
    }
    Ok(())
}

fn sym_tol(a: &CMat) -> f64 {
    1e-12 * fro(a).max(1.0)
}

impl StructuredPencil {
    pub fn new(j: CMat, r: CMat, e: CMat, b: CMat, s: CMat) -> Result<Self, ModelError> {
        let n = j.nrows();
        let m = s.nrows();
        check_shape("J", &j, n, n)?;
        check_shape("R", &r, n, n)?;
        check_shape("E", &e, n, n)?;
        check_shape("B", &b, n, m)?;
        check_shape("S", &s, m, m)?;
        let dj = herm_deviation(&j, -1.0);
        if dj > sym_tol(&j) {
            return Err(ModelError::NotSkewHermitian(dj));
        }
        for (name, a) in [("R", &r), ("E", &e), ("S", &s)] {
            let d = herm_deviation(a, 1.0);
            if d > sym_tol(a) {
                return Err(ModelError::NotHermitian(name, d));
            }
        }
        if m > 0 {
            let lo = herm_eigenvalues(&s)[0];
            if lo <= 1e-12 * fro(&s) {
                return Err(ModelError::NotPositiveDefinite(lo));
            }
        }
        let is_real = [&j, &r, &e, &b, &s].iter().all(|a| max_imag(a) == 0.0);
        Ok(StructuredPencil { j, r, e, b, s, is_real })
    }

    pub fn n(&self) -> usize {
        self.j.nrows()
    }

    pub fn m(&self) -> usize {
        self.s.nrows()
    }

    pub fn size(&self) -> usize {
        2 * self.n() + self.m()
    }

    pub fn j(&self) -> &CMat {
        &self.j
    }

    pub fn r(&self) -> &CMat {
        &self.r
    }

    pub fn e(&self) -> &CMat {
        &self.e
    }

    pub fn b(&self) -> &CMat {
        &self.b
    }

    pub fn s(&self) -> &CMat {
        &self.s
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    /// J - R + zE
    pub fn a_of(&self, z: C64) -> CMat {
        &self.j - &self.r + self.e.map(|v| v * z)
    }

    pub fn m_matrix(&self) -> CMat {
        let (n, m) = (self.n(), self.m());
        let mut out = CMat::zeros(2 * n + m, 2 * n + m);
        let jr = &self.j - &self.r;
        out.view_mut((0, n), (n, n)).copy_from(&jr);
        out.view_mut((n, 0), (n, n)).copy_from(&jr.adjoint());
        out.view_mut((0, 2 * n), (n, m)).copy_from(&self.b);
        out.view_mut((2 * n, 0), (m, n)).copy_from(&self.b.adjoint());
        out.view_mut((2 * n, 2 * n), (m, m)).copy_from(&self.s);
        out
    }

    pub fn n_matrix(&self) -> CMat {
        let (n, m) = (self.n(), self.m());
        let mut out = CMat::zeros(2 * n + m, 2 * n + m);
        out.view_mut((0, n), (n, n)).copy_from(&self.e);
        out.view_mut((n, 0), (n, n)).copy_from(&(-self.e.adjoint()));
        out
    }

    /// L(z) = M + zN
    pub fn evaluate(&self, z: C64) -> CMat {
        self.m_matrix() + self.n_matrix().map(|v| v * z)
    }

    /// finite eigenvalues of M + zN
    pub fn finite_eigenvalues(&self) -> Vec<C64> {
        // L(z)x = 0 ⟺ Mx = z(-N)x; β ≈ 0 marks an infinite eigenvalue
        let pairs = generalized_eigenvalues(&self.m_matrix(), &(-self.n_matrix()));
        pairs
            .into_iter()
            .filter(|(a, b)| b.norm() > 1e-12 * a.norm())
            .map(|(a, b)| a / b)
            .collect()
    }

    /// ‖L(λ)x‖
    pub fn residual(&self, q: &EigenPairQuery) -> f64 {
        (self.evaluate(q.lambda()) * q.x()).norm()
    }

    /// no finite eigenvalue within `PASSIVITY_MARGIN` of the imaginary axis
    pub fn strictly_passive(&self) -> bool {
        self.finite_eigenvalues().iter().all(|z| z.re.abs() > PASSIVITY_MARGIN)
    }

    /// the same pencil with its blocks replaced by L - ΔL
    pub fn perturbed(&self, d: &PerturbationBlocks) -> Result<StructuredPencil, ModelError> {
        let sub = |a: &CMat, da: &Option<CMat>| match da {
            Some(x) => a - x,
            None => a.clone(),
        };
        StructuredPencil::new(sub(&self.j, &d.dj), sub(&self.r, &d.dr), sub(&self.e, &d.de), sub(&self.b, &d.db), self.s.clone())
    }
}

/// a candidate eigenpair with λ on the imaginary axis; x is kept unnormalized
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairQuery {
    lambda: C64,
    x1: CVec,
    x2: CVec,
    x3: CVec,
}

impl EigenPairQuery {
    pub fn new(lambda: C64, x1: CVec, x2: CVec, x3: CVec) -> Result<Self, ModelError> {
        if !lambda.re.is_finite() || !lambda.im.is_finite() || lambda.norm() < LAMBDA_MIN || lambda.re.abs() > IMAG_RTOL * lambda.norm() {
            return Err(ModelError::NotImaginary(lambda));
        }
        if x1.iter().chain(x2.iter()).chain(x3.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ModelError::NonFinite("x"));
        }
        if x1.norm() == 0.0 && x2.norm() == 0.0 && x3.norm() == 0.0 {
            return Err(ModelError::ZeroVector);
        }
        Ok(EigenPairQuery { lambda: c(0.0, lambda.im), x1, x2, x3 })
    }

    /// λ = i t
    pub fn imaginary(t: f64, x1: CVec, x2: CVec, x3: CVec) -> Result<Self, ModelError> {
        Self::new(c(0.0, t), x1, x2, x3)
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn x1(&self) -> &CVec {
        &self.x1
    }

    pub fn x2(&self) -> &CVec {
        &self.x2
    }

    pub fn x3(&self) -> &CVec {
        &self.x3
    }

    pub fn x(&self) -> CVec {
        vcat(&vcat(&self.x1, &self.x2), &self.x3)
    }

    pub fn x_norm(&self) -> f64 {
        self.x().norm()
    }

    pub fn with_lambda(&self, t: f64) -> Result<Self, ModelError> {
        Self::imaginary(t, self.x1.clone(), self.x2.clone(), self.x3.clone())
    }

    pub fn check_dims(&self, p: &StructuredPencil) -> Result<(), ModelError> {
        let (n, m) = (p.n(), p.m());
        for (name, v, want) in [("x1", &self.x1, n), ("x2", &self.x2, n), ("x3", &self.x3, m)] {
            if v.len() != want {
                return Err(ModelError::DimensionMismatch { block: name, got_r: v.len(), got_c: 1, want_r: want, want_c: 1 });
            }
        }
        Ok(())
    }
}

/// perturbation of the individual blocks; absent blocks are zero
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PerturbationBlocks {
    pub dj: Option<CMat>,
    pub dr: Option<CMat>,
    pub de: Option<CMat>,
    pub db: Option<CMat>,
}

impl PerturbationBlocks {
    pub fn norm(&self) -> f64 {
        [&self.dj, &self.dr, &self.de, &self.db]
            .iter()
            .filter_map(|b| b.as_ref())
            .map(|b| b.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// (ΔM, ΔN) with ΔJ - ΔR in the (1,2) slot, ΔB in (1,3), ΔE in ΔN(1,2), ΔS = 0
    pub fn assemble(&self, n: usize, m: usize) -> (CMat, CMat) {
        let dim = 2 * n + m;
        let mut dm = CMat::zeros(dim, dim);
        let mut dn = CMat::zeros(dim, dim);
        let mut jr = CMat::zeros(n, n);
        if let Some(x) = &self.dj {
            jr += x;
        }
        if let Some(x) = &self.dr {
            jr -= x;
        }
        dm.view_mut((0, n), (n, n)).copy_from(&jr);
        dm.view_mut((n, 0), (n, n)).copy_from(&jr.adjoint());
        if let Some(x) = &self.db {
            dm.view_mut((0, 2 * n), (n, m)).copy_from(x);
            dm.view_mut((2 * n, 0), (m, n)).copy_from(&x.adjoint());
        }
        if let Some(x) = &self.de {
            dn.view_mut((0, n), (n, n)).copy_from(x);
            dn.view_mut((n, 0), (n, n)).copy_from(&(-x.adjoint()));
        }
        (dm, dn)
    }

    /// ΔL(z) = ΔM + zΔN
    pub fn evaluate(&self, n: usize, m: usize, z: C64) -> CMat {
        let (dm, dn) = self.assemble(n, m);
        dm + dn.map(|v| v * z)
    }
}

/// knobs for `random_pencil_with`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorOptions {
    pub real: bool,
    /// dimension of the planted common kernel of R and B^H; `None` means n / 2
    pub kernel_dim: Option<usize>,
    /// redraw until no finite eigenvalue is near the imaginary axis
    pub strictly_passive: bool,
    pub max_redraws: usize,
}

impl Default for GeneratorOptions {
    fn default() -> Self {
        GeneratorOptions { real: false, kernel_dim: None, strictly_passive: true, max_redraws: 100 }
    }
}

pub(crate) fn gaussian(rng: &mut ChaCha8Rng, nr: usize, nc: usize, real: bool) -> CMat {
    CMat::from_fn(nr, nc, |_, _| {
        if real {
            cr(rng.sample(StandardNormal))
        } else {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            c(a, b).unscale(std::f64::consts::SQRT_2)
        }
    })
}

pub(crate) fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize, real: bool) -> CVec {
    gaussian(rng, n, 1, real).column(0).into_owned()
}

fn exact_herm(a: &CMat) -> CMat {
    herm_part(a)
}

fn draw_pencil(rng: &mut ChaCha8Rng, n: usize, m: usize, real: bool, k: usize) -> StructuredPencil {
    let g = gaussian(rng, n, n, real);
    let j = skew_part(&g);
    let proj = if k > 0 {
        let v = gaussian(rng, n, k, real).qr().q();
        CMat::identity(n, n) - &v * v.adjoint()
    } else {
        CMat::identity(n, n)
    };
    let gr = gaussian(rng, n, n, real);
    let r = exact_herm(&(&proj * gr.adjoint() * &gr * &proj));
    let ge = gaussian(rng, n, n, real);
    let e = exact_herm(&(ge.adjoint() * &ge + CMat::identity(n, n).scale(0.1)));
    let b = &proj * gaussian(rng, n, m, real);
    let gs = gaussian(rng, m, m, real);
    let s = exact_herm(&(gs.adjoint() * &gs + CMat::identity(m, m).scale(0.1)));
    StructuredPencil::new(j, r, e, b, s).expect("generated blocks satisfy the structure")
}

/// seeded strictly passive pencil; R and B^H share an n/2-dimensional kernel
pub fn random_pencil(n: usize, m: usize, seed: u64, real: bool) -> Result<StructuredPencil, ModelError> {
    random_pencil_with(n, m, seed, &GeneratorOptions { real, ..Default::default() })
}

pub fn random_pencil_with(n: usize, m: usize, seed: u64, opts: &GeneratorOptions) -> Result<StructuredPencil, ModelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = opts.kernel_dim.unwrap_or(n / 2).min(n);
    for _ in 0..opts.max_redraws.max(1) {
        let p = draw_pencil(&mut rng, n, m, opts.real, k);
        if !opts.strictly_passive || p.strictly_passive() {
            return Ok(p);
        }
    }
    Err(ModelError::NotPassive(opts.max_redraws.max(1)))
}

fn random_in_span(rng: &mut ChaCha8Rng, basis: &CMat) -> CVec {
    let coef = gaussian_vec(rng, basis.ncols(), false);
    let v = basis * coef;
    let nv = v.norm();
    v.unscale(nv)
}

/// project `z` so that z^T v = 0
fn transpose_orthogonal(z: &CVec, v: &CVec) -> CVec {
    let vv = v.norm_squared();
    if vv == 0.0 {
        return z.clone();
    }
    let zt_v = z.transpose() * v;
    z - v.conjugate() * (zt_v[(0, 0)] / vv)
}

/// draw λ = i t, t uniform on [-3, 3] with |t| >= 0.05
pub fn draw_lambda(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let t: f64 = rng.gen_range(-3.0..=3.0);
        if t.abs() >= 0.05 {
            return t;
        }
    }
}

/// seeded (λ, x) for which the scope's finiteness conditions hold;
/// `None` asks for a pair that is admissible for every scope at once
pub fn admissible_query(p: &StructuredPencil, seed: u64, scope: Option<PerturbationScope>) -> Result<EigenPairQuery, ModelError> {
    use BlockSet::*;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.n();
    let t = draw_lambda(&mut rng);
    let lambda = c(0.0, t);
    let all = scope.is_none();
    let blocks = scope.map(|s| s.blocks);
    let needs_rker = all || scope == Some(PerturbationScope::sym(JE));
    let needs_bker = all || matches!(blocks, Some(JE | RE | JR | JRE));
    let ker_tol = 1e-10;
    let bh = p.b().adjoint();
    let x1_basis = match (needs_rker, needs_bker) {
        (true, _) => {
            let k = null_space(&vstack(&bh, p.r()), ker_tol);
            if k.ncols() == 0 {
                return Err(ModelError::EmptyKernel(if all { "null(B^H) ∩ null(R)" } else { "null(R)" }));
            }
            k
        }
        (false, true) => {
            let k = null_space(&bh, ker_tol);
            if k.ncols() == 0 {
                return Err(ModelError::EmptyKernel("null(B^H)"));
            }
            k
        }
        (false, false) => CMat::identity(n, n),
    };
    let x2_basis = if needs_rker {
        let k = null_space(p.r(), ker_tol);
        if k.ncols() == 0 {
            return Err(ModelError::EmptyKernel("null(R)"));
        }
        k
    } else {
        CMat::identity(n, n)
    };
    let x1 = random_in_span(&mut rng, &x1_basis);
    let mut x2 = random_in_span(&mut rng, &x2_basis);
    if let Some(s) = scope {
        if s.field == Field::Real {
            // the real variants also need a bilinear condition on (x1, x2)
            let v = match s.blocks {
                EB => (p.j() + p.r()) * &x1,
                _ => p.e() * &x1,
            };
            x2 = transpose_orthogonal(&x2, &v);
        }
    }
    let x3 = CVec::zeros(p.m());
    EigenPairQuery::new(lambda, x1, x2, x3)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> StructuredPencil {
        StructuredPencil::new(
            rmat(2, 2, &[0.0, -1.0, 1.0, 0.0]),
            rmat(2, 2, &[0.0, 0.0, 0.0, 1.0]),
            CMat::zeros(2, 2),
            CMat::zeros(2, 3),
            CMat::identity(3, 3),
        )
        .unwrap()
    }

    #[test]
    fn rejects_hermitian_j() {
        let j = rmat(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let err = StructuredPencil::new(j, CMat::zeros(2, 2), CMat::zeros(2, 2), CMat::zeros(2, 1), CMat::identity(1, 1)).unwrap_err();
        assert!(matches!(err, ModelError::NotSkewHermitian(_)));
    }

    #[test]
    fn rejects_indefinite_s() {
        let s = rmat(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let err = StructuredPencil::new(CMat::zeros(1, 1), CMat::zeros(1, 1), CMat::zeros(1, 1), CMat::zeros(1, 2), s).unwrap_err();
        assert!(matches!(err, ModelError::NotPositiveDefinite(_)));
    }

    #[test]
    fn rejects_shape() {
        let err = StructuredPencil::new(CMat::zeros(2, 2), CMat::zeros(2, 2), CMat::zeros(2, 2), CMat::zeros(3, 1), CMat::identity(1, 1)).unwrap_err();
        assert!(matches!(err, ModelError::DimensionMismatch { block: "B", .. }));
    }

    #[test]
    fn m_hermitian_n_skew() {
        let p = random_pencil(3, 2, 5, false).unwrap();
        assert!(herm_deviation(&p.m_matrix(), 1.0) < 1e-13);
        assert!(herm_deviation(&p.n_matrix(), -1.0) < 1e-13);
        assert_eq!(p.evaluate(c(0.0, 0.0)), p.m_matrix());
    }

    #[test]
    fn lambda_validation() {
        let x = rvec(&[1.0, 0.0]);
        let z = CVec::zeros(3);
        assert!(EigenPairQuery::new(c(0.5, 0.0), x.clone(), x.clone(), z.clone()).is_err());
        assert!(EigenPairQuery::new(c(0.0, 0.0), x.clone(), x.clone(), z.clone()).is_err());
        assert!(EigenPairQuery::new(c(1e-14, 0.25), x.clone(), x.clone(), z.clone()).is_ok());
        assert!(EigenPairQuery::new(c(0.0, 0.25), CVec::zeros(2), CVec::zeros(2), z).is_err());
    }

    #[test]
    fn small_pencil_is_real() {
        assert!(small().is_real());
    }

    #[test]
    fn generated_pencil_is_passive_and_has_kernel() {
        let p = random_pencil(4, 3, 11, false).unwrap();
        assert!(p.strictly_passive());
        // 2n finite eigenvalues, m infinite ones
        assert_eq!(p.finite_eigenvalues().len(), 8);
        let q = admissible_query(&p, 3, None).unwrap();
        assert!((p.b().adjoint() * q.x1()).norm() < 1e-12);
        assert!((p.r() * q.x2()).norm() < 1e-12);
        assert!(q.lambda().im.abs() >= 0.05 && q.lambda().im.abs() <= 3.0);
    }

    #[test]
    fn definite_r_has_no_kernel() {
        let p = random_pencil_with(3, 2, 1, &GeneratorOptions { kernel_dim: Some(0), ..Default::default() }).unwrap();
        assert!(matches!(admissible_query(&p, 0, None), Err(ModelError::EmptyKernel(_))));
    }
}
