//! hand-derived values on tiny pencils

use pencil_backerr::linalg::*;
use pencil_backerr::*;

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

fn small_query() -> EigenPairQuery {
    EigenPairQuery::imaginary(0.25, CVec::zeros(2), rvec(&[1.0, 1.0]), CVec::zeros(3)).unwrap()
}

fn scalar() -> StructuredPencil {
    StructuredPencil::new(rmat(1, 1, &[0.0]), rmat(1, 1, &[1.0]), rmat(1, 1, &[1.0]), rmat(1, 1, &[1.0]), rmat(1, 1, &[1.0])).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn assembled_blocks() {
    let p = StructuredPencil::new(rmat(1, 1, &[0.0]), rmat(1, 1, &[1.0]), rmat(1, 1, &[0.0]), rmat(1, 1, &[1.0]), rmat(1, 1, &[1.0])).unwrap();
    let want = rmat(3, 3, &[0.0, -1.0, 1.0, -1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
    assert_eq!(p.m_matrix(), want);
    let p2 = StructuredPencil::new(rmat(1, 1, &[0.0]), rmat(1, 1, &[1.0]), rmat(1, 1, &[2.0]), rmat(1, 1, &[1.0]), rmat(1, 1, &[1.0])).unwrap();
    assert_eq!(p2.n_matrix(), rmat(3, 3, &[0.0, 2.0, 0.0, -2.0, 0.0, 0.0, 0.0, 0.0, 0.0]));
    let m = small().m_matrix();
    assert_eq!(m.view((0, 2), (2, 2)).into_owned(), rmat(2, 2, &[0.0, -1.0, 1.0, -1.0]));
    assert_eq!(small().n_matrix(), CMat::zeros(7, 7));
}

#[test]
fn small_residual() {
    let (p, q) = (small(), small_query());
    let lx = p.evaluate(q.lambda()) * q.x();
    let mut want = CVec::zeros(7);
    want[0] = cr(-1.0);
    assert!((lx - want).norm() < 1e-15);
    assert!(close(p.residual(&q), 1.0, 1e-15));
}

#[test]
fn small_unstructured_and_even() {
    let (p, q) = (small(), small_query());
    let (e, ev) = (eta_unstructured(&p, &q).unwrap(), eta_even(&p, &q).unwrap());
    assert!(close(e, 4.0 / 34f64.sqrt(), 1e-14), "{e}");
    // L(λ)x = -e1 and x1 = 0, so x^H L(λ)x = 0 and only the doubled residual remains
    assert!(close(ev, (4.0f64 / 4.25).sqrt(), 1e-14), "{ev}");
    let lx = p.evaluate(q.lambda()) * q.x();
    assert_eq!(q.x().dotc(&lx), cr(0.0));
}

#[test]
fn small_block_values() {
    let (p, q) = (small(), small_query());
    let je = eta_block(BlockSet::JE, &p, &q).unwrap().exact().unwrap();
    assert!(close(je, std::f64::consts::FRAC_1_SQRT_2 / (17.0f64 / 16.0).sqrt(), 1e-14));
    assert!(close(je, 0.68599, 1e-5));
    let jr = eta_block(BlockSet::JR, &p, &q).unwrap().exact().unwrap();
    assert!(close(jr, 0.5, 1e-14));
}

#[test]
fn small_re_symmetric_bounds() {
    let (p, q) = (small(), small_query());
    let rep = eta_symmetry(BlockSet::RE, &p, &q).unwrap();
    match rep.value {
        ReportValue::Bounds { lower, upper } => {
            assert!((lower - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
            assert!((upper - 2.375f64.sqrt()).abs() < 1e-12);
        }
        other => panic!("expected bounds, got {other:?}"),
    }
    // Δ = diag(-1, 0) maps x2 to r, realised by ΔR = -Δ with objective 1
    let d = PerturbationBlocks { dr: Some(rmat(2, 2, &[1.0, 0.0, 0.0, 0.0])), de: Some(CMat::zeros(2, 2)), ..Default::default() };
    let (res, tol) = residual_closure(&p, &q, &d);
    assert!(res <= tol);
    assert!(close(d.norm(), 1.0, 1e-15));
    assert!(rep.feasible_upper.unwrap() <= 1.0 + 1e-12);
}

#[test]
fn scalar_eigenvalue_errors() {
    let p = scalar();
    let lam = c(0.0, 1.0);
    let je = eta_block_eigenvalue(BlockSet::JE, &p, lam).unwrap().value;
    assert!(close(je, 1.0, 1e-14));
    let jre = eta_block_eigenvalue(BlockSet::JRE, &p, lam).unwrap().value;
    assert!(close(jre, 2f64.sqrt() / 3f64.sqrt(), 1e-14));
    let jr = eta_symmetry_eigenvalue(BlockSet::JR, &p, lam).unwrap().value;
    assert!(close(jr, 2f64.sqrt(), 1e-14));
    let jrb = eta_symmetry_eigenvalue(BlockSet::JRB, &p, lam).unwrap().value;
    assert!(jrb <= jr + 1e-15);
}

#[test]
fn je_split_at_unit_lambda() {
    let d = CMat::identity(2, 2);
    let blocks = backward::split_block(BlockSet::JE, I, &d, None);
    let dj = blocks.dj.unwrap();
    let de = blocks.de.unwrap();
    assert!((&dj - CMat::identity(2, 2).scale(0.5)).norm() < 1e-15);
    assert!((&de - CMat::identity(2, 2) * c(0.0, -0.5)).norm() < 1e-15);
    assert!((dj + de * I - d).norm() < 1e-15);
}

#[test]
fn jr_symmetric_split() {
    let d = rmat(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let blocks = backward::split_symmetric(BlockSet::JR, I, &d, None);
    let dj = blocks.dj.unwrap();
    let dr = blocks.dr.unwrap();
    assert!((&dj - rmat(2, 2, &[0.0, 0.5, -0.5, 0.0])).norm() < 1e-15);
    assert!((&dr - rmat(2, 2, &[0.0, -0.5, -0.5, 0.0])).norm() < 1e-15);
    assert!((dj - dr - d).norm() < 1e-15);
}

#[test]
fn zero_delta_splits_to_zero() {
    let z = CMat::zeros(3, 3);
    for b in [BlockSet::JE, BlockSet::RE, BlockSet::JR, BlockSet::JRE] {
        assert_eq!(backward::split_block(b, c(0.0, 2.0), &z, None).norm(), 0.0);
        assert_eq!(backward::split_symmetric(b, c(0.0, 2.0), &z, None).norm(), 0.0);
    }
}

#[test]
fn exact_eigenpair_has_zero_error() {
    // x2 ∈ null(J - R) at any λ when E = 0 and x2 = e1 with J e1 = R e1 = 0
    let p = StructuredPencil::new(CMat::zeros(2, 2), rmat(2, 2, &[0.0, 0.0, 0.0, 1.0]), CMat::zeros(2, 2), CMat::zeros(2, 1), CMat::identity(1, 1)).unwrap();
    let q = EigenPairQuery::imaginary(0.7, CVec::zeros(2), rvec(&[1.0, 0.0]), CVec::zeros(1)).unwrap();
    assert!(p.residual(&q) < 1e-15);
    for scope in [PerturbationScope::block(BlockSet::JE), PerturbationScope::block(BlockSet::JRB), PerturbationScope::sym(BlockSet::JR)] {
        let rep = eta(scope, &p, &q).unwrap();
        assert_eq!(rep.exact(), Some(0.0), "{scope}");
        assert_eq!(rep.minimizer.unwrap().norm(), 0.0);
    }
    assert_eq!(eta_unstructured(&p, &q).unwrap(), 0.0);
    assert_eq!(eta_even(&p, &q).unwrap(), 0.0);
}

#[test]
fn finiteness_dichotomies() {
    let p = random_pencil(4, 3, 2, false).unwrap();
    let q = admissible_query(&p, 9, None).unwrap();
    let je = PerturbationScope::block(BlockSet::JE);
    assert!(finiteness_check(je, &p, &q).unwrap().iter().all(|c| c.holds()));
    // generic x1 breaks B^H x1 = 0
    let q2 = EigenPairQuery::new(q.lambda(), rvec(&[1.0, 2.0, 3.0, 4.0]), q.x2().clone(), q.x3().clone()).unwrap();
    assert!(!eta(je, &p, &q2).unwrap().is_finite());
    // nonzero x3 breaks every B scope
    let q3 = EigenPairQuery::new(q.lambda(), q.x1().clone(), q.x2().clone(), rvec(&[0.0, 1.0, 0.0])).unwrap();
    let rep = eta(PerturbationScope::block(BlockSet::JB), &p, &q3).unwrap();
    assert!(!rep.is_finite());
    assert_eq!(rep.failed_conditions()[0].name, "x3 = 0");
}

#[test]
fn real_rank_precondition() {
    let p = random_pencil(4, 3, 3, true).unwrap();
    let q = admissible_query(&p, 1, Some(PerturbationScope::real_block(BlockSet::JR))).unwrap();
    let real_x2 = q.x2().map(|z| cr(z.re));
    let q2 = EigenPairQuery::new(q.lambda(), q.x1().clone(), real_x2, q.x3().clone()).unwrap();
    let err = eta_block_real(BlockSet::JR, &p, &q2).unwrap_err();
    assert_eq!(err, BackwardError::RankDeficient { which: "x2", rank: 1 });
}

#[test]
fn certificate_on_unperturbed_pencil() {
    let p = scalar();
    // J - R + λE = -1 + λ is never zero on the imaginary axis
    let cert = certify_eigenvalue(&p, c(0.0, 1.0), &PerturbationBlocks::default());
    assert!(!cert.holds());
    let ev = eta_block_eigenvalue(BlockSet::JE, &p, c(0.0, 1.0)).unwrap();
    let cert = certify_eigenvalue(&p, c(0.0, 1.0), ev.report.minimizer.as_ref().unwrap());
    assert!(cert.holds(), "{cert:?}");
}

#[test]
fn two_sided_norm_identity() {
    // ‖Δ‖² = ‖r‖²/‖u‖² + ‖s‖²/‖w‖² - |s^H u|² / (‖u‖²‖w‖²)
    let u = cvec(&[(1.0, 0.5), (0.0, -1.0), (2.0, 0.0)]);
    let w = cvec(&[(0.5, 0.0), (1.0, 1.0)]);
    let d0 = cmat(&[&[(1.0, 0.0), (0.0, 2.0), (-1.0, 1.0)], &[(0.5, -0.5), (3.0, 0.0), (0.0, 0.0)]]);
    let r = &d0 * &u;
    let s = d0.adjoint() * &w;
    let sol = two_sided_minimal_map(&u, &r, &w, &s).unwrap();
    let uu = u.norm_squared();
    let ww = w.norm_squared();
    let want = (r.norm_squared() / uu + s.norm_squared() / ww - s.dotc(&u).norm_sqr() / (uu * ww)).sqrt();
    assert!(close(sol.fro_norm, want, 1e-13));
    assert!(sol.radical_mismatch);
}
