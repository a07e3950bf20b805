use pencil_backerr::linalg::*;
use pencil_backerr::mappings::minimal_map_any;
use pencil_backerr::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn g(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn cm(rng: &mut ChaCha8Rng, nr: usize, nc: usize) -> CMat {
    CMat::from_fn(nr, nc, |_, _| c(g(rng), g(rng)))
}

fn rm(rng: &mut ChaCha8Rng, nr: usize, nc: usize) -> CMat {
    CMat::from_fn(nr, nc, |_, _| cr(g(rng)))
}

fn proj(v: &CMat) -> CMat {
    CMat::identity(v.nrows(), v.nrows()) - v * pinv(v)
}

#[test]
fn skew_map_is_feasible_and_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..40 {
        let (n, k) = (5, 2);
        let k0 = skew_part(&cm(&mut rng, n, n));
        let x = cm(&mut rng, n, k);
        let y = &k0 * &x;
        let sol = skew_hermitian_minimal_map(&x, &y).unwrap();
        assert!((&sol.delta * &x - &y).norm() <= 1e-10 * y.norm());
        assert!(herm_deviation(&sol.delta, -1.0) <= 1e-12 * sol.fro_norm);
        assert!((sol.fro_norm - sol.closed_form_norm).abs() <= 1e-10 * sol.fro_norm);
        // skew-Hermitian Z with ZX = 0 is P Z0 P for P = I - XX^+
        let p = proj(&x);
        for _ in 0..10 {
            let z = &p * skew_part(&cm(&mut rng, n, n)) * &p;
            assert!((&sol.delta + z).norm() >= sol.fro_norm - 1e-10);
        }
        assert!(sol.fro_norm <= k0.norm() + 1e-10);
    }
}

#[test]
fn two_sided_map_is_feasible_and_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..40 {
        let (nr, nc) = (4, 6);
        let d0 = cm(&mut rng, nr, nc);
        let u = cm(&mut rng, nc, 1).column(0).into_owned();
        let w = cm(&mut rng, nr, 1).column(0).into_owned();
        let r = &d0 * &u;
        let s = d0.adjoint() * &w;
        let sol = two_sided_minimal_map(&u, &r, &w, &s).unwrap();
        assert!((&sol.delta * &u - &r).norm() <= 1e-10 * r.norm());
        assert!((sol.delta.adjoint() * &w - &s).norm() <= 1e-10 * s.norm());
        assert!(sol.spectral_inf <= sigma_max(&sol.delta) + 1e-10);
        let pw = proj(&CMat::from_columns(std::slice::from_ref(&w)));
        let pu = proj(&CMat::from_columns(std::slice::from_ref(&u)));
        for _ in 0..10 {
            let z = &pw * cm(&mut rng, nr, nc) * &pu;
            assert!((&sol.delta + z).norm() >= sol.fro_norm - 1e-10);
        }
    }
}

#[test]
fn degenerate_branches() {
    let u = rvec(&[1.0, 2.0]);
    let r = rvec(&[0.0, 1.0, 1.0]);
    let d = minimal_map_any(&u, &r, &CVec::zeros(3), &CVec::zeros(2)).unwrap();
    assert!((&d * &u - &r).norm() < 1e-14);
    let w = rvec(&[1.0, 0.0, 0.0]);
    let s = rvec(&[3.0, 4.0]);
    let d = minimal_map_any(&CVec::zeros(2), &CVec::zeros(3), &w, &s).unwrap();
    assert!((d.adjoint() * &w - &s).norm() < 1e-14);
    assert!(minimal_map_any(&CVec::zeros(2), &r, &w, &s).is_err());
}

#[test]
fn real_map_is_feasible_and_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let (nr, nc) = (4, 5);
        let d0 = rm(&mut rng, nr, nc);
        let u = cm(&mut rng, nc, 1).column(0).into_owned();
        let w = cm(&mut rng, nr, 1).column(0).into_owned();
        let r = &d0 * &u;
        let s = d0.transpose() * &w;
        let sol = real_two_sided_minimal_map(&u, &r, &w, &s).unwrap();
        let dc = to_complex(&sol.delta);
        assert!((&dc * &u - &r).norm() <= 1e-10 * r.norm());
        assert!((dc.transpose() * &w - &s).norm() <= 1e-10 * s.norm());
        assert!(sol.imag_residue <= 1e-10 * sol.fro_norm);
        let pw = proj(&with_conj(&w));
        let pu = proj(&with_conj(&u));
        for _ in 0..10 {
            let z = real_part(&(&pw * rm(&mut rng, nr, nc) * &pu));
            assert!((&sol.delta + z).norm() >= sol.fro_norm - 1e-10);
        }
        assert!(sol.fro_norm <= d0.norm() + 1e-10);
    }
}
