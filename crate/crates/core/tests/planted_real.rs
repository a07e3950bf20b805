//! real pencils with a planted real perturbation that makes (λ, x) exact

use pencil_backerr::linalg::*;
use pencil_backerr::*;

fn real_scopes() -> Vec<PerturbationScope> {
    PerturbationScope::all_supported().into_iter().filter(|s| s.field == Field::Real).collect()
}

/// x2 - conj(v) (x2^T v) / ‖v‖², so that the result satisfies x2^T v = 0
fn t_orth(x2: &CVec, v: &CVec) -> CVec {
    let k = (x2.transpose() * v)[(0, 0)] / v.norm_squared();
    x2 - v.conjugate() * k
}

#[test]
fn planted_values_never_exceed_plant() {
    for k in 0..12u64 {
        let p = random_pencil(4, 3, 500 + k, true).unwrap();
        for scope in real_scopes() {
            let q = admissible_query(&p, 900 + k, Some(scope)).unwrap();
            let d0 = random_feasible_perturbation(scope, &p, &q, k, 0.5).unwrap().expect("planted perturbation exists");
            let (res, tol) = residual_closure(&p, &q, &d0);
            assert!(res <= tol, "{scope}: planted pair not exact");
            let rep = eta(scope, &p, &q).unwrap();
            assert!(rep.is_finite(), "{scope}");
            assert!(rep.exact().unwrap() <= d0.norm() + 1e-8, "{scope}");
        }
    }
}

#[test]
fn generic_pairs_are_infinite_and_infeasible() {
    for k in 0..12u64 {
        let p = random_pencil(4, 3, 600 + k, true).unwrap();
        let q = admissible_query(&p, 40 + k, Some(PerturbationScope::block(BlockSet::JB))).unwrap();
        for scope in real_scopes() {
            let rep = eta(scope, &p, &q).unwrap();
            assert!(!rep.is_finite(), "{scope}");
            assert!(random_feasible_perturbation(scope, &p, &q, 0, 0.0).unwrap().is_none(), "{scope}");
        }
    }
}

#[test]
fn eb_condition_uses_j_plus_r() {
    let scope = PerturbationScope::real_block(BlockSet::EB);
    for k in 0..12u64 {
        let p = random_pencil(4, 3, 700 + k, true).unwrap();
        let base = admissible_query(&p, k, Some(PerturbationScope::block(BlockSet::JB))).unwrap();
        // x2^T E x1 = 0 alone does not make the pair reachable by real (ΔE, ΔB)
        let x2 = t_orth(base.x2(), &(p.e() * base.x1()));
        let q = EigenPairQuery::new(base.lambda(), base.x1().clone(), x2, base.x3().clone()).unwrap();
        assert!(random_feasible_perturbation(scope, &p, &q, 0, 0.0).unwrap().is_none());
        let rep = eta(scope, &p, &q).unwrap();
        assert!(!rep.is_finite());
        assert_eq!(rep.failed_conditions()[0].name, "x2^T (J + R) x1 = 0");
        // x2^T (J + R) x1 = 0 does
        let x2 = t_orth(base.x2(), &((p.j() + p.r()) * base.x1()));
        let q = EigenPairQuery::new(base.lambda(), base.x1().clone(), x2, base.x3().clone()).unwrap();
        assert!(random_feasible_perturbation(scope, &p, &q, 0, 0.0).unwrap().is_some());
        assert!(eta(scope, &p, &q).unwrap().is_finite());
    }
}

#[test]
fn jr_needs_bt_x1() {
    let scope = PerturbationScope::real_block(BlockSet::JR);
    let p = random_pencil(4, 3, 801, true).unwrap();
    let base = admissible_query(&p, 3, Some(PerturbationScope::block(BlockSet::JB))).unwrap();
    let x2 = t_orth(base.x2(), &(p.e() * base.x1()));
    let q = EigenPairQuery::new(base.lambda(), base.x1().clone(), x2, base.x3().clone()).unwrap();
    let rep = eta(scope, &p, &q).unwrap();
    assert_eq!(rep.failed_conditions().iter().map(|c| c.name).collect::<Vec<_>>(), vec!["B^T x1 = 0"]);
    assert!(random_feasible_perturbation(scope, &p, &q, 0, 0.0).unwrap().is_none());
}
