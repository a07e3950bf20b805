use pencil_backerr::linalg::*;
use pencil_backerr::*;
use proptest::prelude::*;

const TOL: f64 = 1e-10;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn pencil(seed: u64, real: bool) -> StructuredPencil {
    random_pencil(4, 3, seed, real).unwrap()
}

fn check_class(scope: PerturbationScope, d: &PerturbationBlocks) {
    let tol = 1e-12 * d.norm().max(1.0);
    if scope.structure == StructureClass::SymmetryPreserving {
        if let Some(j) = &d.dj {
            assert!(herm_deviation(j, -1.0) <= tol);
        }
        for x in [&d.dr, &d.de].into_iter().flatten() {
            assert!(herm_deviation(x, 1.0) <= tol);
        }
    }
    if scope.field == Field::Real {
        for x in [&d.dj, &d.dr, &d.de, &d.db].into_iter().flatten() {
            assert_eq!(max_imag(x), 0.0);
        }
    }
    for (b, x) in [(Block::J, &d.dj), (Block::R, &d.dr), (Block::E, &d.de), (Block::B, &d.db)] {
        if !scope.blocks.contains(b) {
            assert!(x.as_ref().is_none_or(|m| m.norm() == 0.0), "{scope} touches {b:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn pencil_is_even(seed in 0u64..10_000, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let p = pencil(seed, false);
        let z = c(re, im);
        prop_assert!(herm_deviation(&p.m_matrix(), 1.0) == 0.0);
        prop_assert!(herm_deviation(&p.n_matrix(), -1.0) == 0.0);
        let lhs = p.evaluate(z).adjoint();
        let rhs = p.evaluate(-z.conj());
        prop_assert!((lhs - rhs).norm() <= 1e-13 * p.evaluate(z).norm());
    }

    #[test]
    fn residual_is_homogeneous(seed in 0u64..10_000, a in -5.0f64..5.0, b in -5.0f64..5.0) {
        prop_assume!(a.abs() + b.abs() > 1e-3);
        let p = pencil(seed, false);
        let q = admissible_query(&p, seed, None).unwrap();
        let k = c(a, b);
        let qs = EigenPairQuery::new(q.lambda(), q.x1() * k, q.x2() * k, q.x3() * k).unwrap();
        prop_assert!(rel(p.residual(&qs), k.norm() * p.residual(&q)) < 1e-13);
    }

    #[test]
    fn errors_are_scale_invariant(seed in 0u64..10_000, a in -5.0f64..5.0, b in -5.0f64..5.0) {
        prop_assume!(a.abs() + b.abs() > 1e-3);
        let p = pencil(seed, false);
        let q = admissible_query(&p, seed, None).unwrap();
        let k = c(a, b);
        let qs = EigenPairQuery::new(q.lambda(), q.x1() * k, q.x2() * k, q.x3() * k).unwrap();
        prop_assert!(rel(eta_unstructured(&p, &q).unwrap(), eta_unstructured(&p, &qs).unwrap()) < 1e-12);
        prop_assert!(rel(eta_even(&p, &q).unwrap(), eta_even(&p, &qs).unwrap()) < 1e-12);
        for scope in PerturbationScope::all_supported().into_iter().filter(|s| s.field == Field::Complex) {
            let a = eta(scope, &p, &q).unwrap();
            let b = eta(scope, &p, &qs).unwrap();
            prop_assert!(rel(a.lower(), b.lower()) < 1e-12, "{} {} {}", scope, a.lower(), b.lower());
            prop_assert!(rel(a.upper(), b.upper()) < 1e-12, "{}", scope);
        }
    }

    #[test]
    fn dominance_and_identities(seed in 0u64..10_000) {
        let p = pencil(seed, false);
        let q = admissible_query(&p, seed ^ 0x5a5a, None).unwrap();
        let e = eta_unstructured(&p, &q).unwrap();
        prop_assert!(e <= eta_even(&p, &q).unwrap() + 1e-12);
        for scope in PerturbationScope::all_supported().into_iter().filter(|s| s.field == Field::Complex) {
            let rep = eta(scope, &p, &q).unwrap();
            prop_assert!(rep.is_finite(), "{}", scope);
            prop_assert!(e <= 2f64.sqrt() * rep.lower() + TOL, "{} {} {}", scope, e, rep.lower());
            prop_assert!(rep.lower() <= rep.upper() + 1e-14 * rep.upper().max(1.0));
            if let Some(f) = rep.feasible_upper {
                prop_assert!(f <= rep.upper() + TOL);
                prop_assert!(f >= rep.lower() - TOL);
            }
            if scope.structure == StructureClass::SymmetryPreserving {
                let blk = eta_block(scope.blocks, &p, &q).unwrap().exact().unwrap();
                prop_assert!(blk <= rep.upper() + TOL, "{}", scope);
            }
            let d = rep.minimizer.clone().unwrap();
            check_class(scope, &d);
            let (res, tol) = residual_closure(&p, &q, &d);
            prop_assert!(res <= tol, "{} closure {} > {}", scope, res, tol);
        }
        let v = |b| eta_block(b, &p, &q).unwrap().exact().unwrap();
        prop_assert!(rel(v(BlockSet::RE), v(BlockSet::JE)) < 1e-12);
        prop_assert!(rel(v(BlockSet::RB), v(BlockSet::JB)) < 1e-12);
        prop_assert!(rel(v(BlockSet::JEB), v(BlockSet::REB)) < 1e-12);
    }

    #[test]
    fn larger_scope_never_costs_more(seed in 0u64..10_000) {
        let p = pencil(seed, false);
        let q = admissible_query(&p, seed, None).unwrap();
        let v = |b| eta_block(b, &p, &q).unwrap().exact().unwrap();
        for (small, big) in [
            (BlockSet::JE, BlockSet::JEB), (BlockSet::JE, BlockSet::JRE), (BlockSet::JR, BlockSet::JRB),
            (BlockSet::RE, BlockSet::REB), (BlockSet::JB, BlockSet::JRB), (BlockSet::EB, BlockSet::JEB),
            (BlockSet::JRE, BlockSet::JREB), (BlockSet::JRB, BlockSet::JREB),
        ] {
            prop_assert!(v(big) <= v(small) + TOL, "{:?} > {:?}", big, small);
        }
    }

    #[test]
    fn real_scopes_close_and_stay_real(seed in 0u64..10_000) {
        let p = pencil(seed, true);
        for scope in PerturbationScope::all_supported().into_iter().filter(|s| s.field == Field::Real) {
            let q = admissible_query(&p, seed + 1, Some(scope)).unwrap();
            let rep = eta(scope, &p, &q).unwrap();
            prop_assert!(rep.is_finite(), "{} {:?}", scope, rep.failed_conditions());
            let d = rep.minimizer.clone().unwrap();
            check_class(scope, &d);
            prop_assert!(rel(d.norm(), rep.exact().unwrap()) < 1e-10);
            let (res, tol) = residual_closure(&p, &q, &d);
            prop_assert!(res <= tol, "{} closure {} > {}", scope, res, tol);
            // the complex block value can only be smaller
            let cx = eta(PerturbationScope::block(scope.blocks), &p, &q).unwrap();
            prop_assert!(cx.upper() <= rep.upper() + TOL);
        }
    }

    #[test]
    fn eigenvalue_error_bounds_eigenpair_errors(seed in 0u64..10_000, t in 0.05f64..3.0) {
        let p = pencil(seed, false);
        let lam = c(0.0, t);
        for scope in PerturbationScope::all_supported() {
            let Ok(ev) = eta_eigenvalue(scope, &p, lam) else { continue };
            let q = admissible_query(&p, seed, Some(scope)).unwrap().with_lambda(t).unwrap();
            let rep = eta(scope, &p, &q).unwrap();
            prop_assert!(ev.value <= rep.lower() + TOL, "{} {} > {}", scope, ev.value, rep.lower());
            prop_assert!(rel(ev.value, ev.report.exact().unwrap()) < 1e-10, "{}", scope);
            let cert = certify_eigenvalue(&p, lam, ev.report.minimizer.as_ref().unwrap());
            prop_assert!(cert.holds(), "{} {:?}", scope, cert.sigma_min);
        }
    }

    #[test]
    fn generator_is_deterministic(seed in 0u64..10_000) {
        prop_assert_eq!(pencil(seed, false), pencil(seed, false));
        let p = pencil(seed, false);
        prop_assert_eq!(admissible_query(&p, seed, None).unwrap(), admissible_query(&p, seed, None).unwrap());
        prop_assert!(p.strictly_passive());
    }
}
