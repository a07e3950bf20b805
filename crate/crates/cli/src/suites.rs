//! seeded invariant suites shared by `verify` and the acceptance run

use std::fmt;

use pencil_backerr::linalg::*;
use pencil_backerr::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

/// outcome of one property over many instances
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: usize,
    pub total: usize,
    /// largest violation measure seen (meaning depends on the property)
    pub worst: f64,
    pub note: String,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }

    fn tally(name: impl Into<String>, results: &[(bool, f64)]) -> Self {
        let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
        Check { name: name.into(), passed: results.iter().filter(|r| r.0).count(), total: results.len(), worst, note: String::new() }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "pass" } else { "FAIL" };
        write!(f, "{status} {}: {}/{} (worst {:.3e})", self.name, self.passed, self.total, self.worst)?;
        if !self.note.is_empty() {
            write!(f, " {}", self.note)?;
        }
        Ok(())
    }
}

/// deliberate corruption of the closed forms, to prove the checks can fail
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// doubles the coupling divisor of the JE, RE, JR and JRE block values
    Divisor,
}

/// where the suites take their pencils from
#[derive(Debug, Clone)]
pub enum Source {
    Seeded { n: usize, m: usize, seed: u64 },
    Fixed(StructuredPencil),
}

impl Source {
    /// the k-th pencil; `None` when a real pencil is needed but the fixed one is complex
    pub fn pencil(&self, k: u64, real: bool) -> Option<StructuredPencil> {
        match self {
            Source::Seeded { n, m, seed } => random_pencil(*n, *m, seed.wrapping_add(k.wrapping_mul(7919)), real).ok(),
            Source::Fixed(p) => (!real || p.is_real()).then(|| p.clone()),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    (a - b).abs() / a.abs().max(b.abs())
}

/// closed-form report, optionally corrupted
pub fn closed_form(scope: PerturbationScope, p: &StructuredPencil, q: &EigenPairQuery, fault: Fault) -> Result<BackwardErrorReport, BackwardError> {
    let mut rep = eta(scope, p, q)?;
    let hit = matches!(scope.blocks, BlockSet::JE | BlockSet::RE | BlockSet::JR | BlockSet::JRE)
        && scope.structure == StructureClass::BlockOnly
        && scope.field == Field::Complex;
    if fault == Fault::Divisor && hit {
        if let ReportValue::Exact(v) = rep.value {
            rep.value = ReportValue::Exact(v / 2.0);
        }
    }
    Ok(rep)
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn cgauss(rng: &mut ChaCha8Rng, nr: usize, nc: usize) -> CMat {
    CMat::from_fn(nr, nc, |_, _| c(gauss(rng), gauss(rng)))
}

fn rgauss(rng: &mut ChaCha8Rng, nr: usize, nc: usize) -> CMat {
    CMat::from_fn(nr, nc, |_, _| cr(gauss(rng)))
}

fn col(m: CMat) -> CVec {
    m.column(0).into_owned()
}

fn complement(v: &CMat) -> CMat {
    CMat::identity(v.nrows(), v.nrows()) - v * pinv(v)
}

/// perturbation direction scaled to `size` times a log-uniform factor in [1e-6, 1]
fn scaled(rng: &mut ChaCha8Rng, z: CMat, size: f64) -> CMat {
    let nz = z.norm();
    // an empty null space leaves only roundoff, which must not be blown up
    if nz <= 1e-10 {
        return z.scale(0.0);
    }
    let t = 10f64.powf(rng.gen_range(-6.0..=0.0));
    z.scale(t * size.max(1e-3) / nz)
}

/// the three mapping problems on `instances` seeded feasible inputs, each tested against
/// `perturbations` feasible null-space perturbations
pub fn mapping_suite(instances: usize, perturbations: usize, seed: u64) -> Vec<Check> {
    let skew: Vec<Vec<(bool, f64)>> = (0..instances)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9));
            let n = rng.gen_range(2..=6);
            let kk = rng.gen_range(1..n);
            let k0 = skew_part(&cgauss(&mut rng, n, n));
            let x = cgauss(&mut rng, n, kk);
            let y = &k0 * &x;
            let Ok(sol) = skew_hermitian_minimal_map(&x, &y) else { return vec![(false, f64::INFINITY); 4] };
            let con = (&sol.delta * &x - &y).norm() / y.norm();
            let st = herm_deviation(&sol.delta, -1.0) / sol.fro_norm.max(1.0);
            let cf = rel(sol.closed_form_norm, sol.fro_norm);
            let p = complement(&x);
            let mut under: f64 = 0.0;
            for _ in 0..perturbations {
                let dir = &p * skew_part(&cgauss(&mut rng, n, n)) * &p;
                let z = scaled(&mut rng, dir, sol.fro_norm);
                under = under.max(sol.fro_norm - (&sol.delta + z).norm());
            }
            vec![(con <= 1e-10, con), (st <= 1e-10, st), (under <= 1e-10, under.max(0.0)), (cf <= 1e-10, cf)]
        })
        .collect();
    let two: Vec<Vec<(bool, f64)>> = (0..instances)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7777 ^ (k as u64).wrapping_mul(0x9e37_79b9));
            let nr = rng.gen_range(1..=6);
            let nc = rng.gen_range(1..=6);
            let d0 = cgauss(&mut rng, nr, nc);
            let u = col(cgauss(&mut rng, nc, 1));
            let w = col(cgauss(&mut rng, nr, 1));
            let r = &d0 * &u;
            let s = d0.adjoint() * &w;
            let Ok(sol) = two_sided_minimal_map(&u, &r, &w, &s) else { return vec![(false, f64::INFINITY); 3] };
            let con = ((&sol.delta * &u - &r).norm() / r.norm().max(1e-300)).max((sol.delta.adjoint() * &w - &s).norm() / s.norm().max(1e-300));
            let pw = complement(&CMat::from_columns(std::slice::from_ref(&w)));
            let pu = complement(&CMat::from_columns(std::slice::from_ref(&u)));
            let mut under: f64 = 0.0;
            for _ in 0..perturbations {
                let dir = &pw * cgauss(&mut rng, nr, nc) * &pu;
                let z = scaled(&mut rng, dir, sol.fro_norm);
                under = under.max(sol.fro_norm - (&sol.delta + z).norm());
            }
            // general complex matrices carry no symmetry class; the spectral bound is its structural fact
            let st = (sol.spectral_inf - sigma_max(&sol.delta)).max(0.0);
            vec![(con <= 1e-10, con), (st <= 1e-10 * sol.fro_norm.max(1.0), st), (under <= 1e-10, under.max(0.0))]
        })
        .collect();
    let real: Vec<Vec<(bool, f64)>> = (0..instances)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3333 ^ (k as u64).wrapping_mul(0x9e37_79b9));
            let nr = rng.gen_range(2..=6);
            let nc = rng.gen_range(2..=6);
            let d0 = rgauss(&mut rng, nr, nc);
            let u = col(cgauss(&mut rng, nc, 1));
            let w = col(cgauss(&mut rng, nr, 1));
            let r = &d0 * &u;
            let s = d0.transpose() * &w;
            let Ok(sol) = real_two_sided_minimal_map(&u, &r, &w, &s) else { return vec![(false, f64::INFINITY); 3] };
            let dc = to_complex(&sol.delta);
            let con = ((&dc * &u - &r).norm() / r.norm().max(1e-300)).max((dc.transpose() * &w - &s).norm() / s.norm().max(1e-300));
            let st = sol.imag_residue / sol.fro_norm.max(1.0);
            let pw = complement(&with_conj(&w));
            let pu = complement(&with_conj(&u));
            let mut under: f64 = 0.0;
            for _ in 0..perturbations {
                let dir = to_complex(&real_part(&(&pw * rgauss(&mut rng, nr, nc) * &pu)));
                let z = scaled(&mut rng, dir, sol.fro_norm);
                under = under.max(sol.fro_norm - (&dc + z).norm());
            }
            vec![(con <= 1e-10, con), (st <= 1e-10, st), (under <= 1e-10, under.max(0.0))]
        })
        .collect();
    let pick = |v: &[Vec<(bool, f64)>], i: usize| v.iter().map(|x| x[i]).collect::<Vec<_>>();
    vec![
        Check::tally("skew map constraints", &pick(&skew, 0)),
        Check::tally("skew map structure", &pick(&skew, 1)),
        Check::tally("skew map minimality", &pick(&skew, 2)),
        Check::tally("skew map closed-form norm", &pick(&skew, 3)),
        Check::tally("two-sided map constraints", &pick(&two, 0)),
        Check::tally("two-sided map spectral bound", &pick(&two, 1)),
        Check::tally("two-sided map minimality", &pick(&two, 2)),
        Check::tally("real map constraints", &pick(&real, 0)),
        Check::tally("real map realness", &pick(&real, 1)),
        Check::tally("real map minimality", &pick(&real, 2)),
    ]
}

/// closed forms against the independent least-norm solver, `instances` per supported scope
pub fn sandwich_suite(src: &Source, instances: usize, cfg: &OracleConfig, fault: Fault) -> Vec<Check> {
    PerturbationScope::all_supported()
        .into_iter()
        .filter_map(|scope| {
            let real = scope.field == Field::Real;
            let results: Vec<(bool, f64)> = (0..instances as u64)
                .into_par_iter()
                .filter_map(|k| {
                    let p = src.pencil(k, real)?;
                    let q = admissible_query(&p, 31 + 104_729 * k, Some(scope)).ok()?;
                    let Ok(rep) = closed_form(scope, &p, &q, fault) else { return Some((false, f64::INFINITY)) };
                    let Ok(OracleOutcome::Feasible { value, .. }) = least_norm_feasible(scope, &p, &q, &OracleConfig { seed: cfg.seed ^ k, ..*cfg }) else {
                        return Some((false, f64::INFINITY));
                    };
                    Some(match rep.value {
                        ReportValue::Exact(v) => {
                            let e = rel(v, value);
                            (e <= 1e-7, e)
                        }
                        ReportValue::Bounds { lower, upper } => {
                            let gap = (lower - 1e-8 - value).max(value - upper - 1e-8).max(0.0);
                            (gap == 0.0, gap)
                        }
                        ReportValue::Infinite => (false, f64::INFINITY),
                    })
                })
                .collect();
            (!results.is_empty()).then(|| {
                let what = if scope.has_bounds() { "bounds contain oracle" } else { "matches oracle" };
                Check::tally(format!("{scope} {what}"), &results)
            })
        })
        .collect()
}

/// residual closure, dominance, equal-scope identities and bound ordering
pub fn consistency_suite(src: &Source, instances: usize, fault: Fault) -> Vec<Check> {
    let scopes: Vec<PerturbationScope> = PerturbationScope::all_supported().into_iter().filter(|s| s.field == Field::Complex).collect();
    let per: Vec<Option<[(bool, f64); 6]>> = (0..instances as u64)
        .into_par_iter()
        .map(|k| {
            let p = src.pencil(k, false)?;
            let q = admissible_query(&p, 17 + 15_485_863 * k, None).ok()?;
            let e = eta_unstructured(&p, &q).ok()?;
            let ev = eta_even(&p, &q).ok()?;
            let mut closure = (true, 0.0f64);
            let mut dom = (e <= ev + 1e-12, (e - ev).max(0.0));
            let mut order = (true, 0.0f64);
            let mut sym_dom = (true, 0.0f64);
            let mut blocks = std::collections::HashMap::new();
            for &scope in &scopes {
                let Ok(rep) = closed_form(scope, &p, &q, fault) else { return Some([(false, f64::INFINITY); 6]) };
                if !rep.is_finite() {
                    return Some([(false, f64::INFINITY); 6]);
                }
                if let Some(d) = rep.minimizer.as_ref() {
                    let (res, tol) = residual_closure(&p, &q, d);
                    closure.1 = closure.1.max(res / tol.max(1e-300));
                    closure.0 &= res <= tol;
                }
                let excess = e - 2f64.sqrt() * rep.lower();
                dom.1 = dom.1.max(excess.max(0.0));
                dom.0 &= excess <= 1e-10;
                let gap = rep.lower() - rep.upper();
                order.0 &= gap <= 1e-14 * rep.upper().max(1.0);
                order.1 = order.1.max(gap.max(0.0));
                if scope.structure == StructureClass::BlockOnly {
                    blocks.insert(scope.blocks, rep.lower());
                } else {
                    let b = blocks[&scope.blocks];
                    sym_dom.0 &= b <= rep.upper() + 1e-10;
                    sym_dom.1 = sym_dom.1.max((b - rep.upper()).max(0.0));
                }
            }
            let pairs = [(BlockSet::RE, BlockSet::JE), (BlockSet::RB, BlockSet::JB), (BlockSet::JEB, BlockSet::REB)];
            let ident = pairs.iter().map(|(a, b)| rel(blocks[a], blocks[b])).fold(0.0, f64::max);
            let sup = [(BlockSet::JE, BlockSet::JEB), (BlockSet::JB, BlockSet::JRB), (BlockSet::JRE, BlockSet::JREB), (BlockSet::EB, BlockSet::JEB)];
            let inc = sup.iter().map(|(s, b)| blocks[b] - blocks[s]).fold(0.0, f64::max);
            Some([closure, dom, (ident <= 1e-12, ident), order, sym_dom, (inc <= 1e-10, inc.max(0.0))])
        })
        .collect();
    let rows: Vec<[(bool, f64); 6]> = per.into_iter().flatten().collect();
    let pick = |i: usize| rows.iter().map(|r| r[i]).collect::<Vec<_>>();
    vec![
        Check::tally("residual closure", &pick(0)).with_note("(worst is residual / tolerance)"),
        Check::tally("eta <= eta_even and eta <= sqrt2 eta_scope", &pick(1)),
        Check::tally("equal-scope identities", &pick(2)),
        Check::tally("bounds ordered", &pick(3)),
        Check::tally("block <= symmetry", &pick(4)),
        Check::tally("larger scope never costs more", &pick(5)),
    ]
}

/// rank-one attainability of every eigenvalue formula, and the infimum over `queries` eigenvectors
pub fn eigenvalue_suite(src: &Source, pencils: usize, queries: usize) -> Vec<Check> {
    let scopes: Vec<PerturbationScope> = PerturbationScope::all_supported()
        .into_iter()
        .filter(|s| s.field == Field::Complex && (s.structure == StructureClass::BlockOnly || matches!(s.blocks, BlockSet::JR | BlockSet::JRB)))
        .collect();
    let mut out = Vec::new();
    for scope in scopes {
        let rows: Vec<((bool, f64), (bool, f64))> = (0..pencils as u64)
            .into_par_iter()
            .filter_map(|k| {
                let p = src.pencil(k, false)?;
                let mut rng = ChaCha8Rng::seed_from_u64(0xe16e ^ k);
                let t = pencil_backerr::model::draw_lambda(&mut rng);
                let lam = c(0.0, t);
                let Ok(ev) = eta_eigenvalue(scope, &p, lam) else { return Some(((false, f64::INFINITY), (false, f64::INFINITY))) };
                let cert = ev.report.minimizer.as_ref().map(|d| certify_eigenvalue(&p, lam, d));
                let cert = match cert {
                    Some(cc) => (cc.holds(), cc.sigma_min / cc.tolerance.max(1e-300)),
                    None => (false, f64::INFINITY),
                };
                let mut inf = (true, 0.0f64);
                for j in 0..queries as u64 {
                    let Some(q) = admissible_query(&p, 7 + 1_000_003 * k + j, Some(scope)).ok().and_then(|q| q.with_lambda(t).ok()) else {
                        inf.0 = false;
                        continue;
                    };
                    match eta(scope, &p, &q) {
                        Ok(rep) if rep.is_finite() => {
                            let excess = ev.value - rep.lower();
                            inf.0 &= excess <= 1e-10;
                            inf.1 = inf.1.max(excess.max(0.0));
                        }
                        _ => inf.0 = false,
                    }
                }
                Some((cert, inf))
            })
            .collect();
        let certs: Vec<_> = rows.iter().map(|r| r.0).collect();
        let infs: Vec<_> = rows.iter().map(|r| r.1).collect();
        out.push(Check::tally(format!("{scope} eigenvalue certified"), &certs).with_note("(worst is sigma_min / tolerance)"));
        out.push(Check::tally(format!("{scope} eigenvalue <= eigenpair"), &infs));
    }
    out
}

/// the three divisor relations on finite JE-class instances
pub fn divisor_suite(src: &Source, instances: usize, fault: Fault) -> Check {
    let rows: Vec<(bool, f64)> = (0..instances as u64)
        .into_par_iter()
        .filter_map(|k| {
            let p = src.pencil(k, false)?;
            let q = admissible_query(&p, 5 + 7_368_787 * k, Some(PerturbationScope::block(BlockSet::JE))).ok()?;
            let v = |s: PerturbationScope| closed_form(s, &p, &q, fault).ok().and_then(|r| r.exact());
            let (Some(je), Some(jr), Some(jre), Some(jrs)) = (
                v(PerturbationScope::block(BlockSet::JE)),
                v(PerturbationScope::block(BlockSet::JR)),
                v(PerturbationScope::block(BlockSet::JRE)),
                v(PerturbationScope::sym(BlockSet::JR)),
            ) else {
                return Some((false, f64::INFINITY));
            };
            let l2 = q.lambda().norm_sqr();
            let e = rel(jr, je * ((1.0 + l2) / 2.0).sqrt())
                .max(rel(jre, je * ((1.0 + l2) / (2.0 + l2)).sqrt()))
                .max(rel(jrs, 2f64.sqrt() * jr));
            Some((e <= 1e-12, e))
        })
        .collect();
    Check::tally("divisor relations", &rows)
}

fn t_orth(x2: &CVec, v: &CVec) -> CVec {
    let k = (x2.transpose() * v)[(0, 0)] / v.norm_squared();
    x2 - v.conjugate() * k
}

/// planted real perturbations: finite exactly when the conditions hold, never above the plant
pub fn planted_real_suite(src: &Source, pencils: usize) -> Vec<Check> {
    let scopes: Vec<PerturbationScope> = PerturbationScope::all_supported().into_iter().filter(|s| s.field == Field::Real).collect();
    type Outcomes = Vec<((bool, f64), (bool, f64))>;
    let rows: Vec<Outcomes> = (0..pencils as u64)
        .into_par_iter()
        .filter_map(|k| {
            let p = src.pencil(k, true)?;
            let mut out = Vec::new();
            for &scope in &scopes {
                // positive: a pair made exact by a random real perturbation of the scope
                let q = admissible_query(&p, 3 + 2_750_159 * k, Some(scope)).ok()?;
                let plant = random_feasible_perturbation(scope, &p, &q, k, 0.5).ok().flatten();
                let rep = eta(scope, &p, &q).ok();
                let pos = match (plant, rep) {
                    (Some(d), Some(rep)) => {
                        let (res, tol) = residual_closure(&p, &q, &d);
                        let conds = rep.conditions.iter().all(|c| c.holds());
                        let excess = rep.upper() - d.norm();
                        (res <= tol && conds && rep.is_finite() && excess <= 1e-8, excess.max(0.0))
                    }
                    _ => (false, f64::INFINITY),
                };
                // negative: generic pair, plus the E-weighted bilinear condition alone for EB
                let base = admissible_query(&p, 11 + 2_750_159 * k, Some(PerturbationScope::block(BlockSet::JB))).ok()?;
                let mut negs = vec![base.clone()];
                if scope.blocks == BlockSet::EB {
                    let x2 = t_orth(base.x2(), &(p.e() * base.x1()));
                    negs.push(EigenPairQuery::new(base.lambda(), base.x1().clone(), x2, base.x3().clone()).ok()?);
                }
                let mut neg = (true, 0.0);
                for qn in negs {
                    let feasible = random_feasible_perturbation(scope, &p, &qn, 0, 0.0).ok().flatten().is_some();
                    match eta(scope, &p, &qn) {
                        Ok(rep) => {
                            let conds = rep.conditions.iter().all(|c| c.holds());
                            neg.0 &= conds == rep.is_finite() && rep.is_finite() == feasible && !feasible;
                        }
                        Err(_) => neg.0 = false,
                    }
                }
                out.push((pos, neg));
            }
            Some(out)
        })
        .collect();
    let pos: Vec<_> = rows.iter().flatten().map(|r| r.0).collect();
    let neg: Vec<_> = rows.iter().flatten().map(|r| r.1).collect();
    vec![
        Check::tally("planted real pairs finite and below plant", &pos).with_note("(worst is value - plant)"),
        Check::tally("real pairs violating conditions infinite and infeasible", &neg),
    ]
}

/// the hand-checked 2x2 example with λ = i/4 and x2 = (1, 1)
pub fn worked_example() -> Vec<Check> {
    let p = StructuredPencil::new(
        rmat(2, 2, &[0.0, -1.0, 1.0, 0.0]),
        rmat(2, 2, &[0.0, 0.0, 0.0, 1.0]),
        CMat::zeros(2, 2),
        CMat::zeros(2, 3),
        CMat::identity(3, 3),
    )
    .expect("valid example");
    let q = EigenPairQuery::imaginary(0.25, CVec::zeros(2), rvec(&[1.0, 1.0]), CVec::zeros(3)).expect("valid query");
    let rep = eta_symmetry(BlockSet::RE, &p, &q).expect("supported scope");
    let (lower, upper) = match rep.value {
        ReportValue::Bounds { lower, upper } => (lower, upper),
        _ => (f64::NAN, f64::NAN),
    };
    let d = PerturbationBlocks { dr: Some(rmat(2, 2, &[1.0, 0.0, 0.0, 0.0])), de: Some(CMat::zeros(2, 2)), ..Default::default() };
    let (res, tol) = residual_closure(&p, &q, &d);
    let obj = pencil_backerr::backward::symmetric_objective(BlockSet::RE, q.lambda(), &rmat(2, 2, &[-1.0, 0.0, 0.0, 0.0]), None);
    let eu = (upper - 2.375f64.sqrt()).abs();
    let el = (lower - std::f64::consts::FRAC_1_SQRT_2).abs();
    let eo = (obj - 1.0).abs().max((d.norm() - 1.0).abs());
    vec![
        Check::tally("RE symmetric upper bound = sqrt(2.375)", &[(eu <= 1e-12, eu)]),
        Check::tally("RE symmetric lower bound = 1/sqrt(2)", &[(el <= 1e-12, el)]),
        Check::tally("Hermitian point diag(-1, 0) feasible with objective 1", &[(res <= tol && eo <= 1e-12, eo)]),
    ]
}
