//! the subcommands as pure functions returning their output and exit code

use std::fmt::Write as _;
use std::path::PathBuf;

use pencil_backerr::linalg::{c, C64, CMat};
use pencil_backerr::*;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::format::{full, num, sig};
use crate::io::{self, InputError, Metadata, PencilFile, VectorFile};
use crate::suites::{self, Check, Fault, Source};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFINITE: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

/// default for table and report output
pub const DEFAULT_DIGITS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CmdOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl CmdOutput {
    fn input_error(e: impl std::fmt::Display) -> Self {
        CmdOutput { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_INPUT }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Structure {
    Block,
    Sym,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Output {
    #[default]
    Text,
    Csv,
    Machine,
}

/// where a command gets its pencil from
#[derive(Debug, Clone)]
pub enum PencilSource {
    File(PathBuf),
    Seed { n: usize, m: usize, seed: u64 },
}

impl PencilSource {
    fn load(&self) -> Result<StructuredPencil, InputError> {
        match self {
            PencilSource::File(path) => Ok(io::read_pencil(path)?.0),
            PencilSource::Seed { n, m, seed } => {
                if *n == 0 || *m == 0 {
                    return Err(InputError::Usage("n and m must be positive".into()));
                }
                Ok(random_pencil(*n, *m, *seed, false)?)
            }
        }
    }
}

pub fn parse_scopes(list: &str) -> Result<Vec<BlockSet>, InputError> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<BlockSet>().map_err(|e| InputError::Usage(e.to_string())))
        .collect()
}

/// the scopes requested by (blocks, structure, field), keeping only supported ones
fn expand(blocks: &[BlockSet], structure: Structure, field: Field) -> (Vec<PerturbationScope>, Vec<PerturbationScope>) {
    let classes: &[StructureClass] = match structure {
        Structure::Block => &[StructureClass::BlockOnly],
        Structure::Sym => &[StructureClass::SymmetryPreserving],
        Structure::Both => &[StructureClass::BlockOnly, StructureClass::SymmetryPreserving],
    };
    let mut ok = Vec::new();
    let mut skipped = Vec::new();
    for &b in blocks {
        for &s in classes {
            let scope = PerturbationScope::new(b, s, field);
            if scope.is_supported() {
                ok.push(scope);
            } else {
                skipped.push(scope);
            }
        }
    }
    (ok, skipped)
}

fn lambda_text(t: f64, precision: Option<usize>) -> String {
    if t.is_sign_negative() {
        format!("-i{}", num(-t, precision))
    } else {
        format!("i{}", num(t, precision))
    }
}

fn rows_json(a: &CMat) -> serde_json::Value {
    json!((0..a.nrows()).map(|i| (0..a.ncols()).map(|j| [a[(i, j)].re, a[(i, j)].im]).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn blocks_json(d: &PerturbationBlocks) -> serde_json::Value {
    let mut m = serde_json::Map::new();
    for (name, b) in [("dJ", &d.dj), ("dR", &d.dr), ("dE", &d.de), ("dB", &d.db)] {
        if let Some(x) = b {
            m.insert(name.into(), rows_json(x));
        }
    }
    serde_json::Value::Object(m)
}

fn report_json(rep: &BackwardErrorReport) -> serde_json::Value {
    let (kind, value, lower, upper) = match rep.value {
        ReportValue::Exact(v) => ("exact", Some(v), None, None),
        ReportValue::Bounds { lower, upper } => ("bounds", None, Some(lower), Some(upper)),
        ReportValue::Infinite => ("infinite", None, None, None),
    };
    json!({
        "scope": rep.scope.to_string(),
        "kind": kind,
        "value": value,
        "lower": lower,
        "upper": upper,
        "feasible_upper": rep.feasible_upper,
        "conditions": rep.conditions.iter().map(|c| json!({
            "name": c.name, "residual": c.residual, "tolerance": c.tolerance, "passed": c.holds(),
        })).collect::<Vec<_>>(),
        "minimizer": rep.minimizer.as_ref().map(blocks_json),
        "feasible_minimizer": rep.feasible_minimizer.as_ref().map(blocks_json),
    })
}

#[derive(Debug, Clone)]
pub struct ComputeArgs {
    pub pencil: PathBuf,
    pub lambda: String,
    pub x: PathBuf,
    pub scopes: Vec<BlockSet>,
    pub structure: Structure,
    pub field: Field,
    pub precision: usize,
    pub output: Output,
}

/// backward errors of one (λ, x) for each requested scope
pub fn cmd_compute(a: &ComputeArgs) -> CmdOutput {
    match compute(a) {
        Ok(out) => out,
        Err(e) => CmdOutput::input_error(e),
    }
}

fn compute(a: &ComputeArgs) -> Result<CmdOutput, InputError> {
    let (p, _) = io::read_pencil(&a.pencil)?;
    let lambda = io::parse_lambda(&a.lambda)?;
    let (x1, x2, x3) = io::read_vectors(&a.x, p.n(), p.m())?;
    let q = EigenPairQuery::new(lambda, x1, x2, x3)?;
    if a.field == Field::Real && !p.is_real() {
        return Err(InputError::Usage("--field real needs a pencil with real entries".into()));
    }
    let (scopes, skipped) = expand(&a.scopes, a.structure, a.field);
    if scopes.is_empty() {
        return Err(InputError::Usage("none of the requested scopes has a formula for this structure/field".into()));
    }
    let mut reports = Vec::new();
    for &scope in &scopes {
        let rep = eta(scope, &p, &q).map_err(|e| InputError::Usage(format!("{scope}: {e}")))?;
        reports.push(rep);
    }
    let e = eta_unstructured(&p, &q).map_err(|e| InputError::Usage(e.to_string()))?;
    let ev = eta_even(&p, &q).map_err(|e| InputError::Usage(e.to_string()))?;
    let infinite = reports.iter().any(|r| !r.is_finite());
    let prec = Some(a.precision);
    let mut out = String::new();
    match a.output {
        Output::Text => {
            let _ = writeln!(out, "pencil n={} m={}  λ = {}  residual ‖L(λ)x‖ = {}", p.n(), p.m(), lambda_text(q.lambda().im, prec), sig(p.residual(&q), a.precision));
            let _ = writeln!(out, "{:<16}{}", "eta", sig(e, a.precision));
            let _ = writeln!(out, "{:<16}{}", "eta_even", sig(ev, a.precision));
            for rep in &reports {
                let val = match rep.value {
                    ReportValue::Exact(v) => format!("exact {}", sig(v, a.precision)),
                    ReportValue::Bounds { lower, upper } => format!("bounds [{}, {}]", sig(lower, a.precision), sig(upper, a.precision)),
                    ReportValue::Infinite => "infinite".to_string(),
                };
                let _ = write!(out, "{:<16}{}", rep.scope.to_string(), val);
                if let Some(f) = rep.feasible_upper {
                    let _ = write!(out, "  feasible point {}", sig(f, a.precision));
                }
                out.push('\n');
                for cnd in &rep.conditions {
                    let _ = writeln!(
                        out,
                        "    {:<26}residual {:<12}tolerance {:<12}{}",
                        cnd.name,
                        sig(cnd.residual, 3),
                        sig(cnd.tolerance, 3),
                        if cnd.holds() { "ok" } else { "FAILED" }
                    );
                }
            }
            for s in &skipped {
                let _ = writeln!(out, "{:<16}not available", s.to_string());
            }
        }
        Output::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let _ = w.write_record(["scope", "kind", "value", "lower", "upper", "feasible_upper", "failed_conditions"]);
            let f = |x: f64| num(x, prec);
            let _ = w.write_record(["eta", "exact", &f(e), "", "", "", ""]);
            let _ = w.write_record(["eta_even", "exact", &f(ev), "", "", "", ""]);
            for rep in &reports {
                let (kind, v, l, u) = match rep.value {
                    ReportValue::Exact(v) => ("exact", f(v), String::new(), String::new()),
                    ReportValue::Bounds { lower, upper } => ("bounds", String::new(), f(lower), f(upper)),
                    ReportValue::Infinite => ("infinite", "inf".into(), String::new(), String::new()),
                };
                let fu = rep.feasible_upper.map(f).unwrap_or_default();
                let failed = rep.failed_conditions().iter().map(|c| c.name).collect::<Vec<_>>().join("; ");
                let _ = w.write_record([rep.scope.to_string().as_str(), kind, &v, &l, &u, &fu, &failed]);
            }
            out = String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default();
        }
        Output::Machine => {
            let doc = json!({
                "lambda": [q.lambda().re, q.lambda().im],
                "eta": e,
                "eta_even": ev,
                "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
            });
            out = serde_json::to_string_pretty(&doc).unwrap_or_default();
            out.push('\n');
        }
    }
    Ok(CmdOutput { stdout: out, stderr: String::new(), code: if infinite { EXIT_INFINITE } else { EXIT_OK } })
}

/// λ grid over i·[t_min, t_max]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
}

impl std::str::FromStr for Grid {
    type Err = InputError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InputError::Usage(format!("grid {s:?}: expected t_min:t_max:count"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let t_min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let t_max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if count == 0 || !t_min.is_finite() || !t_max.is_finite() || t_max < t_min {
            return Err(bad());
        }
        Ok(Grid { t_min, t_max, count })
    }
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.t_min];
        }
        let h = (self.t_max - self.t_min) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.t_min + h * k as f64).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub pencil: PencilSource,
    pub grid: Grid,
    pub scopes: Vec<BlockSet>,
    pub structure: Structure,
    /// grid points with |t| below this are dropped
    pub min_abs_t: f64,
    pub precision: Option<usize>,
}

/// eigenvalue backward errors along the imaginary axis, one CSV row per λ
pub fn cmd_sweep(a: &SweepArgs) -> CmdOutput {
    let p = match a.pencil.load() {
        Ok(p) => p,
        Err(e) => return CmdOutput::input_error(e),
    };
    let (scopes, _) = expand(&a.scopes, a.structure, Field::Complex);
    let scopes: Vec<PerturbationScope> = scopes
        .into_iter()
        .filter(|s| s.structure == StructureClass::BlockOnly || matches!(s.blocks, BlockSet::JR | BlockSet::JRB))
        .collect();
    if scopes.is_empty() {
        return CmdOutput::input_error("no requested scope has an eigenvalue formula");
    }
    let ts: Vec<f64> = a.grid.points().into_iter().filter(|t| t.abs() >= a.min_abs_t).collect();
    if ts.is_empty() {
        return CmdOutput::input_error(format!("every grid point has |t| < {}", a.min_abs_t));
    }
    let rows: Vec<Result<Vec<f64>, String>> = ts
        .par_iter()
        .map(|&t| scopes.iter().map(|&s| eta_eigenvalue(s, &p, c(0.0, t)).map(|r| r.value).map_err(|e| format!("t = {t}: {e}"))).collect())
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["t".to_string()];
    header.extend(scopes.iter().map(|s| s.to_string()));
    let _ = w.write_record(&header);
    let mut best = vec![(f64::INFINITY, 0.0); scopes.len()];
    for (t, row) in ts.iter().zip(&rows) {
        let row = match row {
            Ok(r) => r,
            Err(e) => return CmdOutput::input_error(e),
        };
        let mut rec = vec![num(*t, a.precision)];
        for (k, v) in row.iter().enumerate() {
            rec.push(num(*v, a.precision));
            if *v < best[k].0 {
                best[k] = (*v, *t);
            }
        }
        let _ = w.write_record(&rec);
    }
    let stdout = String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default();
    let mut stderr = String::new();
    for (s, (v, t)) in scopes.iter().zip(&best) {
        let _ = writeln!(stderr, "grid minimizer {s}: t = {}  value = {}", num(*t, a.precision), num(*v, a.precision));
    }
    CmdOutput { stdout, stderr, code: EXIT_OK }
}

/// one (λ, x) of the comparison, all values unscaled
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub t: f64,
    pub eta: f64,
    pub eta_even: f64,
    pub je: f64,
    pub re: f64,
    pub eb: f64,
    pub jb: f64,
    pub rb: f64,
    pub jeb: f64,
    pub reb: f64,
    pub je_sym: f64,
    pub re_sym: (f64, f64),
    pub jre_sym: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub rows: Vec<ComparisonRow>,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

impl ComparisonRow {
    fn compute(p: &StructuredPencil, q: &EigenPairQuery) -> Result<Self, BackwardError> {
        let b = |s| eta_block(s, p, q).map(|r| r.exact().unwrap_or(f64::INFINITY));
        let bounds = |s| {
            eta_symmetry(s, p, q).map(|r| match r.value {
                ReportValue::Bounds { lower, upper } => (lower, upper),
                ReportValue::Exact(v) => (v, v),
                ReportValue::Infinite => (f64::INFINITY, f64::INFINITY),
            })
        };
        Ok(ComparisonRow {
            t: q.lambda().im,
            eta: eta_unstructured(p, q)?,
            eta_even: eta_even(p, q)?,
            je: b(BlockSet::JE)?,
            re: b(BlockSet::RE)?,
            eb: b(BlockSet::EB)?,
            jb: b(BlockSet::JB)?,
            rb: b(BlockSet::RB)?,
            jeb: b(BlockSet::JEB)?,
            reb: b(BlockSet::REB)?,
            je_sym: bounds(BlockSet::JE)?.0,
            re_sym: bounds(BlockSet::RE)?,
            jre_sym: bounds(BlockSet::JRE)?,
        })
    }

    /// every dominance relation the row must satisfy, as (name, holds)
    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        let s2 = 2f64.sqrt();
        let tol = 1e-10;
        let finite = [self.je, self.re, self.eb, self.jb, self.rb, self.jeb, self.reb, self.je_sym, self.re_sym.0, self.jre_sym.0];
        vec![
            ("eta <= eta_even", self.eta <= self.eta_even + 1e-12),
            ("RE block = JE block", rel(self.re, self.je) <= 1e-12),
            ("RB block = JB block", rel(self.rb, self.jb) <= 1e-12),
            ("JEB block = REB block", rel(self.jeb, self.reb) <= 1e-12),
            ("all scopes finite", finite.iter().all(|v| v.is_finite())),
            ("eta <= sqrt2 * scope", finite.iter().all(|v| self.eta <= s2 * v + tol)),
            ("JEB <= JE and JEB <= EB", self.jeb <= self.je + tol && self.jeb <= self.eb + tol),
            ("JE block <= JE sym", self.je <= self.je_sym + tol),
            ("RE sym lower <= upper", self.re_sym.0 <= self.re_sym.1 + 1e-14 * self.re_sym.1.max(1.0)),
            ("JRE sym lower <= upper", self.jre_sym.0 <= self.jre_sym.1 + 1e-14 * self.jre_sym.1.max(1.0)),
            ("RE block <= RE sym upper", self.re <= self.re_sym.1 + tol),
        ]
    }
}

impl ComparisonTable {
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            for (name, ok) in row.checks() {
                if !ok {
                    out.push(format!("row {} (t = {}): {name}", k + 1, full(row.t)));
                }
            }
        }
        out
    }

    pub const TABLE1: [&'static str; 7] = ["lambda", "eta", "eta_even", "sqrt2*JE=sqrt2*RE", "sqrt2*EB", "sqrt2*JB=sqrt2*RB", "sqrt2*JEB=sqrt2*REB"];
    pub const TABLE2: [&'static str; 8] =
        ["lambda", "eta", "eta_even", "sqrt2*JE_sym", "sqrt2*RE_sym_lower", "sqrt2*RE_sym_upper", "sqrt2*JRE_sym_lower", "sqrt2*JRE_sym_upper"];

    fn table1(&self, precision: Option<usize>) -> Vec<Vec<String>> {
        let s2 = 2f64.sqrt();
        let f = |x: f64| num(x, precision);
        self.rows
            .iter()
            .map(|r| vec![lambda_text(r.t, precision), f(r.eta), f(r.eta_even), f(s2 * r.je), f(s2 * r.eb), f(s2 * r.jb), f(s2 * r.jeb)])
            .collect()
    }

    fn table2(&self, precision: Option<usize>) -> Vec<Vec<String>> {
        let s2 = 2f64.sqrt();
        let f = |x: f64| num(x, precision);
        self.rows
            .iter()
            .map(|r| {
                vec![
                    lambda_text(r.t, precision),
                    f(r.eta),
                    f(r.eta_even),
                    f(s2 * r.je_sym),
                    f(s2 * r.re_sym.0),
                    f(s2 * r.re_sym.1),
                    f(s2 * r.jre_sym.0),
                    f(s2 * r.jre_sym.1),
                ]
            })
            .collect()
    }

    pub fn render(&self, output: Output, precision: Option<usize>) -> String {
        match output {
            Output::Text => {
                let mut out = String::new();
                let _ = writeln!(out, "pencil n={} m={} seed={}", self.n, self.m, self.seed);
                for (title, head, body) in [
                    ("block-structure-preserving eigenpair backward errors", &Self::TABLE1[..], self.table1(precision)),
                    ("symmetry-structure-preserving eigenpair backward errors", &Self::TABLE2[..], self.table2(precision)),
                ] {
                    let _ = writeln!(out, "\n{title}");
                    let widths: Vec<usize> = (0..head.len()).map(|j| body.iter().map(|r| r[j].len()).chain([head[j].len()]).max().unwrap_or(0)).collect();
                    let line = |cells: Vec<&str>| cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ");
                    let _ = writeln!(out, "{}", line(head.to_vec()));
                    for r in &body {
                        let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
                    }
                }
                out
            }
            Output::Csv => {
                let mut out = String::new();
                for (k, (head, body)) in [(&Self::TABLE1[..], self.table1(precision)), (&Self::TABLE2[..], self.table2(precision))].into_iter().enumerate() {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let _ = w.write_record(head);
                    for r in &body {
                        let _ = w.write_record(r);
                    }
                    if k > 0 {
                        out.push('\n');
                    }
                    out.push_str(&String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default());
                }
                out
            }
            Output::Machine => {
                let mut s = serde_json::to_string_pretty(self).unwrap_or_default();
                s.push('\n');
                s
            }
        }
    }
}

fn query_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407).wrapping_add(k)
}

/// table rows for `count` admissible pairs of one pencil; rows are evaluated concurrently
pub fn comparison_table(p: &StructuredPencil, count: usize, seed: u64) -> Result<ComparisonTable, InputError> {
    let rows: Vec<Result<ComparisonRow, InputError>> = (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let q = admissible_query(p, query_seed(seed, k), None).map_err(|e| match e {
                ModelError::EmptyKernel(_) => InputError::Usage(format!(
                    "{e}; admissible pairs need a common kernel of R and B^H: lower the rank of R or widen the null space of B^H"
                )),
                other => other.into(),
            })?;
            ComparisonRow::compute(p, &q).map_err(|e| InputError::Usage(e.to_string()))
        })
        .collect();
    Ok(ComparisonTable { n: p.n(), m: p.m(), seed, rows: rows.into_iter().collect::<Result<_, _>>()? })
}

#[derive(Debug, Clone)]
pub struct CompareArgs {
    pub pencil: PencilSource,
    pub count: usize,
    pub seed: u64,
    pub precision: Option<usize>,
    pub output: Output,
}

/// both comparison tables; nothing is emitted unless every row passes its dominance checks
pub fn cmd_compare(a: &CompareArgs) -> CmdOutput {
    let p = match a.pencil.load() {
        Ok(p) => p,
        Err(e) => return CmdOutput::input_error(e),
    };
    let table = match comparison_table(&p, a.count, a.seed) {
        Ok(t) => t,
        Err(e) => return CmdOutput::input_error(e),
    };
    let bad = table.violations();
    if !bad.is_empty() {
        let mut stderr = String::from("dominance checks failed:\n");
        for b in bad {
            let _ = writeln!(stderr, "  {b}");
        }
        return CmdOutput { stdout: String::new(), stderr, code: EXIT_CHECK };
    }
    CmdOutput { stdout: table.render(a.output, a.precision), stderr: String::new(), code: EXIT_OK }
}

#[derive(Debug, Clone)]
pub struct VerifyArgs {
    pub pencil: Option<PathBuf>,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub instances: usize,
    pub oracle: OracleConfig,
    pub fault: Fault,
}

impl Default for VerifyArgs {
    fn default() -> Self {
        VerifyArgs { pencil: None, n: 4, m: 3, seed: 0, instances: 20, oracle: OracleConfig::default(), fault: Fault::None }
    }
}

/// every invariant suite at the requested size
pub fn run_verify(a: &VerifyArgs) -> Result<Vec<Check>, InputError> {
    let src = match &a.pencil {
        Some(path) => Source::Fixed(io::read_pencil(path)?.0),
        None => Source::Seeded { n: a.n, m: a.m, seed: a.seed },
    };
    let k = a.instances.max(1);
    let mut checks = suites::worked_example();
    checks.extend(suites::mapping_suite(k, 50, a.seed));
    checks.extend(suites::consistency_suite(&src, k, a.fault));
    checks.push(suites::divisor_suite(&src, k, a.fault));
    checks.extend(suites::sandwich_suite(&src, k, &OracleConfig { seed: a.seed, ..a.oracle }, a.fault));
    checks.extend(suites::eigenvalue_suite(&src, k, 20));
    checks.extend(suites::planted_real_suite(&src, k));
    Ok(checks)
}

pub fn cmd_verify(a: &VerifyArgs) -> CmdOutput {
    let checks = match run_verify(a) {
        Ok(c) => c,
        Err(e) => return CmdOutput::input_error(e),
    };
    let mut out = String::new();
    for c in &checks {
        let _ = writeln!(out, "{c}");
    }
    let failed = checks.iter().filter(|c| !c.ok()).count();
    let _ = writeln!(out, "{} properties, {} failed", checks.len(), failed);
    CmdOutput { stdout: out, stderr: String::new(), code: if failed == 0 { EXIT_OK } else { EXIT_CHECK } }
}

#[derive(Debug, Clone)]
pub struct GenerateArgs {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub real: bool,
    pub strictly_passive: bool,
    pub kernel_dim: Option<usize>,
    pub description: Option<String>,
    /// also write an admissible eigenvector file here
    pub query_out: Option<PathBuf>,
}

/// a seeded pencil file on stdout, optionally an admissible query next to it
pub fn cmd_generate(a: &GenerateArgs) -> CmdOutput {
    if a.n == 0 || a.m == 0 {
        return CmdOutput::input_error("n and m must be positive");
    }
    let opts = GeneratorOptions { real: a.real, kernel_dim: a.kernel_dim, strictly_passive: a.strictly_passive, ..Default::default() };
    let p = match random_pencil_with(a.n, a.m, a.seed, &opts) {
        Ok(p) => p,
        Err(e) => return CmdOutput::input_error(e),
    };
    let meta = Metadata { seed: Some(a.seed), description: a.description.clone() };
    let stdout = PencilFile::from_pencil(&p, Some(meta)).to_json();
    let mut stderr = String::new();
    if let Some(path) = &a.query_out {
        let q = match admissible_query(&p, a.seed, None) {
            Ok(q) => q,
            Err(e) => return CmdOutput::input_error(e),
        };
        if let Err(e) = std::fs::write(path, VectorFile::from_query(&q).to_json()) {
            return CmdOutput::input_error(format!("{}: {e}", path.display()));
        }
        let _ = writeln!(stderr, "lambda {}", lambda_text(q.lambda().im, None));
    }
    CmdOutput { stdout, stderr, code: EXIT_OK }
}

/// λ as accepted on the command line, for messages
pub fn show_lambda(z: C64) -> String {
    format!("{}{:+}i", full(z.re), z.im)
}
