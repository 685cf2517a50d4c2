//! Job dispatch: reads the inputs, runs one command and builds its report.

use std::collections::BTreeMap;
use std::path::PathBuf;

use borel_core::calculus::{
    joint_calculus, selfadjoint_real_calculus, verify_mfc_axioms, BpSequence, AGREE_TOL, MFC_TOL,
};
use borel_core::chebyshev::cheb_apply;
use borel_core::commute::{
    bounded_transform, reconstruct_from_transform, strong_commute_battery_seeded, BATTERY_RELATIONS, BATTERY_TOL,
    LEMMA_TOL,
};
use borel_core::funcexpr::{parse_expr, FuncExpr};
use borel_core::pvm::{verify_pvm_axioms, AXIOM_TOL};
use borel_core::sample::{random_func_expr, Region};
use borel_core::spectral::{multiplication_representation, operator_norm_via_calculus, spectral_report};
use borel_core::{BorelCalculus, ComplexMatrix, Error, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::format::{point_list, CalculusJson, Input, MatrixJson, SpaceJson};
use crate::report::{Check, Report, Status, TOOL, VERSION};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Apply,
    Spectrum,
    Joint,
    Commute,
    Transform,
    Verify,
    Represent,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Apply => "apply",
            Command::Spectrum => "spectrum",
            Command::Joint => "joint",
            Command::Commute => "commute",
            Command::Transform => "transform",
            Command::Verify => "verify",
            Command::Represent => "represent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub expr: Option<String>,
    /// Overrides the pass/fail threshold of every check.
    pub tol: Option<f64>,
    pub seed: u64,
    /// Chebyshev degree for `apply` on a Hermitian matrix.
    pub degree: Option<usize>,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl JobConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            inputs: Vec::new(),
            expr: None,
            tol: None,
            seed: 0,
            degree: None,
            format: OutputFormat::Text,
            output: None,
        }
    }
}

/// Random functions added to the `verify` function set.
pub const SAMPLED_FUNCTIONS: usize = 8;

/// Random functions checked by `represent`.
pub const REPRESENT_FUNCTIONS: usize = 20;

/// Finished job: exit code, rendered report (absent on errors) and a
/// diagnostic for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<String>,
    pub diagnostic: Option<String>,
}

/// Runs `job`. Input and parse errors give exit code 2, mathematical
/// failures and failed checks give 1.
pub fn run(job: &JobConfig) -> Outcome {
    match execute(job) {
        Ok(report) => {
            let rendered = match job.format {
                OutputFormat::Text => report.to_text(),
                OutputFormat::Json => report.to_json(),
            };
            let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            let code = if report.passed() { 0 } else { 1 };
            Outcome {
                code,
                report: Some(rendered),
                diagnostic: (!failed.is_empty()).then(|| format!("verification failed: {}", failed.join(", "))),
            }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            report: None,
            diagnostic: Some(format!("error: {}: {e}", e.kind())),
        },
    }
}

struct Loaded {
    name: String,
    input: Input,
}

fn load(job: &JobConfig) -> Result<Vec<Loaded>, CliError> {
    if job.inputs.is_empty() {
        return Err(CliError::Input("at least one --matrix is required".into()));
    }
    job.inputs
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let input = Input::parse(&text).map_err(|e| match e {
                CliError::Input(m) => CliError::Input(format!("{}: {m}", p.display())),
                other => other,
            })?;
            Ok(Loaded {
                name: p.display().to_string(),
                input,
            })
        })
        .collect()
}

fn matrices(loaded: &[Loaded]) -> Result<Vec<(ComplexMatrix, bool)>, CliError> {
    loaded
        .iter()
        .map(|l| match &l.input {
            Input::Matrix(m) => Ok((m.to_matrix()?, m.is_declared_real())),
            Input::Calculus(_) => Err(CliError::Input(format!("{}: expected a matrix, found a calculus", l.name))),
        })
        .collect()
}

/// The calculus of the inputs, how it was built, and the source matrices
/// when they are known.
fn calculus(loaded: &[Loaded]) -> Result<(String, BorelCalculus, Vec<ComplexMatrix>), CliError> {
    if let [Loaded {
        input: Input::Calculus(c),
        ..
    }] = loaded
    {
        return Ok((c.kind.clone(), c.to_calculus()?, Vec::new()));
    }
    let mats = matrices(loaded)?;
    match mats.as_slice() {
        [(a, declared_real)] if *declared_real && a.hermitian_defect() == 0.0 => {
            Ok(("selfadjoint-real".into(), selfadjoint_real_calculus(a)?, vec![a.clone()]))
        }
        [(a, _)] => Ok(("normal".into(), BorelCalculus::from_normal(a)?, vec![a.clone()])),
        _ => {
            let ms: Vec<ComplexMatrix> = mats.into_iter().map(|(m, _)| m).collect();
            Ok(("joint".into(), joint_calculus(&ms)?, ms))
        }
    }
}

fn expr(job: &JobConfig, arity: usize) -> Result<Option<FuncExpr>, CliError> {
    job.expr
        .as_deref()
        .map(|s| parse_expr(s, arity).map_err(CliError::from))
        .transpose()
}

fn coordinates(d: usize) -> Vec<FuncExpr> {
    (1..=d).map(|j| FuncExpr::coord(d, j).expect("coordinate in range")).collect()
}

/// Seeded random functions on the calculus' atoms.
fn sampled(phi: &BorelCalculus, seed: u64, count: usize) -> Vec<FuncExpr> {
    let d = phi.pvm().d();
    let regions: Vec<Region> = (0..d)
        .map(|j| {
            let pts: Vec<C64> = phi.atoms().iter().map(|a| a.point[j]).collect();
            Region::around(&pts)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_func_expr(&mut rng, d, 3, &regions)).collect()
}

fn matrix_value(m: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixJson::from_matrix(m)).expect("matrices serialize")
}

fn rel(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm() / b.frobenius_norm().max(1.0)
}

struct Builder<'a> {
    job: &'a JobConfig,
    inputs: Vec<String>,
    tolerances: BTreeMap<String, f64>,
    checks: Vec<Check>,
}

impl<'a> Builder<'a> {
    fn new(job: &'a JobConfig, loaded: &[Loaded]) -> Self {
        Self {
            job,
            inputs: loaded.iter().map(|l| l.name.clone()).collect(),
            tolerances: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    /// Registers a tolerance (or the `--tol` override) under `key`.
    fn tol(&mut self, key: &str, default: f64) -> f64 {
        let t = self.job.tol.unwrap_or(default);
        self.tolerances.insert(key.to_string(), t);
        t
    }

    fn check(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        self.checks.push(Check::residual(name, residual, tol));
    }

    fn flag(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check::flag(name, passed));
    }

    fn finish(self, result: Value) -> Report {
        let status = if self.checks.iter().all(|c| c.passed) {
            Status::Ok
        } else {
            Status::Fail
        };
        Report {
            tool: TOOL,
            version: VERSION,
            command: self.job.command.name().to_string(),
            seed: self.job.seed,
            inputs: self.inputs,
            expr: self.job.expr.clone(),
            tolerances: self.tolerances,
            checks: self.checks,
            status,
            result,
        }
    }
}

fn execute(job: &JobConfig) -> Result<Report, CliError> {
    if let Some(t) = job.tol {
        if !(t.is_finite() && t >= 0.0) {
            return Err(CliError::Input(format!("--tol must be a non-negative number, got {t}")));
        }
    }
    let loaded = load(job)?;
    match job.command {
        Command::Apply => apply(job, &loaded),
        Command::Spectrum => spectrum(job, &loaded),
        Command::Joint => joint(job, &loaded),
        Command::Commute => commute(job, &loaded),
        Command::Transform => transform(job, &loaded),
        Command::Verify => verify(job, &loaded),
        Command::Represent => represent(job, &loaded),
    }
}

fn reconstruction_checks(b: &mut Builder, phi: &BorelCalculus, sources: &[ComplexMatrix]) -> Result<(), CliError> {
    if sources.is_empty() {
        return Ok(());
    }
    let t = b.tol("reconstruct", AGREE_TOL);
    let d = sources.len();
    for (j, (z, a)) in coordinates(d).iter().zip(sources).enumerate() {
        let r = rel(&phi.apply(z)?, a);
        b.check(format!("reconstruct z{}", j + 1), r, t);
    }
    Ok(())
}

fn apply(job: &JobConfig, loaded: &[Loaded]) -> Result<Report, CliError> {
    let (kind, phi, sources) = calculus(loaded)?;
    let f = expr(job, phi.pvm().d())?.ok_or_else(|| CliError::Input("apply needs --expr".into()))?;
    let mut b = Builder::new(job, loaded);
    reconstruction_checks(&mut b, &phi, &sources)?;
    let m = phi.apply(&f)?;
    let mut result = json!({ "kind": kind, "matrix": matrix_value(&m) });
    if let Some(k) = job.degree {
        let [a] = sources.as_slice() else {
            return Err(CliError::Input("--degree needs exactly one Hermitian matrix".into()));
        };
        let r = cheb_apply(a, &f, k, None)?;
        let excess = ((&r.matrix - &m).op_norm()? - r.grid_error).max(0.0);
        let t = b.tol("chebyshev excess", 1e-8);
        b.check("chebyshev error within grid bound", excess, t);
        result["chebyshev"] = json!({
            "degree": k,
            "interval": [r.interval.0, r.interval.1],
            "grid_error": r.grid_error,
            "matrix": matrix_value(&r.matrix),
        });
    }
    Ok(b.finish(result))
}

fn spectrum(job: &JobConfig, loaded: &[Loaded]) -> Result<Report, CliError> {
    let (kind, phi, sources) = calculus(loaded)?;
    let d = phi.pvm().d();
    let f = match expr(job, d)? {
        Some(f) => f,
        None if d == 1 => FuncExpr::z(),
        None => return Err(CliError::Input("spectrum of a joint calculus needs --expr".into())),
    };
    let mut b = Builder::new(job, loaded);
    reconstruction_checks(&mut b, &phi, &sources)?;
    let r = spectral_report(&phi, &f)?;
    let n = phi.pvm().dim();
    let mut total = ComplexMatrix::zeros(n);
    for (_, p) in &r.eigenprojections {
        total = &total + p;
    }
    let t = b.tol("eigenprojections", MFC_TOL);
    b.check("eigenprojections sum to I", (&total - &ComplexMatrix::identity(n)).frobenius_norm(), t);
    let norm = operator_norm_via_calculus(&phi, &f)?;
    let measured = phi.apply(&f)?.op_norm()?;
    let t = b.tol("norm", MFC_TOL);
    b.check("operator norm equals sup |f|", (measured - norm).abs() / norm.max(1.0), t);
    let projections: Vec<Value> = r
        .eigenprojections
        .iter()
        .map(|(v, p)| json!({ "value": [v.re, v.im], "proj": matrix_value(p) }))
        .collect();
    Ok(b.finish(json!({
        "kind": kind,
        "spectrum": point_list(&r.spectrum),
        "point_spectrum": point_list(&r.point_spectrum),
        "approximate_point_spectrum": point_list(&r.approximate_point_spectrum),
        "eigenprojections": projections,
        "norm": norm,
    })))
}

fn joint(job: &JobConfig, loaded: &[Loaded]) -> Result<Report, CliError> {
    let mats: Vec<ComplexMatrix> = matrices(loaded)?.into_iter().map(|(m, _)| m).collect();
    let phi = joint_calculus(&mats)?;
    let mut b = Builder::new(job, loaded);
    let t = b.tol("reconstruct", 1e-7);
    for (j, (z, a)) in coordinates(mats.len()).iter().zip(&mats).enumerate() {
        let r = rel(&phi.apply(z)?, a);
        b.check(format!("reconstruct z{}", j + 1), r, t);
    }
    if let Some(f) = expr(job, mats.len())? {
        let m = phi.apply(&f)?;
        let mut v = serde_json::to_value(CalculusJson::new("joint", &phi)).expect("calculi serialize");
        v["applied"] = matrix_value(&m);
        return Ok(b.finish(v));
    }
    Ok(b.finish(serde_json::to_value(CalculusJson::new("joint", &phi)).expect("calculi serialize")))
}

fn commute(job: &JobConfig, loaded: &[Loaded]) -> Result<Report, CliError> {
    let mats = matrices(loaded)?;
    let [(a, _), (bm, _)] = mats.as_slice() else {
        return Err(CliError::Input(format!("commute needs exactly two matrices, got {}", mats.len())));
    };
    let r = strong_commute_battery_seeded(a, bm, job.seed)?;
    let mut b = Builder::new(job, loaded);
    let t = b.tol("battery", BATTERY_TOL);
    let holds: Vec<bool> = r.residuals.iter().map(|&x| x <= t).collect();
    b.flag("all six relations agree", holds.iter().all(|&h| h == holds[0]));
    let relations: serde_json::Map<String, Value> = BATTERY_RELATIONS
        .iter()
        .zip(&holds)
        .map(|(k, &h)| (k.to_string(), Value::Bool(h)))
        .collect();
    let residuals: serde_json::Map<String, Value> = BATTERY_RELATIONS
        .iter()
        .zip(&r.residuals)
        .map(|(k, &x)| (k.to_string(), json!(x)))
        .collect();
    Ok(b.finish(json!({
        "strongly_commute": holds.iter().all(|&h| h),
        "relations": relations,
        "residuals": residuals,
        "functions": r.functions,
    })))
}

fn transform(job: &JobConfig, loaded: &[Loaded]) -> Result<Report, CliError> {
    let mats = matrices(loaded)?;
    let [(a, _)] = mats.as_slice() else {
        return Err(CliError::Input(format!("transform needs exactly one matrix, got {}", mats.len())));
    };
    let tr = bounded_transform(a)?;
    let l = tr.lemma_report()?;
    let mut b = Builder::new(job, loaded);
    let t = b.tol("lemma", LEMMA_TOL);
    b.check("T A = A T", l.t_commutes_with_a, t);
    b.check("S normal", l.s_normal, t);
    b.check("S* = S_{A*}", l.s_adjoint, t);
    b.check("A = T^-1 S", l.a_from_ts, t);
    b.check("T S = S T", l.ts_commute, t);
    b.flag("0 < T <= I", l.t_min > 0.0 && l.t_norm <= 1.0 + t);
    b.flag("||Z|| < 1", l.z_norm < 1.0 + 1e-12);
    let t = b.tol("z round trip", 1e-7);
    b.check("A = Z (I - Z*Z)^-1/2", tr.z_round_trip()?, t);
    let back = reconstruct_from_transform(core::slice::from_ref(&tr))?;
    let t = b.tol("reconstruct", 1e-6);
    b.check("reconstruct from (T, S)", rel(&back.apply(&FuncExpr::z())?, a), t);
    Ok(b.finish(json!({
        "T": matrix_value(&tr.t),
        "S": matrix_value(&tr.s),
        "Z": matrix_value(&tr.z),
        "t_norm": l.t_norm,
        "t_min": l.t_min,
        "z_norm": l.z_norm,
    })))
}

fn verify(job: &JobConfig, loaded: &[Loaded]) -> Result<Report, CliError> {
    let (kind, phi, sources) = calculus(loaded)?;
    let d = phi.pvm().d();
    let mut fs = coordinates(d);
    for z in coordinates(d) {
        fs.push(z.powi(2));
        fs.push(z.conj());
        fs.push(z.abs());
    }
    if let Some(f) = expr(job, d)? {
        fs.push(f);
    }
    fs.extend(sampled(&phi, job.seed, SAMPLED_FUNCTIONS));
    let seqs = coordinates(d)
        .iter()
        .map(|z| {
            let s = phi.sup_on_atoms(z)?;
            BpSequence::clamps(z, &[0.25 * s, 0.5 * s, 2.0 * s + 1.0])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let m = verify_mfc_axioms(&phi, &fs, &seqs)?;
    let p = verify_pvm_axioms(phi.pvm());
    let mut b = Builder::new(job, loaded);
    reconstruction_checks(&mut b, &phi, &sources)?;
    let t = b.tol("mfc", MFC_TOL);
    b.check("MFC1 unit", m.mfc1, t);
    b.check("MFC2 linearity", m.mfc2, t);
    b.check("MFC3 multiplicativity", m.mfc3, t);
    b.check("MFC4 adjoint", m.mfc4_adjoint, t);
    b.check("MFC4 norm", m.mfc4_norm, t);
    b.check("MFC5 bp-continuity", m.mfc5, t);
    b.flag("MFC5 sequences are bp-convergent", !m.mfc5_precondition_failed);
    let t = b.tol("pvm", AXIOM_TOL);
    b.check("PVM1 idempotent", p.idempotent, t);
    b.check("PVM1 self-adjoint", p.selfadjoint, t);
    b.check("PVM2 orthogonality", p.orthogonality, t);
    b.check("PVM2 resolution of identity", p.resolution, t);
    b.check("PVM3 additivity", p.additivity, t);
    b.flag("atoms distinct and nonzero", p.distinct_points && p.min_proj_norm > 0.5);
    Ok(b.finish(json!({
        "kind": kind,
        "d": d,
        "dim": phi.pvm().dim(),
        "atoms": phi.atoms().len(),
        "functions": m.functions,
        "sequences": m.sequences,
        "scope": borel_core::calculus::MfcReport::MFC5_SCOPE,
    })))
}

fn represent(job: &JobConfig, loaded: &[Loaded]) -> Result<Report, CliError> {
    let (kind, phi, sources) = calculus(loaded)?;
    let d = phi.pvm().d();
    let n = phi.pvm().dim();
    let rep = multiplication_representation(&phi);
    let mut b = Builder::new(job, loaded);
    reconstruction_checks(&mut b, &phi, &sources)?;
    let u = &rep.unitary;
    let t = b.tol("unitary", AGREE_TOL);
    b.check("U unitary", (&(u * &u.adjoint()) - &ComplexMatrix::identity(n)).frobenius_norm(), t);
    let mut fs = coordinates(d);
    if let Some(f) = expr(job, d)? {
        fs.push(f);
    }
    fs.extend(sampled(&phi, job.seed, REPRESENT_FUNCTIONS));
    let t = b.tol("representation", AGREE_TOL);
    let mut worst: f64 = 0.0;
    for f in &fs {
        let scale = phi.sup_on_atoms(f)?.max(1.0);
        worst = worst.max(rep.residual(&phi, f)? / scale);
    }
    b.check(format!("U Phi(f) U* = M_f on {} functions", fs.len()), worst, t);
    let blocks: Vec<Value> = rep
        .blocks
        .iter()
        .map(|blk| {
            json!({
                "vector": point_list(&blk.vector),
                "atoms": blk.atoms,
                "weights": blk.weights,
            })
        })
        .collect();
    let labels: Vec<Value> = rep.labels.iter().map(|p| json!(point_list(p))).collect();
    let mut result = json!({
        "kind": kind,
        "blocks": blocks,
        "unitary": matrix_value(u),
        "labels": labels,
        "weights": rep.weights,
    });
    if d == 1 {
        result["space"] = serde_json::to_value(SpaceJson::from_space(&rep.measure_space()?)).expect("spaces serialize");
    }
    Ok(b.finish(result))
}
