//! Batch front end for `caustic-core`.
//!
//! [`run`] executes one [`RunConfig`] and returns the report in both JSON and
//! CSV form together with the pass/fail status; `main.rs` only parses flags,
//! writes the requested format and maps the outcome to an exit code.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::path::{Path, PathBuf};

use caustic_core::dynamics::{iterate, rotation_number, trajectory_residuals, ChordState};
use caustic_core::geometry::{boundary_point, constant_width_check};
use caustic_core::obstruction::{quadratic_obstruction, triviality_certificate};
use caustic_core::random::{admissible_p1, real_series, seeded, uniform};
use caustic_core::variational::{
    error_functional, expansion_reports, newton_solve_caustic, solve_first_order,
    CausticCandidate, FirstOrder,
};
use caustic_core::{dynamics, FourierSeries, SupportFunction};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    Expand,
    SolveCaustic,
    Obstruct,
    Orbit,
    WidthCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Expand => "expand",
            Command::SolveCaustic => "solve-caustic",
            Command::Obstruct => "obstruct",
            Command::Orbit => "orbit",
            Command::WidthCheck => "width-check",
        }
    }

    /// Tolerance names accepted by `--tol` and their defaults.
    pub fn default_tolerances(self) -> &'static [(&'static str, f64)] {
        match self {
            Command::Verify => &[("residual", 1e-12)],
            Command::Expand => &[("e10", 1e-6), ("e11", 1e-5)],
            Command::SolveCaustic => &[("residual", 1e-10), ("reflection", 1e-8)],
            Command::Obstruct => &[("verdict", 1e-10), ("gap", 1e-6), ("modes", 1e-10)],
            Command::Orbit => &[("residual", 1e-10)],
            Command::WidthCheck => &[("width", 1e-10)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// A fully specified run. `resolve` fills defaults and validates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(rename = "K")]
    pub order: Option<usize>,
    pub m: Option<u32>,
    pub l: Option<u32>,
    pub n_max: Option<i64>,
    pub iterations: Option<usize>,
    pub seed: u64,
    pub chord: Option<(f64, f64)>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            output: None,
            format: Format::Json,
            tolerances: BTreeMap::new(),
            order: None,
            m: None,
            l: None,
            n_max: None,
            iterations: None,
            seed: 0,
            chord: None,
        }
    }

    pub fn resolve(mut self) -> Result<Self, CliError> {
        let defaults = self.command.default_tolerances();
        for (name, value) in &self.tolerances {
            if !defaults.iter().any(|(n, _)| n == name) {
                let known: Vec<_> = defaults.iter().map(|(n, _)| *n).collect();
                return Err(CliError::Invalid(format!(
                    "unknown tolerance '{name}' for {} (known: {})",
                    self.command.name(),
                    known.join(", ")
                )));
            }
            if !(*value > 0.0 && value.is_finite()) {
                return Err(CliError::Invalid(format!("tolerance {name} = {value} must be positive")));
            }
        }
        for (name, value) in defaults {
            self.tolerances.entry(name.to_string()).or_insert(*value);
        }
        if self.order == Some(0) {
            return Err(CliError::Invalid("K must be at least 1".into()));
        }
        if let Some(m) = self.m {
            if m < 2 {
                return Err(CliError::Invalid(format!("m = {m}: modulus must be at least 2")));
            }
        }
        if let Some(l) = self.l {
            if l < 1 {
                return Err(CliError::Invalid("l must be at least 1 (modulus 2l+1 ≥ 3)".into()));
            }
        }
        if let Some(n) = self.n_max {
            if n < 1 {
                return Err(CliError::Invalid(format!("n-max = {n} must be positive")));
            }
        }
        if self.iterations == Some(0) {
            return Err(CliError::Invalid("iters must be positive".into()));
        }
        Ok(self)
    }

    fn tol(&self, name: &str) -> f64 {
        self.tolerances[name]
    }
}

/// Errors that abort a run before a verdict exists (exit status 2).
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Input could not be read or parsed; carries `path:line:column: message`.
    Parse(String),
    /// Arguments or input contents violate a precondition.
    Invalid(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<caustic_core::Error> for CliError {
    fn from(e: caustic_core::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

/// Result of a completed run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub report: Value,
    pub csv: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.report).expect("report is valid JSON");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.split(" at line ").next().unwrap_or(&msg).to_string();
        CliError::Parse(format!("{}:{}:{}: {msg}", path.display(), e.line(), e.column()))
    })
}

#[derive(Deserialize)]
struct DomainSpec {
    support: FourierSeries,
}

#[derive(Deserialize)]
struct PerturbationSpec {
    p1: FourierSeries,
    #[serde(default)]
    u1: Option<FourierSeries>,
}

/// Reads `{"support": <series>}`.
pub fn read_domain(path: &Path) -> Result<SupportFunction, CliError> {
    let text = read_text(path)?;
    let spec: DomainSpec = parse_json(path, &text)?;
    SupportFunction::new(spec.support)
        .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

/// Reads either a bare series (taken as `p₁`) or `{"p1": …, "u1": …}`.
pub fn read_perturbation(path: &Path) -> Result<(FourierSeries, Option<FourierSeries>), CliError> {
    let text = read_text(path)?;
    let value: Value = parse_json(path, &text)?;
    if value.get("K").is_some() {
        Ok((parse_json(path, &text)?, None))
    } else {
        let spec: PerturbationSpec = parse_json(path, &text)?;
        Ok((spec.p1, spec.u1))
    }
}

fn truncate(f: FourierSeries, order: Option<usize>) -> FourierSeries {
    match order {
        Some(k) if k < f.order() => f.with_order(k),
        _ => f,
    }
}

fn domain_or(cfg: &RunConfig, fallback: impl FnOnce() -> Result<SupportFunction, CliError>) -> Result<SupportFunction, CliError> {
    match &cfg.input {
        Some(path) => {
            let p = read_domain(path)?;
            match cfg.order {
                Some(k) if k < p.series().order() => Ok(SupportFunction::new(p.series().with_order(k))?),
                _ => Ok(p),
            }
        }
        None => fallback(),
    }
}

fn envelope(cfg: &RunConfig, passed: bool, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": cfg.command.name(),
        "config": cfg,
        "passed": passed,
        "result": result,
    })
}

/// Shortest round-trip form; exponent notation outside `[1e-4, 1e6)`.
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Executes a resolved configuration.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let cfg = cfg.clone().resolve()?;
    let (passed, result, csv) = match cfg.command {
        Command::Verify => verify(&cfg)?,
        Command::Expand => expand(&cfg)?,
        Command::SolveCaustic => solve_caustic(&cfg)?,
        Command::Obstruct => obstruct(&cfg)?,
        Command::Orbit => orbit(&cfg)?,
        Command::WidthCheck => width_check(&cfg)?,
    };
    Ok(Outcome {
        passed,
        report: envelope(&cfg, passed, result),
        csv,
    })
}

type Parts = (bool, Value, String);

fn moduli(cfg: &RunConfig) -> Vec<u32> {
    match cfg.m {
        Some(m) => vec![m],
        None => (2..=7).collect(),
    }
}

fn verify(cfg: &RunConfig) -> Result<Parts, CliError> {
    let p = domain_or(cfg, || Ok(SupportFunction::disc(1.0)?))?;
    let tol = cfg.tol("residual");
    let mut rows = Vec::new();
    let mut csv = String::from("m,residual,pass\n");
    let mut passed = true;
    for m in moduli(cfg) {
        let u = CausticCandidate::identity(m)?;
        let residual = error_functional(&p, &u)?.sup_norm;
        let ok = residual < tol;
        passed &= ok;
        rows.push(json!({ "m": m, "residual": residual, "pass": ok }));
        csv.push_str(&format!("{m},{},{ok}\n", num(residual)));
    }
    let result = json!({
        "convexity_margin": p.convexity_margin(),
        "identity_residuals": rows,
    });
    Ok((passed, result, csv))
}

fn expand(cfg: &RunConfig) -> Result<Parts, CliError> {
    let (t10, t11) = (cfg.tol("e10"), cfg.tol("e11"));
    let mut cases: Vec<(u32, FourierSeries, FourierSeries, &'static str)> = Vec::new();
    match &cfg.input {
        Some(path) => {
            let (p1, u1) = read_perturbation(path)?;
            let p1 = truncate(p1, cfg.order);
            for m in moduli(cfg) {
                match &u1 {
                    Some(u1) => cases.push((m, p1.clone(), u1.clone(), "input")),
                    None => match solve_first_order(m, &p1)? {
                        FirstOrder::Solved { u1 } => cases.push((m, p1.clone(), u1, "first-order")),
                        FirstOrder::Obstructed { projection } => {
                            return Err(CliError::Invalid(format!(
                                "no u1 given and p1 is obstructed at first order for m = {m} \
                                 (resonant modes {:?})",
                                projection
                                    .modes()
                                    .filter(|(k, c)| *k > 0 && c.norm() > 0.0)
                                    .map(|(k, _)| k)
                                    .collect::<Vec<_>>()
                            )))
                        }
                    },
                }
            }
        }
        None => {
            let mut rng = seeded(cfg.seed);
            let order = cfg.order.unwrap_or(8);
            let ms = moduli(cfg);
            for i in 0..cfg.iterations.unwrap_or(20) {
                let m = ms[i % ms.len()];
                let p1 = real_series(&mut rng, order, 0.3, |_| true);
                let u1 = real_series(&mut rng, order, 0.3, |_| true);
                cases.push((m, p1, u1, "random"));
            }
        }
    }
    let mut passed = true;
    let mut reports = Vec::new();
    let mut csv = String::from("case,m,order,discrepancy,tolerance,pass\n");
    for (i, (m, p1, u1, source)) in cases.iter().enumerate() {
        let [e10, e11] = expansion_reports(*m, p1, u1)?;
        for (rep, tol) in [(&e10, t10), (&e11, t11)] {
            let ok = rep.discrepancy < tol;
            passed &= ok;
            csv.push_str(&format!("{i},{m},{},{},{},{ok}\n", rep.order, num(rep.discrepancy), num(tol)));
        }
        reports.push(json!({
            "case": i,
            "m": m,
            "source": source,
            "p1": p1,
            "u1": u1,
            "reports": [e10, e11],
        }));
    }
    Ok((passed, json!({ "cases": reports }), csv))
}

fn solve_caustic(cfg: &RunConfig) -> Result<Parts, CliError> {
    let p = domain_or(cfg, || Ok(SupportFunction::ellipse(0.95, cfg.order.unwrap_or(32))?))?;
    let m = cfg.m.unwrap_or(3);
    let (tol, tol_refl) = (cfg.tol("residual"), cfg.tol("reflection"));
    let u0 = CausticCandidate::identity(m)?;
    let result = match newton_solve_caustic(&p, m, &u0, tol) {
        Ok(rep) => {
            let mut worst: f64 = 0.0;
            for j in 0..64 {
                let orbit = rep.candidate.orbit(TAU * j as f64 / 64.0);
                worst = worst.max(dynamics::reflection_residual(&p, &orbit)?);
            }
            let ok = rep.residual < tol && worst < tol_refl;
            let mut csv = String::from("k,re,im\n");
            for (k, c) in rep.candidate.periodic_part.modes() {
                if c.norm() > 0.0 {
                    csv.push_str(&format!("{k},{},{}\n", num(c.re), num(c.im)));
                }
            }
            let value = json!({
                "candidate": rep.candidate,
                "iterations": rep.iterations,
                "residual": rep.residual,
                "history": rep.history,
                "reflection_residual": worst,
                "base_points": 64,
            });
            (ok, value, csv)
        }
        Err(e) => (false, json!({ "error": e.to_string() }), String::from("k,re,im\n")),
    };
    Ok(result)
}

fn relevant_modes_max(l: u32, p1: &FourierSeries) -> f64 {
    let big = 2 * (2 * l as i64 + 1);
    let odd = 2 * l as i64 + 1;
    p1.modes()
        .filter(|(k, _)| {
            let r = k.rem_euclid(big);
            r != 0 && r != odd && k.abs() != 1 && k.rem_euclid(2) == 1
        })
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}

fn obstruct(cfg: &RunConfig) -> Result<Parts, CliError> {
    let l = cfg.l.unwrap_or(1);
    let verdict_tol = cfg.tol("verdict");
    match &cfg.input {
        Some(path) => {
            let (p1, _) = read_perturbation(path)?;
            let p1 = truncate(p1, cfg.order);
            let rep = quadratic_obstruction(l, &p1, cfg.n_max)?;
            let norm = p1.l2_norm();
            let trivial = rep.max_abs <= verdict_tol * norm * norm;
            let cert = triviality_certificate(l, &p1, verdict_tol * norm.max(1.0))?;
            let mut csv = String::from("n,re,im,abs,bare_re,bare_im\n");
            for (n, v) in &rep.values {
                let b = rep.bare_values[n];
                csv.push_str(&format!(
                    "{n},{},{},{},{},{}\n",
                    num(v.re),
                    num(v.im),
                    num(v.norm()),
                    num(b.re),
                    num(b.im)
                ));
            }
            let result = json!({
                "p1": p1,
                "report": rep,
                "trivial": trivial,
                "certificate": cert,
            });
            Ok((trivial, result, csv))
        }
        None => {
            let gap = cfg.tol("gap");
            let modes_tol = cfg.tol("modes");
            let order = cfg.order.unwrap_or(40);
            let count = cfg.iterations.unwrap_or(1000);
            let mut rng = seeded(cfg.seed);
            let mut counterexamples = Vec::new();
            let mut csv = String::from("sample,max_abs,witness_n,obstructed\n");
            let mut weakest = f64::INFINITY;
            for i in 0..count {
                let p1 = admissible_p1(&mut rng, l, order);
                let rep = quadratic_obstruction(l, &p1, cfg.n_max)?;
                let obstructed = rep.max_abs > gap;
                weakest = weakest.min(rep.max_abs);
                if !obstructed && relevant_modes_max(l, &p1) >= modes_tol {
                    counterexamples.push(json!({ "sample": i, "p1": p1, "max_abs": rep.max_abs }));
                }
                let w = rep.witness_n.map(|n| n.to_string()).unwrap_or_default();
                csv.push_str(&format!("{i},{},{w},{obstructed}\n", num(rep.max_abs)));
            }
            let passed = counterexamples.is_empty();
            let result = json!({
                "samples": count,
                "l": l,
                "K": order,
                "smallest_max_abs": weakest,
                "counterexamples": counterexamples,
            });
            Ok((passed, result, csv))
        }
    }
}

fn orbit(cfg: &RunConfig) -> Result<Parts, CliError> {
    let p = domain_or(cfg, || Ok(SupportFunction::ellipse(0.95, cfg.order.unwrap_or(32))?))?;
    let tol = cfg.tol("residual");
    let bounces = cfg.iterations.unwrap_or(100);
    let (t0, t1) = match cfg.chord {
        Some(c) => c,
        None => {
            let mut rng = seeded(cfg.seed);
            let t0 = uniform(&mut rng, 0.0, TAU);
            (t0, t0 + uniform(&mut rng, 0.5, TAU - 0.5))
        }
    };
    let pts = iterate(&p, ChordState::new(t0, t1), bounces)?;
    let residuals = trajectory_residuals(&p, &pts)?;
    let worst = residuals.iter().fold(0.0_f64, |a, r| a.max(*r));
    let mut csv = String::from("j,t_j,x_j,y_j,residual_j\n");
    for (j, t) in pts.iter().enumerate() {
        let [x, y] = boundary_point(&p, *t);
        let r = if j == 0 || j + 1 == pts.len() {
            String::new()
        } else {
            num(residuals[j - 1])
        };
        csv.push_str(&format!("{j},{},{},{},{r}\n", num(*t), num(x), num(y)));
    }
    let rotation = if bounces >= 100 {
        Some(rotation_number(&p, ChordState::new(t0, t1), bounces)?)
    } else {
        None
    };
    let passed = worst < tol;
    let result = json!({
        "seed_chord": [t0, t1],
        "points": pts,
        "max_residual": worst,
        "rotation": rotation,
    });
    Ok((passed, result, csv))
}

fn width_check(cfg: &RunConfig) -> Result<Parts, CliError> {
    let p = domain_or(cfg, || Ok(SupportFunction::disc(1.0)?))?;
    let rep = constant_width_check(&p, cfg.tol("width"));
    let mut csv = String::from("k,amplitude\n");
    for k in &rep.offending_modes {
        csv.push_str(&format!("{k},{}\n", num(2.0 * p.series().coeff(*k).norm())));
    }
    Ok((rep.is_constant_width, json!(rep), csv))
}
