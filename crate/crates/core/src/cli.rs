//! Experiment runner behind the `jfw` binary.
//!
//! A config is a flat TOML table whose keys are exactly the fields of
//! [`RawConfig`]; unknown keys are rejected. Each task picks its loader:
//!
//! | task                | data                     | objective                  |
//! |---------------------|--------------------------|----------------------------|
//! | `logistic`          | UCI breast cancer        | logistic loss              |
//! | `huber_ridge`       | Pima diabetes            | Huber regression           |
//! | `matrix_completion` | Movielens `u.data`       | Huber matrix completion    |
//! | `synthetic`         | generated quadratic      | known-optimum quadratic    |

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use serde::Deserialize;

use crate::data;
use crate::error::{Error, Result};
use crate::objectives::{
    normalized_test_error, HuberRidgeObjective, LogisticObjective, MatrixCompletionObjective, Objective,
};
use crate::oracles::{ConstraintSet, SetKind};
use crate::point::Point;
use crate::polynomials::JacobiParams;
use crate::solvers::{self, Method, SolverConfig, SolverRun, StopReason, TraceRecord};

pub const TRACE_HEADER: &str = "k,f_value,duality_gap,subopt,normalized_error,wall_ms,feasibility_slack";
/// Duality-gap floor for long reference runs.
pub const REFERENCE_GAP_FLOOR: f64 = 1e-10;
/// Records a slope fit needs inside its window.
pub const MIN_SLOPE_POINTS: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Logistic,
    HuberRidge,
    MatrixCompletion,
    Synthetic,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Task::Logistic => "logistic",
            Task::HuberRidge => "huber_ridge",
            Task::MatrixCompletion => "matrix_completion",
            Task::Synthetic => "synthetic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    L1,
    L2,
    Nuclear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    Fw,
    Jfw,
}

/// The config file as written.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub task: Task,
    pub dataset_path: Option<PathBuf>,
    pub constraint: ConstraintKind,
    pub radius: f64,
    pub methods: Vec<MethodName>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
    pub max_iters: usize,
    #[serde(default)]
    pub seed: u64,
    pub outlier_fraction: Option<f64>,
    pub train_fraction: Option<f64>,
    #[serde(default = "default_reference")]
    pub reference: String,
    pub reference_multiplier: Option<usize>,
    pub output_dir: PathBuf,
    pub dim: Option<usize>,
    pub condition: Option<f64>,
    pub interior: Option<bool>,
    #[serde(default)]
    pub record_wall_time: bool,
}

fn default_reference() -> String {
    "none".into()
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReferenceMode {
    None,
    /// Long FW run with `multiplier × max_iters` iterations.
    LongRun {
        multiplier: usize,
    },
    File(PathBuf),
    /// Closed-form optimum; synthetic task only.
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TaskSpec {
    Logistic { dataset_path: PathBuf },
    HuberRidge { dataset_path: PathBuf, delta: f64 },
    MatrixCompletion { dataset_path: PathBuf, delta: f64, outlier_fraction: f64, train_fraction: f64 },
    Synthetic { dim: usize, condition: f64, interior: bool },
}

impl TaskSpec {
    pub fn task(&self) -> Task {
        match self {
            TaskSpec::Logistic { .. } => Task::Logistic,
            TaskSpec::HuberRidge { .. } => Task::HuberRidge,
            TaskSpec::MatrixCompletion { .. } => Task::MatrixCompletion,
            TaskSpec::Synthetic { .. } => Task::Synthetic,
        }
    }
}

/// Validated experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub task: TaskSpec,
    pub constraint: ConstraintSet,
    pub methods: Vec<Method>,
    pub jacobi: Option<JacobiParams>,
    pub max_iters: usize,
    pub seed: u64,
    pub reference: ReferenceMode,
    pub output_dir: PathBuf,
    /// Fill the `wall_ms` column. Off by default so reruns are byte-identical.
    pub record_wall_time: bool,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn require<T>(value: Option<T>, key: &str, task: Task) -> Result<T> {
    value.ok_or_else(|| cfg_err(format!("task {task} requires `{key}`")))
}

fn forbid<T>(value: &Option<T>, key: &str, task: Task) -> Result<()> {
    match value {
        Some(_) => Err(cfg_err(format!("`{key}` does not apply to task {task}"))),
        None => Ok(()),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| cfg_err(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| cfg_err(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self> {
        let task = raw.task;
        if raw.max_iters < 1 {
            return Err(cfg_err("max_iters must be at least 1"));
        }

        let spec = match task {
            Task::Logistic | Task::HuberRidge | Task::MatrixCompletion => {
                forbid(&raw.condition, "condition", task)?;
                forbid(&raw.dim, "dim", task)?;
                forbid(&raw.interior, "interior", task)?;
                let dataset_path = require(raw.dataset_path.clone(), "dataset_path", task)?;
                match task {
                    Task::Logistic => {
                        forbid(&raw.delta, "delta", task)?;
                        forbid(&raw.outlier_fraction, "outlier_fraction", task)?;
                        forbid(&raw.train_fraction, "train_fraction", task)?;
                        TaskSpec::Logistic { dataset_path }
                    }
                    Task::HuberRidge => {
                        forbid(&raw.outlier_fraction, "outlier_fraction", task)?;
                        forbid(&raw.train_fraction, "train_fraction", task)?;
                        TaskSpec::HuberRidge { dataset_path, delta: require(raw.delta, "delta", task)? }
                    }
                    _ => {
                        let outlier_fraction = raw.outlier_fraction.unwrap_or(0.0);
                        if !(0.0..=1.0).contains(&outlier_fraction) {
                            return Err(cfg_err("outlier_fraction must lie in [0, 1]"));
                        }
                        let train_fraction = require(raw.train_fraction, "train_fraction", task)?;
                        if !(train_fraction > 0.0 && train_fraction < 1.0) {
                            return Err(cfg_err("train_fraction must lie in (0, 1)"));
                        }
                        TaskSpec::MatrixCompletion {
                            dataset_path,
                            delta: require(raw.delta, "delta", task)?,
                            outlier_fraction,
                            train_fraction,
                        }
                    }
                }
            }
            Task::Synthetic => {
                forbid(&raw.dataset_path, "dataset_path", task)?;
                forbid(&raw.delta, "delta", task)?;
                forbid(&raw.outlier_fraction, "outlier_fraction", task)?;
                forbid(&raw.train_fraction, "train_fraction", task)?;
                let dim = require(raw.dim, "dim", task)?;
                let condition = require(raw.condition, "condition", task)?;
                if dim == 0 || condition.is_nan() || condition < 1.0 {
                    return Err(cfg_err("synthetic task needs dim >= 1 and condition >= 1"));
                }
                TaskSpec::Synthetic { dim, condition, interior: require(raw.interior, "interior", task)? }
            }
        };
        if let TaskSpec::HuberRidge { delta, .. } | TaskSpec::MatrixCompletion { delta, .. } = spec {
            if !(delta > 0.0 && delta.is_finite()) {
                return Err(cfg_err(format!("delta must be positive, got {delta}")));
            }
        }

        let kind = match (task, raw.constraint) {
            (Task::MatrixCompletion, ConstraintKind::Nuclear) => SetKind::NuclearBall,
            (Task::MatrixCompletion, _) => return Err(cfg_err("matrix_completion needs constraint = \"nuclear\"")),
            (_, ConstraintKind::Nuclear) => return Err(cfg_err(format!("task {task} is vector-valued; use l1 or l2"))),
            (_, ConstraintKind::L1) => SetKind::L1Ball,
            (_, ConstraintKind::L2) => SetKind::L2Ball,
        };
        let constraint = ConstraintSet::new(kind, raw.radius).map_err(|e| cfg_err(e.to_string()))?;

        if raw.methods.is_empty() {
            return Err(cfg_err("methods must list at least one of \"fw\", \"jfw\""));
        }
        let mut methods = Vec::new();
        for m in &raw.methods {
            let m = match m {
                MethodName::Fw => Method::Fw,
                MethodName::Jfw => Method::Jfw,
            };
            if methods.contains(&m) {
                return Err(cfg_err(format!("method {m} listed twice")));
            }
            methods.push(m);
        }
        let jacobi = if methods.contains(&Method::Jfw) {
            let p = JacobiParams {
                alpha: require(raw.alpha, "alpha", task)?,
                beta: require(raw.beta, "beta", task)?,
                gamma: require(raw.gamma, "gamma", task)?,
            };
            p.validate().map_err(|e| cfg_err(e.to_string()))?;
            Some(p)
        } else {
            forbid(&raw.alpha, "alpha", task)?;
            forbid(&raw.beta, "beta", task)?;
            forbid(&raw.gamma, "gamma", task)?;
            None
        };

        let reference = match raw.reference.as_str() {
            "none" => ReferenceMode::None,
            "long_run" => {
                let multiplier = raw.reference_multiplier.unwrap_or(100);
                if multiplier < 1 {
                    return Err(cfg_err("reference_multiplier must be at least 1"));
                }
                ReferenceMode::LongRun { multiplier }
            }
            "exact" if task == Task::Synthetic => ReferenceMode::Exact,
            "exact" => return Err(cfg_err("reference = \"exact\" is only available for the synthetic task")),
            other => match other.strip_prefix("file:") {
                Some(p) if !p.is_empty() => ReferenceMode::File(PathBuf::from(p)),
                _ => return Err(cfg_err(format!("unknown reference mode {other:?}"))),
            },
        };
        if raw.reference_multiplier.is_some() && !matches!(reference, ReferenceMode::LongRun { .. }) {
            return Err(cfg_err("reference_multiplier only applies to reference = \"long_run\""));
        }

        Ok(Self {
            task: spec,
            constraint,
            methods,
            jacobi,
            max_iters: raw.max_iters,
            seed: raw.seed,
            reference,
            output_dir: raw.output_dir,
            record_wall_time: raw.record_wall_time,
        })
    }
}

/// Objective, feasible set and starting point built from a config.
pub struct Problem {
    pub objective: Box<dyn Objective>,
    pub set: ConstraintSet,
    pub x0: Point,
    /// Held-out ratings for the normalized test error.
    pub test: Option<MatrixCompletionObjective>,
    /// Closed-form optimum value when one is known.
    pub f_star: Option<f64>,
    pub smoothness: Option<f64>,
}

pub fn build_problem(config: &ExperimentConfig) -> Result<Problem> {
    let set = config.constraint;
    let mut test = None;
    let (mut f_star, mut smoothness) = (None, None);
    let objective: Box<dyn Objective> = match &config.task {
        TaskSpec::Logistic { dataset_path } => {
            let ds = data::load_breast_cancer(dataset_path)?;
            Box::new(LogisticObjective::new(ds.features, ds.targets)?)
        }
        TaskSpec::HuberRidge { dataset_path, delta } => {
            let ds = data::load_pima(dataset_path)?;
            Box::new(HuberRidgeObjective::new(ds.features, ds.targets, *delta)?)
        }
        TaskSpec::MatrixCompletion { dataset_path, delta, outlier_fraction, train_fraction } => {
            let ds = data::load_movielens(dataset_path)?;
            let noisy = data::inject_outliers(&ds, *outlier_fraction, config.seed)?;
            let (train, held_out) = data::train_test_split(&noisy, *train_fraction, config.seed.wrapping_add(1))?;
            info!(
                "movielens: {} ratings, {} users, {} items; train {} / test {}",
                ds.len(),
                ds.n_users,
                ds.n_items,
                train.len(),
                held_out.len()
            );
            test = Some(held_out.completion_objective(*delta)?);
            Box::new(train.completion_objective(*delta)?)
        }
        TaskSpec::Synthetic { dim, condition, interior } => {
            let p = data::synth_quadratic(*dim, *condition, set.radius(), *interior, config.seed)?;
            f_star = Some(p.f_star);
            smoothness = Some(p.smoothness);
            Box::new(p.objective)
        }
    };
    let x0 = Point::zeros(objective.shape());
    Ok(Problem { objective, set, x0, test, f_star, smoothness })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reference {
    pub value: f64,
    /// Final duality gap of the run that produced `value`; bounds `value − f⋆`.
    pub certificate: Option<f64>,
}

/// Reference optimum per the config's mode; `None` when the mode is `none`.
pub fn compute_reference(config: &ExperimentConfig) -> Result<Option<Reference>> {
    match &config.reference {
        ReferenceMode::None => Ok(None),
        ReferenceMode::File(path) => read_reference_file(path).map(Some),
        ReferenceMode::Exact => {
            let problem = build_problem(config)?;
            let value = problem.f_star.ok_or_else(|| cfg_err("no closed-form optimum for this task"))?;
            Ok(Some(Reference { value, certificate: Some(0.0) }))
        }
        ReferenceMode::LongRun { multiplier } => {
            let problem = build_problem(config)?;
            let iters = config.max_iters.saturating_mul(*multiplier);
            long_run_reference(problem.objective.as_ref(), &problem.set, &problem.x0, iters, config.seed).map(Some)
        }
    }
}

/// Minimum objective value over a long FW run stopped at a gap of [`REFERENCE_GAP_FLOOR`].
pub fn long_run_reference<O: Objective + ?Sized>(
    obj: &O,
    set: &ConstraintSet,
    x0: &Point,
    iters: usize,
    seed: u64,
) -> Result<Reference> {
    let mut cfg = SolverConfig::fw(iters).with_seed(seed);
    cfg.gap_floor = REFERENCE_GAP_FLOOR;
    let run = solvers::run_fw(obj, set, x0, &cfg)?;
    let value = run.trace.iter().map(|r| r.f_value).fold(f64::INFINITY, f64::min);
    let certificate = solvers::running_min_gap(&run.trace).last().copied().filter(|g| g.is_finite());
    info!("reference: f = {value:.12e} after {} iterations, gap {certificate:?}", run.trace.len() - 1);
    Ok(Reference { value, certificate })
}

fn read_reference_file(path: &Path) -> Result<Reference> {
    let text = fs::read_to_string(path).map_err(|e| cfg_err(format!("{}: {e}", path.display())))?;
    let token = text.split_whitespace().next().ok_or_else(|| cfg_err(format!("{} is empty", path.display())))?;
    let value: f64 = token.parse().map_err(|_| cfg_err(format!("bad reference value {token:?}")))?;
    if !value.is_finite() {
        return Err(cfg_err("reference value must be finite"));
    }
    Ok(Reference { value, certificate: None })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub method: Method,
    pub final_f: f64,
    pub final_gap: Option<f64>,
    pub final_subopt: Option<f64>,
    pub final_normalized_error: Option<f64>,
    /// Log-log suboptimality slope over the last 90% of iterations.
    pub rate_slope: Option<f64>,
    /// Number of updates performed.
    pub iterations: usize,
    pub wall_ms: f64,
    pub feasibility_max_slack: f64,
    pub stop: StopReason,
    pub trace_path: PathBuf,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6e}"));
        write!(
            f,
            "{:<3} iters={} f={:.10e} gap={} subopt={} test_err={} slope={} slack={:.3e} wall_ms={:.1} stop={:?}",
            self.method,
            self.iterations,
            self.final_f,
            opt(self.final_gap),
            opt(self.final_subopt),
            opt(self.final_normalized_error),
            self.rate_slope.map_or("-".to_string(), |s| format!("{s:.3}")),
            self.feasibility_max_slack,
            self.wall_ms,
            self.stop,
        )
    }
}

pub fn trace_file_name(task: Task, method: Method, seed: u64) -> String {
    format!("{task}_{method}_{seed}.csv")
}

/// Solver settings for one method of an experiment.
pub fn solver_config(
    config: &ExperimentConfig,
    method: Method,
    reference: Option<f64>,
    smoothness: Option<f64>,
) -> SolverConfig {
    let mut cfg = match method {
        Method::Fw => SolverConfig::fw(config.max_iters),
        Method::Jfw => SolverConfig::jfw(config.max_iters, config.jacobi.expect("validated config")),
    };
    cfg.seed = config.seed;
    cfg.reference_value = reference;
    cfg.smoothness = smoothness;
    cfg
}

/// Runs every configured method on one shared problem, writes one trace per
/// method into `output_dir` and returns the summaries in config order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunSummary>> {
    let problem = build_problem(config)?;
    let reference = match &config.reference {
        ReferenceMode::None => None,
        ReferenceMode::Exact => problem.f_star,
        ReferenceMode::File(path) => Some(read_reference_file(path)?.value),
        ReferenceMode::LongRun { multiplier } => Some(
            long_run_reference(
                problem.objective.as_ref(),
                &problem.set,
                &problem.x0,
                config.max_iters.saturating_mul(*multiplier),
                config.seed,
            )?
            .value,
        ),
    };
    fs::create_dir_all(&config.output_dir)?;

    let runs: Vec<Result<(SolverRun, f64)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .methods
            .iter()
            .map(|&method| {
                let problem = &problem;
                scope.spawn(move || {
                    let cfg = solver_config(config, method, reference, problem.smoothness);
                    let start = Instant::now();
                    let run = match &problem.test {
                        Some(test) => {
                            solvers::solve(problem.objective.as_ref(), &problem.set, &problem.x0, &cfg, &mut |x| {
                                let m = x.as_matrix().expect("matrix iterate");
                                normalized_test_error(test, m).map(Some)
                            })?
                        }
                        None => {
                            solvers::solve(problem.objective.as_ref(), &problem.set, &problem.x0, &cfg, &mut |_| {
                                Ok(None)
                            })?
                        }
                    };
                    Ok((run, start.elapsed().as_secs_f64() * 1e3))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });

    let mut summaries = Vec::with_capacity(runs.len());
    for run in runs {
        let (mut run, wall_ms) = run?;
        if !config.record_wall_time {
            run.trace.iter_mut().for_each(|r| r.wall_ms = f64::NAN);
        }
        let path = config.output_dir.join(trace_file_name(config.task.task(), run.method, config.seed));
        write_trace(&path, &run.trace)?;
        summaries.push(summarize(&run, wall_ms, path));
    }
    Ok(summaries)
}

fn summarize(run: &SolverRun, wall_ms: f64, trace_path: PathBuf) -> RunSummary {
    let last = run.trace.last().expect("trace has the initial record");
    let kmax = last.k;
    let rate_slope = rate_slope(&run.trace, (kmax / 10).max(1), kmax).ok();
    RunSummary {
        method: run.method,
        final_f: last.f_value,
        final_gap: last.duality_gap,
        final_subopt: last.subopt,
        final_normalized_error: last.normalized_error,
        rate_slope,
        iterations: kmax,
        wall_ms,
        feasibility_max_slack: run.max_feasibility_slack(),
        stop: run.stop,
        trace_path,
    }
}

/// Least-squares slope of `log(subopt)` against `log(k)` over `k_min ≤ k ≤ k_max`.
/// Non-positive suboptimality entries are skipped.
pub fn rate_slope(trace: &[TraceRecord], k_min: usize, k_max: usize) -> Result<f64> {
    if k_min < 1 || k_min >= k_max {
        return Err(Error::InvalidArgument(format!("need 1 <= k_min < k_max, got [{k_min}, {k_max}]")));
    }
    let window: Vec<&TraceRecord> = trace.iter().filter(|r| r.k >= k_min && r.k <= k_max).collect();
    if window.len() < MIN_SLOPE_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} records in [{k_min}, {k_max}], need {MIN_SLOPE_POINTS}",
            window.len()
        )));
    }
    if window.iter().any(|r| r.subopt.is_none()) {
        return Err(Error::InsufficientData("trace carries no suboptimality values".into()));
    }
    let pts: Vec<(f64, f64)> =
        window.iter().filter_map(|r| r.subopt.filter(|&s| s > 0.0).map(|s| ((r.k as f64).ln(), s.ln()))).collect();
    if pts.len() < MIN_SLOPE_POINTS {
        return Err(Error::NonpositiveGap { remaining: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:e}"),
        _ => String::new(),
    }
}

pub fn format_trace(trace: &[TraceRecord]) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for r in trace {
        out.push_str(&format!(
            "{},{:e},{},{},{},{},{:e}\n",
            r.k,
            r.f_value,
            fmt_opt(r.duality_gap),
            fmt_opt(r.subopt),
            fmt_opt(r.normalized_error),
            fmt_opt(Some(r.wall_ms)),
            r.feasibility_slack
        ));
    }
    out
}

/// Writes to a sibling temp file, then renames over `path`.
pub fn write_trace(path: &Path, trace: &[TraceRecord]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::InvalidArgument(format!("bad trace path {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(format_trace(trace).as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == TRACE_HEADER => {}
        _ => return Err(Error::Parse { line: 1, msg: format!("expected header {TRACE_HEADER:?}") }),
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse { line: lineno, msg: format!("expected 7 fields, found {}", fields.len()) });
        }
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Parse { line: lineno, msg: format!("bad number {s:?}") })
        };
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        out.push(TraceRecord {
            k: fields[0].parse().map_err(|_| Error::Parse { line: lineno, msg: format!("bad k {:?}", fields[0]) })?,
            f_value: num(fields[1])?,
            duality_gap: opt(fields[2])?,
            subopt: opt(fields[3])?,
            normalized_error: opt(fields[4])?,
            wall_ms: opt(fields[5])?.unwrap_or(f64::NAN),
            feasibility_slack: num(fields[6])?,
        });
    }
    Ok(out)
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<Vec<TraceRecord>> {
    parse_trace(&fs::read_to_string(path)?)
}
