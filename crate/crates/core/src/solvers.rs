//! Vanilla Frank-Wolfe and Jacobi-accelerated Frank-Wolfe.
//!
//! Both methods take the open-loop step `γ_k = 2/(k+2)`. The accelerated variant
//! feeds the plain FW point `y_{k+1}` through one step of the Jacobi three-term
//! recurrence:
//!
//! ```text
//! y_{k+1} = x_k + γ_k (s_k − x_k)
//! z_{k+1} = (a_k(1−γ) + b_k) y_{k+1} − c_k x_k
//! x_{k+1} = z_{k+1} + γ a_k x_k
//! ```
//!
//! The weights on `y_{k+1}` and `x_k` sum to one, but the `x_k` weight
//! `γ a_k − c_k` may be negative, so accelerated iterates can leave the
//! constraint set. Feasibility is therefore measured and recorded
//! (`feasibility_slack`) at every iteration instead of being assumed.

use std::fmt;
use std::time::Instant;

use log::warn;

use crate::error::{Error, Result};
use crate::linalg::{self, SMALL_SVD_LIMIT};
use crate::objectives::Objective;
use crate::oracles::{self, ConstraintSet, SetKind};
use crate::point::Point;
use crate::polynomials::{self, JacobiParams};

/// Default duality-gap floor for early termination.
pub const DEFAULT_GAP_FLOOR: f64 = 1e-12;
/// Slack allowed on the starting point.
pub const START_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Fw,
    Jfw,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Fw => "fw",
            Method::Jfw => "jfw",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub method: Method,
    pub max_iters: usize,
    /// Present iff `method == Jfw`.
    pub jacobi: Option<JacobiParams>,
    pub oracle_tol: f64,
    pub seed: u64,
    /// When false the trace carries no duality gap and the gap floor is not checked.
    pub record_gap: bool,
    pub gap_floor: f64,
    /// Reference optimum; fills `TraceRecord::subopt`.
    pub reference_value: Option<f64>,
    /// Smoothness constant used only for the per-step descent diagnostic.
    pub smoothness: Option<f64>,
}

impl SolverConfig {
    pub fn fw(max_iters: usize) -> Self {
        Self {
            method: Method::Fw,
            max_iters,
            jacobi: None,
            oracle_tol: 1e-9,
            seed: 0,
            record_gap: true,
            gap_floor: DEFAULT_GAP_FLOOR,
            reference_value: None,
            smoothness: None,
        }
    }

    pub fn jfw(max_iters: usize, params: JacobiParams) -> Self {
        Self { method: Method::Jfw, jacobi: Some(params), ..Self::fw(max_iters) }
    }

    pub fn with_reference(mut self, f_star: Option<f64>) -> Self {
        self.reference_value = f_star;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        match (self.method, &self.jacobi) {
            (Method::Fw, None) => {}
            (Method::Jfw, Some(p)) => p.validate()?,
            (Method::Fw, Some(_)) => return Err(Error::InvalidArgument("FW takes no Jacobi parameters".into())),
            (Method::Jfw, None) => return Err(Error::InvalidArgument("JFW needs Jacobi parameters".into())),
        }
        if self.oracle_tol.is_nan() || self.oracle_tol <= 0.0 {
            return Err(Error::InvalidArgument("oracle_tol must be positive".into()));
        }
        Ok(())
    }
}

/// State at the start of iteration `k` (before the update).
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub f_value: f64,
    pub duality_gap: Option<f64>,
    pub subopt: Option<f64>,
    pub normalized_error: Option<f64>,
    pub wall_ms: f64,
    /// `max(0, ‖x_k‖/r − 1)` in the set's defining norm.
    pub feasibility_slack: f64,
}

/// Per-step diagnostics of the accelerated update.
#[derive(Clone, Debug, PartialEq)]
pub struct JfwStep {
    pub k: usize,
    pub coeffs: polynomials::RecurrenceCoeffs,
    /// Weight on `y_{k+1}`, i.e. `ω_k`.
    pub weight_y: f64,
    /// Weight on `x_k`, i.e. `γ a_k − c_k`.
    pub weight_x: f64,
    pub omega_in_unit_interval: bool,
    /// `6 ω_k L D² / (k+2)²`, when a smoothness constant is configured.
    pub descent_bound: Option<f64>,
    /// `f(x_k) − f(x_{k+1})`.
    pub observed_decrease: Option<f64>,
}

impl JfwStep {
    pub fn coefficient_sum(&self) -> f64 {
        self.weight_y + self.weight_x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    MaxIters,
    Stationary,
    GapFloor,
    /// `α = β`, `γ = 1`: every accelerated step is the identity.
    FrozenConfig,
}

#[derive(Clone, Debug)]
pub struct SolverRun {
    pub method: Method,
    pub trace: Vec<TraceRecord>,
    pub x_final: Point,
    pub stop: StopReason,
    pub jfw_steps: Vec<JfwStep>,
    pub warnings: Vec<String>,
}

impl SolverRun {
    pub fn max_feasibility_slack(&self) -> f64 {
        self.trace.iter().map(|r| r.feasibility_slack).fold(0.0, f64::max)
    }
}

pub fn step_size(k: usize) -> f64 {
    2.0 / (k as f64 + 2.0)
}

/// Frank-Wolfe gap `⟨∇f(x), x − s⟩`.
pub fn duality_gap<O: Objective + ?Sized>(obj: &O, x: &Point, s: &Point) -> Result<f64> {
    let g = obj.gradient(x)?;
    gap_from_gradient(&g, x, s)
}

fn gap_from_gradient(g: &Point, x: &Point, s: &Point) -> Result<f64> {
    Ok(g.inner(x)? - g.inner(s)?)
}

/// `2LD²/(k+2)`.
pub fn gap_bound_fw(l: f64, d: f64, k: usize) -> f64 {
    2.0 * l * d * d / (k as f64 + 2.0)
}

/// `|α/β| · 4LD² / ((k+1)(k+2))`.
pub fn gap_bound_jfw(l: f64, d: f64, k: usize, alpha: f64, beta: f64) -> Result<f64> {
    if beta == 0.0 {
        return Err(Error::BetaZero);
    }
    let kf = k as f64;
    Ok((alpha / beta).abs() * 4.0 * l * d * d / ((kf + 1.0) * (kf + 2.0)))
}

/// `6 ω_k L D² / (k+2)²`.
pub fn descent_bound(l: f64, d: f64, k: usize, params: &JacobiParams) -> Result<f64> {
    let w = polynomials::omega(params, k)?.value;
    Ok(6.0 * w * l * d * d / ((k as f64 + 2.0).powi(2)))
}

/// Weights `(ω_k, γ a_k − c_k)` applied to `(y_{k+1}, x_k)`.
pub fn jfw_step_weights(params: &JacobiParams, k: usize) -> Result<(f64, f64)> {
    let r = polynomials::recurrence_coeffs(params, k)?;
    Ok((r.a * (1.0 - params.gamma) + r.b, params.gamma * r.a - r.c))
}

/// Feasibility measurement. Vectors and small matrices are measured exactly;
/// for large nuclear-ball iterates an upper bound on the nuclear norm is carried
/// through the update via the triangle inequality, since a full SVD per
/// iteration is out of reach there.
struct FeasibilityTracker {
    set: ConstraintSet,
    structural: bool,
    bound: f64,
}

impl FeasibilityTracker {
    fn new(set: &ConstraintSet, x0: &Point) -> Result<Self> {
        let structural = matches!((set.kind(), x0), (SetKind::NuclearBall, Point::Matrix(m))
            if m.rows() > SMALL_SVD_LIMIT || m.cols() > SMALL_SVD_LIMIT);
        let (bound, _) = oracles::set_norm(set, x0)?;
        Ok(Self { set: *set, structural, bound })
    }

    fn slack(&self, x: &Point) -> Result<f64> {
        let n = if self.structural { self.bound } else { oracles::set_norm(&self.set, x)?.0 };
        Ok((n / self.set.radius() - 1.0).max(0.0))
    }

    /// Record `x_{k+1} = p x_k + q s_k`.
    fn advance(&mut self, p: f64, q: f64, s_norm: f64) {
        if self.structural {
            self.bound = p.abs() * self.bound + q.abs() * s_norm;
        }
    }
}

pub fn run_fw<O: Objective + ?Sized>(
    obj: &O,
    set: &ConstraintSet,
    x0: &Point,
    config: &SolverConfig,
) -> Result<SolverRun> {
    solve(obj, set, x0, config, &mut |_| Ok(None))
}

pub fn run_jfw<O: Objective + ?Sized>(
    obj: &O,
    set: &ConstraintSet,
    x0: &Point,
    config: &SolverConfig,
) -> Result<SolverRun> {
    solve(obj, set, x0, config, &mut |_| Ok(None))
}

/// Runs the configured method. `monitor` is called on every recorded iterate
/// and its value lands in `TraceRecord::normalized_error`.
pub fn solve<O: Objective + ?Sized>(
    obj: &O,
    set: &ConstraintSet,
    x0: &Point,
    config: &SolverConfig,
    monitor: &mut dyn FnMut(&Point) -> Result<Option<f64>>,
) -> Result<SolverRun> {
    config.validate()?;
    x0.check_shape(obj.shape())?;
    if !oracles::contains(set, x0, START_SLACK) {
        let (n, _) = oracles::set_norm(set, x0)?;
        return Err(Error::InfeasibleStart { slack: n / set.radius() - 1.0 });
    }

    let mut warnings = Vec::new();
    let jacobi = config.jacobi;
    if let Some(p) = &jacobi {
        if p.is_frozen() {
            let msg = format!(
                "degenerate config alpha = beta = {}, gamma = 1: accelerated iterates are frozen at x0",
                p.alpha
            );
            warn!("{msg}");
            warnings.push(msg);
        }
    }

    let start = Instant::now();
    let diam = oracles::diameter(set);
    let mut tracker = FeasibilityTracker::new(set, x0)?;
    let mut x = x0.clone();
    let mut trace: Vec<TraceRecord> = Vec::with_capacity(config.max_iters + 1);
    let mut steps = Vec::new();
    let mut omega_warned = false;
    let mut stop = StopReason::MaxIters;

    for k in 0..=config.max_iters {
        let f_value = obj.value(&x)?;
        if let (Some(step), Some(prev)) = (steps.last_mut(), trace.last()) {
            let step: &mut JfwStep = step;
            step.observed_decrease = Some(prev.f_value - f_value);
        }
        let g = obj.gradient(&x)?;
        let lmo = oracles::lmo(set, &g, config.oracle_tol, config.seed.wrapping_add(k as u64))?;
        let gap = gap_from_gradient(&g, &x, &lmo.point)?;
        let normalized_error = monitor(&x)?;
        trace.push(TraceRecord {
            k,
            f_value,
            duality_gap: config.record_gap.then_some(gap),
            subopt: config.reference_value.map(|r| f_value - r),
            normalized_error,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            feasibility_slack: tracker.slack(&x)?,
        });

        if lmo.stationary {
            stop = StopReason::Stationary;
            break;
        }
        if config.record_gap && gap.abs() <= config.gap_floor {
            stop = StopReason::GapFloor;
            break;
        }
        if jacobi.is_some_and(|p| p.is_frozen()) {
            stop = StopReason::FrozenConfig;
            break;
        }
        if k == config.max_iters {
            break;
        }

        let gk = step_size(k);
        let s = lmo.point;
        let s_norm = set.radius();
        // y = x + γ_k (s − x)
        let y = x.combine(1.0 - gk, &s, gk)?;
        match &jacobi {
            None => {
                tracker.advance(1.0 - gk, gk, s_norm);
                x = y;
            }
            Some(p) => {
                let r = polynomials::recurrence_coeffs(p, k)?;
                let weight_y = r.a * (1.0 - p.gamma) + r.b;
                let weight_x = p.gamma * r.a - r.c;
                let in_range = (0.0..=1.0).contains(&weight_y);
                if !in_range && !omega_warned {
                    let msg = format!("omega_{k} = {weight_y:.6} lies outside [0, 1]");
                    warn!("{msg}");
                    warnings.push(msg);
                    omega_warned = true;
                }
                // z = ω y − c x ; x ← z + γ a x
                let z = y.combine(weight_y, &x, -r.c)?;
                let x_next = z.combine(1.0, &x, p.gamma * r.a)?;
                // x_{k+1} = (ω(1−γ_k) + γa − c) x_k + ω γ_k s_k
                tracker.advance(weight_y * (1.0 - gk) + weight_x, weight_y * gk, s_norm);
                steps.push(JfwStep {
                    k,
                    coeffs: r,
                    weight_y,
                    weight_x,
                    omega_in_unit_interval: in_range,
                    descent_bound: config
                        .smoothness
                        .map(|l| 6.0 * weight_y * l * diam * diam / ((k as f64 + 2.0).powi(2))),
                    observed_decrease: None,
                });
                x = x_next;
            }
        }
    }

    Ok(SolverRun { method: config.method, trace, x_final: x, stop, jfw_steps: steps, warnings })
}

/// Best gap seen so far at each record, the monotone FW certificate.
pub fn running_min_gap(trace: &[TraceRecord]) -> Vec<f64> {
    let mut best = f64::INFINITY;
    trace
        .iter()
        .map(|r| {
            if let Some(g) = r.duality_gap {
                best = best.min(g);
            }
            best
        })
        .collect()
}

/// Exact nuclear norm of a small matrix iterate; used by tests and the CLI audit.
pub fn exact_nuclear_norm(x: &Point) -> Option<f64> {
    let m = x.as_matrix()?;
    (m.rows() <= SMALL_SVD_LIMIT && m.cols() <= SMALL_SVD_LIMIT).then(|| linalg::singular_values(m).iter().sum())
}
