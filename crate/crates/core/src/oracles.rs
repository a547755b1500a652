//! Linear minimization oracles over norm balls.
//!
//! For a ball `C = {x : ‖x‖ ≤ r}` and a gradient `g`, [`lmo`] returns
//! `argmin_{s ∈ C} ⟨g, s⟩`, which always sits on the boundary:
//!
//! * L2 ball: `−r g / ‖g‖₂`
//! * L1 ball: `−r sign(g_i) e_i` for the largest `|g_i|` (lowest index on ties)
//! * nuclear ball: `−r u vᵀ` from the top singular pair of `g`
//!
//! The L1 ball is not used by the benchmark experiments; it is the usual
//! sparse test set for Frank-Wolfe and costs a single argmax.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, DenseMatrix};
use crate::point::Point;

/// Gradients with Euclidean norm at or below this are treated as stationary.
pub const STATIONARY_EPS: f64 = 1e-14;
/// Power-iteration budget for one nuclear-ball oracle call.
pub const POWER_MAX_ITERS: usize = 100_000;
/// Singular values summed when a nuclear norm is too large for a full SVD.
const NUCLEAR_TOP_K: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    L2Ball,
    L1Ball,
    NuclearBall,
}

impl fmt::Display for SetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetKind::L2Ball => "l2",
            SetKind::L1Ball => "l1",
            SetKind::NuclearBall => "nuclear",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintSet {
    kind: SetKind,
    radius: f64,
}

impl ConstraintSet {
    pub fn new(kind: SetKind, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { kind, radius })
    }

    pub fn l2(radius: f64) -> Result<Self> {
        Self::new(SetKind::L2Ball, radius)
    }

    pub fn l1(radius: f64) -> Result<Self> {
        Self::new(SetKind::L1Ball, radius)
    }

    pub fn nuclear(radius: f64) -> Result<Self> {
        Self::new(SetKind::NuclearBall, radius)
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Oracle answer. `stationary` marks a zero gradient, where every feasible
/// point is optimal and the zero point is returned.
#[derive(Clone, Debug)]
pub struct LmoOutput {
    pub point: Point,
    pub stationary: bool,
}

pub fn lmo(set: &ConstraintSet, g: &Point, tol: f64, seed: u64) -> Result<LmoOutput> {
    if !g.is_finite() {
        return Err(Error::InvalidArgument("gradient has non-finite entries".into()));
    }
    let r = set.radius;
    let gnorm = g.norm();
    if gnorm <= STATIONARY_EPS {
        return Ok(LmoOutput { point: Point::zeros(g.shape()), stationary: true });
    }
    let point = match set.kind {
        SetKind::L2Ball => g.scaled(-r / gnorm),
        SetKind::L1Ball => {
            let gs = g.as_slice();
            let mut best = 0;
            for (i, v) in gs.iter().enumerate() {
                if v.abs() > gs[best].abs() {
                    best = i;
                }
            }
            let mut s = Point::zeros(g.shape());
            s.as_mut_slice()[best] = -r * gs[best].signum();
            s
        }
        SetKind::NuclearBall => {
            let m = g.as_matrix().ok_or_else(|| Error::ShapeMismatch {
                expected: "matrix gradient for the nuclear ball".into(),
                got: g.shape().to_string(),
            })?;
            let t = linalg::power_iteration(m, tol, POWER_MAX_ITERS, seed)?;
            Point::Matrix(DenseMatrix::outer(&t.u, &t.v, -r))
        }
    };
    Ok(LmoOutput { point, stationary: false })
}

/// Value of the set's defining norm at `x`, and whether it was computed exactly.
///
/// Nuclear norms of matrices larger than [`linalg::SMALL_SVD_LIMIT`] are a
/// top-k lower bound.
pub fn set_norm(set: &ConstraintSet, x: &Point) -> Result<(f64, bool)> {
    match (set.kind, x) {
        (SetKind::L2Ball, _) | (SetKind::NuclearBall, Point::Vector(_)) => Ok((x.norm(), true)),
        (SetKind::L1Ball, _) => Ok((x.as_slice().iter().map(|v| v.abs()).sum(), true)),
        (SetKind::NuclearBall, Point::Matrix(m)) => linalg::nuclear_norm(m, NUCLEAR_TOP_K, 0),
    }
}

/// `‖x‖ ≤ r(1 + slack)` in the set's defining norm.
pub fn contains(set: &ConstraintSet, x: &Point, slack: f64) -> bool {
    match set_norm(set, x) {
        Ok((n, _)) => n <= set.radius * (1.0 + slack),
        Err(_) => false,
    }
}

/// Euclidean diameter: `2r` for all three balls (attained at `±r` times a unit atom).
pub fn diameter(set: &ConstraintSet) -> f64 {
    2.0 * set.radius
}
