//! Jacobi orthogonal polynomials normalized so that `J_k(1) = 1`.
//!
//! The family satisfies
//!
//! ```text
//! J_{k+1}(λ) = (a_k λ + b_k) J_k(λ) − c_k J_{k−1}(λ),   J_0 = 1,   J_1 = a_0 λ + b_0
//! ```
//!
//! with `a_k + b_k − c_k = 1`, and is orthogonal on `[−1, 1]` under the weight
//! `(1 − λ)^α (1 + λ)^β`. The same coefficients drive the Jacobi-accelerated
//! Frank-Wolfe update in [`crate::solvers`].
//!
//! Weighted norms are taken over `γ ∈ [0, 1]` through the change of variable
//! `λ = 2γ − 1`, under which the weight reads `(2 − 2γ)^α (2γ)^β`.

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

const DENOM_EPS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl JacobiParams {
    /// Validated constructor: `α ≥ β > −1`, `γ ∈ [0, 1]`.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let p = Self { alpha, beta, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { alpha, beta, gamma } = *self;
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::InvalidArgument("Jacobi parameters must be finite".into()));
        }
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(Error::InvalidArgument(format!("need alpha, beta > -1 (got {alpha}, {beta})")));
        }
        if alpha < beta {
            return Err(Error::InvalidArgument(format!("need alpha >= beta (got {alpha} < {beta})")));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(format!("need gamma in [0, 1] (got {gamma})")));
        }
        Ok(())
    }

    /// `α = β` with `γ = 1` zeroes `ω_k` for every `k`: the accelerated iterates never move.
    pub fn is_frozen(&self) -> bool {
        self.alpha == self.beta && self.gamma == 1.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecurrenceCoeffs {
    pub k: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub tau: f64,
}

pub fn recurrence_coeffs(params: &JacobiParams, k: usize) -> Result<RecurrenceCoeffs> {
    let JacobiParams { alpha, beta, .. } = *params;
    let tau = k as f64 + alpha + beta + 1.0;
    if k == 0 {
        let d = 2.0 * (1.0 + alpha);
        if d.abs() < DENOM_EPS {
            return Err(Error::DegenerateParams(format!("1 + alpha = 0 (alpha = {alpha})")));
        }
        return Ok(RecurrenceCoeffs { k, a: (alpha + beta + 2.0) / d, b: (alpha - beta) / d, c: 0.0, tau });
    }
    let kf = k as f64;
    let (t_b, t_km1) = (tau - beta, tau + kf - 1.0);
    for (name, v) in [("tau", tau), ("tau - beta", t_b), ("tau + k - 1", t_km1)] {
        if v.abs() < DENOM_EPS {
            return Err(Error::DegenerateParams(format!("{name} vanishes at k = {k}")));
        }
    }
    let a = (tau + kf) * (tau + kf + 1.0) / (2.0 * tau * t_b);
    let b = (tau + kf) * (alpha * alpha - beta * beta) / (2.0 * tau * t_b * t_km1);
    let c = kf * (kf + beta) * (tau + kf + 1.0) / (tau * t_b * t_km1);
    Ok(RecurrenceCoeffs { k, a, b, c, tau })
}

/// `J_k(λ)` by forward recursion.
pub fn eval_jacobi(params: &JacobiParams, k: usize, lambda: f64) -> Result<f64> {
    let mut prev = 1.0;
    if k == 0 {
        return Ok(prev);
    }
    let r0 = recurrence_coeffs(params, 0)?;
    let mut curr = r0.a * lambda + r0.b;
    for j in 1..k {
        let r = recurrence_coeffs(params, j)?;
        let next = (r.a * lambda + r.b) * curr - r.c * prev;
        prev = curr;
        curr = next;
    }
    Ok(curr)
}

/// `ω_k = a_k(1 − γ) + b_k`, the weight the accelerated update puts on the fresh FW step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Omega {
    pub value: f64,
    /// False when `ω_k ∉ [0, 1]`; the descent argument assumes membership.
    pub in_unit_interval: bool,
}

pub fn omega(params: &JacobiParams, k: usize) -> Result<Omega> {
    let r = recurrence_coeffs(params, k)?;
    let value = r.a * (1.0 - params.gamma) + r.b;
    Ok(Omega { value, in_unit_interval: (0.0..=1.0).contains(&value) })
}

/// Power-basis coefficients; `coeffs[i]` multiplies `λ^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialCoeffs {
    coeffs: Vec<f64>,
}

impl PolynomialCoeffs {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("polynomial needs at least one coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[self.degree()]
    }

    /// Horner evaluation.
    pub fn eval(&self, lambda: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * lambda + c)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// `a·self + b·other`, padded to the larger degree.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).copied().unwrap_or(0.0);
        Self { coeffs: (0..n).map(|i| a * get(self, i) + b * get(other, i)).collect() }
    }

    /// Rescale so the leading coefficient is 1.
    pub fn monic(&self) -> Result<Self> {
        let lead = self.leading();
        if lead == 0.0 {
            return Err(Error::InvalidArgument("zero leading coefficient".into()));
        }
        Ok(self.scaled(1.0 / lead))
    }
}

/// Coefficients of `J_k` in powers of `λ`, obtained by running the recurrence on
/// coefficient vectors instead of numbers.
pub fn expand_coeffs(params: &JacobiParams, k: usize) -> Result<PolynomialCoeffs> {
    let mut prev = vec![1.0];
    if k == 0 {
        return Ok(PolynomialCoeffs { coeffs: prev });
    }
    let r0 = recurrence_coeffs(params, 0)?;
    let mut curr = vec![r0.b, r0.a];
    for j in 1..k {
        let r = recurrence_coeffs(params, j)?;
        let mut next = vec![0.0; curr.len() + 1];
        for (i, c) in curr.iter().enumerate() {
            next[i + 1] += r.a * c;
            next[i] += r.b * c;
        }
        for (i, p) in prev.iter().enumerate() {
            next[i] -= r.c * p;
        }
        prev = curr;
        curr = next;
    }
    Ok(PolynomialCoeffs { coeffs: curr })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormOrder {
    L1,
    L2,
}

fn jacobi_weight(alpha: f64, beta: f64, g: f64) -> f64 {
    (2.0 - 2.0 * g).powf(alpha) * (2.0 * g).powf(beta)
}

fn check_weight(alpha: f64, beta: f64) -> Result<()> {
    if alpha > -1.0 && beta > -1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("weight exponents must exceed -1 (got {alpha}, {beta})")))
    }
}

fn rule(nodes: usize, degree: usize) -> Result<GaussLegendre> {
    if nodes < degree + 1 {
        return Err(Error::QuadratureUnderResolved { nodes, degree });
    }
    GaussLegendre::new(nodes).map_err(|e| Error::InvalidArgument(format!("quadrature rule: {e}")))
}

/// `∫₀¹ |poly(2γ − 1)|^p (2 − 2γ)^α (2γ)^β dγ` by `nodes`-point Gauss–Legendre.
pub fn weighted_poly_norm(poly: &PolynomialCoeffs, alpha: f64, beta: f64, p: NormOrder, nodes: usize) -> Result<f64> {
    check_weight(alpha, beta)?;
    let quad = rule(nodes, poly.degree())?;
    Ok(quad.integrate(0.0, 1.0, |g| {
        let v = poly.eval(2.0 * g - 1.0).abs();
        let v = match p {
            NormOrder::L1 => v,
            NormOrder::L2 => v * v,
        };
        v * jacobi_weight(alpha, beta, g)
    }))
}

/// Weighted inner product `∫₀¹ p(2γ−1) q(2γ−1) (2 − 2γ)^α (2γ)^β dγ`.
pub fn weighted_inner(p: &PolynomialCoeffs, q: &PolynomialCoeffs, alpha: f64, beta: f64, nodes: usize) -> Result<f64> {
    check_weight(alpha, beta)?;
    let quad = rule(nodes, p.degree().max(q.degree()))?;
    Ok(quad.integrate(0.0, 1.0, |g| {
        let l = 2.0 * g - 1.0;
        p.eval(l) * q.eval(l) * jacobi_weight(alpha, beta, g)
    }))
}
