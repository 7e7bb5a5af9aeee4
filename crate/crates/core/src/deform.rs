//! The order-deformation operator exp(−λ Σ_(m≠0) ∂_m/m) acting on φ_n.
//!
//! On the generating function every ∂_m is multiplication by (−t)^(−m), and
//! on |t| = 1, −π < θ < π the exponent sums to iλθ, so the operator is
//! multiplication by t^(−λ). Two realizations follow from that:
//!
//! * [`Strategy::FourierWeights`]: the Laurent coefficients
//!   w_k = (−1)^k sin(πλ) / (π(λ+k)) of t^(−λ), giving
//!   Σ_(|k|≤W) w_k φ_(n−k)(z);
//! * [`Strategy::TaylorOperator`]: Σ_(p≤P) (−λ)^p A^p e_n / p! on the φ
//!   lattice, A = Σ_(0<|m|≤W) ∂_m/m applied with [`PhiBasisVector::apply_a`].
//!
//! Both are truncations of the same operator; the first truncates the output
//! window, the second truncates the sum over m and the exponential series.
//! The Taylor route converges only like 1/W in the cut because the symbol of
//! A is a sawtooth with a jump at θ = ±π.

use std::f64::consts::PI;

use thiserror::Error;

use crate::gamma::sin_pi;
use crate::ladder::{LadderError, PhiBasisVector};
use crate::series::{phi_direct, RealOrder, SeriesError};

pub const DEFAULT_WINDOW: i64 = 40;
pub const DEFAULT_TAYLOR_ORDER: usize = 20;
pub const DEFAULT_INTEGER_SNAP: f64 = 1e-9;
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_TAYLOR_TOLERANCE: f64 = 1e-8;
/// Largest |λ| the Taylor route accepts.
pub const TAYLOR_MAX_LAMBDA: f64 = 0.9;
/// Largest Taylor order the Taylor route accepts.
pub const TAYLOR_MAX_ORDER: usize = 25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DeformError {
    #[error("invalid deformation plan: {0}")]
    InvalidPlan(String),
    #[error("window too small: boundary term {tail:e} exceeds {tolerance:e}")]
    WindowTooSmall { tail: f64, tolerance: f64 },
    #[error("Taylor series not converged: last term {last:e} exceeds {tolerance:e}")]
    TaylorNotConverged { last: f64, tolerance: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ladder(#[from] LadderError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    FourierWeights,
    TaylorOperator,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fourier-weights" | "fourier" | "weights" => Ok(Strategy::FourierWeights),
            "taylor-operator" | "taylor" => Ok(Strategy::TaylorOperator),
            other => Err(format!("unknown strategy '{other}'")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::FourierWeights => "fourier-weights",
            Strategy::TaylorOperator => "taylor-operator",
        })
    }
}

/// λ together with every truncation the deformation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationPlan {
    pub lambda: f64,
    /// Indices |k| ≤ window are retained; also the m-cut of the Taylor route.
    pub window: i64,
    pub strategy: Strategy,
    pub taylor_order: usize,
    pub integer_snap: f64,
    pub tail_tolerance: f64,
    pub taylor_tolerance: f64,
}

impl DeformationPlan {
    pub fn new(lambda: f64) -> Self {
        DeformationPlan {
            lambda,
            window: DEFAULT_WINDOW,
            strategy: Strategy::FourierWeights,
            taylor_order: DEFAULT_TAYLOR_ORDER,
            integer_snap: DEFAULT_INTEGER_SNAP,
            tail_tolerance: DEFAULT_TAIL_TOLERANCE,
            taylor_tolerance: DEFAULT_TAYLOR_TOLERANCE,
        }
    }

    pub fn with_window(mut self, window: i64) -> Self {
        self.window = window;
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_taylor_order(mut self, order: usize) -> Self {
        self.taylor_order = order;
        self
    }

    pub fn with_tail_tolerance(mut self, tol: f64) -> Self {
        self.tail_tolerance = tol;
        self
    }

    pub fn validate(&self) -> Result<(), DeformError> {
        let bad = |msg: String| Err(DeformError::InvalidPlan(msg));
        if !self.lambda.is_finite() {
            return bad(format!("lambda {} is not finite", self.lambda));
        }
        if self.window < 1 {
            return bad(format!("window {} < 1", self.window));
        }
        if self.taylor_order < 1 {
            return bad("taylor order must be at least 1".into());
        }
        if !(self.integer_snap > 0.0) || !(self.tail_tolerance > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if self.lambda.abs() > self.window as f64 / 2.0 {
            return bad(format!(
                "|lambda| = {} exceeds window/2 = {}",
                self.lambda.abs(),
                self.window as f64 / 2.0
            ));
        }
        if self.strategy == Strategy::TaylorOperator {
            if self.lambda.abs() > TAYLOR_MAX_LAMBDA {
                return bad(format!(
                    "taylor-operator needs |lambda| <= {TAYLOR_MAX_LAMBDA}"
                ));
            }
            if self.taylor_order > TAYLOR_MAX_ORDER {
                return bad(format!("taylor-operator needs P <= {TAYLOR_MAX_ORDER}"));
            }
        }
        Ok(())
    }

    /// Nearest integer when λ lies within the snap threshold of it.
    pub fn snapped(&self) -> Option<i64> {
        let r = self.lambda.round();
        ((self.lambda - r).abs() <= self.integer_snap).then_some(r as i64)
    }
}

/// Laurent coefficients w_k, |k| ≤ window, of t^(−λ) on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    window: i64,
    values: Vec<f64>,
}

impl Weights {
    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn get(&self, k: i64) -> f64 {
        if k.abs() > self.window {
            0.0
        } else {
            self.values[(k + self.window) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, w)| (i as i64 - self.window, *w))
    }
}

/// w_k = (−1)^k sin(πλ) / (π(λ+k)); within `snap` of an integer the exact
/// limit δ_(k, −round(λ)) is returned.
pub fn weights(lambda: f64, window: i64, snap: f64) -> Weights {
    let window = window.max(0);
    let r = lambda.round();
    let values = (-window..=window)
        .map(|k| {
            if (lambda - r).abs() <= snap {
                if k == -(r as i64) {
                    1.0
                } else {
                    0.0
                }
            } else {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * sin_pi(lambda) / (PI * (lambda + k as f64))
            }
        })
        .collect();
    Weights { window, values }
}

/// The deformed state exp(−λA) e_n on the φ lattice, as seen by each
/// strategy: coefficient of φ_(n+j) is w_(−j) for the weights route.
pub fn deformed_vector(n: i64, plan: &DeformationPlan) -> Result<PhiBasisVector, DeformError> {
    plan.validate()?;
    match plan.strategy {
        Strategy::FourierWeights => {
            let w = weights(plan.lambda, plan.window, plan.integer_snap);
            let coeffs = (-plan.window..=plan.window).map(|j| w.get(-j)).collect();
            Ok(PhiBasisVector::new(n - plan.window, coeffs)?)
        }
        Strategy::TaylorOperator => Ok(taylor_vector(n, plan)?.0),
    }
}

/// Partial Taylor sum of exp(−λA) e_n and its last term.
fn taylor_vector(
    n: i64,
    plan: &DeformationPlan,
) -> Result<(PhiBasisVector, PhiBasisVector), DeformError> {
    let mut term = PhiBasisVector::<f64>::unit(n);
    let mut acc = term.clone();
    if plan.lambda == 0.0 {
        return Ok((acc, PhiBasisVector::zero(n, n)));
    }
    for p in 1..=plan.taylor_order {
        term = term.apply_a(plan.window)?.scale(&(-plan.lambda / p as f64));
        acc = acc.add(&term);
    }
    Ok((acc, term))
}

/// exp(−λ Σ ∂_m/m) φ_n evaluated at z by the plan's strategy.
pub fn deform_phi(n: i64, z: f64, plan: &DeformationPlan) -> Result<f64, DeformError> {
    plan.validate()?;
    if let Some(shift) = plan.snapped() {
        return Ok(phi_direct(RealOrder::integer(n + shift), z)?);
    }
    match plan.strategy {
        Strategy::FourierWeights => {
            let w = weights(plan.lambda, plan.window, plan.integer_snap);
            let mut sum = 0.0;
            let mut scale = 0.0f64;
            let mut boundary = 0.0f64;
            for (k, wk) in w.iter() {
                let term = wk * phi_direct(RealOrder::integer(n - k), z)?;
                sum += term;
                scale = scale.max(term.abs());
                if k.abs() == plan.window {
                    boundary = boundary.max(term.abs());
                }
            }
            let tolerance = plan.tail_tolerance * scale.max(f64::MIN_POSITIVE);
            if boundary > tolerance {
                return Err(DeformError::WindowTooSmall {
                    tail: boundary,
                    tolerance,
                });
            }
            Ok(sum)
        }
        Strategy::TaylorOperator => {
            let (acc, last) = taylor_vector(n, plan)?;
            let value = acc.evaluate(z)?;
            let last = last.evaluate(z)?.abs();
            let tolerance = plan.taylor_tolerance * value.abs().max(1e-300);
            if last > tolerance {
                return Err(DeformError::TaylorNotConverged { last, tolerance });
            }
            Ok(value)
        }
    }
}

/// |deform_phi(n) − φ_(n+λ)(z)| / max(|φ_(n+λ)(z)|, 1e−300).
pub fn unify_residual(n: i64, z: f64, plan: &DeformationPlan) -> Result<f64, DeformError> {
    let deformed = deform_phi(n, z, plan)?;
    let direct = phi_direct(RealOrder::new(n as f64 + plan.lambda)?, z)?;
    Ok((deformed - direct).abs() / direct.abs().max(1e-300))
}

/// |fourier-weights − taylor-operator| with window / cut W and Taylor order P.
pub fn strategy_gap(
    n: i64,
    lambda: f64,
    z: f64,
    window: i64,
    taylor_order: usize,
) -> Result<f64, DeformError> {
    let base = DeformationPlan::new(lambda)
        .with_window(window)
        .with_taylor_order(taylor_order);
    let fourier = deform_phi(n, z, &base)?;
    let taylor = deform_phi(n, z, &base.clone().with_strategy(Strategy::TaylorOperator))?;
    Ok((fourier - taylor).abs())
}
