//! The generating function Φ(z, t) = Σ_n φ_n(z) t^n = exp(t/2 − z²/(2t)) and
//! the relations it satisfies under the ladder operators, under d/dz, and
//! under the order deformation.
//!
//! Sums over n run over a finite [`GenFunWindow`]. Whether a window is wide
//! enough is decided from the classical bound |J_ν(x)| ≤ (x/2)^ν / Γ(ν+1)
//! (ν ≥ 0), which gives
//!
//! * |φ_n(z) t^n| ≤ |t|^n / (2^n n!) for n ≥ 0,
//! * |φ_(−p)(z) t^(−p)| ≤ (z²/(2|t|))^p / p! for p > 0,
//!
//! so the tails on either side are controlled by their boundary terms.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::deform::{deform_phi, DeformError, DeformationPlan};
use crate::gamma::factorial;
use crate::ladder::{apply_d, apply_primitive, ladder_steps, LadderError, PrimitiveRule};
use crate::series::{ParitySeries, RealOrder, SeriesError};

/// Boundary terms of a window must stay below this.
pub const BOUNDARY_TOLERANCE: f64 = 1e-14;
pub const DEFAULT_TRUNCATION: usize = 60;
/// Distance from θ = ±π required on the principal branch of t^(−λ).
pub const BRANCH_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenFunError {
    #[error("invalid window [{n_min}, {n_max}] with truncation {truncation}")]
    InvalidWindow {
        n_min: i64,
        n_max: i64,
        truncation: usize,
    },
    #[error("window too small: boundary bound {boundary:e} not below {tolerance:e}")]
    WindowTooSmall { boundary: f64, tolerance: f64 },
    #[error("t must be nonzero and finite")]
    BadT,
    #[error("z must be positive and finite, got {0}")]
    BadZ(f64),
    #[error("theta = {0} is off the principal branch interval")]
    OffBranch(f64),
    #[error("m must be nonzero")]
    ZeroM,
    #[error("Taylor series not converged: last term {last:e}, ratio {ratio:e}")]
    TaylorNotConverged { last: f64, ratio: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Ladder(#[from] LadderError),
    #[error(transparent)]
    Deform(#[from] DeformError),
}

/// Summation window n_min ≤ n ≤ n_max together with the series truncation
/// K used for each φ_n. Negative orders −p start at z^(2p), so their series
/// are kept to K + p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenFunWindow {
    n_min: i64,
    n_max: i64,
    truncation: usize,
}

/// Upper bound on |φ_n(z) t^n|.
pub fn term_bound(n: i64, z: f64, t_abs: f64) -> f64 {
    let p = n.unsigned_abs() as usize;
    let base = if n >= 0 {
        t_abs / 2.0
    } else {
        z * z / (2.0 * t_abs)
    };
    let f = factorial(p);
    if f.is_finite() {
        base.powi(p as i32) / f
    } else {
        0.0
    }
}

impl GenFunWindow {
    pub fn new(n_min: i64, n_max: i64, truncation: usize) -> Result<Self, GenFunError> {
        if n_min > 0 || n_max < 0 || truncation == 0 {
            return Err(GenFunError::InvalidWindow {
                n_min,
                n_max,
                truncation,
            });
        }
        Ok(GenFunWindow {
            n_min,
            n_max,
            truncation,
        })
    }

    /// Narrowest window whose boundary terms, and everything beyond them,
    /// are below [`BOUNDARY_TOLERANCE`] at (z, |t|).
    pub fn adaptive(z: f64, t_abs: f64, truncation: usize) -> Result<Self, GenFunError> {
        if !(t_abs > 0.0) || !t_abs.is_finite() {
            return Err(GenFunError::BadT);
        }
        if !z.is_finite() {
            return Err(GenFunError::BadZ(z));
        }
        // past the peak of each bound the terms decrease monotonically
        let mut n_max = (t_abs / 2.0).ceil() as i64;
        while term_bound(n_max, z, t_abs) >= BOUNDARY_TOLERANCE {
            n_max += 1;
        }
        let mut p = (z * z / (2.0 * t_abs)).ceil() as i64;
        while term_bound(-p, z, t_abs) >= BOUNDARY_TOLERANCE {
            p += 1;
        }
        GenFunWindow::new(-p, n_max, truncation)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Same window, `by` wider on each side.
    pub fn widened(&self, by: i64) -> Self {
        GenFunWindow {
            n_min: self.n_min - by,
            n_max: self.n_max + by,
            truncation: self.truncation,
        }
    }

    pub fn orders(&self) -> impl Iterator<Item = i64> {
        self.n_min..=self.n_max
    }

    /// Series truncation used for φ_n.
    pub fn truncation_for(&self, n: i64) -> usize {
        self.truncation + (-n).max(0) as usize
    }

    /// Larger of the two boundary bounds.
    pub fn boundary(&self, z: f64, t_abs: f64) -> f64 {
        term_bound(self.n_min, z, t_abs).max(term_bound(self.n_max, z, t_abs))
    }

    pub fn check(&self, z: f64, t: Complex64) -> Result<(), GenFunError> {
        let t_abs = t.norm();
        if !(t_abs > 0.0) || !t_abs.is_finite() {
            return Err(GenFunError::BadT);
        }
        let boundary = self.boundary(z, t_abs);
        // the bound must also be past its peak on each side
        let peaks_inside =
            (self.n_max as f64) >= t_abs / 2.0 && (-self.n_min as f64) >= z * z / (2.0 * t_abs);
        if boundary >= BOUNDARY_TOLERANCE || !peaks_inside {
            return Err(GenFunError::WindowTooSmall {
                boundary,
                tolerance: BOUNDARY_TOLERANCE,
            });
        }
        Ok(())
    }

    fn series(&self, n: i64) -> Result<ParitySeries, GenFunError> {
        Ok(ParitySeries::phi(
            RealOrder::integer(n),
            self.truncation_for(n),
        )?)
    }
}

/// exp(t/2 − z²/(2t)).
pub fn phi_closed(z: f64, t: Complex64) -> Complex64 {
    (t / 2.0 - z * z / (2.0 * t)).exp()
}

/// Windowed Σ φ_n(z) t^n.
pub fn phi_gen(z: f64, t: Complex64, w: &GenFunWindow) -> Result<Complex64, GenFunError> {
    w.check(z, t)?;
    windowed_sum(w, t, |n| Ok(w.series(n)?.eval(z)))
}

fn windowed_sum(
    w: &GenFunWindow,
    t: Complex64,
    mut f: impl FnMut(i64) -> Result<f64, GenFunError>,
) -> Result<Complex64, GenFunError> {
    let mut sum = Complex64::new(0.0, 0.0);
    for n in w.orders() {
        sum += f(n)? * t.powi(n as i32);
    }
    Ok(sum)
}

/// |Σ_n (∂_m φ_n)(z) t^n − (−t)^(−m) Φ(z, t)| with ∂_m applied to each
/// z-series through the ladder, using `rule` for primitives.
pub fn gen_eigen_check(
    m: i64,
    z: f64,
    t: Complex64,
    w: &GenFunWindow,
    rule: PrimitiveRule,
) -> Result<f64, GenFunError> {
    if m == 0 {
        return Err(GenFunError::ZeroM);
    }
    // ∂_m shifts the window by m; summing both sides over a window widened
    // by |m| leaves only terms past the boundary of `w` unmatched
    w.check(z, t)?;
    let wide = w.widened(m.abs());
    let lhs = apply_m_windowed(m, z, t, &wide, rule)?;
    let rhs = (-t).powi(-m as i32) * phi_gen(z, t, &wide)?;
    Ok((lhs - rhs).norm())
}

/// Σ_n (∂_m φ_n)(z) t^n over the window.
pub fn apply_m_windowed(
    m: i64,
    z: f64,
    t: Complex64,
    w: &GenFunWindow,
    rule: PrimitiveRule,
) -> Result<Complex64, GenFunError> {
    w.check(z, t)?;
    windowed_sum(w, t, |n| {
        let s = w.series(n)?;
        Ok(ladder_steps(&s, m, rule, Some(RealOrder::integer(n)))?.eval(z))
    })
}

/// Σ_n φ_n′(z) t^n by termwise differentiation.
pub fn phi_gen_dz(z: f64, t: Complex64, w: &GenFunWindow) -> Result<Complex64, GenFunError> {
    w.check(z, t)?;
    windowed_sum(w, t, |n| Ok(w.series(n)?.derivative().eval(z)))
}

/// |∂_z Φ + (z/t) Φ|.
pub fn d_eigen_check(z: f64, t: Complex64, w: &GenFunWindow) -> Result<f64, GenFunError> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(GenFunError::BadZ(z));
    }
    let d = phi_gen_dz(z, t, w)?;
    let phi = phi_gen(z, t, w)?;
    Ok((d + z / t * phi).norm())
}

fn principal_t(theta: f64) -> Result<Complex64, GenFunError> {
    if !(theta.abs() < PI - BRANCH_MARGIN) {
        return Err(GenFunError::OffBranch(theta));
    }
    Ok(Complex64::from_polar(1.0, theta))
}

/// t^(−λ) on the principal branch, t = e^(iθ).
pub fn t_power(theta: f64, lambda: f64) -> Complex64 {
    Complex64::from_polar(1.0, -lambda * theta)
}

/// Σ_n deform_phi(n) t^n over the window, t = e^(iθ).
pub fn deformed_gen(
    z: f64,
    theta: f64,
    w: &GenFunWindow,
    plan: &DeformationPlan,
) -> Result<Complex64, GenFunError> {
    let t = principal_t(theta)?;
    w.check(z, t)?;
    windowed_sum(w, t, |n| Ok(deform_phi(n, z, plan)?))
}

/// |Σ_n deform_phi(n) t^n − t^(−λ) Φ(z, t)|, t = e^(iθ).
pub fn gen_deform_check(
    z: f64,
    theta: f64,
    w: &GenFunWindow,
    plan: &DeformationPlan,
) -> Result<f64, GenFunError> {
    let t = principal_t(theta)?;
    w.check(z, t)?;
    // as in gen_eigen_check, widen by the shift so an integer λ compares exactly
    let wide = w.widened(plan.lambda.abs().ceil() as i64);
    let lhs = deformed_gen(z, theta, &wide, plan)?;
    let rhs = t_power(theta, plan.lambda) * phi_gen(z, t, &wide)?;
    Ok((lhs - rhs).norm())
}

/// Two routes to d/dz of the deformed generating function, and their ratio
/// to the deformed generating function itself.
#[derive(Debug, Clone, PartialEq)]
pub struct DLambdaProbe {
    /// ∂_z(t^(−λ) Φ), termwise.
    pub lhs: Complex64,
    /// (−t)^(−1) exp(−λA)(zΦ) by Taylor expansion in λ on the odd series zφ_n.
    pub rhs: Result<Complex64, GenFunError>,
    /// lhs / (t^(−λ) Φ).
    pub f_est: Complex64,
}

impl DLambdaProbe {
    pub fn gap(&self) -> Option<f64> {
        self.rhs.as_ref().ok().map(|r| (self.lhs - r).norm())
    }
}

/// Probe of the relation between the deformed d and the deformed generating
/// function at t = e^(iθ). `taylor_order` is the λ-order P, `cut` the
/// m-cut of A = Σ_(0<|m|≤cut) ∂_m/m.
pub fn d_lambda_probe(
    z: f64,
    lambda: f64,
    theta: f64,
    w: &GenFunWindow,
    taylor_order: usize,
    cut: i64,
) -> Result<DLambdaProbe, GenFunError> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(GenFunError::BadZ(z));
    }
    if lambda.abs() > crate::deform::TAYLOR_MAX_LAMBDA {
        return Err(DeformError::InvalidPlan(format!(
            "|lambda| must be at most {}",
            crate::deform::TAYLOR_MAX_LAMBDA
        ))
        .into());
    }
    let t = principal_t(theta)?;
    let tl = t_power(theta, lambda);
    let lhs = tl * phi_gen_dz(z, t, w)?;
    let f_est = lhs / (tl * phi_gen(z, t, w)?);
    let rhs = windowed_sum(w, t, |n| {
        let zphi = w.series(n)?.times_z();
        Ok(taylor_deform(&zphi, lambda, taylor_order, cut)?.eval(z))
    })
    .map(|s| s / -t);
    Ok(DLambdaProbe { lhs, rhs, f_est })
}

/// Σ_(p≤P) (−λ)^p A^p s / p! on a z-series.
fn taylor_deform(
    s: &ParitySeries,
    lambda: f64,
    taylor_order: usize,
    cut: i64,
) -> Result<ParitySeries, GenFunError> {
    if lambda == 0.0 {
        return Ok(s.clone());
    }
    let mut term = s.clone();
    let mut acc = s.clone();
    let mut prev_norm = f64::INFINITY;
    for p in 1..=taylor_order {
        term = apply_a_series(&term, cut)?.scale(&(-lambda / p as f64));
        acc = acc.add(&term)?;
        let norm = term.coeffs().iter().map(|c| c.abs()).fold(0.0, f64::max);
        let ratio = norm / prev_norm;
        if p == taylor_order
            && norm > 1e-12 * acc.coeffs().iter().map(|c| c.abs()).fold(0.0, f64::max)
        {
            return Err(GenFunError::TaylorNotConverged { last: norm, ratio });
        }
        prev_norm = norm;
    }
    Ok(acc)
}

/// A s = Σ_(0<|m|≤cut) ∂_m s / m on a z-series.
fn apply_a_series(s: &ParitySeries, cut: i64) -> Result<ParitySeries, GenFunError> {
    let mut up = s.clone();
    let mut down = s.clone();
    let mut acc: Option<ParitySeries> = None;
    for m in 1..=cut {
        up = apply_d(&up)?;
        down = apply_primitive(&down, PrimitiveRule::BasisClosure, None)?;
        let piece = up
            .scale(&(1.0 / m as f64))
            .add(&down.scale(&(-1.0 / m as f64)))?;
        acc = Some(match acc {
            None => piece,
            Some(a) => a.add(&piece)?,
        });
    }
    acc.ok_or(GenFunError::Ladder(LadderError::InvalidCut(cut)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_at_zero_and_one() {
        let w = GenFunWindow::adaptive(1.0, 1.0, DEFAULT_TRUNCATION).unwrap();
        let v = phi_gen(1.0, Complex64::new(1.0, 0.0), &w).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
        let t = Complex64::from_polar(1.0, 0.8);
        let w0 = GenFunWindow::adaptive(0.0, 1.0, DEFAULT_TRUNCATION).unwrap();
        let v0 = phi_gen(0.0, t, &w0).unwrap();
        assert!((v0 - (t / 2.0).exp()).norm() < 1e-14);
    }

    #[test]
    fn window_validation() {
        assert!(GenFunWindow::new(1, 5, 10).is_err());
        assert!(GenFunWindow::new(-1, -1, 10).is_err());
        assert!(GenFunWindow::new(-1, 1, 0).is_err());
        let narrow = GenFunWindow::new(-2, 2, 30).unwrap();
        assert!(matches!(
            phi_gen(1.0, Complex64::new(1.0, 0.0), &narrow),
            Err(GenFunError::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn fixed_window_too_small_at_z_three() {
        // (9/2)^25 / 25! ≈ 1.4e−9
        let w = GenFunWindow::new(-25, 25, 60).unwrap();
        assert!(w.check(3.0, Complex64::new(1.0, 0.0)).is_err());
        assert!(w.check(2.0, Complex64::new(1.0, 0.0)).is_ok());
    }

    #[test]
    fn widening_changes_little() {
        let t = Complex64::from_polar(1.0, 1.1);
        let w = GenFunWindow::adaptive(2.0, 1.0, DEFAULT_TRUNCATION).unwrap();
        let a = phi_gen(2.0, t, &w).unwrap();
        let b = phi_gen(2.0, t, &w.widened(5)).unwrap();
        assert!((a - b).norm() <= 1e-12);
    }

    #[test]
    fn zero_constant_primitive_breaks_the_eigenrelation() {
        let t = Complex64::from_polar(1.0, 0.7);
        let w = GenFunWindow::adaptive(0.5, 1.0, DEFAULT_TRUNCATION).unwrap();
        let good = gen_eigen_check(-1, 0.5, t, &w, PrimitiveRule::BasisClosure).unwrap();
        let bad = gen_eigen_check(-1, 0.5, t, &w, PrimitiveRule::ZeroConstant).unwrap();
        assert!(good <= 1e-10, "{good}");
        assert!(bad > 1e-3, "{bad}");
    }

    #[test]
    fn d_eigen_requires_positive_z() {
        let w = GenFunWindow::adaptive(1.0, 1.0, DEFAULT_TRUNCATION).unwrap();
        assert!(d_eigen_check(0.0, Complex64::new(1.0, 0.0), &w).is_err());
        assert!(d_eigen_check(1.0, Complex64::new(1.0, 0.0), &w).unwrap() <= 1e-10);
    }

    #[test]
    fn gen_deform_trivial_and_integer_cases() {
        let w = GenFunWindow::adaptive(1.0, 1.0, DEFAULT_TRUNCATION).unwrap();
        assert!(gen_deform_check(1.0, 0.4, &w, &DeformationPlan::new(0.0)).unwrap() <= 1e-12);
        assert!(gen_deform_check(1.0, 1.0, &w, &DeformationPlan::new(1.0)).unwrap() <= 1e-10);
        assert!(gen_deform_check(1.0, 3.1, &w, &DeformationPlan::new(0.0)).is_err());
    }

    #[test]
    fn d_lambda_undeformed_ratio() {
        let w = GenFunWindow::adaptive(0.5, 1.0, DEFAULT_TRUNCATION).unwrap();
        let probe = d_lambda_probe(0.5, 0.0, 0.3, &w, 20, 40).unwrap();
        let t = Complex64::from_polar(1.0, 0.3);
        assert!((probe.f_est + 0.5 / t).norm() < 1e-12);
        assert!(probe.gap().unwrap() < 1e-14);
    }

    #[test]
    fn d_lambda_odd_series_leaves_the_basis() {
        // zφ_0 has a linear term, whose d/(z dz) is 1/z
        let w = GenFunWindow::adaptive(0.5, 1.0, DEFAULT_TRUNCATION).unwrap();
        let probe = d_lambda_probe(0.5, 0.5, 0.3, &w, 20, 40).unwrap();
        assert!(matches!(
            probe.rhs,
            Err(GenFunError::Ladder(LadderError::NonSeriesResult))
        ));
        assert!(probe.f_est.norm().is_finite() && probe.f_est.norm() > 0.0);
    }
}
