//! Functions of an angle θ: prepotentials, the perturbed winding operator
//! W_λ = −i∂_θ + λρ(θ) on Fourier modes e^(inθ), its deformed eigenstates
//! exp(−λ g(θ)) e^(inθ) with g = Σ_(m≠0) ρ_m e^(imθ)/m, and regularized
//! evaluation of the conditionally convergent sums that appear on the way.
//!
//! For ρ_m = (−1)^m the exponent is g(θ) = −iθ on (−π, π), so the deformed
//! state is e^(i(n+λ)θ), a function with a jump at θ = ±π. Every sum over m
//! therefore carries an explicit [`SummationMethod`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

/// Largest cutoff [`spectrum`] accepts.
pub const SPECTRUM_MAX_MODES: usize = 512;
/// Relative agreement required between the N- and 2N-point projections.
pub const DEFAULT_ALIAS_TOLERANCE: f64 = 1e-10;
/// Grid size beyond which [`deformed_state`] gives up doubling.
pub const MAX_GRID: usize = 1 << 22;
/// Distance from θ = ±π that [`alternating_sine_sum`] requires.
pub const ENDPOINT_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircleError {
    #[error("expected {expected} Fourier coefficients, got {got}")]
    Length { expected: usize, got: usize },
    #[error("non-finite value at mode {0}")]
    NonFinite(i64),
    #[error("Abel parameter r = {0} is not in (0, 1)")]
    AbelRadius(f64),
    #[error("prepotential cutoff {prepotential} exceeds matrix cutoff {matrix}")]
    Cutoff { prepotential: usize, matrix: usize },
    #[error("mode {n} outside |n| <= {limit}")]
    ModeOutOfRange { n: i64, limit: usize },
    #[error("cutoff {0} exceeds the supported maximum")]
    TooManyModes(usize),
    #[error("theta = {0} is too close to the endpoint ±π")]
    NearEndpoint(f64),
    #[error("grid projection did not settle: N/2N difference {diff:e} at N = {grid}")]
    NotConverged { diff: f64, grid: usize },
}

/// Coefficients c_m, |m| ≤ M, of Σ c_m e^(imθ).
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    modes: usize,
    coeffs: Vec<Complex64>,
}

impl FourierSeries {
    pub fn new(modes: usize, coeffs: Vec<Complex64>) -> Result<Self, CircleError> {
        if coeffs.len() != 2 * modes + 1 {
            return Err(CircleError::Length {
                expected: 2 * modes + 1,
                got: coeffs.len(),
            });
        }
        if let Some(i) = coeffs
            .iter()
            .position(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(CircleError::NonFinite(i as i64 - modes as i64));
        }
        Ok(FourierSeries { modes, coeffs })
    }

    /// e^(inθ).
    pub fn unit(modes: usize, n: i64) -> Result<Self, CircleError> {
        if n.unsigned_abs() as usize > modes {
            return Err(CircleError::ModeOutOfRange { n, limit: modes });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * modes + 1];
        coeffs[(n + modes as i64) as usize] = Complex64::new(1.0, 0.0);
        Ok(FourierSeries { modes, coeffs })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// c_m, zero beyond the cutoff.
    pub fn coefficient(&self, m: i64) -> Complex64 {
        if m.unsigned_abs() as usize > self.modes {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(m + self.modes as i64) as usize]
        }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * Complex64::from_polar(1.0, (i as f64 - self.modes as f64) * theta))
            .sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Whether c_(−m) = conj(c_m) to within `tol`.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        (0..=self.modes as i64)
            .all(|m| (self.coefficient(-m) - self.coefficient(m).conj()).norm() <= tol)
    }
}

/// V(θ) = ρ_0 θ + periodic part, held as real symmetric spectral data:
/// ρ_0 and ρ_m = ρ_(−m) for 1 ≤ m ≤ M.
#[derive(Debug, Clone, PartialEq)]
pub struct Prepotential {
    rho0: f64,
    rho: Vec<f64>,
}

impl Prepotential {
    /// `rho[m − 1]` is ρ_m = ρ_(−m).
    pub fn new(rho0: f64, rho: Vec<f64>) -> Result<Self, CircleError> {
        if !rho0.is_finite() {
            return Err(CircleError::NonFinite(0));
        }
        if let Some(i) = rho.iter().position(|r| !r.is_finite()) {
            return Err(CircleError::NonFinite(i as i64 + 1));
        }
        Ok(Prepotential { rho0, rho })
    }

    pub fn from_fn(modes: usize, rho0: f64, f: impl Fn(usize) -> f64) -> Result<Self, CircleError> {
        Prepotential::new(rho0, (1..=modes).map(f).collect())
    }

    /// ρ_m = (−1)^m, ρ_0 = 0: the choice that deforms Bessel orders.
    pub fn bessel(modes: usize) -> Self {
        Prepotential {
            rho0: 0.0,
            rho: (1..=modes)
                .map(|m| if m % 2 == 0 { 1.0 } else { -1.0 })
                .collect(),
        }
    }

    /// ρ_m = (−1)^m / (1 + m²) for every m, including ρ_0 = 1.
    pub fn smooth(modes: usize) -> Self {
        let f = |m: usize| {
            let s = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
            s / (1.0 + (m * m) as f64)
        };
        Prepotential {
            rho0: f(0),
            rho: (1..=modes).map(f).collect(),
        }
    }

    /// ρ_m = δ_(|m|,1).
    pub fn cosine(modes: usize) -> Self {
        Prepotential {
            rho0: 0.0,
            rho: (1..=modes)
                .map(|m| if m == 1 { 1.0 } else { 0.0 })
                .collect(),
        }
    }

    pub fn modes(&self) -> usize {
        self.rho.len()
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    /// ρ_m for any integer m; zero beyond the cutoff.
    pub fn rho(&self, m: i64) -> f64 {
        match m.unsigned_abs() as usize {
            0 => self.rho0,
            a if a <= self.rho.len() => self.rho[a - 1],
            _ => 0.0,
        }
    }

    /// ρ(θ) = Σ_m ρ_m e^(imθ) with the weights of `s` on |m| ≥ 1.
    pub fn periodic_part(&self, theta: f64, s: SummationMethod) -> f64 {
        let n = self.modes();
        self.rho0
            + 2.0
                * (1..=n)
                    .map(|m| s.weight(m, n) * self.rho[m - 1] * (m as f64 * theta).cos())
                    .sum::<f64>()
    }
}

/// How a sum Σ_(m=1)^N a_m is weighted.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SummationMethod {
    #[default]
    Partial,
    /// a_m r^m.
    Abel(f64),
    /// Fejér means: a_m (1 − m/(N+1)).
    Cesaro,
}

impl SummationMethod {
    pub fn abel(r: f64) -> Result<Self, CircleError> {
        if r > 0.0 && r < 1.0 {
            Ok(SummationMethod::Abel(r))
        } else {
            Err(CircleError::AbelRadius(r))
        }
    }

    pub fn validate(self) -> Result<Self, CircleError> {
        match self {
            SummationMethod::Abel(r) => SummationMethod::abel(r),
            other => Ok(other),
        }
    }

    /// Weight of term m (1 ≤ m ≤ n) in an n-term sum.
    pub fn weight(self, m: usize, n: usize) -> f64 {
        match self {
            SummationMethod::Partial => 1.0,
            SummationMethod::Abel(r) => r.powi(m as i32),
            SummationMethod::Cesaro => 1.0 - m as f64 / (n as f64 + 1.0),
        }
    }
}

impl std::fmt::Display for SummationMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SummationMethod::Partial => f.write_str("partial"),
            SummationMethod::Abel(r) => write!(f, "abel({r})"),
            SummationMethod::Cesaro => f.write_str("cesaro"),
        }
    }
}

/// W_λ on modes |n| ≤ M: entry (n′, n) = n δ_(n′n) + λ ρ_(n′−n).
pub fn build_w_lambda(
    p: &Prepotential,
    lambda: f64,
    modes: usize,
) -> Result<DMatrix<f64>, CircleError> {
    if p.modes() > modes {
        return Err(CircleError::Cutoff {
            prepotential: p.modes(),
            matrix: modes,
        });
    }
    let size = 2 * modes + 1;
    let offset = modes as i64;
    Ok(DMatrix::from_fn(size, size, |i, j| {
        let (row, col) = (i as i64 - offset, j as i64 - offset);
        let diag = if row == col { col as f64 } else { 0.0 };
        diag + lambda * p.rho(row - col)
    }))
}

/// Fourier coefficients |k| ≤ M of exp(−λ g(θ)) e^(inθ), g summed over the
/// prepotential's modes with the weights of `s`.
///
/// The function is sampled on a uniform grid of N ≥ 8M points and projected
/// back by the trapezoidal rule; N is doubled until two consecutive
/// projections agree to [`DEFAULT_ALIAS_TOLERANCE`] relative to the largest
/// coefficient.
pub fn deformed_state(
    n: i64,
    lambda: f64,
    p: &Prepotential,
    modes: usize,
    s: SummationMethod,
) -> Result<FourierSeries, CircleError> {
    deformed_state_with_tolerance(n, lambda, p, modes, s, DEFAULT_ALIAS_TOLERANCE)
}

pub fn deformed_state_with_tolerance(
    n: i64,
    lambda: f64,
    p: &Prepotential,
    modes: usize,
    s: SummationMethod,
    tolerance: f64,
) -> Result<FourierSeries, CircleError> {
    let s = s.validate()?;
    if n.unsigned_abs() as usize > modes / 2 {
        return Err(CircleError::ModeOutOfRange {
            n,
            limit: modes / 2,
        });
    }
    if lambda == 0.0 {
        return FourierSeries::unit(modes, n);
    }
    let mut planner = FftPlanner::<f64>::new();
    let mut grid = (8 * modes.max(1)).next_power_of_two();
    let mut previous = project(n, lambda, p, modes, s, grid, &mut planner);
    loop {
        let next_grid = 2 * grid;
        let current = project(n, lambda, p, modes, s, next_grid, &mut planner);
        let scale = current.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let diff = current
            .iter()
            .zip(&previous)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if diff <= tolerance * scale {
            return FourierSeries::new(modes, current);
        }
        if next_grid >= MAX_GRID {
            return Err(CircleError::NotConverged {
                diff,
                grid: next_grid,
            });
        }
        grid = next_grid;
        previous = current;
    }
}

fn project(
    n: i64,
    lambda: f64,
    p: &Prepotential,
    modes: usize,
    s: SummationMethod,
    grid: usize,
    planner: &mut FftPlanner<f64>,
) -> Vec<Complex64> {
    // g's coefficients folded mod N: exact at the grid points
    let pm = p.modes();
    let mut g = vec![Complex64::new(0.0, 0.0); grid];
    for m in 1..=pm {
        let a = s.weight(m, pm) * p.rho(m as i64) / m as f64;
        g[m % grid] += a;
        g[(grid - m % grid) % grid] -= a;
    }
    planner.plan_fft_inverse(grid).process(&mut g);
    let mut v: Vec<Complex64> = g
        .iter()
        .enumerate()
        .map(|(j, gj)| {
            let theta = 2.0 * PI * j as f64 / grid as f64;
            (-lambda * gj).exp() * Complex64::from_polar(1.0, n as f64 * theta)
        })
        .collect();
    planner.plan_fft_forward(grid).process(&mut v);
    let inv = 1.0 / grid as f64;
    (-(modes as i64)..=modes as i64)
        .map(|k| v[k.rem_euclid(grid as i64) as usize] * inv)
        .collect()
}

/// ‖W_λ v − (n + λρ_0) v‖ / ‖v‖ for v the deformed state of mode n.
pub fn eigen_residual(
    p: &Prepotential,
    lambda: f64,
    n: i64,
    modes: usize,
    s: SummationMethod,
) -> Result<f64, CircleError> {
    let w = build_w_lambda(p, lambda, modes)?;
    let v = deformed_state(n, lambda, p, modes, s)?;
    let v = DVector::from_column_slice(v.coeffs());
    let eigenvalue = n as f64 + lambda * p.rho0();
    let wv = w.map(|x| Complex64::new(x, 0.0)) * &v;
    Ok((wv - v.scale(eigenvalue)).norm() / v.norm())
}

/// Σ_(m=1)^N (−1)^m sin(mθ)/m under `s`, with its limit −θ/2.
pub fn alternating_sine_sum(
    theta: f64,
    terms: usize,
    s: SummationMethod,
) -> Result<(f64, f64), CircleError> {
    let s = s.validate()?;
    if !(theta.abs() < PI - ENDPOINT_MARGIN) {
        return Err(CircleError::NearEndpoint(theta));
    }
    let sum = (1..=terms)
        .map(|m| {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            s.weight(m, terms) * sign * (m as f64 * theta).sin() / m as f64
        })
        .sum();
    Ok((sum, -theta / 2.0))
}

/// Sorted eigenvalues of W_λ.
pub fn spectrum(p: &Prepotential, lambda: f64, modes: usize) -> Result<Vec<f64>, CircleError> {
    if modes > SPECTRUM_MAX_MODES {
        return Err(CircleError::TooManyModes(modes));
    }
    let w = build_w_lambda(p, lambda, modes)?;
    let mut values: Vec<f64> = SymmetricEigen::new(w).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unperturbed_matrix_is_diagonal() {
        let w = build_w_lambda(&Prepotential::bessel(3), 0.0, 3).unwrap();
        assert_eq!(
            w,
            DMatrix::from_diagonal(&DVector::from_vec(vec![
                -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0
            ]))
        );
    }

    #[test]
    fn cosine_matrix() {
        let w = build_w_lambda(&Prepotential::cosine(1), 0.3, 1).unwrap();
        let expected =
            DMatrix::from_row_slice(3, 3, &[-1.0, 0.3, 0.0, 0.3, 0.0, 0.3, 0.0, 0.3, 1.0]);
        assert_eq!(w, expected);
        assert_eq!(w, w.transpose());
    }

    #[test]
    fn cutoff_precondition() {
        assert!(build_w_lambda(&Prepotential::bessel(5), 0.1, 4).is_err());
    }

    #[test]
    fn zero_lambda_state_is_a_unit_mode() {
        let v = deformed_state(
            2,
            0.0,
            &Prepotential::bessel(16),
            16,
            SummationMethod::Partial,
        )
        .unwrap();
        assert_eq!(v, FourierSeries::unit(16, 2).unwrap());
        let r = eigen_residual(
            &Prepotential::bessel(16),
            0.0,
            2,
            16,
            SummationMethod::Partial,
        )
        .unwrap();
        assert!(r <= 1e-12);
    }

    #[test]
    fn mode_precondition() {
        let err = deformed_state(
            5,
            0.3,
            &Prepotential::bessel(8),
            8,
            SummationMethod::Partial,
        );
        assert!(matches!(err, Err(CircleError::ModeOutOfRange { .. })));
    }

    #[test]
    fn one_mode_prepotential_matches_direct_quadrature() {
        // g = 2i sin θ, exp(−λg) = exp(−2iλ sin θ): coefficients are J_k(2λ)
        // up to sign, computed here by brute-force trapezoid sums
        let lambda = 0.35;
        let v = deformed_state(
            0,
            lambda,
            &Prepotential::cosine(4),
            8,
            SummationMethod::Partial,
        )
        .unwrap();
        let grid = 512;
        for k in -4i64..=4 {
            let direct: Complex64 = (0..grid)
                .map(|j| {
                    let t = 2.0 * PI * j as f64 / grid as f64;
                    Complex64::from_polar(1.0, -2.0 * lambda * t.sin() - k as f64 * t)
                })
                .sum::<Complex64>()
                / grid as f64;
            assert!((v.coefficient(k) - direct).norm() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn alternating_sum_at_zero_vanishes() {
        let (sum, target) =
            alternating_sine_sum(0.0, 1000, SummationMethod::abel(0.999).unwrap()).unwrap();
        assert_eq!(sum, 0.0);
        assert_eq!(target, 0.0);
        assert!(alternating_sine_sum(PI - 0.01, 10, SummationMethod::Partial).is_err());
    }

    #[test]
    fn abel_closed_form() {
        // Σ (−1)^m r^m sin(mθ)/m = −atan(r sin θ / (1 + r cos θ))
        let r = 0.9;
        for &theta in &[0.5, 2.0, -1.2] {
            let (sum, _) =
                alternating_sine_sum(theta, 2000, SummationMethod::abel(r).unwrap()).unwrap();
            let exact = -(r * f64::sin(theta)).atan2(1.0 + r * f64::cos(theta));
            assert!((sum - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn abel_radius_validated() {
        assert!(SummationMethod::abel(1.0).is_err());
        assert!(SummationMethod::abel(0.0).is_err());
    }

    #[test]
    fn unperturbed_spectrum() {
        assert_eq!(
            spectrum(&Prepotential::bessel(2), 0.0, 2).unwrap(),
            vec![-2.0, -1.0, 0.0, 1.0, 2.0]
        );
        assert!(spectrum(&Prepotential::bessel(2), 0.0, 513).is_err());
    }

    #[test]
    fn real_valued_flag() {
        let c = vec![
            Complex64::new(1.0, -2.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(1.0, 2.0),
        ];
        assert!(FourierSeries::new(1, c).unwrap().is_real_valued(1e-12));
        assert!(!FourierSeries::unit(1, 1).unwrap().is_real_valued(1e-12));
        assert!(FourierSeries::new(1, vec![]).is_err());
    }
}
