//! Fixed-parity truncated power series and the reduced Bessel function
//! φ_ν(z) = J_ν(z) / z^ν.
//!
//! A [`ParitySeries`] stores `c_0..c_K` where `c_k` multiplies
//! `z^(2k + parity)`. The coefficient type is generic so the same ladder
//! machinery runs on `f64` and on exact rationals ([`BigRational`]).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::gamma::{factorial, ln_abs_recip_gamma, ln_gamma, recip_gamma};

/// Largest |z| for which the default truncation cap is known to converge.
pub const VALIDATED_RADIUS: f64 = 10.0;
/// Maximum number of terms `phi_direct` retains past the first nonzero one.
pub const AUTO_TRUNCATION_CAP: usize = 120;
/// Relative size of the last retained term at which `phi_direct` stops.
pub const AUTO_TRUNCATION_TOL: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("series needs at least one coefficient")]
    Empty,
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("order {0} is not finite")]
    NonFiniteOrder(f64),
    #[error("exact coefficients need an integer order, got {0}")]
    NonIntegerOrder(f64),
    #[error("|z| = {z} is outside the validated radius {radius}")]
    OutsideRadius { z: f64, radius: f64 },
    #[error("last retained term {term:e} exceeds tolerance {tolerance:e}")]
    TailTooLarge { term: f64, tolerance: f64 },
    #[error("parity mismatch")]
    ParityMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn offset(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// A real Bessel order ν, split on request as ν = n + λ with n the nearest
/// integer.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RealOrder(f64);

impl RealOrder {
    pub fn new(nu: f64) -> Result<Self, SeriesError> {
        if nu.is_finite() {
            Ok(RealOrder(nu))
        } else {
            Err(SeriesError::NonFiniteOrder(nu))
        }
    }

    pub fn integer(n: i64) -> Self {
        RealOrder(n as f64)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Nearest-integer part n.
    pub fn integer_part(self) -> i64 {
        self.0.round() as i64
    }

    /// Fractional shift λ = ν − n.
    pub fn shift(self) -> f64 {
        self.0 - self.0.round()
    }

    pub fn as_integer(self) -> Option<i64> {
        (self.0 == self.0.round()).then_some(self.0 as i64)
    }

    pub fn offset(self, by: f64) -> Self {
        RealOrder(self.0 + by)
    }
}

impl From<i64> for RealOrder {
    fn from(n: i64) -> Self {
        RealOrder::integer(n)
    }
}

impl fmt::Display for RealOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Scalar types a [`ParitySeries`] can carry.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn is_finite_value(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Equality up to a relative tolerance; exact types ignore `rel_tol`.
    fn close_to(&self, other: &Self, rel_tol: f64) -> bool;
    /// `c_0..=c_k_max` of the even series of φ_ν.
    fn phi_coefficients(order: RealOrder, k_max: usize) -> Result<Vec<Self>, SeriesError>;
    /// Recover an order from an inferred value; exact types demand integers.
    fn to_order(&self) -> Option<RealOrder>;
}

impl Coefficient for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn close_to(&self, other: &Self, rel_tol: f64) -> bool {
        let scale = self.abs().max(other.abs());
        (self - other).abs() <= rel_tol * scale || self == other
    }

    fn phi_coefficients(order: RealOrder, k_max: usize) -> Result<Vec<Self>, SeriesError> {
        Ok(phi_coefficients_f64(order.value(), k_max))
    }

    fn to_order(&self) -> Option<RealOrder> {
        if !self.is_finite() {
            return None;
        }
        let r = self.round();
        let nu = if (self - r).abs() < 1e-9 { r } else { *self };
        Some(RealOrder(nu))
    }
}

impl Coefficient for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn is_finite_value(&self) -> bool {
        true
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn close_to(&self, other: &Self, _rel_tol: f64) -> bool {
        self == other
    }

    fn phi_coefficients(order: RealOrder, k_max: usize) -> Result<Vec<Self>, SeriesError> {
        let n = order
            .as_integer()
            .ok_or(SeriesError::NonIntegerOrder(order.value()))?;
        Ok(phi_coefficients_exact(n, k_max))
    }

    fn to_order(&self) -> Option<RealOrder> {
        self.is_integer()
            .then(|| self.to_integer().to_i64())
            .flatten()
            .map(RealOrder::integer)
    }
}

/// Index of the first coefficient of φ_ν that is not forced to zero by 1/Γ.
pub fn phi_leading_index(nu: f64) -> usize {
    if nu < 0.0 && nu == nu.round() {
        (-nu) as usize
    } else {
        0
    }
}

/// c_k = (−1)^k / (2^(2k+ν) k! Γ(ν+k+1)) computed without a recurrence.
fn phi_coefficient_direct(nu: f64, k: usize) -> f64 {
    let kf = k as f64;
    let rg = recip_gamma(nu + kf + 1.0);
    if rg == 0.0 {
        return 0.0;
    }
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let two_pow = (-(2.0 * kf + nu)).exp2();
    let fact = factorial(k);
    let direct = sign * rg * two_pow / fact;
    if direct.is_finite() && direct != 0.0 && rg.is_finite() && two_pow.is_normal() {
        return direct;
    }
    match ln_abs_recip_gamma(nu + kf + 1.0) {
        Some((l, s)) => {
            let ln_mag = l - (2.0 * kf + nu) * std::f64::consts::LN_2 - ln_gamma(kf + 1.0);
            sign * s * ln_mag.exp()
        }
        None => 0.0,
    }
}

fn phi_coefficients_f64(nu: f64, k_max: usize) -> Vec<f64> {
    let lead = phi_leading_index(nu);
    let mut out = vec![0.0; k_max + 1];
    if lead > k_max {
        return out;
    }
    out[lead] = phi_coefficient_direct(nu, lead);
    for k in lead + 1..=k_max {
        let kf = k as f64;
        out[k] = -out[k - 1] / (4.0 * kf * (nu + kf));
    }
    out
}

fn phi_coefficients_exact(n: i64, k_max: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max as i64 {
        if n + k < 0 {
            out.push(BigRational::zero());
            continue;
        }
        let mut den = BigInt::one();
        for i in 2..=k {
            den *= i;
        }
        for i in 2..=(n + k) {
            den *= i;
        }
        let e = 2 * k + n;
        let mut num = BigInt::one();
        if e >= 0 {
            den <<= e as usize;
        } else {
            num <<= (-e) as usize;
        }
        if k % 2 == 1 {
            num = -num;
        }
        out.push(BigRational::new(num, den));
    }
    out
}

/// Truncated power series with coefficients of fixed parity.
#[derive(Debug, Clone, PartialEq)]
pub struct ParitySeries<T = f64> {
    parity: Parity,
    coeffs: Vec<T>,
}

impl<T: Coefficient> ParitySeries<T> {
    pub fn new(parity: Parity, coeffs: Vec<T>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite_value()) {
            return Err(SeriesError::NonFinite { index });
        }
        Ok(ParitySeries { parity, coeffs })
    }

    pub fn zero(parity: Parity, order: usize) -> Self {
        ParitySeries {
            parity,
            coeffs: vec![T::zero(); order + 1],
        }
    }

    /// Even series of φ_ν truncated after `z^(2K)`.
    pub fn phi(order: RealOrder, truncation: usize) -> Result<Self, SeriesError> {
        let coeffs = T::phi_coefficients(order, truncation)?;
        ParitySeries::new(Parity::Even, coeffs)
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Truncation order K.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient.
    pub fn leading_index(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<T> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, T::zero());
        ParitySeries {
            parity: self.parity,
            coeffs,
        }
    }

    pub fn scale(&self, factor: &T) -> Self {
        ParitySeries {
            parity: self.parity,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        }
    }

    /// Termwise sum; the result keeps the longer truncation.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.parity != other.parity {
            return Err(SeriesError::ParityMismatch);
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Ok(ParitySeries {
            parity: self.parity,
            coeffs,
        })
    }

    /// d/dz, which flips parity.
    pub fn derivative(&self) -> Self {
        match self.parity {
            // c_k z^(2k) -> 2k c_k z^(2k-1) = Σ 2(k+1) c_(k+1) z^(2k+1)
            Parity::Even => {
                let coeffs = if self.coeffs.len() == 1 {
                    vec![T::zero()]
                } else {
                    (0..self.order())
                        .map(|k| T::from_i64(2 * (k as i64 + 1)) * self.coeffs[k + 1].clone())
                        .collect()
                };
                ParitySeries {
                    parity: Parity::Odd,
                    coeffs,
                }
            }
            // c_k z^(2k+1) -> (2k+1) c_k z^(2k)
            Parity::Odd => ParitySeries {
                parity: Parity::Even,
                coeffs: self
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, c)| T::from_i64(2 * k as i64 + 1) * c.clone())
                    .collect(),
            },
        }
    }

    /// Multiplication by z, which flips parity.
    pub fn times_z(&self) -> Self {
        match self.parity {
            Parity::Even => ParitySeries {
                parity: Parity::Odd,
                coeffs: self.coeffs.clone(),
            },
            Parity::Odd => {
                let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
                coeffs.push(T::zero());
                coeffs.extend(self.coeffs.iter().cloned());
                ParitySeries {
                    parity: Parity::Even,
                    coeffs,
                }
            }
        }
    }

    pub fn to_f64(&self) -> ParitySeries<f64> {
        ParitySeries {
            parity: self.parity,
            coeffs: self.coeffs.iter().map(Coefficient::to_f64).collect(),
        }
    }

    /// Coefficient-wise comparison after padding the shorter series with zeros.
    pub fn close_to(&self, other: &Self, rel_tol: f64) -> bool {
        self.parity == other.parity
            && (0..self.coeffs.len().max(other.coeffs.len()))
                .all(|k| self.coeff(k).close_to(&other.coeff(k), rel_tol))
    }
}

impl ParitySeries<f64> {
    /// Horner evaluation in z².
    pub fn eval(&self, z: f64) -> f64 {
        let w = z * z;
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        match self.parity {
            Parity::Even => acc,
            Parity::Odd => acc * z,
        }
    }

    /// Evaluation with a check that the last retained term is below
    /// `tolerance` relative to the largest partial sum.
    pub fn eval_checked(&self, z: f64, tolerance: f64) -> Result<f64, SeriesError> {
        let value = self.eval(z);
        let (last, scale) = self.tail_profile(z);
        if last > tolerance * scale {
            return Err(SeriesError::TailTooLarge {
                term: last,
                tolerance: tolerance * scale,
            });
        }
        Ok(value)
    }

    /// (|last term|, max |partial sum|) at z.
    fn tail_profile(&self, z: f64) -> (f64, f64) {
        let w = z * z;
        let mut power = match self.parity {
            Parity::Even => 1.0,
            Parity::Odd => z,
        };
        let mut partial = 0.0f64;
        let mut scale = 0.0f64;
        let mut last = 0.0;
        for c in &self.coeffs {
            last = (c * power).abs();
            partial += c * power;
            scale = scale.max(partial.abs());
            power *= w;
        }
        (last, scale.max(f64::MIN_POSITIVE))
    }
}

/// Even series of φ_ν with `truncation + 1` coefficients.
pub fn phi_series(order: RealOrder, truncation: usize) -> ParitySeries<f64> {
    ParitySeries {
        parity: Parity::Even,
        coeffs: phi_coefficients_f64(order.value(), truncation),
    }
}

/// Exact rational series of φ_n for integer n.
pub fn phi_series_exact(n: i64, truncation: usize) -> ParitySeries<BigRational> {
    ParitySeries {
        parity: Parity::Even,
        coeffs: phi_coefficients_exact(n, truncation),
    }
}

/// Smallest K at which the φ_ν series at z has converged: the first K past
/// the leading nonzero coefficient with |c_K z^(2K)| below
/// [`AUTO_TRUNCATION_TOL`] times the running max partial sum. Capped at
/// [`AUTO_TRUNCATION_CAP`] terms past the leading one.
pub fn auto_truncation(order: RealOrder, z: f64) -> Result<usize, SeriesError> {
    let nu = order.value();
    let lead = phi_leading_index(nu);
    if z == 0.0 {
        return Ok(lead);
    }
    let w = z * z;
    let c = phi_coefficient_direct(nu, lead);
    // c_lead * w^lead in log space keeps the first term finite
    let mut term = if c == 0.0 {
        0.0
    } else {
        c.signum() * (c.abs().ln() + lead as f64 * w.ln()).exp()
    };
    let mut partial = term;
    let mut scale = partial.abs();
    for k in lead + 1..=lead + AUTO_TRUNCATION_CAP {
        let kf = k as f64;
        let ratio = -w / (4.0 * kf * (nu + kf));
        term *= ratio;
        partial += term;
        scale = scale.max(partial.abs());
        if term.abs() < AUTO_TRUNCATION_TOL * scale || term == 0.0 {
            return Ok(k);
        }
    }
    Err(SeriesError::TailTooLarge {
        term: term.abs(),
        tolerance: AUTO_TRUNCATION_TOL * scale,
    })
}

/// φ_ν(z) = J_ν(z)/z^ν from its ascending series, z ≥ 0 (the series is
/// even, so negative z evaluates the same).
pub fn phi_direct(order: RealOrder, z: f64) -> Result<f64, SeriesError> {
    if !(z.abs() <= VALIDATED_RADIUS) {
        return Err(SeriesError::OutsideRadius {
            z,
            radius: VALIDATED_RADIUS,
        });
    }
    let k = auto_truncation(order, z)?;
    Ok(phi_series(order, k).eval(z))
}

/// Convenience wrapper for integer orders.
pub fn phi_int(n: i64, z: f64) -> Result<f64, SeriesError> {
    phi_direct(RealOrder::integer(n), z)
}
