//! Raising and lowering operators ∂_m on reduced Bessel functions.
//!
//! Two representations are kept side by side:
//!
//! * z-space: one raising step is d/(z dz) on a [`ParitySeries`], one lowering
//!   step is the primitive ∫ z dz whose integration constant is fixed by a
//!   [`PrimitiveRule`];
//! * index space: on a [`PhiBasisVector`] Σ a_n φ_n the step ∂_m is the signed
//!   shift φ_n ↦ (−1)^m φ_(n+m).
//!
//! ∂_m for |m| > 1 is always the |m|-fold iterate of a single step.

use num_rational::BigRational;
use thiserror::Error;

use crate::series::{
    phi_direct, phi_series, phi_series_exact, Coefficient, Parity, ParitySeries, RealOrder,
    SeriesError,
};

/// Relative tolerance for recognising a float series as a multiple of a φ
/// series.
pub const BASIS_MATCH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LadderError {
    #[error("d/(z dz) of an odd series with a linear term leaves the power series space")]
    NonSeriesResult,
    #[error("input is not a multiple of a reduced Bessel series: {0}")]
    NotInBasis(String),
    #[error("window cut must be at least 1, got {0}")]
    InvalidCut(i64),
    #[error("ladder check supports |n| <= 8 and |m| <= 6, got n={n}, m={m}")]
    OutOfRange { n: i64, m: i64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// How the integration constant of ∫ z dz is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrimitiveRule {
    /// Drop the constant altogether.
    ZeroConstant,
    /// Choose the constant so that ∫ z dz φ_ν = −φ_(ν−1).
    #[default]
    BasisClosure,
}

/// One raising step d/(z dz).
///
/// Even input Σ c_k z^(2k) becomes Σ 2(k+1) c_(k+1) z^(2k) with truncation
/// K−1; odd input must have no linear term.
pub fn apply_d<T: Coefficient>(s: &ParitySeries<T>) -> Result<ParitySeries<T>, LadderError> {
    let c = s.coeffs();
    let k_max = s.order();
    match s.parity() {
        Parity::Even => {
            if k_max == 0 {
                return Ok(ParitySeries::zero(Parity::Even, 0));
            }
            let out = (0..k_max)
                .map(|k| T::from_i64(2 * (k as i64 + 1)) * c[k + 1].clone())
                .collect();
            Ok(ParitySeries::new(Parity::Even, out)?)
        }
        Parity::Odd => {
            if !c[0].is_zero() {
                return Err(LadderError::NonSeriesResult);
            }
            if k_max == 0 {
                return Ok(ParitySeries::zero(Parity::Odd, 0));
            }
            // z^(2k+3) -> (2k+3) z^(2k+1)
            let out = (0..k_max)
                .map(|k| T::from_i64(2 * k as i64 + 3) * c[k + 1].clone())
                .collect();
            Ok(ParitySeries::new(Parity::Odd, out)?)
        }
    }
}

/// One lowering step ∫ z dz, truncation K+1.
///
/// For even input the constant term follows `rule`. Under
/// [`PrimitiveRule::BasisClosure`] the input must be α·φ_ν; `hint` names ν,
/// otherwise ν is inferred from the leading coefficient ratio and the whole
/// series is checked against α·φ_ν. Odd input has no constant to fix.
pub fn apply_primitive<T: Coefficient>(
    s: &ParitySeries<T>,
    rule: PrimitiveRule,
    hint: Option<RealOrder>,
) -> Result<ParitySeries<T>, LadderError> {
    let c = s.coeffs();
    let mut out = Vec::with_capacity(c.len() + 1);
    match s.parity() {
        Parity::Odd => {
            // z^(2k+1) -> z^(2k+3)/(2k+3)
            out.push(T::zero());
            for (k, ck) in c.iter().enumerate() {
                out.push(ck.clone() / T::from_i64(2 * k as i64 + 3));
            }
            return Ok(ParitySeries::new(Parity::Odd, out)?);
        }
        Parity::Even => {
            out.push(T::zero());
            for (k, ck) in c.iter().enumerate() {
                out.push(ck.clone() / T::from_i64(2 * (k as i64 + 1)));
            }
        }
    }
    if rule == PrimitiveRule::BasisClosure {
        out[0] = closure_constant(s, hint)?;
    }
    Ok(ParitySeries::new(Parity::Even, out)?)
}

/// The constant −α·φ_(ν−1)(0) for input α·φ_ν.
fn closure_constant<T: Coefficient>(
    s: &ParitySeries<T>,
    hint: Option<RealOrder>,
) -> Result<T, LadderError> {
    let Some(lead) = s.leading_index() else {
        return Ok(T::zero());
    };
    let (order, alpha) = match hint {
        Some(order) => {
            let basis: ParitySeries<T> = ParitySeries::phi(order, s.order())?;
            let j = basis.leading_index().ok_or_else(|| {
                LadderError::NotInBasis(format!("φ_{order} vanishes at this truncation"))
            })?;
            (order, s.coeff(j) / basis.coeff(j))
        }
        None => {
            let (order, alpha) = infer_phi_multiple(s, lead)?;
            let basis: ParitySeries<T> = ParitySeries::phi(order, s.order())?;
            if !s.close_to(&basis.scale(&alpha), BASIS_MATCH_TOL) {
                return Err(LadderError::NotInBasis(format!(
                    "coefficients differ from {alpha:?}·φ_{order}"
                )));
            }
            (order, alpha)
        }
    };
    let below: ParitySeries<T> = ParitySeries::phi(order.offset(-1.0), 0)?;
    Ok(-(alpha * below.coeff(0)))
}

/// Solve c_(j+1)/c_j = −1/(4(j+1)(ν+j+1)) for ν at the leading index j.
fn infer_phi_multiple<T: Coefficient>(
    s: &ParitySeries<T>,
    lead: usize,
) -> Result<(RealOrder, T), LadderError> {
    if lead + 1 > s.order() {
        return Err(LadderError::NotInBasis(
            "too few coefficients to identify the order".into(),
        ));
    }
    let ratio = s.coeff(lead + 1) / s.coeff(lead);
    if ratio.is_zero() {
        return Err(LadderError::NotInBasis(
            "vanishing coefficient ratio".into(),
        ));
    }
    let j1 = T::from_i64(lead as i64 + 1);
    let nu = -(T::one() / (T::from_i64(4) * j1.clone() * ratio)) - j1;
    let order = nu
        .to_order()
        .ok_or_else(|| LadderError::NotInBasis(format!("inferred order {nu:?} unusable")))?;
    let basis: ParitySeries<T> = ParitySeries::phi(order, lead)?;
    let b = basis.coeff(lead);
    if b.is_zero() {
        return Err(LadderError::NotInBasis(format!(
            "φ_{order} has no term at index {lead}"
        )));
    }
    Ok((order, s.coeff(lead) / b))
}

/// ∂_m in z-space: |m| raising or lowering steps starting from a series that
/// represents a multiple of φ_start. The hint tracks the order as it moves.
pub fn ladder_steps<T: Coefficient>(
    s: &ParitySeries<T>,
    m: i64,
    rule: PrimitiveRule,
    start: Option<RealOrder>,
) -> Result<ParitySeries<T>, LadderError> {
    let mut cur = s.clone();
    let mut order = start;
    for _ in 0..m.unsigned_abs() {
        if m > 0 {
            cur = apply_d(&cur)?;
            order = order.map(|o| o.offset(1.0));
        } else {
            cur = apply_primitive(&cur, rule, order)?;
            order = order.map(|o| o.offset(-1.0));
        }
    }
    Ok(cur)
}

/// |evaluated z-space ∂_m φ_n − (−1)^m φ_(n+m)| at z.
pub fn ladder_check(n: i64, m: i64, z: f64) -> Result<f64, LadderError> {
    if n.abs() > 8 || m.abs() > 6 {
        return Err(LadderError::OutOfRange { n, m });
    }
    if m == 0 {
        return Ok(0.0);
    }
    let start = RealOrder::integer(n);
    let truncation = 60 + m.unsigned_abs() as usize + n.unsigned_abs() as usize;
    let s = phi_series(start, truncation);
    let lhs = ladder_steps(&s, m, PrimitiveRule::BasisClosure, Some(start))?.eval(z);
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = sign * phi_direct(RealOrder::integer(n + m), z)?;
    Ok((lhs - rhs).abs())
}

/// Whether the exact rational series of ∂_m φ_n, started from truncation K,
/// equals (−1)^m φ_(n+m) coefficient by coefficient.
pub fn ladder_check_exact(n: i64, m: i64, truncation: usize) -> Result<bool, LadderError> {
    let start = RealOrder::integer(n);
    let s = phi_series_exact(n, truncation);
    let out = ladder_steps(&s, m, PrimitiveRule::BasisClosure, Some(start))?;
    let sign = <BigRational as Coefficient>::from_i64(if m % 2 == 0 { 1 } else { -1 });
    let target = phi_series_exact(n + m, out.order()).scale(&sign);
    Ok(out == target)
}

/// Finite combination Σ a_n φ_n over n ∈ [n_min, n_max].
#[derive(Debug, Clone, PartialEq)]
pub struct PhiBasisVector<T = f64> {
    n_min: i64,
    coeffs: Vec<T>,
}

impl<T: Coefficient> PhiBasisVector<T> {
    pub fn new(n_min: i64, coeffs: Vec<T>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite_value()) {
            return Err(SeriesError::NonFinite { index });
        }
        Ok(PhiBasisVector { n_min, coeffs })
    }

    pub fn unit(n: i64) -> Self {
        PhiBasisVector {
            n_min: n,
            coeffs: vec![T::one()],
        }
    }

    pub fn zero(n_min: i64, n_max: i64) -> Self {
        assert!(n_min <= n_max);
        PhiBasisVector {
            n_min,
            coeffs: vec![T::zero(); (n_max - n_min + 1) as usize],
        }
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// a_n, zero outside the window.
    pub fn get(&self, n: i64) -> T {
        if n < self.n_min || n > self.n_max() {
            return T::zero();
        }
        self.coeffs[(n - self.n_min) as usize].clone()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.n_min + i as i64, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, factor: &T) -> Self {
        PhiBasisVector {
            n_min: self.n_min,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        }
    }

    /// Sum over the union of both windows.
    pub fn add(&self, other: &Self) -> Self {
        let lo = self.n_min.min(other.n_min);
        let hi = self.n_max().max(other.n_max());
        let coeffs = (lo..=hi).map(|n| self.get(n) + other.get(n)).collect();
        PhiBasisVector { n_min: lo, coeffs }
    }

    /// Same coefficients on a common window, zeros padded.
    pub fn same_as(&self, other: &Self, rel_tol: f64) -> bool {
        let lo = self.n_min.min(other.n_min);
        let hi = self.n_max().max(other.n_max());
        (lo..=hi).all(|n| self.get(n).close_to(&other.get(n), rel_tol))
    }

    /// ∂_m: a_n moves to n+m with sign (−1)^m.
    pub fn ladder_apply(&self, m: i64) -> Self {
        let coeffs = if m % 2 == 0 {
            self.coeffs.clone()
        } else {
            self.coeffs.iter().map(|c| -c.clone()).collect()
        };
        PhiBasisVector {
            n_min: self.n_min + m,
            coeffs,
        }
    }

    /// Σ_(0<|m|≤cut) ∂_m / m; the window grows by `cut` on both sides.
    pub fn apply_a(&self, cut: i64) -> Result<Self, LadderError> {
        if cut < 1 {
            return Err(LadderError::InvalidCut(cut));
        }
        let len = self.coeffs.len() + 2 * cut as usize;
        let mut out = vec![T::zero(); len];
        let weights: Vec<(i64, T)> = (-cut..=cut)
            .filter(|&m| m != 0)
            .map(|m| {
                let sign = if m % 2 == 0 { 1 } else { -1 };
                (m, T::from_i64(sign) / T::from_i64(m))
            })
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (m, w) in &weights {
                let j = (i as i64 + cut + m) as usize;
                out[j] = out[j].clone() + a.clone() * w.clone();
            }
        }
        Ok(PhiBasisVector {
            n_min: self.n_min - cut,
            coeffs: out,
        })
    }
}

impl PhiBasisVector<f64> {
    /// Σ a_n φ_n(z) through the ascending series.
    pub fn evaluate(&self, z: f64) -> Result<f64, SeriesError> {
        let mut sum = 0.0;
        for (n, a) in self.iter() {
            if *a == 0.0 {
                continue;
            }
            sum += a * phi_direct(RealOrder::integer(n), z)?;
        }
        Ok(sum)
    }

    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn even(c: &[f64]) -> ParitySeries<f64> {
        ParitySeries::new(Parity::Even, c.to_vec()).unwrap()
    }

    #[test]
    fn raising_phi0_gives_minus_phi1() {
        let d = apply_d(&phi_series_exact(0, 20)).unwrap();
        let target = phi_series_exact(1, 19).scale(&-BigRational::from_i64(1));
        assert_eq!(d, target);
    }

    #[test]
    fn raising_simple_series() {
        let z = ParitySeries::<f64>::zero(Parity::Even, 4);
        assert!(apply_d(&z).unwrap().is_zero());
        assert_eq!(apply_d(&even(&[0.0, 1.0])).unwrap().coeffs(), &[2.0]);
    }

    #[test]
    fn odd_linear_term_rejected() {
        let s = ParitySeries::new(Parity::Odd, vec![1.0, 2.0]).unwrap();
        assert_eq!(apply_d(&s), Err(LadderError::NonSeriesResult));
        let s = ParitySeries::new(Parity::Odd, vec![0.0, 2.0]).unwrap();
        assert_eq!(apply_d(&s).unwrap().coeffs(), &[6.0]);
    }

    #[test]
    fn zero_constant_primitive_of_z_squared() {
        let p = apply_primitive(&even(&[0.0, 1.0]), PrimitiveRule::ZeroConstant, None).unwrap();
        assert_eq!(p.coeffs(), &[0.0, 0.0, 0.25]);
    }

    #[test]
    fn closure_primitive_of_phi1_is_minus_phi0() {
        let s = phi_series_exact(1, 15);
        let hinted =
            apply_primitive(&s, PrimitiveRule::BasisClosure, Some(RealOrder::integer(1))).unwrap();
        let inferred = apply_primitive(&s, PrimitiveRule::BasisClosure, None).unwrap();
        let target = phi_series_exact(0, 16).scale(&-BigRational::from_i64(1));
        assert_eq!(hinted, target);
        assert_eq!(inferred, target);
    }

    #[test]
    fn closure_primitive_real_order() {
        let order = RealOrder::new(0.3).unwrap();
        let s = phi_series(order, 25);
        let p = apply_primitive(&s, PrimitiveRule::BasisClosure, None).unwrap();
        let target = phi_series(order.offset(-1.0), 26).scale(&-1.0);
        assert!(p.close_to(&target, 1e-13));
    }

    #[test]
    fn closure_without_hint_rejects_foreign_series() {
        let s = even(&[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(
            apply_primitive(&s, PrimitiveRule::BasisClosure, None),
            Err(LadderError::NotInBasis(_))
        ));
        // a single coefficient cannot identify the order
        assert!(apply_primitive(&even(&[1.0]), PrimitiveRule::BasisClosure, None).is_err());
    }

    #[test]
    fn rules_differ_by_the_closure_constant() {
        let nu = RealOrder::new(1.7).unwrap();
        let s = phi_series(nu, 20);
        let zero = apply_primitive(&s, PrimitiveRule::ZeroConstant, None).unwrap();
        let closed = apply_primitive(&s, PrimitiveRule::BasisClosure, Some(nu)).unwrap();
        // C = −1/(Γ(ν) 2^(ν−1))
        let expected = -crate::gamma::recip_gamma(nu.value()) / 2f64.powf(nu.value() - 1.0);
        assert!((closed.coeff(0) - zero.coeff(0) - expected).abs() < 1e-12);
        for k in 1..=21 {
            assert_eq!(closed.coeff(k), zero.coeff(k));
        }
    }

    #[test]
    fn ladder_apply_examples() {
        let v = PhiBasisVector::<f64>::unit(0).ladder_apply(2);
        assert_eq!((v.n_min(), v.coeffs()), (2, &[1.0][..]));
        let v = PhiBasisVector::<f64>::unit(3).ladder_apply(-1);
        assert_eq!((v.n_min(), v.coeffs()), (2, &[-1.0][..]));
        let u = PhiBasisVector::new(-2, vec![1.0, -3.0, 0.5]).unwrap();
        assert_eq!(u.ladder_apply(0), u);
    }

    #[test]
    fn apply_a_unit_cut_one() {
        let v = PhiBasisVector::<f64>::unit(0).apply_a(1).unwrap();
        assert_eq!(v.n_min(), -1);
        assert_eq!(v.coeffs(), &[1.0, 0.0, -1.0]);
        let z = PhiBasisVector::<f64>::zero(-3, 3).apply_a(4).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.n_min(), -7);
        assert!(PhiBasisVector::<f64>::unit(0).apply_a(0).is_err());
    }

    #[test]
    fn ladder_check_small_cases() {
        assert!(ladder_check(0, 1, 1.0).unwrap() <= 1e-12);
        assert!(ladder_check(2, -2, 0.5).unwrap() <= 1e-12);
        assert_eq!(ladder_check(0, 0, 1.0).unwrap(), 0.0);
        assert!(ladder_check(9, 1, 1.0).is_err());
    }
}
