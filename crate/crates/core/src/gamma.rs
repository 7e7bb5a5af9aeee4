//! Gamma function, its reciprocal and its logarithm for real arguments.
//!
//! The evaluation is a Lanczos approximation (g = 7, nine terms) with the
//! reflection formula below one half. Positive integer arguments are served
//! from a factorial table so that `gamma(n + 1) == n!` holds bit-for-bit for
//! every factorial that is exactly representable.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GammaError {
    #[error("gamma has a pole at the non-positive integer {0}")]
    Pole(f64),
    #[error("gamma argument is not finite: {0}")]
    NotFinite(f64),
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest `n` with `n!` finite in f64.
const MAX_FACTORIAL: usize = 170;

fn factorial_table() -> &'static [f64; MAX_FACTORIAL + 1] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[f64; MAX_FACTORIAL + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; MAX_FACTORIAL + 1];
        for n in 1..=MAX_FACTORIAL {
            t[n] = t[n - 1] * n as f64;
        }
        t
    })
}

/// `n!` as f64; `inf` past 170.
pub fn factorial(n: usize) -> f64 {
    if n <= MAX_FACTORIAL {
        factorial_table()[n]
    } else {
        f64::INFINITY
    }
}

/// `sin(πx)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    let mut r = x - 2.0 * (x / 2.0).round();
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn positive_integer(x: f64) -> Option<usize> {
    if x >= 1.0 && x == x.round() && x <= (MAX_FACTORIAL + 1) as f64 {
        Some(x as usize)
    } else {
        None
    }
}

/// Lanczos sum and shifted argument for `x >= 0.5`.
fn lanczos_parts(x: f64) -> (f64, f64) {
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (a, x + LANCZOS_G + 0.5)
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if let Some(n) = positive_integer(x) {
        return factorial(n - 1).ln();
    }
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx), sin(πx) > 0 on (0, 1/2)
        return PI.ln() - sin_pi(x).ln() - ln_gamma(1.0 - x);
    }
    let (a, t) = lanczos_parts(x);
    0.5 * (2.0 * PI).ln() + (x - 0.5) * t.ln() - t + a.ln()
}

/// Γ(x). Poles at the non-positive integers are errors; use [`recip_gamma`]
/// where those points must be handled.
pub fn gamma(x: f64) -> Result<f64, GammaError> {
    if !x.is_finite() {
        return Err(GammaError::NotFinite(x));
    }
    if is_nonpositive_integer(x) {
        return Err(GammaError::Pole(x));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if let Some(n) = positive_integer(x) {
        return factorial(n - 1);
    }
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_unchecked(1.0 - x));
    }
    if x > 140.0 {
        return ln_gamma(x).exp();
    }
    let (a, t) = lanczos_parts(x);
    (2.0 * PI).sqrt() * t.powf(x - 0.5) * (-t).exp() * a
}

/// 1/Γ(x), a total function with exact zeros at 0, −1, −2, …
pub fn recip_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    if let Some(n) = positive_integer(x) {
        return 1.0 / factorial(n - 1);
    }
    if x > 140.0 {
        return (-ln_gamma(x)).exp();
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1−x) / π
        return sin_pi(x) * gamma_unchecked(1.0 - x) / PI;
    }
    1.0 / gamma_unchecked(x)
}

/// `(ln|1/Γ(x)|, sign)`, or `None` at the zeros of 1/Γ.
pub fn ln_abs_recip_gamma(x: f64) -> Option<(f64, f64)> {
    if is_nonpositive_integer(x) {
        return None;
    }
    if x > 0.0 {
        return Some((-ln_gamma(x), 1.0));
    }
    let s = sin_pi(x);
    Some((s.abs().ln() + ln_gamma(1.0 - x) - PI.ln(), s.signum()))
}
