//! Library values against oracles that do not share its code paths:
//! reference values from an independent arbitrary-precision evaluation,
//! Bessel's integral, closed forms at half-integer order, and numerical
//! integration written out here.

use std::f64::consts::PI;

use bessel_ladder::deform::weights;
use bessel_ladder::gamma::{gamma, recip_gamma};
use bessel_ladder::genfun::{phi_closed, phi_gen, GenFunWindow};
use bessel_ladder::series::{phi_direct, phi_int, RealOrder};
use num_complex::Complex64;

fn phi(nu: f64, z: f64) -> f64 {
    phi_direct(RealOrder::new(nu).unwrap(), z).unwrap()
}

/// Composite Simpson rule with `n` (even) panels.
fn simpson(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// J_n(z) = (1/π) ∫_0^π cos(nτ − z sin τ) dτ for integer n.
fn bessel_integral(n: i64, z: f64) -> f64 {
    simpson(0.0, PI, 4000, |t| (n as f64 * t - z * t.sin()).cos()) / PI
}

#[test]
fn reference_values_at_real_order() {
    // (ν, z, φ_ν(z)) to 20 digits
    let table = [
        (0.3, 2.7, 0.055_557_192_745_445_39),
        (-1.5, 4.0, 2.936_896_259_687_473_3),
        (2.5, 0.7, 0.051_355_726_385_822_99),
        (-0.7, 1.3, -0.104_832_857_692_654_98),
        (-4.0, 3.0, 10.694_768_897_893_589),
    ];
    for (nu, z, expected) in table {
        let v = phi(nu, z);
        assert!(
            (v - expected).abs() <= 1e-13 * expected.abs(),
            "ν={nu} z={z}: {v} vs {expected}"
        );
    }
}

#[test]
fn cancellation_at_the_validated_radius() {
    // 4.1065676914194702906e-8: the series loses digits to cancellation here
    let v = phi(7.0, 9.5);
    assert!((v / 4.106_567_691_419_47e-8 - 1.0).abs() < 1e-6, "{v}");
}

#[test]
fn integer_orders_match_bessel_integral() {
    for n in 0..=4i64 {
        for &z in &[0.3, 1.0, 2.5, 6.0] {
            let j = bessel_integral(n, z);
            let expected = j / z.powi(n as i32);
            let v = phi_int(n, z).unwrap();
            assert!((v - expected).abs() < 1e-12, "n={n} z={z}");
            // J_(−n) = (−1)^n J_n
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let neg = phi_int(-n, z).unwrap();
            assert!((neg - sign * j * z.powi(n as i32)).abs() < 1e-11 * z.powi(n as i32).max(1.0));
        }
    }
}

#[test]
fn half_integer_closed_forms() {
    let c = (2.0 / PI).sqrt();
    for &z in &[0.5, 1.0, 2.0, 4.0, 7.5] {
        assert!((phi(0.5, z) - c * z.sin() / z).abs() < 1e-14);
        assert!((phi(-0.5, z) - c * z.cos()).abs() < 1e-14);
        assert!((phi(1.5, z) - c * (z.sin() / z - z.cos()) / (z * z)).abs() < 1e-13);
    }
    assert!((phi(0.5, 1.0) - 0.67139670714).abs() < 1e-11);
    assert!((phi(-1.0, 1.0) + 0.44005058574).abs() < 1e-11);
}

#[test]
fn first_zero_of_j0_by_bisection() {
    let (mut a, mut b) = (2.0, 3.0);
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if phi(0.0, a) * phi(0.0, m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    assert!((0.5 * (a + b) - 2.404_825_557_695_773).abs() < 1e-14);
}

#[test]
fn gamma_against_its_integral() {
    // Γ(1/2) = 2 ∫_0^∞ e^(−u²) du
    let g = 2.0 * simpson(0.0, 9.0, 20_000, |u| (-u * u).exp());
    assert!((gamma(0.5).unwrap() - g).abs() < 1e-13);
    assert!((gamma(0.5).unwrap() - 1.772_453_850_905_516).abs() < 1e-15);
    assert!((gamma(-2.5).unwrap() / -0.945_308_720_482_941_9 - 1.0).abs() < 1e-14);
    assert!((gamma(10.3).unwrap() / 716_430.689_062_375_2 - 1.0).abs() < 1e-13);
    assert!((recip_gamma(-3.7) / 3.973_867_909_758_354 - 1.0).abs() < 1e-13);
}

#[test]
fn laurent_weights_against_simpson() {
    for &lambda in &[0.25, 0.5, 0.9, -0.3] {
        let w = weights(lambda, 20, 1e-9);
        for k in -20..=20i64 {
            let a = lambda + k as f64;
            let q = simpson(-PI, PI, 20_000, |t| (a * t).cos()) / (2.0 * PI);
            assert!((w.get(k) - q).abs() < 1e-12, "λ={lambda} k={k}");
        }
    }
}

#[test]
fn generating_function_against_bessel_integral() {
    // Φ(z, t) = Σ φ_n(z) t^n with φ_n from the integral representation
    let z = 1.7;
    let t = Complex64::from_polar(1.0, 0.9);
    let mut direct = Complex64::new(0.0, 0.0);
    // beyond these orders the terms are below 1e−13, while dividing the
    // quadrature error by z^n would swamp it
    for n in -20..=14i64 {
        let j = bessel_integral(n.abs(), z) * if n < 0 && n % 2 != 0 { -1.0 } else { 1.0 };
        direct += j / z.powi(n as i32) * t.powi(n as i32);
    }
    let w = GenFunWindow::adaptive(z, 1.0, 60).unwrap();
    assert!((phi_gen(z, t, &w).unwrap() - direct).norm() < 1e-11);
    assert!((phi_closed(z, t) - direct).norm() < 1e-11);
}
