use bessel_ladder::circle::{build_w_lambda, spectrum, Prepotential};
use bessel_ladder::deform::{deform_phi, deformed_vector, weights, DeformationPlan};
use bessel_ladder::gamma::{gamma, recip_gamma};
use bessel_ladder::ladder::{
    apply_d, apply_primitive, ladder_steps, PhiBasisVector, PrimitiveRule,
};
use bessel_ladder::series::{phi_direct, phi_int, phi_series, phi_series_exact, RealOrder};
use proptest::prelude::*;

fn order() -> impl Strategy<Value = f64> {
    (-6.0f64..6.0).prop_filter("away from integers", |x| (x - x.round()).abs() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn even_in_z(nu in order(), z in 0.0f64..8.0) {
        let o = RealOrder::new(nu).unwrap();
        prop_assert_eq!(phi_direct(o, z).unwrap(), phi_direct(o, -z).unwrap());
    }

    #[test]
    fn integer_reflection(n in 0i64..8, z in 0.05f64..6.0) {
        // φ_(−n)(z) = (−1)^n z^(2n) φ_n(z)
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let lhs = phi_int(-n, z).unwrap();
        let rhs = sign * z.powi(2 * n as i32) * phi_int(n, z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300) + 1e-15);
    }

    #[test]
    fn three_term_recurrence(nu in order(), z in 0.1f64..6.0) {
        // J_(ν−1) + J_(ν+1) = (2ν/z) J_ν  ⇔  φ_(ν−1) + z² φ_(ν+1) = 2ν φ_ν
        let f = |v: f64| phi_direct(RealOrder::new(v).unwrap(), z).unwrap();
        let lhs = f(nu - 1.0) + z * z * f(nu + 1.0);
        let rhs = 2.0 * nu * f(nu);
        let scale = f(nu - 1.0).abs().max((z * z * f(nu + 1.0)).abs()).max(1e-300);
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale);
    }

    #[test]
    fn reciprocal_gamma(x in -8.0f64..30.0) {
        prop_assume!((x - x.round()).abs() > 1e-6 || x > 0.5);
        let g = gamma(x).unwrap();
        prop_assert!((recip_gamma(x) * g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_recurrence(x in 0.01f64..40.0) {
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        prop_assert!((lhs / rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn series_and_direct_agree(nu in order(), z in 0.0f64..4.0) {
        let o = RealOrder::new(nu).unwrap();
        let s = phi_series(o, 80).eval(z);
        let d = phi_direct(o, z).unwrap();
        prop_assert!((s - d).abs() <= 1e-13 * d.abs().max(1e-300) + 1e-300);
    }

    #[test]
    fn ladder_composition_in_z_space(n in -4i64..4, a in -3i64..4, b in -3i64..4) {
        let s = phi_series_exact(n, 25);
        let start = RealOrder::integer(n);
        let one = ladder_steps(&s, a, PrimitiveRule::BasisClosure, Some(start)).unwrap();
        let two = ladder_steps(&one, b, PrimitiveRule::BasisClosure, Some(start.offset(a as f64))).unwrap();
        let direct = ladder_steps(&s, a + b, PrimitiveRule::BasisClosure, Some(start)).unwrap();
        // compare on the common truncation
        let k = two.order().min(direct.order());
        prop_assert_eq!(two.truncate(k), direct.truncate(k));
    }

    #[test]
    fn raising_undoes_closure_primitive(nu in order()) {
        let o = RealOrder::new(nu).unwrap();
        let s = phi_series(o, 30);
        let back = apply_d(&apply_primitive(&s, PrimitiveRule::BasisClosure, Some(o)).unwrap()).unwrap();
        prop_assert!(back.close_to(&s, 1e-13));
    }

    #[test]
    fn index_shift_composes(a in -6i64..6, b in -6i64..6, n in -5i64..5) {
        let v = PhiBasisVector::<f64>::unit(n);
        prop_assert_eq!(v.ladder_apply(a).ladder_apply(b), v.ladder_apply(a + b));
    }

    #[test]
    fn index_shift_is_linear(c in prop::collection::vec(-2.0f64..2.0, 1..6), m in -4i64..4, s in -3.0f64..3.0) {
        let v = PhiBasisVector::new(-2, c).unwrap();
        let u = PhiBasisVector::unit(1);
        let lhs = v.scale(&s).add(&u).ladder_apply(m);
        let rhs = v.ladder_apply(m).scale(&s).add(&u.ladder_apply(m));
        prop_assert!(lhs.same_as(&rhs, 1e-14));
    }

    #[test]
    fn deformation_is_linear_in_the_input(l in -0.9f64..0.9, z in 0.1f64..2.0) {
        // deform(φ_n) evaluated equals the evaluated deformed basis vector
        let plan = DeformationPlan::new(l).with_window(30);
        let v = deformed_vector(1, &plan).unwrap();
        if let Ok(d) = deform_phi(1, z, &plan) { prop_assert!((v.evaluate(z).unwrap() - d).abs() < 1e-12) }
    }

    #[test]
    fn weights_reflect(l in 0.01f64..0.99, k in -20i64..20) {
        // w_k(−λ) = w_(−k)(λ)
        let a = weights(l, 20, 1e-9);
        let b = weights(-l, 20, 1e-9);
        prop_assert!((b.get(k) - a.get(-k)).abs() < 1e-15);
    }

    #[test]
    fn winding_matrix_is_symmetric(l in -2.0f64..2.0, m in 1usize..24) {
        let w = build_w_lambda(&Prepotential::smooth(m), l, m).unwrap();
        prop_assert_eq!(w.clone(), w.transpose());
    }

    #[test]
    fn spectrum_reflects_under_lambda(l in -1.0f64..1.0, m in 1usize..20) {
        let p = Prepotential::bessel(m);
        let a = spectrum(&p, l, m).unwrap();
        let b = spectrum(&p, -l, m).unwrap();
        for (x, y) in a.iter().zip(b.iter().rev()) {
            prop_assert!((x + y).abs() < 1e-9);
        }
    }
}

#[test]
fn group_property_exact_for_integer_steps() {
    let p1 = DeformationPlan::new(1.0).with_window(10);
    let p2 = DeformationPlan::new(2.0).with_window(10);
    let once = deformed_vector(0, &p1).unwrap();
    let mut twice = PhiBasisVector::zero(-20, 20);
    for (n, a) in once.iter() {
        twice = twice.add(&deformed_vector(n, &p2).unwrap().scale(a));
    }
    let direct = deformed_vector(0, &DeformationPlan::new(3.0).with_window(10)).unwrap();
    for n in -20..=20 {
        assert_eq!(twice.get(n), direct.get(n));
    }
}

#[test]
fn group_property_improves_with_window() {
    // Truncated weights compose into the weights of λ₁+λ₂ only as W grows.
    let err = |w: i64| {
        let p1 = DeformationPlan::new(0.3).with_window(w);
        let p2 = DeformationPlan::new(0.4).with_window(w);
        let once = deformed_vector(0, &p1).unwrap();
        let mut twice = PhiBasisVector::zero(-2 * w, 2 * w);
        for (n, a) in once.iter() {
            twice = twice.add(&deformed_vector(n, &p2).unwrap().scale(a));
        }
        let direct = deformed_vector(0, &DeformationPlan::new(0.7).with_window(w)).unwrap();
        (-w / 2..=w / 2)
            .map(|n| (twice.get(n) - direct.get(n)).abs())
            .fold(0.0, f64::max)
    };
    let (e10, e40) = (err(10), err(40));
    assert!(e40 < e10, "{e10} {e40}");
}

#[test]
fn abel_regularized_weights_sum_to_one() {
    let w = weights(0.5, 2000, 1e-9);
    let s: f64 = w
        .iter()
        .map(|(k, x)| x * 0.999f64.powi(k.unsigned_abs() as i32))
        .sum();
    assert!((s - 1.0).abs() <= 1e-3, "{s}");
}

#[test]
fn deformation_is_continuous_at_integers() {
    for n in [-2i64, -1, 0, 1, 3] {
        for z in [0.1, 0.5, 1.0, 2.0] {
            let near = deform_phi(n, z, &DeformationPlan::new(1.0 - 1e-6)).unwrap();
            let at = deform_phi(n, z, &DeformationPlan::new(1.0)).unwrap();
            assert!((near - at).abs() <= 1e-4, "n={n} z={z}: {near} {at}");
        }
    }
}

#[test]
fn deformation_commutes_with_the_ladder() {
    for l in [0.25, 0.5, 0.9] {
        let plan = DeformationPlan::new(l).with_window(30);
        for n in [-1i64, 0, 2] {
            for m in [-2i64, 1, 3] {
                let shifted = deformed_vector(n, &plan).unwrap().ladder_apply(m);
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let direct = deformed_vector(n + m, &plan).unwrap().scale(&sign);
                for z in [0.5, 1.0] {
                    let (a, b) = (shifted.evaluate(z).unwrap(), direct.evaluate(z).unwrap());
                    assert!((a - b).abs() <= 1e-8, "l={l} n={n} m={m} z={z}");
                }
            }
        }
    }
}
