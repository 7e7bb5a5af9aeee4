//! Browser bindings: φ_ν curves, deformed versus direct orders, and the
//! spectrum of the perturbed winding operator.

use bessel_ladder::circle::{spectrum as circle_spectrum, Prepotential};
use bessel_ladder::deform::{deform_phi, DeformationPlan, Strategy};
use bessel_ladder::series::{phi_direct, RealOrder};
use wasm_bindgen::prelude::*;

fn grid(z_max: f64, points: usize) -> impl Iterator<Item = f64> {
    let step = z_max / (points.max(2) - 1) as f64;
    (0..points.max(2)).map(move |i| i as f64 * step)
}

/// φ_ν(z) at `points` evenly spaced z in [0, z_max]; NaN where unavailable.
#[wasm_bindgen]
pub fn phi_curve(order: f64, z_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    let order = RealOrder::new(order).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(grid(z_max, points)
        .map(|z| phi_direct(order, z).unwrap_or(f64::NAN))
        .collect())
}

/// Interleaved pairs (deformed φ_n by λ, direct φ_(n+λ)) over [0, z_max].
/// `strategy` is "fourier-weights" or "taylor-operator".
#[wasm_bindgen]
pub fn deform_curve(
    n: i32,
    lambda: f64,
    window: i32,
    strategy: &str,
    z_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    let strategy: Strategy = strategy.parse().map_err(|e: String| JsError::new(&e))?;
    let plan = DeformationPlan::new(lambda)
        .with_window(window as i64)
        .with_strategy(strategy);
    plan.validate().map_err(|e| JsError::new(&e.to_string()))?;
    let direct = RealOrder::new(n as f64 + lambda).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(grid(z_max, points)
        .flat_map(|z| {
            [
                deform_phi(n as i64, z, &plan).unwrap_or(f64::NAN),
                phi_direct(direct, z).unwrap_or(f64::NAN),
            ]
        })
        .collect())
}

/// Sorted eigenvalues of W_λ on modes |k| ≤ `modes`; `rho` is "bessel",
/// "smooth" or "cosine".
#[wasm_bindgen]
pub fn spectrum(lambda: f64, modes: usize, rho: &str) -> Result<Vec<f64>, JsError> {
    let p = match rho {
        "bessel" => Prepotential::bessel(modes),
        "smooth" => Prepotential::smooth(modes),
        "cosine" => Prepotential::cosine(modes),
        other => return Err(JsError::new(&format!("unknown prepotential '{other}'"))),
    };
    circle_spectrum(&p, lambda, modes).map_err(|e| JsError::new(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_have_requested_length() {
        assert_eq!(phi_curve(0.5, 10.0, 50).unwrap().len(), 50);
        let d = deform_curve(0, 1.0, 20, "fourier-weights", 5.0, 11).unwrap();
        assert_eq!(d.len(), 22);
        // an integer λ is an exact index shift
        for pair in d.chunks(2) {
            assert_eq!(pair[0], pair[1]);
        }
    }

    #[test]
    fn undeformed_spectrum_is_integers() {
        assert_eq!(
            spectrum(0.0, 2, "smooth").unwrap(),
            vec![-2.0, -1.0, 0.0, 1.0, 2.0]
        );
    }
}
