//! Ladder-operator calculus of reduced Bessel functions φ_ν(z) = J_ν(z)/z^ν,
//! the order-deformation operator exp(−λ Σ_(m≠0) ∂_m/m), and the perturbed
//! winding operator on the punctured plane.
//!
//! Modules, bottom-up:
//!
//! * [`gamma`], [`series`]: Γ, 1/Γ and fixed-parity power series for φ_ν;
//! * [`ladder`]: the ∂_m operators in z-space and on the φ_n lattice;
//! * [`deform`]: two realizations of the deformation operator;
//! * [`circle`]: prepotentials, W_λ as a Fourier matrix, deformed eigenstates;
//! * [`genfun`]: generating functions and the eigenrelation checks;
//! * [`cli`]: the `bessel-ladder` command-line front end.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circle;
pub mod cli;
pub mod deform;
pub mod gamma;
pub mod genfun;
pub mod ladder;
pub mod quadrature;
pub mod series;

pub use series::{phi_direct, phi_series, Parity, ParitySeries, RealOrder};
