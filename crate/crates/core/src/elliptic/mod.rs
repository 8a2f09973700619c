//! Closed-form evaluation of `α(w, x²) = 𝒜₁(x, w) + 𝒜₂(x, w)`.
//!
//! On the unit circle `α(w, x²) = (1/2πi) ∮ dξ / (g̃(x; ξ) − wξ)` where
//! `g̃² = 𝒬₁(x; ξ) = (ξ − x(ξ² + 1))² − 4x²ξ²`. Rationalising gives
//! `(g̃ + wξ) / 𝒬₂` with `𝒬₂ = 𝒬₁ − w²ξ²`; shrinking the contour leaves a pole
//! term `𝒜₁` and an integral `𝒜₂` across the branch cut `[c₁, c₂]`.
//!
//! `𝒜₂` is evaluated three ways: directly on `[c₁, c₂]`, on the interval
//! obtained from `z ↦ (z − 1)/(z + 1)`, and as a combination of complete
//! elliptic integrals after a Möbius reduction to Legendre form.

mod a2;
mod integrals;
mod legendre;
mod quartic;
mod residue;

pub use a2::{a2_moebius_quadrature, a2_quadrature, alpha_closed};
pub use integrals::{elliptic_k, elliptic_k_quadrature, elliptic_pi};
pub use legendre::{
    a2_pi_combination, involution_j, legendre_reduce, moebius_l, moebius_lambda, EllipticReduction, Moebius,
    PiCombination, PoleTerm,
};
pub use quartic::{q1_eval, q1_residual, q1_roots, q2_eval, q2_residual, q2_roots, QuarticRootSet};
pub use residue::{
    a1_closed, a1_alt_closed, a1_alt_product, a1_alt_simplified, a1_residue, g_tilde, g_tilde_limit,
};

use crate::error::domain;
use crate::Result;

/// Largest `x` accepted: roots `c₂` and `d₁` merge as `x → 1/4`.
pub const X_MAX: f64 = 0.24;

pub(crate) fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x <= X_MAX) {
        return Err(domain(format!("x must lie in (0, {X_MAX}], got {x}")));
    }
    Ok(())
}

pub(crate) fn check_xw(x: f64, w: f64) -> Result<()> {
    check_x(x)?;
    if !(w >= 0.0 && 4.0 * x + w * w < 1.0) {
        return Err(domain(format!("need w >= 0 and 4x + w^2 < 1, got x={x} w={w}")));
    }
    Ok(())
}
