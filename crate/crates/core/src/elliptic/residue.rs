//! The continuation `g̃` of `√𝒬₁` and the pole contribution `𝒜₁`.
//!
//! `g̃` is negative on `(−∞, c₁)`, so at the inner pole `a₁` it equals
//! `−w a₁` and the residue there vanishes: only `a₂` contributes.
//! [`a1_closed`] is that single residue in closed form. The three
//! `a1_alt_*` functions are alternative simplifications, which replace
//! both numerators `w aⱼ + g̃(aⱼ)` by `2w aⱼ`; they are kept so the
//! discrepancy stays measurable.

use super::quartic::roots;
use super::{check_x, q1_roots};
use crate::error::domain;
use crate::genfun::principal_sqrt;
use crate::{ComplexValue, Result};

/// `x √(ξ−c₁) √(ξ−c₂) √(d₁−ξ) √(d₂−ξ)` with principal roots. On the real
/// axis outside the cuts the value is the limit from the upper half-plane,
/// which is also the limit from below there.
pub fn g_tilde(x: f64, xi: ComplexValue) -> Result<ComplexValue> {
    let [c1, c2, d1, d2] = q1_roots(x)?.roots;
    if xi.im == 0.0 && ((c1..=c2).contains(&xi.re) || (d1..=d2).contains(&xi.re)) {
        return Err(domain(format!("xi = {} lies on a branch cut", xi.re)));
    }
    Ok(g_raw(x, [c1, c2, d1, d2], xi))
}

fn g_raw(x: f64, [c1, c2, d1, d2]: [f64; 4], xi: ComplexValue) -> ComplexValue {
    x * principal_sqrt(xi - c1) * principal_sqrt(xi - c2) * principal_sqrt(d1 - xi) * principal_sqrt(d2 - xi)
}

/// Boundary value `lim_{ε→0⁺} g̃(r ± iε)` (`upper` selects the sign),
/// estimated from offsets `ε, 2ε, 4ε` by Richardson extrapolation so the
/// `O(ε)` drift cancels.
pub fn g_tilde_limit(x: f64, r: f64, upper: bool, eps: f64) -> Result<ComplexValue> {
    check_x(x)?;
    let roots = q1_roots(x)?.roots;
    let s = if upper { 1.0 } else { -1.0 };
    let g = |h: f64| g_raw(x, roots, ComplexValue::new(r, s * h * eps));
    Ok((8.0 * g(1.0) - 6.0 * g(2.0) + g(4.0)) / 3.0)
}

/// `𝒜₁` as the sum of the two residues at `a₁`, `a₂`, with `g̃` evaluated.
pub fn a1_residue(x: f64, w: f64) -> Result<f64> {
    let (_, q2) = roots(x, w)?;
    let [a1, a2, b1, b2] = q2.roots;
    let g1 = g_tilde(x, a1.into())?;
    let g2 = g_tilde(x, a2.into())?;
    let t1 = (w * a1 + g1) / (x * x * (a1 - a2) * (a1 - b1) * (a1 - b2));
    let t2 = (w * a2 + g2) / (x * x * (a2 - a1) * (a2 - b1) * (a2 - b2));
    Ok((t1 + t2).re)
}

/// `𝒜₁ = 2w a₁ a₂² / (x² (a₂ − a₁)(1 − a₂²)(1 − a₁a₂))`, the residue at `a₂`
/// after `b₁ = 1/a₂`, `b₂ = 1/a₁`.
pub fn a1_closed(x: f64, w: f64) -> Result<f64> {
    let (_, q2) = roots(x, w)?;
    let [a1, a2, _, _] = q2.roots;
    Ok(2.0 * w * a1 * a2 * a2 / (x * x * (a2 - a1) * (1.0 - a2 * a2) * (1.0 - a1 * a2)))
}

/// Alternative two-residue form with both numerators set to `2w aⱼ`.
pub fn a1_alt_simplified(x: f64, w: f64) -> Result<f64> {
    let (_, q2) = roots(x, w)?;
    let [a1, a2, b1, b2] = q2.roots;
    let t1 = 2.0 * w * a1 / (x * x * (a1 - a2) * (a1 - b1) * (a1 - b2));
    let t2 = 2.0 * w * a2 / (x * x * (a2 - a1) * (a2 - b1) * (a2 - b2));
    Ok(t1 + t2)
}

/// Alternative form `2w (b₁b₂ − a₁a₂) / (x² ∏ⱼ∏ₖ (bⱼ − aₖ))`.
pub fn a1_alt_product(x: f64, w: f64) -> Result<f64> {
    let (_, q2) = roots(x, w)?;
    let [a1, a2, b1, b2] = q2.roots;
    let den = x * x * (b1 - a1) * (b1 - a2) * (b2 - a1) * (b2 - a2);
    Ok(2.0 * w * (b1 * b2 - a1 * a2) / den)
}

/// Alternative closed form `2w a₁a₂(1 + a₁a₂) / (x²(1 − a₁a₂)(1 − a₁²)(1 − a₂²))`.
pub fn a1_alt_closed(x: f64, w: f64) -> Result<f64> {
    let (_, q2) = roots(x, w)?;
    let [a1, a2, _, _] = q2.roots;
    let p = a1 * a2;
    Ok(2.0 * w * p * (1.0 + p) / (x * x * (1.0 - p) * (1.0 - a1 * a1) * (1.0 - a2 * a2)))
}
