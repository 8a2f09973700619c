//! The branch-cut integral `𝒜₂(x, w) = (1/π) ∫_{c₁}^{c₂} √(−𝒬₁(r)) / (−𝒬₂(r)) dr`.

use std::f64::consts::{FRAC_PI_2, PI};

use super::quartic::roots;
use super::residue::a1_closed;
use crate::numeric::integrate;
use crate::Result;

const TOL: f64 = 1e-13;

/// Direct evaluation on `[c₁, c₂]` with `r = c₁ + (c₂ − c₁) sin²θ`, which
/// absorbs both square-root endpoint zeros.
pub fn a2_quadrature(x: f64, w: f64) -> Result<f64> {
    let (q1, _) = roots(x, w)?;
    let [c1, c2, d1, d2] = q1.roots;
    let h = c2 - c1;
    let v = integrate(
        |t: f64| {
            let (s, c) = t.sin_cos();
            let sc = s * c;
            let r = c1 + h * s * s;
            let far = (d1 - r) * (d2 - r);
            let minus_q1 = x * x * h * h * sc * sc * far;
            let minus_q2 = minus_q1 + w * w * r * r;
            2.0 * x * h * h * sc * sc * far.sqrt() / minus_q2
        },
        0.0,
        FRAC_PI_2,
        TOL,
    )?;
    Ok(v / PI)
}

/// The same integral after `t = (r − 1)/(r + 1)`, which sends the roots of
/// `𝒬₁` to `±1/√(1+4x)`, `±√(1−4x)`:
///
/// ```text
/// 𝒜₂ = 2/(π√(1−4x)) ∫_{−q}^{−p} (𝒬₁/𝒬₂)((1+t)/(1−t)) dt / √|(1−(1+4x)t²)(1−t²/(1−4x))|
/// ```
///
/// with `q = 1/√(1+4x)`, `p = √(1−4x)`.
pub fn a2_moebius_quadrature(x: f64, w: f64) -> Result<f64> {
    let (q1, _) = roots(x, w)?;
    let [c1, c2, d1, d2] = q1.roots;
    let q = 1.0 / (1.0 + 4.0 * x).sqrt();
    let p = (1.0 - 4.0 * x).sqrt();
    let v = integrate(
        |th: f64| {
            let t = -q + (q - p) * th.sin().powi(2);
            let r = (1.0 + t) / (1.0 - t);
            let qq1 = x * x * (r - c1) * (r - c2) * (r - d1) * (r - d2);
            let qq2 = qq1 - w * w * r * r;
            qq1 / qq2 / ((q - t) * (p - t)).sqrt()
        },
        0.0,
        FRAC_PI_2,
        TOL,
    )?;
    Ok(4.0 / (PI * (1.0 + 4.0 * x).sqrt()) * v)
}

/// `α(w, x²) = 𝒜₁(x, w) + 𝒜₂(x, w)`.
pub fn alpha_closed(w: f64, x: f64) -> Result<f64> {
    Ok(a1_closed(x, w)? + a2_quadrature(x, w)?)
}
