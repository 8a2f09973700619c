//! The quartics `𝒬₁`, `𝒬₂` and their real roots.
//!
//! Both factor into self-inversive quadratics `xξ² − (1 ∓ σ)ξ + x` with
//! `σ = 2x` for `𝒬₁` and `σ = √(4x² + w²)` for `𝒬₂`. The small root of each is
//! computed in cancellation-free form and the large root as its reciprocal.

use serde::Serialize;

use super::{check_x, check_xw};
use crate::error::domain;
use crate::{ComplexValue, Result};

/// `𝒬₁(x; ξ) = (ξ − x(ξ² + 1))² − 4x²ξ²`
pub fn q1_eval(x: f64, xi: ComplexValue) -> ComplexValue {
    let t = xi - x * (xi * xi + 1.0);
    t * t - 4.0 * x * x * xi * xi
}

/// `𝒬₂(x, w; ξ) = 𝒬₁(x; ξ) − w²ξ²`
pub fn q2_eval(x: f64, w: f64, xi: ComplexValue) -> ComplexValue {
    q1_eval(x, xi) - w * w * xi * xi
}

/// `|𝒬₁(ξ)|` divided by the size of its terms, for real `ξ`.
pub fn q1_residual(x: f64, r: f64) -> f64 {
    let t = r.abs() + x * (r * r + 1.0);
    let scale = t * t + 4.0 * x * x * r * r;
    q1_eval(x, r.into()).norm() / scale
}

/// `|𝒬₂(ξ)|` divided by the size of its terms, for real `ξ`.
pub fn q2_residual(x: f64, w: f64, r: f64) -> f64 {
    let t = r.abs() + x * (r * r + 1.0);
    let scale = t * t + (4.0 * x * x + w * w) * r * r;
    q2_eval(x, w, r.into()).norm() / scale
}

/// Small root of `xξ² − bξ + x` (needs `b > 2x > 0`).
fn small_root(x: f64, b: f64) -> f64 {
    2.0 * x / (b + ((b - 2.0 * x) * (b + 2.0 * x)).sqrt())
}

/// Ordered real roots of `𝒬₁` (`w = None`) or `𝒬₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticRootSet {
    pub x: f64,
    pub w: Option<f64>,
    /// `(c₁, c₂, d₁, d₂)` or `(a₁, a₂, b₁, b₂)`, increasing
    pub roots: [f64; 4],
}

impl QuarticRootSet {
    /// Largest scaled residual over the four roots.
    pub fn max_residual(&self) -> f64 {
        self.roots
            .iter()
            .map(|&r| match self.w {
                None => q1_residual(self.x, r),
                Some(w) => q2_residual(self.x, w, r),
            })
            .fold(0.0, f64::max)
    }
}

/// `c₁ = (1 + 2x − √(1+4x))/2x`, `c₂ = (1 − 2x − √(1−4x))/2x`, `d₁ = 1/c₂`, `d₂ = 1/c₁`.
pub fn q1_roots(x: f64) -> Result<QuarticRootSet> {
    check_x(x)?;
    let s = (1.0 + 4.0 * x).sqrt();
    let u = (1.0 - 4.0 * x).sqrt();
    let c1 = 4.0 * x / ((1.0 + s) * (1.0 + s));
    let c2 = 4.0 * x / ((1.0 + u) * (1.0 + u));
    let d1 = (1.0 + u) * (1.0 + u) / (4.0 * x);
    let d2 = (1.0 + s) * (1.0 + s) / (4.0 * x);
    Ok(QuarticRootSet { x, w: None, roots: [c1, c2, d1, d2] })
}

/// Roots `a₁ < a₂ < 1 < b₁ < b₂` of `𝒬₂`, with `a₁ b₂ = a₂ b₁ = 1`.
pub fn q2_roots(x: f64, w: f64) -> Result<QuarticRootSet> {
    check_x(x)?;
    if !(w >= 0.0 && w * w < 1.0 - 4.0 * x) {
        return Err(domain(format!("need 0 <= w < sqrt(1-4x), got x={x} w={w}")));
    }
    let sigma = (4.0 * x * x + w * w).sqrt();
    let a1 = small_root(x, 1.0 + sigma);
    let a2 = small_root(x, 1.0 - sigma);
    Ok(QuarticRootSet { x, w: Some(w), roots: [a1, a2, 1.0 / a2, 1.0 / a1] })
}

/// Both root sets, validated against each other.
pub(crate) fn roots(x: f64, w: f64) -> Result<(QuarticRootSet, QuarticRootSet)> {
    check_xw(x, w)?;
    Ok((q1_roots(x)?, q2_roots(x, w)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_eval_examples() {
        for x in [0.03, 0.1, 0.2] {
            assert!((q1_eval(x, 0.0.into()) - x * x).norm() < 1e-16);
            let xi = ComplexValue::new(0.3, -0.7);
            let d = q2_eval(x, 0.4, xi) - q1_eval(x, xi) + 0.16 * xi * xi;
            assert!(d.norm() < 1e-15);
            assert_eq!(q2_eval(x, 0.0, xi), q1_eval(x, xi));
        }
    }

    #[test]
    fn q1_root_examples() {
        let r = q1_roots(0.1).unwrap().roots;
        let expect = [0.0839202, 0.1270166, 7.8729833, 11.9160798];
        for (a, b) in r.iter().zip(expect) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
        assert!((r[0] * r[3] - 1.0).abs() < 1e-12);
        assert!(q1_roots(0.1).unwrap().max_residual() < 1e-11);
        let r = q1_roots(0.05).unwrap().roots;
        assert!(r[1] < r[2]);
        assert!(q1_roots(0.0).is_err() && q1_roots(0.245).is_err());
    }

    #[test]
    fn closed_forms_match_the_textbook_expressions() {
        let x: f64 = 0.1;
        let s = (1.0 + 4.0 * x).sqrt();
        let u = (1.0 - 4.0 * x).sqrt();
        let r = q1_roots(x).unwrap().roots;
        let text = [
            (1.0 + 2.0 * x - s) / (2.0 * x),
            (1.0 - 2.0 * x - u) / (2.0 * x),
            (1.0 - 2.0 * x + u) / (2.0 * x),
            (1.0 + 2.0 * x + s) / (2.0 * x),
        ];
        for (a, b) in r.iter().zip(text) {
            assert!((a - b).abs() < 1e-13 * b.abs());
        }
    }

    #[test]
    fn q2_root_examples() {
        let c = q1_roots(0.1).unwrap().roots;
        let a = q2_roots(0.1, 0.0).unwrap().roots;
        for (p, q) in a.iter().zip(c) {
            assert!((p - q).abs() < 1e-12 * q);
        }
        let a = q2_roots(0.1, 0.2).unwrap().roots;
        let chain = [a[0], c[0], c[1], a[1], 1.0, a[2], c[2], c[3], a[3]];
        assert!(chain.windows(2).all(|p| p[0] < p[1]), "{chain:?}");
        assert!((a[0] * a[3] - 1.0).abs() < 1e-12);
        assert!(q2_roots(0.1, 0.2).unwrap().max_residual() < 1e-11);
        assert!(q2_roots(0.2, 0.5).is_err());
    }
}
