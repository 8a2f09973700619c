//! Complete elliptic integrals in the modulus convention.
//!
//! `K(k) = ∫₀¹ dt / √((1−t²)(1−k²t²))` and the third-kind integral with a
//! *linear* characteristic factor,
//! `Π(k; λ) = ∫₀¹ dt / (√((1−t²)(1−k²t²)) (1 − λt))`.
//! The linear form is what the pole terms of the Legendre reduction produce;
//! `Π(k; λ) + Π(k; −λ)` is twice the conventional `Π(λ², k)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::domain;
use crate::numeric::integrate;
use crate::Result;

const QUAD_TOL: f64 = 1e-14;

/// `K(k) = π / (2 AGM(1, √(1−k²)))`.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(domain(format!("elliptic_k needs 0 <= k < 1, got {k}")));
    }
    let (mut a, mut b) = (1.0f64, (1.0 - k * k).sqrt());
    // Quadratic convergence: a handful of steps reach the ulp level, where
    // `a` and `b` may then alternate by one ulp forever, hence the cap.
    for _ in 0..64 {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    a = 0.5 * (a + b);
    Ok(FRAC_PI_2 / a)
}

/// `K(k)` by Gauss–Legendre in `t = sin φ`; an independent check on [`elliptic_k`].
pub fn elliptic_k_quadrature(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(domain(format!("elliptic_k needs 0 <= k < 1, got {k}")));
    }
    integrate(|p: f64| 1.0 / (1.0 - k * k * p.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, QUAD_TOL)
}

/// `Π(k; λ)` with the linear factor `1 − λt`, for `|λ| < 1`.
pub fn elliptic_pi(k: f64, lambda: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) || !(lambda.abs() < 1.0) {
        return Err(domain(format!("elliptic_pi needs 0 <= k < 1 and |lambda| < 1, got k={k} lambda={lambda}")));
    }
    integrate(
        |p: f64| {
            let s = p.sin();
            1.0 / ((1.0 - k * k * s * s).sqrt() * (1.0 - lambda * s))
        },
        0.0,
        FRAC_PI_2,
        QUAD_TOL,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::binomial;
    use num_traits::ToPrimitive;

    #[test]
    fn k_at_zero() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert!(elliptic_k(1.0).is_err());
    }

    #[test]
    fn agm_matches_quadrature() {
        for k in [0.1, 0.4, 0.7, 0.9] {
            let a = elliptic_k(k).unwrap();
            let b = elliptic_k_quadrature(k).unwrap();
            assert!((a - b).abs() < 1e-12 * a, "k={k}");
        }
    }

    #[test]
    fn k_series() {
        let k: f64 = 0.3;
        let s: f64 = (0..40)
            .map(|n| {
                let c = binomial(2 * n, n as i64).to_f64().unwrap() / 4f64.powi(n as i32);
                c * c * k.powi(2 * n as i32)
            })
            .sum();
        assert!((2.0 / std::f64::consts::PI * elliptic_k(k).unwrap() - s).abs() < 1e-12);
    }

    #[test]
    fn pi_collapses_to_k() {
        for k in [0.0, 0.4, 0.8] {
            assert!((elliptic_pi(k, 0.0).unwrap() - elliptic_k(k).unwrap()).abs() < 1e-13);
        }
        assert!(elliptic_pi(0.5, 1.0).is_err());
    }

    #[test]
    fn pi_at_zero_modulus() {
        // ∫₀^{π/2} dφ / (1 − λ sin φ) = (π/2 + asin λ) / √(1 − λ²)
        for lambda in [0.5f64, -0.7, 0.95] {
            let exact = (FRAC_PI_2 + lambda.asin()) / (1.0 - lambda * lambda).sqrt();
            assert!((elliptic_pi(0.0, lambda).unwrap() - exact).abs() < 1e-12 * exact);
        }
    }

    #[test]
    fn pi_even_part() {
        let (k, l) = (0.4f64, 0.3f64);
        let even = integrate(
            |p: f64| {
                let s = p.sin();
                1.0 / ((1.0 - k * k * s * s).sqrt() * (1.0 - l * l * s * s))
            },
            0.0,
            FRAC_PI_2,
            1e-14,
        )
        .unwrap();
        let sum = elliptic_pi(k, l).unwrap() + elliptic_pi(k, -l).unwrap();
        assert!((sum - 2.0 * even).abs() < 1e-12);
    }
}
