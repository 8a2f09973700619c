//! Möbius reduction of `𝒜₂` to Legendre normal form.
//!
//! The map `Φ = N ∘ Λ(k₁) ∘ M₁` sends `(c₁, c₂, d₁, d₂)` to
//! `(−1, 1, 1/k, −1/k)`:
//!
//! * `M₁(z) = −𝓛(z)/√(1−4x)` with `𝓛(z) = (z−1)/(z+1)` takes the roots to
//!   `(1/k₁, 1, −1, −1/k₁)`, where `k₁ = √(1−16x²)`;
//! * `Λ(k₁)` permutes those cyclically onto `(1, −1, −1/k, 1/k)` with
//!   `k = 𝒥(k₁)`;
//! * `N(z) = −z` fixes the orientation.
//!
//! After `r = Φ⁻¹(s)` the integrand `(𝒬₁/𝒬₂)(r) dr / √(−𝒬₁(r))` becomes a
//! constant plus simple poles over `√((1−s²)(1−k²s²))`, and each pole gives a
//! symmetric pair of third-kind integrals.

use std::f64::consts::PI;

use serde::Serialize;

use super::quartic::roots;
use super::{elliptic_k, elliptic_pi};
use crate::{ComplexValue, Error, Result};

/// `z ↦ (a z + b) / (c z + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moebius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Moebius {
    /// Applies the map; the pole maps to infinity.
    pub fn apply(&self, z: f64) -> f64 {
        let den = self.c * z + self.d;
        if den == 0.0 {
            f64::INFINITY
        } else {
            (self.a * z + self.b) / den
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Moebius {
        Moebius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &Moebius) -> Moebius {
        Moebius {
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
        }
    }

    /// Rescales to determinant one (the determinant must be positive).
    pub fn normalized(&self) -> Moebius {
        let s = self.det().sqrt();
        Moebius { a: self.a / s, b: self.b / s, c: self.c / s, d: self.d / s }
    }
}

/// `𝓛(z) = (z − 1)/(z + 1)`.
pub fn moebius_l(z: f64) -> f64 {
    Moebius { a: 1.0, b: -1.0, c: 1.0, d: 1.0 }.apply(z)
}

fn lambda_map(k: f64) -> Moebius {
    let m = 1.0 / k.sqrt();
    Moebius { a: m + 1.0, b: -(m + 1.0) * m, c: m - 1.0, d: (m - 1.0) * m }
}

/// `Λ(k; z)`, sending `1/k, 1, −1, −1/k` to `1, −1, −1/𝒥(k), 1/𝒥(k)`.
pub fn moebius_lambda(k: f64, z: f64) -> f64 {
    lambda_map(k).apply(z)
}

/// `𝒥(k) = ((1 − √k)/(1 + √k))²`, an involution of `(0, 1)`.
pub fn involution_j(k: f64) -> f64 {
    let r = k.sqrt();
    ((1.0 - r) / (1.0 + r)).powi(2)
}

/// One pole of the transported partial fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleTerm {
    /// root of `𝒬₂` before the map
    pub pole: f64,
    /// coefficient of `1/(z − pole)` in `𝒬₁/𝒬₂ − 1`
    pub raw_coefficient: f64,
    /// `Φ(pole)`, outside `[−1, 1]`
    pub pole_image: f64,
    /// coefficient of `1/(s − pole_image)` after the map
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EllipticReduction {
    pub x: f64,
    pub w: f64,
    /// `Φ`, normalised to determinant one
    pub moebius: Moebius,
    /// modulus after the `𝓛` stage, `√(1 − 16x²)`
    pub intermediate_k: f64,
    pub modulus_k: f64,
    /// `−𝒬₁(Φ⁻¹(s)) = Ξ (1−s²)(1−k²s²) / (a − c s)⁴`
    pub xi_constant: f64,
    /// constant term of `𝒬₁/𝒬₂` after the map
    pub pf_constant: f64,
    pub pf_terms: Vec<PoleTerm>,
}

impl EllipticReduction {
    /// `1 + Σ raw_coefficient / (z − pole)`, which equals `𝒬₁(z)/𝒬₂(z)`.
    pub fn partial_fraction(&self, z: ComplexValue) -> ComplexValue {
        self.pf_terms
            .iter()
            .fold(ComplexValue::new(1.0, 0.0), |acc, t| acc + t.raw_coefficient / (z - t.pole))
    }
}

/// Builds `Φ`, `k`, `Ξ` and the transported partial fractions.
pub fn legendre_reduce(x: f64, w: f64) -> Result<EllipticReduction> {
    let (q1, q2) = roots(x, w)?;
    let p = (1.0 - 4.0 * x).sqrt();
    let k1 = (1.0 - 16.0 * x * x).sqrt();
    let k = involution_j(k1);
    let m1 = Moebius { a: -1.0, b: 1.0, c: p, d: p };
    let flip = Moebius { a: -1.0, b: 0.0, c: 0.0, d: 1.0 };
    let raw = flip.compose(&lambda_map(k1)).compose(&m1);
    if !(raw.det() > 0.0) {
        return Err(Error::Conditioning(format!("Möbius determinant {} is not positive", raw.det())));
    }
    let phi = raw.normalized();

    let targets = [-1.0, 1.0, 1.0 / k, -1.0 / k];
    for (&r, t) in q1.roots.iter().zip(targets) {
        let got = phi.apply(r);
        if (got - t).abs() > 1e-8 * t.abs().max(1.0) {
            return Err(Error::Conditioning(format!("Φ({r}) = {got}, expected {t}")));
        }
    }

    let (c, d) = (phi.c, phi.d);
    let xi = -(x * x / (k * k)) * q1.roots.iter().map(|&r| c * r + d).product::<f64>();
    if !(xi > 0.0) {
        return Err(Error::Conditioning(format!("Ξ = {xi} is not positive")));
    }

    let a = q2.roots;
    let mut pf_constant = 1.0;
    let mut pf_terms = Vec::with_capacity(4);
    for (i, &rho) in a.iter().enumerate() {
        let others: f64 = a.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &s)| rho - s).product();
        let raw_coefficient = w * w * rho * rho / (x * x * others);
        let den = c * rho + d;
        let pole_image = phi.apply(rho);
        if !(pole_image.abs() > 1.0) {
            return Err(Error::Conditioning(format!("pole image {pole_image} inside [-1, 1]")));
        }
        pf_constant -= raw_coefficient * c / den;
        pf_terms.push(PoleTerm { pole: rho, raw_coefficient, pole_image, coefficient: raw_coefficient / (den * den) });
    }

    Ok(EllipticReduction {
        x,
        w,
        moebius: phi,
        intermediate_k: k1,
        modulus_k: k,
        xi_constant: xi,
        pf_constant,
        pf_terms,
    })
}

/// `𝒜₂` as `κ K(k) + Σ μᵢ (Π(k; λᵢ) + Π(k; −λᵢ))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiCombination {
    pub value: f64,
    /// `κ`
    pub k_coefficient: f64,
    /// `(μᵢ, λᵢ)`; each stands for the symmetric pair `Π(k; λᵢ) + Π(k; −λᵢ)`
    pub terms: Vec<(f64, f64)>,
    pub modulus_k: f64,
}

/// Evaluates `𝒜₂` through [`legendre_reduce`]:
/// `∫₋₁¹ ds / ((s − σ)√((1−s²)(1−k²s²))) = −(1/σ)(Π(k; 1/σ) + Π(k; −1/σ))`
/// and the constant term contributes `2K(k)`.
pub fn a2_pi_combination(x: f64, w: f64) -> Result<PiCombination> {
    let red = legendre_reduce(x, w)?;
    let k = red.modulus_k;
    let pre = 1.0 / (PI * red.xi_constant.sqrt());
    let k_coefficient = 2.0 * red.pf_constant * pre;
    let mut value = k_coefficient * elliptic_k(k)?;
    let mut terms = Vec::with_capacity(red.pf_terms.len());
    for t in &red.pf_terms {
        if t.coefficient == 0.0 {
            continue;
        }
        let lambda = 1.0 / t.pole_image;
        let mu = -pre * t.coefficient * lambda;
        value += mu * (elliptic_pi(k, lambda)? + elliptic_pi(k, -lambda)?);
        terms.push((mu, lambda));
    }
    Ok(PiCombination { value, k_coefficient, terms, modulus_k: k })
}
