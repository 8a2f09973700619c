//! Generating functions `ϰ⁽¹⁾`, `ϰ⁽²⁾`, `κ` and `α`, by closed form, by
//! truncated series, and by trapezoidal quadrature on circles.
//!
//! `α(w, z) = Σ_N Σ_j A(N, j) wʲ zᴺ` with the `j`-sum unrestricted, so the
//! `N = 0` shell alone is `1/(1 − w)`.

use std::f64::consts::PI;

use num_traits::Zero;

use crate::elliptic::q1_eval;
use crate::error::domain;
use crate::exact::MomentTriangle;
use crate::numeric::{big_ln, pairwise_sum};
use crate::{ComplexValue, Error, Result};

/// `exp(½ log z)` with the principal logarithm. On the negative real axis the
/// value is the limit from the upper half-plane, `+i√|z|`, whatever the sign
/// of the zero imaginary part.
pub fn principal_sqrt(z: ComplexValue) -> ComplexValue {
    if z.im == 0.0 && z.re < 0.0 {
        ComplexValue::new(0.0, (-z.re).sqrt())
    } else {
        z.sqrt()
    }
}

/// `ϰ⁽¹⁾(x, y) = 1/(1 − x − y) = Σ C(ℓ+m, ℓ) xˡ yᵐ`.
pub fn kappa1(x: ComplexValue, y: ComplexValue) -> Result<ComplexValue> {
    if !(x.norm() + y.norm() < 1.0) {
        return Err(domain("kappa1 needs |x| + |y| < 1"));
    }
    Ok(1.0 / (1.0 - x - y))
}

/// `ϰ⁽²⁾(x, y) = 1/√((1 − x − y)² − 4xy) = Σ C(ℓ+m, ℓ)² xˡ yᵐ`.
pub fn kappa2(x: ComplexValue, y: ComplexValue) -> Result<ComplexValue> {
    if !(x.norm() < 0.25 && y.norm() < 0.25) {
        return Err(domain("kappa2 needs |x|, |y| < 1/4"));
    }
    let s = 1.0 - x - y;
    Ok(1.0 / principal_sqrt(s * s - 4.0 * x * y))
}

/// `κ(w, x, y) = 1/(√((1 − x − y)² − 4xy) − w) = ϰ⁽²⁾ / (1 − w ϰ⁽²⁾)`.
pub fn kappa(w: ComplexValue, x: ComplexValue, y: ComplexValue) -> Result<ComplexValue> {
    let k2 = kappa2(x, y)?;
    if !(w.norm() < 1.0 / k2.norm()) {
        return Err(domain("kappa needs |w| < 1/|kappa2(x, y)|"));
    }
    let den = 1.0 / k2 - w;
    if den.norm() < 1e-12 {
        return Err(domain("kappa is at a pole"));
    }
    Ok(1.0 / den)
}

/// `Σ_{ℓ,m < terms} C(ℓ+m, ℓ)^power xˡ yᵐ`, the series side of `ϰ⁽¹⁾`/`ϰ⁽²⁾`.
pub fn kappa_series(x: ComplexValue, y: ComplexValue, power: i32, terms: usize) -> ComplexValue {
    let mut total = ComplexValue::zero();
    let mut xl = ComplexValue::new(1.0, 0.0);
    for l in 0..terms {
        let mut c = 1.0f64; // C(l+m, l) at m = 0
        let mut ym = ComplexValue::new(1.0, 0.0);
        for m in 0..terms {
            total += c.powi(power) * xl * ym;
            c *= (l + m + 1) as f64 / (m + 1) as f64;
            ym *= y;
        }
        xl *= x;
    }
    total
}

/// A circle `center + radius·e^{iθ}` sampled at `nodes` equispaced points to
/// start with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub nodes: usize,
    pub center: ComplexValue,
    pub radius: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec { nodes: 8, center: ComplexValue::zero(), radius: 1.0 }
    }
}

impl ContourSpec {
    fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) || self.nodes < 8 || !self.nodes.is_power_of_two() {
            return Err(domain("contour needs radius > 0 and a power-of-two node count >= 8"));
        }
        Ok(())
    }
}

/// Node cap for contour quadrature.
pub const MAX_NODES: usize = 1 << 18;
const CONTOUR_TOL: f64 = 1e-12;

fn sum_complex(v: &[ComplexValue]) -> ComplexValue {
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.iter().map(|z| z.im).collect();
    ComplexValue::new(pairwise_sum(&re), pairwise_sum(&im))
}

fn trapezoid(f: &impl Fn(ComplexValue) -> ComplexValue, spec: &ContourSpec, n: usize) -> ComplexValue {
    let vals: Vec<ComplexValue> = (0..n)
        .map(|i| {
            let e = ComplexValue::from_polar(1.0, 2.0 * PI * i as f64 / n as f64);
            let xi = spec.center + spec.radius * e;
            f(xi) * (spec.radius * e / xi)
        })
        .collect();
    sum_complex(&vals) / n as f64
}

/// `(1/2πi) ∮ f(ξ) dξ/ξ` by the trapezoidal rule, doubling the nodes until two
/// successive values differ by less than `1e−12` (relative to `max(1, |I|)`).
pub fn diagonal_extract(f: impl Fn(ComplexValue) -> ComplexValue, spec: &ContourSpec) -> Result<ComplexValue> {
    spec.validate()?;
    let mut n = spec.nodes;
    let mut prev = trapezoid(&f, spec, n);
    while n < MAX_NODES {
        n *= 2;
        let cur = trapezoid(&f, spec, n);
        if !(cur.re.is_finite() && cur.im.is_finite()) {
            return Err(Error::NonConvergence("non-finite contour value".into()));
        }
        if (cur - prev).norm() < CONTOUR_TOL * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!("contour quadrature did not settle with {MAX_NODES} nodes")))
}

/// `(1/2πi)² ∮∮ f(ξ, ζ) dξ/ξ dζ/ζ` over two copies of `spec`, doubling both
/// node counts together (cap `2¹⁰` per circle).
pub fn diagonal_extract_2d(
    f: impl Fn(ComplexValue, ComplexValue) -> ComplexValue,
    spec: &ContourSpec,
) -> Result<ComplexValue> {
    spec.validate()?;
    let grid = |n: usize| {
        let pts: Vec<(ComplexValue, ComplexValue)> = (0..n)
            .map(|i| {
                let e = ComplexValue::from_polar(1.0, 2.0 * PI * i as f64 / n as f64);
                let xi = spec.center + spec.radius * e;
                (xi, spec.radius * e / xi)
            })
            .collect();
        let vals: Vec<ComplexValue> = pts
            .iter()
            .flat_map(|&(z, wz)| pts.iter().map(move |&(x, wx)| (x, wx, z, wz)))
            .map(|(x, wx, z, wz)| f(x, z) * wx * wz)
            .collect();
        sum_complex(&vals) / (n * n) as f64
    };
    let mut n = spec.nodes;
    let mut prev = grid(n);
    while n < 1 << 10 {
        n *= 2;
        let cur = grid(n);
        if (cur - prev).norm() < CONTOUR_TOL * cur.norm().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence("double contour did not settle".into()))
}

/// Truncation of the `α` series and its estimated remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub n_max: usize,
    pub j_max: usize,
    pub tail_bound: f64,
}

fn check_alpha_domain(w: f64, x: f64) -> Result<()> {
    if !((0.0..0.25).contains(&x) && w >= 0.0 && 4.0 * x + w * w < 1.0) {
        return Err(domain(format!("need 0 <= x < 1/4, w >= 0, 4x + w^2 < 1; got w={w} x={x}")));
    }
    Ok(())
}

/// Partial sum of `α(w, x²)` over the table, with a tail estimate.
///
/// Within a shell `N`, `A(N, j+1)/A(N, j) ≤ (2N + 1 + j)/(j + 1)` (the
/// occupation count is at most `2N + 1`), which bounds the `j`-tail by a
/// geometric series. Across shells the tail is estimated from the last
/// shell ratio `ρ` as `S·ρ/(1 − ρ)`; the routine refuses when `ρ ≥ 1`.
pub fn alpha_series(w: f64, x: f64, table: &MomentTriangle) -> Result<(f64, SeriesTruncation)> {
    check_alpha_domain(w, x)?;
    let (n_max, j_max) = (table.n_max(), table.j_max());
    let (lw, lx) = (w.ln(), x.ln());
    let mut shells = Vec::with_capacity(n_max + 1);
    let mut tails = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 && x == 0.0 {
            shells.push(0.0);
            tails.push(0.0);
            continue;
        }
        let lxn = if n == 0 { 0.0 } else { 2.0 * n as f64 * lx };
        let terms: Vec<f64> = (0..=j_max)
            .map(|j| match (j, w == 0.0) {
                (0, _) => (big_ln(table.get(n, 0)) + lxn).exp(),
                (_, true) => 0.0,
                _ => (big_ln(table.get(n, j)) + j as f64 * lw + lxn).exp(),
            })
            .collect();
        let last = terms[j_max];
        let q = w * (2 * n + 1 + j_max) as f64 / (j_max + 1) as f64;
        let tail = if last == 0.0 {
            0.0
        } else if q < 1.0 {
            last * q / (1.0 - q)
        } else {
            return Err(Error::NonConvergence(format!("j-tail ratio {q} >= 1 at N={n}; raise j_max")));
        };
        shells.push(pairwise_sum(&terms));
        tails.push(tail);
    }
    let value: f64 = shells.iter().rev().sum();
    let mut tail_bound: f64 = tails.iter().rev().sum();
    if n_max >= 1 && shells[n_max] > 0.0 {
        let rho = (shells[n_max] + tails[n_max]) / (shells[n_max - 1] + tails[n_max - 1]);
        if rho >= 1.0 {
            return Err(Error::NonConvergence(format!("shell ratio {rho} >= 1; series not converging")));
        }
        tail_bound += (shells[n_max] + tails[n_max]) * rho / (1.0 - rho);
    }
    Ok((value, SeriesTruncation { n_max, j_max, tail_bound }))
}

/// `α(w, x²) = (1/2πi) ∮_{|ξ|=1} dξ / (ξ (√(𝒬₁(x; ξ)/ξ²) − w))`.
pub fn alpha_contour(w: f64, x: f64, spec: &ContourSpec) -> Result<f64> {
    if !(x > 0.0 && x < 0.25 && w >= 0.0 && w * w < 1.0 - 4.0 * x) {
        return Err(domain(format!("need 0 < x < 1/4 and 0 <= w < sqrt(1-4x); got w={w} x={x}")));
    }
    let v = diagonal_extract(|xi| 1.0 / (principal_sqrt(q1_eval(x, xi) / (xi * xi)) - w), spec)?;
    if v.im.abs() >= 1e-10 {
        return Err(Error::Conditioning(format!("contour value has imaginary part {}", v.im)));
    }
    Ok(v.re)
}
