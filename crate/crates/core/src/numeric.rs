//! Small numerical helpers: order-stable summation, cached Gauss–Legendre
//! rules with node doubling, and logarithms of big integers.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Pairwise (tree) summation. The result depends only on the slice order,
/// never on how the values were produced.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if v.len() <= LEAF {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Smallest Gauss–Legendre rule used by [`integrate`]: `8 · 2^0` nodes.
const BASE_NODES: usize = 8;
/// Largest doubling level: `8 · 2^13 = 65536` nodes.
pub const MAX_LEVEL: usize = 13;

static RULES: [OnceLock<Vec<(f64, f64)>>; MAX_LEVEL + 1] = [const { OnceLock::new() }; MAX_LEVEL + 1];

fn rule(level: usize) -> &'static [(f64, f64)] {
    RULES[level].get_or_init(|| {
        let n = BASE_NODES << level;
        let gl = GaussLegendre::new(n).expect("rule degree is at least 2");
        let mut pairs = gl.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    })
}

/// Gauss–Legendre rule with `8 · 2^level` nodes on `[a, b]`.
pub fn gauss_legendre(level: usize, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let terms: Vec<f64> = rule(level).iter().map(|&(t, w)| w * f(mid + half * t)).collect();
    half * pairwise_sum(&terms)
}

/// Integrates a smooth `f` on `[a, b]`, doubling the Gauss–Legendre node
/// count until two successive rules agree to `tol` relative.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let mut prev = gauss_legendre(0, a, b, &f);
    for level in 1..=MAX_LEVEL {
        let cur = gauss_legendre(level, a, b, &f);
        if !cur.is_finite() {
            return Err(Error::NonConvergence(format!("non-finite quadrature value on [{a}, {b}]")));
        }
        if (cur - prev).abs() <= tol * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence(format!(
        "Gauss-Legendre did not reach {tol:e} with {} nodes",
        BASE_NODES << MAX_LEVEL
    )))
}

/// Natural logarithm of a positive big integer, valid far beyond `f64` range.
pub fn big_ln(n: &BigInt) -> f64 {
    debug_assert!(n.is_positive());
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `exp(ln a + rest)` for a nonnegative big integer `a`, or zero.
pub fn big_scaled(a: &BigInt, ln_rest: f64) -> f64 {
    if a.is_zero() {
        0.0
    } else {
        (big_ln(a) + ln_rest).exp()
    }
}
