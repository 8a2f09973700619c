//! Text formats shared by the CSV writers.

use num_traits::Signed;

use crate::ExactRational;

/// Formats a float with 17 significant digits, enough to round-trip any `f64`.
pub fn float17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// Formats a rational as `p/q`, keeping the `/1` for integers so every
/// rational column parses the same way.
pub fn rational(q: &ExactRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses the `p/q` (or bare `p`) form written by [`rational`].
pub fn parse_rational(s: &str) -> Option<ExactRational> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.parse().ok()?, q.parse().ok()?),
        None => (s.parse().ok()?, 1.into()),
    };
    let q: num_bigint::BigInt = q;
    if q.is_negative() || q == 0.into() {
        return None;
    }
    Some(ExactRational::new(p, q))
}
