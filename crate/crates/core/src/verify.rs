//! Invariant suites, one per module, aggregated by the command-line gate.
//!
//! Every check compares two independent routes or an implementation against
//! a brute-force oracle. A check marked [`Status::Info`] records a known,
//! documented discrepancy and does not fail the gate.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    at_least_one, bonferroni_bracket_of, bound_covers, chebyshev_table, log_first_moment, ratio_table,
    stirling_log_first_moment, STIRLING_GRID_N,
};
use crate::elliptic::{
    a1_closed, a1_alt_closed, a1_alt_product, a1_alt_simplified, a1_residue, a2_moebius_quadrature,
    a2_pi_combination, a2_quadrature, alpha_closed, elliptic_k, elliptic_k_quadrature, g_tilde_limit, legendre_reduce,
    q1_eval, q1_roots, q2_eval, q2_roots,
};
use crate::exact::{
    a_array, a_array_direct, binomial, check_square_identity, elementary_from_power_sums, second_moment,
    MomentTriangle,
};
use crate::genfun::{alpha_contour, alpha_series, diagonal_extract_2d, kappa1, kappa2, ContourSpec};
use crate::perm::{mixed_moment, moment, prob_at_least_of, z_distribution};
use crate::walk::{a_from_walk_exact, a_monte_carlo, polya_series};
use crate::{ComplexValue, Error, ExactRational, Result};

/// Outcome of one check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Known discrepancy, reported but not gating.
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

/// Which suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Exact,
    Perm,
    Walk,
    Genfun,
    Elliptic,
    Bounds,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => Suite::Exact,
            "perm" => Suite::Perm,
            "walk" => Suite::Walk,
            "genfun" => Suite::Genfun,
            "elliptic" => Suite::Elliptic,
            "bounds" => Suite::Bounds,
            "all" => Suite::All,
            _ => return Err(Error::Domain(format!("unknown suite {s:?}"))),
        })
    }
}

/// The `(x, w)` grid shared by the cross-route α checks: every pair from
/// `{0.02, 0.05, 0.1, 0.15, 0.2} × {0, 0.1, 0.3, 0.5}` with `4x + w² < 1`.
pub fn alpha_grid() -> Vec<(f64, f64)> {
    let mut g = Vec::new();
    for x in [0.02, 0.05, 0.1, 0.15, 0.2] {
        for w in [0.0, 0.1, 0.3, 0.5] {
            if 4.0 * x + w * w < 1.0 {
                g.push((x, w));
            }
        }
    }
    g
}

/// The quartic-root grid: `x ∈ {0.02, 0.05, 0.1, 0.15, 0.2}`,
/// `w ∈ {0.05, 0.1, …, 0.6}`, restricted to `4x + w² < 1`.
pub fn quartic_grid() -> Vec<(f64, f64)> {
    let mut g = Vec::new();
    for x in [0.02, 0.05, 0.1, 0.15, 0.2] {
        for i in 1..=12 {
            let w = 0.05 * i as f64;
            if 4.0 * x + w * w < 1.0 {
                g.push((x, w));
            }
        }
    }
    g
}

/// Grid points used by the Π-combination check.
pub const PI_GRID: [(f64, f64); 6] = [(0.1, 0.2), (0.05, 0.4), (0.02, 0.6), (0.15, 0.3), (0.2, 0.1), (0.1, 0.5)];

/// Series table size for the triple-route check; its tail estimate at the
/// worst grid point `(0.2, 0.3)` is about `1e−12`.
pub const ALPHA_TABLE: (usize, usize) = (100, 300);

struct Suites {
    out: Vec<Check>,
    suite: &'static str,
}

impl Suites {
    fn push(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.out.push(Check { suite: self.suite, name, status, detail: detail.into() });
    }

    fn info(&mut self, name: &'static str, detail: impl Into<String>) {
        self.out.push(Check { suite: self.suite, name, status: Status::Info, detail: detail.into() });
    }

    fn error(&mut self, name: &'static str, e: Error) {
        self.push(name, false, format!("error: {e}"));
    }

    fn result(&mut self, name: &'static str, r: Result<(bool, String)>) {
        match r {
            Ok((ok, d)) => self.push(name, ok, d),
            Err(e) => self.error(name, e),
        }
    }
}

fn q(a: i64, b: i64) -> ExactRational {
    ExactRational::new(BigInt::from(a), BigInt::from(b))
}

/// Runs one suite (or all of them) and returns every check in order.
pub fn run_suite(suite: Suite) -> Vec<Check> {
    let mut s = Suites { out: Vec::new(), suite: "" };
    let all = suite == Suite::All;
    if all || suite == Suite::Exact {
        s.suite = "exact";
        exact_suite(&mut s);
    }
    if all || suite == Suite::Perm {
        s.suite = "perm";
        perm_suite(&mut s);
    }
    if all || suite == Suite::Walk {
        s.suite = "walk";
        walk_suite(&mut s);
    }
    if all || suite == Suite::Genfun {
        s.suite = "genfun";
        genfun_suite(&mut s);
    }
    if all || suite == Suite::Elliptic {
        s.suite = "elliptic";
        elliptic_suite(&mut s);
    }
    if all || suite == Suite::Bounds {
        s.suite = "bounds";
        bounds_suite(&mut s);
    }
    s.out
}

/// `true` when no check failed.
pub fn gate(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.status != Status::Fail)
}

fn exact_suite(s: &mut Suites) {
    let spots = [(1, 0, 4), (1, 1, 10), (1, 2, 18), (2, 0, 36)];
    let ok = spots.iter().all(|&(n, j, v)| a_array(n, j) == BigInt::from(v))
        && (0..=10).all(|j| a_array(0, j) == BigInt::from(1));
    s.push("a_spot_values", ok, "A(1,0..2) = 4,10,18; A(2,0) = 36; A(0,j) = 1");

    let mut bad = Vec::new();
    for n in 0..=6 {
        for j in 0..=4 {
            if a_array(n, j) != a_array_direct(n, j) {
                bad.push((n, j));
            }
        }
    }
    s.push("a_vs_composition_enumeration", bad.is_empty(), format!("N <= 6, j <= 4; mismatches {bad:?}"));

    let t = MomentTriangle::build_with_layers(12, 8);
    let ok = (0..=12).all(|n| (0..=8).all(|j| *t.get(n, j) == a_array(n, j)));
    s.push("a_recurrence_vs_convolution", ok, "N <= 12, j <= 8");

    let ok = (0..=10).all(|l| (0..=10).all(|m| check_square_identity(l, m)));
    s.push("square_identity", ok, "l, m <= 10");

    let ok = (0..=6).all(|r| {
        [q(7, 1), q(5, 2), q(-3, 4)].iter().all(|z| {
            let z_int = z.numer().clone();
            let expect = if z.is_integer() && z_int >= BigInt::from(0) {
                ExactRational::from_integer(binomial(z_int.to_u64().unwrap(), r as i64))
            } else {
                crate::exact::falling_factorial(z, r as u64) / ExactRational::from_integer(crate::exact::factorial(r as u64))
            };
            elementary_from_power_sums(r, z) == expect
        })
    });
    s.push("newton_identity", ok, "e_r from power sums equals C(z, r), r <= 6");

    let ok = second_moment(3, 2).map(|v| v == q(19, 6)).unwrap_or(false)
        && second_moment(4, 2).map(|v| v == q(67, 6)).unwrap_or(false);
    s.push("second_moment_spots", ok, "E[Z²](3,2) = 19/6, E[Z²](4,2) = 67/6");
}

fn perm_suite(s: &mut Suites) {
    let mut bad = Vec::new();
    for n in 1..=7usize {
        for k in 1..=n {
            let brute = z_distribution(n, k).map(|d| moment(&d, 2));
            let formula = second_moment(n as u64, k as u64);
            match (brute, formula) {
                (Ok(a), Ok(b)) if a == b => {}
                _ => bad.push((n, k)),
            }
        }
    }
    s.push("second_moment_vs_enumeration", bad.is_empty(), format!("n <= 7, 28 cases; mismatches {bad:?}"));

    let r = (|| {
        let mut ok = true;
        for n in 1..=6usize {
            for k in 1..=n {
                ok &= mixed_moment(n, k, k)? == second_moment(n as u64, k as u64)?;
            }
        }
        Ok((ok, "E[Z_k Z_k] = E[Z_k²], n <= 6".to_string()))
    })();
    s.result("mixed_moment_diagonal", r);
}

fn walk_suite(s: &mut Suites) {
    let mut cells: Vec<(usize, usize)> = (0..=4).flat_map(|n| (0..=4).map(move |j| (n, j))).collect();
    cells.extend([(5, 0), (5, 1), (5, 2), (6, 0), (6, 1), (6, 2)]);
    let r = (|| {
        let mut bad = Vec::new();
        for &(n, j) in &cells {
            if a_from_walk_exact(n, j)? != a_array(n, j) {
                bad.push((n, j));
            }
        }
        Ok((bad.is_empty(), format!("{} cells; mismatches {bad:?}", cells.len())))
    })();
    s.result("walk_characterization", r);

    let r = (|| {
        let mut worst: f64 = 0.0;
        for z in [0.2, 0.4, 0.6] {
            let v = polya_series(z, 400)?;
            worst = worst.max((v - 2.0 / PI * elliptic_k(z)?).abs());
        }
        Ok((worst < 1e-12, format!("max |series − (2/π)K| = {worst:.3e}")))
    })();
    s.result("polya_series", r);

    let r = (|| {
        let exact = a_array(3, 1).to_f64().unwrap();
        let (m1, e1) = a_monte_carlo(3, 1, 100_000, 7)?;
        let (m2, _) = a_monte_carlo(3, 1, 100_000, 7)?;
        let z = (m1 - exact) / e1;
        Ok((m1 == m2 && z.abs() < 4.0, format!("N=3 j=1: mean {m1:.6}, exact {exact}, z = {z:.3}")))
    })();
    s.result("monte_carlo_smoke", r);
}

fn genfun_suite(s: &mut Suites) {
    let (x, y) = (0.1, 0.2);
    let r = (|| {
        let f = |xi: ComplexValue, zeta: ComplexValue| {
            kappa1(x * xi, y * zeta).unwrap() * kappa1(x / xi, y / zeta).unwrap()
        };
        let v = diagonal_extract_2d(f, &ContourSpec::default())?;
        let k = kappa2((x * x).into(), (y * y).into())?;
        let d = (v - k).norm();
        Ok((d < 1e-10, format!("|diag − κ₂| = {d:.3e}")))
    })();
    s.result("double_contour_diagonal", r);

    let (nm, jm) = ALPHA_TABLE;
    let table = MomentTriangle::build(nm, jm);
    let r = (|| {
        let (mut sc, mut ca): (f64, f64) = (0.0, 0.0);
        for (x, w) in alpha_grid() {
            let (sv, _) = alpha_series(w, x, &table)?;
            let cv = alpha_contour(w, x, &ContourSpec::default())?;
            let av = alpha_closed(w, x)?;
            sc = sc.max((sv - cv).abs());
            ca = ca.max((cv - av).abs());
        }
        let n = alpha_grid().len();
        Ok((sc < 1e-9 && ca < 1e-9, format!("{n} points: max |series − contour| = {sc:.3e}, |contour − closed| = {ca:.3e}")))
    })();
    s.result("alpha_three_routes", r);
}

fn elliptic_suite(s: &mut Suites) {
    let r = (|| {
        let mut worst: f64 = 0.0;
        for x in [0.05, 0.1, 0.15] {
            worst = worst.max((a2_quadrature(x, 0.0)? - 2.0 / PI * elliptic_k(4.0 * x)?).abs());
        }
        Ok((worst < 1e-10, format!("max |𝒜₂(x,0) − (2/π)K(4x)| = {worst:.3e}")))
    })();
    s.result("polya_collapse", r);

    let r = (|| {
        let mut worst: f64 = 0.0;
        for k in [0.1, 0.4, 0.6, 0.8] {
            worst = worst.max((elliptic_k(k)? - k_series(k)).abs());
            worst = worst.max((elliptic_k(k)? - elliptic_k_quadrature(k)?).abs());
        }
        Ok((worst < 1e-12, format!("AGM vs series and quadrature: {worst:.3e}")))
    })();
    s.result("elliptic_k", r);

    let r = quartic_checks();
    s.result("quartic_roots", r);

    let r = (|| {
        let mut worst: f64 = 0.0;
        for (x, w) in quartic_grid() {
            let (a, b) = (a1_residue(x, w)?, a1_closed(x, w)?);
            worst = worst.max(((a - b) / b).abs());
        }
        Ok((worst < 1e-11, format!("max relative |residue − closed| = {worst:.3e}")))
    })();
    s.result("a1_residue_vs_closed", r);

    match a1_alt_gap() {
        Ok((within, between)) => s.info(
            "a1_alternative_forms",
            format!("alternative forms agree to {within:.3e} among themselves, differ from the residue by {between:.3e}"),
        ),
        Err(e) => s.error("a1_alternative_forms", e),
    }

    let r = (|| {
        let mut worst: f64 = 0.0;
        let mut max_terms = 0;
        let mut lam_ok = true;
        for (x, w) in PI_GRID {
            let p = a2_pi_combination(x, w)?;
            worst = worst.max((p.value - a2_quadrature(x, w)?).abs());
            max_terms = max_terms.max(p.terms.len());
            lam_ok &= p.terms.iter().all(|t| t.1.abs() < 1.0);
        }
        let res = partial_fraction_residual(1000, 11)?;
        Ok((
            worst < 1e-8 && max_terms <= 4 && lam_ok && res < 1e-10,
            format!("max |Π-combination − quadrature| = {worst:.3e}, terms <= {max_terms}, pf residual {res:.3e}"),
        ))
    })();
    s.result("legendre_reduction", r);

    let r = (|| {
        let mut worst: f64 = 0.0;
        for (x, w) in alpha_grid() {
            worst = worst.max((a2_moebius_quadrature(x, w)? - a2_quadrature(x, w)?).abs());
        }
        Ok((worst < 1e-10, format!("max |𝓛-route − direct| = {worst:.3e}")))
    })();
    s.result("a2_transformed_quadrature", r);

    let r = branch_jump(1e-6);
    s.result("branch_jump", r);
}

fn bounds_suite(s: &mut Suites) {
    let r = (|| {
        let mut cases = 0;
        let mut bad = Vec::new();
        for n in 1..=7usize {
            for k in 1..=n {
                let dist = z_distribution(n, k)?;
                let full = binomial(n as u64, k as i64).to_u64().unwrap();
                for r in 1..=3u64 {
                    let top = full.max(r) + 1;
                    for lo in (r + 1..=top).step_by(2) {
                        for hi in (r..=top).step_by(2) {
                            cases += 1;
                            if !bonferroni_bracket_of(&dist, r, lo, hi)?.holds() {
                                bad.push((n, k, r, lo, hi));
                            }
                        }
                    }
                }
            }
        }
        let mut closure = true;
        for n in 1..=6usize {
            for k in 1..=n {
                let dist = z_distribution(n, k)?;
                let full = binomial(n as u64, k as i64).to_u64().unwrap();
                for r in 1..=3u64 {
                    let top = full.max(r);
                    let (lo, hi) = if (top - r) % 2 == 1 { (top, top + 1) } else { (top + 1, top) };
                    let b = bonferroni_bracket_of(&dist, r, lo, hi)?;
                    closure &= b.lower == b.upper && b.lower == prob_at_least_of(&dist, r);
                }
            }
        }
        Ok((
            bad.is_empty() && closure,
            format!("{cases} brackets, violations {bad:?}; full-range closure {closure}"),
        ))
    })();
    s.result("bonferroni", r);

    let r = (|| {
        let rows = chebyshev_table(10, 6)?;
        let bad: Vec<_> = rows
            .iter()
            .filter(|b| !bound_covers(b.bound, &a_array(b.n, b.j)))
            .map(|b| (b.n, b.j))
            .collect();
        Ok((bad.is_empty(), format!("N <= 10, j <= 6; violations {bad:?}")))
    })();
    s.result("chebyshev_bound", r);

    let r = (|| {
        let pairs: Vec<(u64, u64)> = (1..=30).flat_map(|n| (1..=n.min(12)).map(move |k| (n, k))).collect();
        let rows = ratio_table(&pairs)?;
        let ok = rows.iter().all(|r| at_least_one(&r.exact));
        Ok((ok && rows[0].exact == q(1, 1), format!("{} rows with E[Z²]/E[Z]² >= 1", rows.len())))
    })();
    s.result("ratio_at_least_one", r);

    let r = (|| {
        let mut worst: f64 = 0.0;
        for n in STIRLING_GRID_N {
            for k in 2..=(n as f64).powf(0.45) as u64 {
                let (a, _) = stirling_log_first_moment(n, k)?;
                let e = log_first_moment(n, k)?;
                worst = worst.max(((a - e) / e).abs());
            }
        }
        Ok((worst <= 0.02, format!("max relative error {worst:.4}")))
    })();
    s.result("stirling_first_moment", r);
}

/// `K(k) = (π/2) Σ (C(2n,n)/4ⁿ)² k^{2n}`.
pub fn k_series(k: f64) -> f64 {
    let mut terms = Vec::new();
    let mut t = 1.0;
    let mut n = 0;
    while t > 1e-19 {
        terms.push(t);
        let r = (2 * n + 1) as f64 / (2 * n + 2) as f64;
        t *= r * r * k * k;
        n += 1;
    }
    PI / 2.0 * crate::numeric::pairwise_sum(&terms)
}

/// Residuals, inversive products, ordering chain and `w → 0` degeneration.
pub fn quartic_checks() -> Result<(bool, String)> {
    let (mut res, mut inv, mut deg): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut order_ok = true;
    for (x, w) in quartic_grid() {
        let c = q1_roots(x)?;
        let a = q2_roots(x, w)?;
        res = res.max(c.max_residual()).max(a.max_residual());
        let [c1, c2, d1, d2] = c.roots;
        let [a1, a2, b1, b2] = a.roots;
        inv = inv.max((c1 * d2 - 1.0).abs()).max((c2 * d1 - 1.0).abs());
        inv = inv.max((a1 * b2 - 1.0).abs()).max((a2 * b1 - 1.0).abs());
        let chain = [0.0, a1, c1, c2, a2, 1.0, b1, d1, d2, b2];
        order_ok &= chain.windows(2).all(|p| p[0] < p[1]);
    }
    for x in [0.02, 0.05, 0.1, 0.15, 0.2] {
        let c = q1_roots(x)?.roots;
        let a = q2_roots(x, 0.0)?.roots;
        for (u, v) in c.iter().zip(a) {
            deg = deg.max(((u - v) / u).abs());
        }
    }
    let ok = res < 1e-11 && inv < 1e-12 && order_ok && deg < 1e-12;
    Ok((
        ok,
        format!("residual {res:.3e}, inversive {inv:.3e}, ordering {order_ok}, w→0 degeneration {deg:.3e}"),
    ))
}

/// Largest spread among the three alternative `𝒜₁` forms, and their largest
/// relative distance from the residue, over the quartic grid.
pub fn a1_alt_gap() -> Result<(f64, f64)> {
    let (mut within, mut between): (f64, f64) = (0.0, 0.0);
    for (x, w) in quartic_grid() {
        let r = a1_residue(x, w)?;
        let p = [a1_alt_simplified(x, w)?, a1_alt_product(x, w)?, a1_alt_closed(x, w)?];
        for i in 0..3 {
            for j in i + 1..3 {
                within = within.max(((p[i] - p[j]) / p[j]).abs());
            }
            between = between.max(((p[i] - r) / r).abs());
        }
    }
    Ok((within, between))
}

/// `max |pf(z) − 𝒬₁(z)/𝒬₂(z)| / |𝒬₁/𝒬₂|` over `count` random points per
/// reduction on [`PI_GRID`], with `z` uniform in the square `[−3, 3]²`.
pub fn partial_fraction_residual(count: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for (x, w) in PI_GRID {
        let red = legendre_reduce(x, w)?;
        for _ in 0..count {
            let z = ComplexValue::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let exact = q1_eval(x, z) / q2_eval(x, w, z);
            worst = worst.max((red.partial_fraction(z) - exact).norm() / exact.norm().max(1.0));
        }
    }
    Ok(worst)
}

/// Boundary values of `g̃` on `(c₁, c₂)` against `±i√(−𝒬₁)`.
pub fn branch_jump(eps: f64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for x in [0.02, 0.05, 0.1, 0.15, 0.2] {
        let [c1, c2, _, _] = q1_roots(x)?.roots;
        for i in 1..20 {
            let r = c1 + (c2 - c1) * i as f64 / 20.0;
            let target = ComplexValue::new(0.0, (-q1_eval(x, r.into()).re).sqrt());
            let up = g_tilde_limit(x, r, true, eps)?;
            let down = g_tilde_limit(x, r, false, eps)?;
            worst = worst.max((up - target).norm()).max((down + target).norm());
        }
    }
    Ok((worst < 1e-9, format!("ε = {eps:e}: max deviation {worst:.3e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_have_expected_sizes() {
        assert_eq!(alpha_grid().len(), 19);
        assert!(quartic_grid().iter().all(|&(x, w)| 4.0 * x + w * w < 1.0));
    }

    #[test]
    fn k_series_matches_known_value() {
        assert!((k_series(0.0) - PI / 2.0).abs() < 1e-15);
        assert!((k_series(0.5) - 1.685_750_354_812_596).abs() < 1e-14);
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn exact_and_perm_suites_pass() {
        let checks = run_suite(Suite::Exact);
        assert!(gate(&checks), "{checks:#?}");
        let checks = run_suite(Suite::Perm);
        assert!(gate(&checks), "{checks:#?}");
    }

    #[test]
    fn elliptic_suite_passes_with_one_info() {
        let checks = run_suite(Suite::Elliptic);
        assert!(gate(&checks), "{checks:#?}");
        assert_eq!(checks.iter().filter(|c| c.status == Status::Info).count(), 1);
    }
}
