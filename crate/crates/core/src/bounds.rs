//! Bounds: Bonferroni brackets on `P(Z ≥ r)`, the Stirling form of the first
//! moment, second-moment ratio tables, and the Chebyshev-style upper bound
//! `A(N, j) ≤ min α(w, x²) / (wʲ x^{2N})`.

use argmin::core::{CostFunction, Error as ArgminError, Executor};
use argmin::solver::neldermead::NelderMead;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic::{alpha_closed, X_MAX};
use crate::error::domain;
use crate::exact::{binomial, first_moment, second_moment_from, MomentTriangle};
use crate::numeric::big_ln;
use crate::perm::{factorial_moment_of, prob_at_least_of, z_distribution, ZDistribution};
use crate::{Error, ExactRational, Result};

/// Two-sided bracket on `P(Z_{n,k} ≥ r)` from truncated inclusion–exclusion.
#[derive(Debug, Clone, PartialEq)]
pub struct BonferroniBracket {
    pub n: usize,
    pub k: usize,
    pub r: u64,
    /// Truncation point of the lower bound (`r_lower − r` odd).
    pub r_lower: u64,
    /// Truncation point of the upper bound (`r_upper − r` even).
    pub r_upper: u64,
    pub lower: ExactRational,
    pub upper: ExactRational,
    pub exact: Option<ExactRational>,
}

impl BonferroniBracket {
    /// `lower ≤ exact ≤ upper`, vacuously true without an exact value.
    pub fn holds(&self) -> bool {
        self.exact.as_ref().is_none_or(|e| self.lower <= *e && *e <= self.upper)
    }
}

/// `Σ_{s=r}^{R} (−1)^{s−r} C(s−1, r−1) E[C(Z, s)]`.
pub fn bonferroni_partial(dist: &ZDistribution, r: u64, big_r: u64) -> ExactRational {
    (r..=big_r)
        .map(|s| {
            let t = ExactRational::from_integer(binomial(s - 1, (r - 1) as i64)) * factorial_moment_of(dist, s);
            if (s - r).is_multiple_of(2) {
                t
            } else {
                -t
            }
        })
        .sum()
}

/// Bracket from a precomputed distribution. Truncating after an even number
/// of sign changes over-counts, after an odd number under-counts.
pub fn bonferroni_bracket_of(dist: &ZDistribution, r: u64, r_lower: u64, r_upper: u64) -> Result<BonferroniBracket> {
    if r == 0 {
        return Err(domain("bonferroni needs r >= 1"));
    }
    if r_lower < r || (r_lower - r) % 2 != 1 {
        return Err(domain(format!("lower truncation R={r_lower} needs R >= r and R - r odd (r={r})")));
    }
    if r_upper < r || !(r_upper - r).is_multiple_of(2) {
        return Err(domain(format!("upper truncation R={r_upper} needs R >= r and R - r even (r={r})")));
    }
    Ok(BonferroniBracket {
        n: dist.n,
        k: dist.k,
        r,
        r_lower,
        r_upper,
        lower: bonferroni_partial(dist, r, r_lower),
        upper: bonferroni_partial(dist, r, r_upper),
        exact: Some(prob_at_least_of(dist, r)),
    })
}

/// Bracket on `P(Z_{n,k} ≥ r)`; the factorial moments come from the
/// enumeration oracle, so `n` is guarded.
pub fn bonferroni_bracket(n: usize, k: usize, r: u64, r_lower: u64, r_upper: u64) -> Result<BonferroniBracket> {
    if k == 0 || k > n {
        return Err(domain(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    bonferroni_bracket_of(&z_distribution(n, k)?, r, r_lower, r_upper)
}

/// Stirling form of `log(C(n,k)/k!)` with `x = k/√n`:
///
/// ```text
/// −2x√n ln(x/e) − x²/2 + δₙ(x) − ln(2πx√n √(1 − x/√n))
/// ```
///
/// Returns the approximation and `δₙ(x)` separately. Requires `2k ≤ n`, well
/// inside the regime where `x/√n` is small.
pub fn stirling_log_first_moment(n: u64, k: u64) -> Result<(f64, f64)> {
    if k == 0 || 2 * k > n {
        return Err(domain(format!("stirling form needs 1 <= k <= n/2, got n={n} k={k}")));
    }
    let sn = (n as f64).sqrt();
    let x = k as f64 / sn;
    let e = x / sn;
    let l1 = (-e).ln_1p();
    // n·ln(e^ε (1−ε)) = n(ε + ln(1−ε)), expanded to avoid cancellation.
    let delta = x * sn * l1 - n as f64 * (e + l1) + 0.5 * x * x;
    let approx = -2.0 * x * sn * (x.ln() - 1.0) - 0.5 * x * x + delta
        - (2.0 * std::f64::consts::PI * x * sn).ln()
        - 0.5 * l1;
    Ok((approx, delta))
}

/// Values of `n` in the regime grid `2 ≤ k ≤ n^0.45` on which the Stirling
/// form is checked; `k = 1` is outside the `k → ∞` regime and is off by ~5%.
pub const STIRLING_GRID_N: [u64; 7] = [20, 50, 100, 1000, 2500, 10_000, 100_000];

/// `ln E[Z_{n,k}]` from the exact rational.
pub fn log_first_moment(n: u64, k: u64) -> Result<f64> {
    let m = first_moment(n, k)?;
    Ok(big_ln(m.numer()) - big_ln(m.denom()))
}

/// One row of the second-moment ratio table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub n: u64,
    pub k: u64,
    /// `E[Z²] / E[Z]²`, rounded once from the exact value.
    pub ratio: f64,
    #[serde(skip)]
    pub exact: ExactRational,
}

/// Largest `k` accepted by [`ratio_table`].
pub const RATIO_MAX_K: u64 = 60;
/// Largest `n` accepted by [`ratio_table`].
pub const RATIO_MAX_N: u64 = 1_000_000;

/// `E[Z²]/E[Z]²` for each `(n, k)`, computed exactly and converted once.
pub fn ratio_table(pairs: &[(u64, u64)]) -> Result<Vec<RatioRow>> {
    let mut k_top = 0;
    for &(n, k) in pairs {
        if k > RATIO_MAX_K {
            return Err(Error::Guard { what: "k", value: k, limit: RATIO_MAX_K });
        }
        if n > RATIO_MAX_N {
            return Err(Error::Guard { what: "n", value: n, limit: RATIO_MAX_N });
        }
        if k == 0 || k > n {
            return Err(domain(format!("need 1 <= k <= n, got n={n} k={k}")));
        }
        k_top = k_top.max(k as usize);
    }
    let table = MomentTriangle::build(k_top, k_top);
    pairs
        .par_iter()
        .map(|&(n, k)| {
            let m1 = first_moment(n, k)?;
            let exact = second_moment_from(&table, n, k)? / (&m1 * &m1);
            Ok(RatioRow { n, k, ratio: rational_to_f64(&exact), exact })
        })
        .collect()
}

/// Nearest-ish `f64` of a positive rational, robust to huge numerators.
pub fn rational_to_f64(q: &ExactRational) -> f64 {
    if let (Some(a), Some(b)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if a.is_finite() && b.is_finite() {
            return a / b;
        }
    }
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * (big_ln(&q.numer().abs()) - big_ln(q.denom())).exp()
}

/// Result of the Chebyshev-style optimisation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevBound {
    pub n: usize,
    pub j: usize,
    pub bound: f64,
    pub x_star: f64,
    pub w_star: f64,
    /// Whether Nelder–Mead improved on the best grid point.
    pub polished: bool,
}

/// Grid points per axis of the logarithmic seed grid.
pub const GRID: usize = 40;
/// Nelder–Mead iteration budget.
pub const NM_ITERS: u64 = 200;
/// Nelder–Mead simplex standard-deviation tolerance.
pub const NM_TOL: f64 = 1e-10;

const LOG_LO: f64 = -6.907_755_278_982_137; // ln 1e-3
const W_HI: f64 = 0.999;
const X_HI: f64 = X_MAX * (1.0 - 1e-9);

fn feasible(x: f64, w: f64) -> bool {
    x > 0.0 && x <= X_HI && w >= 0.0 && 4.0 * x + w * w < 1.0
}

/// `ln α(w, x²)` on the fixed logarithmic grid, shared by every `(N, j)`.
/// Row `i` is `x`, column `l` is `w`; the extra column `GRID` holds `w = 0`.
#[derive(Debug, Clone)]
pub struct AlphaGrid {
    xs: Vec<f64>,
    ws: Vec<f64>,
    log_alpha: Vec<Option<f64>>,
}

fn axis(hi: f64) -> Vec<f64> {
    let lhi = hi.ln();
    (0..GRID)
        .map(|i| (LOG_LO + (lhi - LOG_LO) * i as f64 / (GRID - 1) as f64).exp())
        .collect()
}

impl AlphaGrid {
    pub fn build() -> Self {
        let xs = axis(X_HI);
        let mut ws = axis(W_HI);
        ws.push(0.0);
        let log_alpha = (0..xs.len() * ws.len())
            .into_par_iter()
            .map(|idx| {
                let (x, w) = (xs[idx / ws.len()], ws[idx % ws.len()]);
                if !feasible(x, w) {
                    return None;
                }
                alpha_closed(w, x).ok().filter(|a| *a > 0.0).map(f64::ln)
            })
            .collect();
        AlphaGrid { xs, ws, log_alpha }
    }

    /// Best grid point for `(N, j)`: `(ln f, x, w)`.
    fn best(&self, n: usize, j: usize) -> Option<(f64, f64, f64)> {
        let mut best: Option<(f64, f64, f64)> = None;
        for (i, &x) in self.xs.iter().enumerate() {
            for (l, &w) in self.ws.iter().enumerate() {
                if (j == 0) != (w == 0.0) {
                    continue;
                }
                if let Some(la) = self.log_alpha[i * self.ws.len() + l] {
                    let c = log_objective(la, x, w, n, j);
                    if best.is_none_or(|b| c < b.0) {
                        best = Some((c, x, w));
                    }
                }
            }
        }
        best
    }
}

fn log_objective(log_alpha: f64, x: f64, w: f64, n: usize, j: usize) -> f64 {
    let wj = if j == 0 { 0.0 } else { j as f64 * w.ln() };
    log_alpha - wj - 2.0 * n as f64 * x.ln()
}

/// Cost in log coordinates; the infeasible region is a flat wall.
struct Objective {
    n: usize,
    j: usize,
}

const WALL: f64 = 1e300;

impl Objective {
    fn point(&self, p: &[f64]) -> (f64, f64) {
        let x = p[0].exp();
        let w = if self.j == 0 { 0.0 } else { p[1].exp() };
        (x, w)
    }
}

impl CostFunction for Objective {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, ArgminError> {
        let (x, w) = self.point(p);
        if !feasible(x, w) {
            return Ok(WALL);
        }
        Ok(match alpha_closed(w, x) {
            Ok(a) if a > 0.0 => log_objective(a.ln(), x, w, self.n, self.j),
            _ => WALL,
        })
    }
}

/// `min α(w, x²)/(wʲ x^{2N})` over `0 < x < 0.24`, `w > 0`, `4x + w² < 1`
/// (`w = 0` when `j = 0`), seeded from `grid` and polished by Nelder–Mead.
pub fn chebyshev_a_bound_with(grid: &AlphaGrid, n: usize, j: usize) -> Result<ChebyshevBound> {
    if n == 0 {
        return Err(domain("chebyshev bound needs N >= 1"));
    }
    let (c0, x0, w0) = grid
        .best(n, j)
        .ok_or_else(|| Error::NonConvergence("no feasible grid point".into()))?;
    let obj = Objective { n, j };
    let step = (X_HI.ln() - LOG_LO) / (GRID - 1) as f64;
    let start = if j == 0 { vec![x0.ln()] } else { vec![x0.ln(), w0.ln()] };
    let mut simplex = vec![start.clone()];
    for d in 0..start.len() {
        let mut v = start.clone();
        // Step inward so the initial simplex stays feasible at the corner.
        v[d] -= 0.5 * step;
        simplex.push(v);
    }
    let polished = NelderMead::new(simplex)
        .with_sd_tolerance(NM_TOL)
        .and_then(|solver| Executor::new(obj, solver).configure(|s| s.max_iters(NM_ITERS)).run())
        .ok()
        .and_then(|res| {
            let st = res.state();
            let p = st.best_param.clone()?;
            Some((st.best_cost, p))
        });
    let obj = Objective { n, j };
    let (cost, x, w, improved) = match polished {
        Some((c, p)) if c < c0 => {
            let (x, w) = obj.point(&p);
            (c, x, w, true)
        }
        _ => (c0, x0, w0, false),
    };
    Ok(ChebyshevBound { n, j, bound: cost.exp(), x_star: x, w_star: w, polished: improved })
}

/// Single-shot [`chebyshev_a_bound_with`] that builds its own grid.
pub fn chebyshev_a_bound(n: usize, j: usize) -> Result<ChebyshevBound> {
    chebyshev_a_bound_with(&AlphaGrid::build(), n, j)
}

/// Bounds for all `1 ≤ N ≤ n_max`, `0 ≤ j ≤ j_max`, sharing one grid.
pub fn chebyshev_table(n_max: usize, j_max: usize) -> Result<Vec<ChebyshevBound>> {
    let grid = AlphaGrid::build();
    let cells: Vec<(usize, usize)> = (1..=n_max).flat_map(|n| (0..=j_max).map(move |j| (n, j))).collect();
    cells.par_iter().map(|&(n, j)| chebyshev_a_bound_with(&grid, n, j)).collect()
}

/// Whether a bound covers `exact` with relative slack `1e−9`.
pub fn bound_covers(bound: f64, exact: &crate::ExactInt) -> bool {
    let e = rational_to_f64(&ExactRational::from_integer(exact.clone()));
    bound >= e * (1.0 - 1e-9)
}

/// `true` when the rational is at least one.
pub fn at_least_one(q: &ExactRational) -> bool {
    *q >= ExactRational::one()
}
