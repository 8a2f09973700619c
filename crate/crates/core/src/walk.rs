//! The random-walk characterisation of `A(N, j)`.
//!
//! For a two-dimensional simple random walk `(U_t, V_t)` of length `2N`, let
//! `τ` be the number of times `t ∈ {0, …, 2N}` with `U_t = 0` (both ends
//! included) and `R_N` the indicator of `(U_{2N}, V_{2N}) = (0, 0)`. Then
//!
//! ```text
//! A(N, j) = 16^N · E[ C(τ + j − 1, j) · R_N ].
//! ```
//!
//! Exact mode walks all `4^{2N}` paths; Monte Carlo mode draws paths from a
//! ChaCha stream positioned by sample index, so a run is reproducible from
//! `(seed, samples)` alone, whatever the thread count.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::domain;
use crate::exact::binomial;
use crate::numeric::pairwise_sum;
use crate::{Error, ExactInt, ExactRational, Result};

/// Largest `N` accepted by exhaustive enumeration (`4^12` paths).
pub const MAX_EXACT_N: usize = 6;

/// One unit move. The discriminant is the base-4 step code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    East = 0,
    North = 1,
    West = 2,
    South = 3,
}

impl Step {
    pub fn from_code(c: u32) -> Step {
        match c & 3 {
            0 => Step::East,
            1 => Step::North,
            2 => Step::West,
            _ => Step::South,
        }
    }

    pub fn delta(self) -> (i32, i32) {
        match self {
            Step::East => (1, 0),
            Step::North => (0, 1),
            Step::West => (-1, 0),
            Step::South => (0, -1),
        }
    }
}

/// A walk of even length `2N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkPath {
    steps: Vec<Step>,
}

impl WalkPath {
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        if !steps.len().is_multiple_of(2) {
            return Err(domain(format!("walk length {} is odd", steps.len())));
        }
        Ok(WalkPath { steps })
    }

    /// Builds a path from unit vectors such as `(0, 1)`.
    pub fn from_deltas(d: &[(i32, i32)]) -> Result<Self> {
        let steps = d
            .iter()
            .map(|&v| match v {
                (1, 0) => Ok(Step::East),
                (0, 1) => Ok(Step::North),
                (-1, 0) => Ok(Step::West),
                (0, -1) => Ok(Step::South),
                _ => Err(domain(format!("{v:?} is not a unit step"))),
            })
            .collect::<Result<Vec<_>>>()?;
        WalkPath::new(steps)
    }

    /// `N`, half the number of steps.
    pub fn half_len(&self) -> usize {
        self.steps.len() / 2
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }
}

/// Occupation count of the axis `U = 0` and the return indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkStats {
    pub tau: usize,
    pub returned: bool,
}

pub fn walk_stats(path: &WalkPath) -> WalkStats {
    let (mut u, mut v) = (0i32, 0i32);
    let mut tau = 1;
    for s in path.steps() {
        let (du, dv) = s.delta();
        u += du;
        v += dv;
        if u == 0 {
            tau += 1;
        }
    }
    WalkStats { tau, returned: u == 0 && v == 0 }
}

/// `Q_{N,j} = C(τ + j − 1, j)`, the number of weakly increasing `j`-tuples of
/// axis-visit times.
pub fn q_statistic(stats: &WalkStats, j: usize) -> ExactInt {
    binomial((stats.tau + j) as u64 - 1, j as i64)
}

/// Exhaustive statistics of all `4^{2N}` paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactWalkSummary {
    pub n: usize,
    /// `4^{2N}`
    pub paths: u64,
    /// number of paths ending at the origin
    pub returned: u64,
    /// `tau_hist[τ]`: returning paths with occupation count `τ`
    pub tau_hist: Vec<u64>,
    /// paths with `X_{2N} = U + V = 0`
    pub x_zero: u64,
    /// paths with `Y_{2N} = U − V = 0`
    pub y_zero: u64,
}

impl ExactWalkSummary {
    fn empty(n: usize) -> Self {
        ExactWalkSummary {
            n,
            paths: 0,
            returned: 0,
            tau_hist: vec![0; 2 * n + 2],
            x_zero: 0,
            y_zero: 0,
        }
    }

    fn merge(mut self, o: Self) -> Self {
        self.paths += o.paths;
        self.returned += o.returned;
        self.x_zero += o.x_zero;
        self.y_zero += o.y_zero;
        for (a, b) in self.tau_hist.iter_mut().zip(o.tau_hist) {
            *a += b;
        }
        self
    }

    /// `P(U_{2N} = V_{2N} = 0)`
    pub fn return_probability(&self) -> ExactRational {
        ExactRational::new(self.returned.into(), self.paths.into())
    }

    /// `E[Q_{N,j} R_N]` as an exact rational.
    pub fn q_r_mean(&self, j: usize) -> ExactRational {
        let num: BigInt = self
            .tau_hist
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(tau, &c)| q_statistic(&WalkStats { tau, returned: true }, j) * c)
            .sum();
        ExactRational::new(num, self.paths.into())
    }
}

#[derive(Clone, Copy)]
struct Cursor {
    u: i32,
    v: i32,
    tau: usize,
}

fn descend(c: Cursor, left: usize, acc: &mut ExactWalkSummary) {
    if left == 0 {
        acc.paths += 1;
        if c.u == 0 && c.v == 0 {
            acc.returned += 1;
            acc.tau_hist[c.tau] += 1;
        }
        if c.u + c.v == 0 {
            acc.x_zero += 1;
        }
        if c.u == c.v {
            acc.y_zero += 1;
        }
        return;
    }
    for code in 0..4 {
        let (du, dv) = Step::from_code(code).delta();
        let u = c.u + du;
        let next = Cursor { u, v: c.v + dv, tau: c.tau + usize::from(u == 0) };
        descend(next, left - 1, acc);
    }
}

/// Walks every path of length `2N`, in base-4 step-code order per prefix.
pub fn exact_walk_summary(n: usize) -> Result<ExactWalkSummary> {
    if n > MAX_EXACT_N {
        return Err(Error::Guard { what: "N", value: n as u64, limit: MAX_EXACT_N as u64 });
    }
    let len = 2 * n;
    let prefix = len.min(5);
    let parts: Vec<ExactWalkSummary> = (0..4u32.pow(prefix as u32))
        .into_par_iter()
        .map(|code| {
            let mut c = Cursor { u: 0, v: 0, tau: 1 };
            // most significant digit is the first step
            for i in (0..prefix).rev() {
                let (du, dv) = Step::from_code(code >> (2 * i)).delta();
                c.u += du;
                c.v += dv;
                c.tau += usize::from(c.u == 0);
            }
            let mut acc = ExactWalkSummary::empty(n);
            descend(c, len - prefix, &mut acc);
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(ExactWalkSummary::empty(n), ExactWalkSummary::merge))
}

fn sixteen_pow(n: usize) -> BigInt {
    BigInt::from(16u8).pow(n as u32)
}

/// `16^N · E[Q_{N,j} R_N]` over all paths, which must be an integer.
pub fn a_from_walk_exact(n: usize, j: usize) -> Result<ExactInt> {
    let s = exact_walk_summary(n)?;
    let v = s.q_r_mean(j) * ExactRational::from_integer(sixteen_pow(n));
    if !v.is_integer() {
        return Err(Error::Conditioning(format!("16^N E[QR] = {v} is not an integer")));
    }
    Ok(v.to_integer())
}

const MC_CHUNK: u64 = 4096;

/// Draws `samples` walks and returns the per-`τ` histogram of returning walks.
fn sample_tau_hist(n: usize, samples: u64, seed: u64) -> Vec<u64> {
    let len = 2 * n;
    let words = len.div_ceil(16).max(1) as u128;
    let chunks = samples.div_ceil(MC_CHUNK);
    let parts: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut hist = vec![0u64; len + 2];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = c * MC_CHUNK;
            let end = samples.min(start + MC_CHUNK);
            rng.set_word_pos(start as u128 * words);
            for _ in start..end {
                let (mut u, mut v, mut tau) = (0i32, 0i32, 1usize);
                let mut bits = 0u32;
                for t in 0..len {
                    if t % 16 == 0 {
                        bits = rng.next_u32();
                    }
                    let (du, dv) = Step::from_code(bits).delta();
                    bits >>= 2;
                    u += du;
                    v += dv;
                    tau += usize::from(u == 0);
                }
                // keep the stream aligned when 2N is not a multiple of 16
                if len == 0 {
                    rng.next_u32();
                }
                if u == 0 && v == 0 {
                    hist[tau] += 1;
                }
            }
            hist
        })
        .collect();
    let mut hist = vec![0u64; len + 2];
    for p in parts {
        for (a, b) in hist.iter_mut().zip(p) {
            *a += b;
        }
    }
    hist
}

/// Monte Carlo estimate of `A(N, j)` with its standard error.
pub fn a_monte_carlo(n: usize, j: usize, samples: u64, seed: u64) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(domain("samples must be at least 1"));
    }
    let hist = sample_tau_hist(n, samples, seed);
    let (sum, sumsq) = hist.iter().enumerate().filter(|(_, &c)| c > 0).fold(
        (BigInt::zero(), BigInt::zero()),
        |(s, s2), (tau, &c)| {
            let q = q_statistic(&WalkStats { tau, returned: true }, j);
            (s + &q * c, s2 + &q * &q * c)
        },
    );
    let scale = ExactRational::from_integer(sixteen_pow(n));
    let m = BigInt::from(samples);
    let mean = ExactRational::new(sum.clone(), m.clone()) * &scale;
    // stderr² of the mean = (m Σq² − (Σq)²) / (m² (m − 1))
    let spread: BigInt = &m * &sumsq - &sum * &sum;
    let stderr = if spread.is_zero() {
        0.0
    } else if samples == 1 {
        f64::INFINITY
    } else {
        let var = ExactRational::new(spread, &m * &m * (&m - BigInt::one())) * &scale * &scale;
        debug_assert!(!var.is_negative());
        var.to_f64().unwrap().sqrt()
    };
    Ok((mean.to_f64().unwrap(), stderr))
}

/// Per-`j` mean of `Q_{N,j} R_N`.
#[derive(Debug, Clone, PartialEq)]
pub enum MeanEstimate {
    Exact(ExactRational),
    Sampled { mean: f64, stderr: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleMode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkEnsembleStats {
    pub n: usize,
    pub mode: EnsembleMode,
    pub samples: u64,
    /// indexed by `j`
    pub q_r_mean: Vec<MeanEstimate>,
    pub seed: Option<u64>,
}

/// Exact ensemble over all `4^{2N}` paths for `j = 0..=j_max`.
pub fn ensemble_exact(n: usize, j_max: usize) -> Result<WalkEnsembleStats> {
    let s = exact_walk_summary(n)?;
    Ok(WalkEnsembleStats {
        n,
        mode: EnsembleMode::Exact,
        samples: s.paths,
        q_r_mean: (0..=j_max).map(|j| MeanEstimate::Exact(s.q_r_mean(j))).collect(),
        seed: None,
    })
}

/// Sampled ensemble for `j = 0..=j_max`; all `j` share one set of walks.
pub fn ensemble_monte_carlo(n: usize, j_max: usize, samples: u64, seed: u64) -> Result<WalkEnsembleStats> {
    let scale = 16f64.powi(n as i32);
    let q_r_mean = (0..=j_max)
        .map(|j| {
            a_monte_carlo(n, j, samples, seed)
                .map(|(e, s)| MeanEstimate::Sampled { mean: e / scale, stderr: s / scale })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WalkEnsembleStats { n, mode: EnsembleMode::MonteCarlo, samples, q_r_mean, seed: Some(seed) })
}

/// Partial sum `Σ_{N < n_terms} 16^{−N} C(2N, N)² z^{2N}`, which tends to
/// `(2/π) K(z)`.
pub fn polya_series(z: f64, n_terms: usize) -> Result<f64> {
    if !(z.abs() < 1.0) {
        return Err(domain(format!("polya_series needs |z| < 1, got {z}")));
    }
    let mut terms = Vec::with_capacity(n_terms);
    let mut t = 1.0;
    for n in 0..n_terms {
        terms.push(t);
        let r = (2 * n + 1) as f64 / (2 * n + 2) as f64;
        t *= r * r * z * z;
    }
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::a_array;

    #[test]
    fn stats_examples() {
        let p = WalkPath::from_deltas(&[(0, 1), (0, -1)]).unwrap();
        assert_eq!(walk_stats(&p), WalkStats { tau: 3, returned: true });
        let p = WalkPath::from_deltas(&[(1, 0), (-1, 0)]).unwrap();
        assert_eq!(walk_stats(&p), WalkStats { tau: 2, returned: true });
        let p = WalkPath::from_deltas(&[(1, 0), (1, 0)]).unwrap();
        assert_eq!(walk_stats(&p), WalkStats { tau: 1, returned: false });
        assert!(WalkPath::from_deltas(&[(1, 0)]).is_err());
        assert!(WalkPath::from_deltas(&[(1, 1), (0, 0)]).is_err());
    }

    #[test]
    fn q_examples() {
        assert_eq!(q_statistic(&WalkStats { tau: 3, returned: true }, 1), 3.into());
        assert_eq!(q_statistic(&WalkStats { tau: 2, returned: true }, 2), 3.into());
        assert_eq!(q_statistic(&WalkStats { tau: 7, returned: false }, 0), 1.into());
    }

    #[test]
    fn walk_examples() {
        assert_eq!(a_from_walk_exact(1, 0).unwrap(), 4.into());
        assert_eq!(a_from_walk_exact(1, 1).unwrap(), 10.into());
        for j in 0..5 {
            assert_eq!(a_from_walk_exact(0, j).unwrap(), 1.into());
        }
        assert!(a_from_walk_exact(7, 0).is_err());
    }

    #[test]
    fn walk_matches_array_small() {
        for n in 0..=3 {
            for j in 0..=4 {
                assert_eq!(a_from_walk_exact(n, j).unwrap(), a_array(n, j));
            }
        }
    }

    #[test]
    fn enumeration_order_covers_all_paths() {
        let s = exact_walk_summary(2).unwrap();
        assert_eq!(s.paths, 256);
        assert_eq!(s.tau_hist.iter().sum::<u64>(), s.returned);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let a = a_monte_carlo(2, 1, 10_000, 7).unwrap();
        let b = a_monte_carlo(2, 1, 10_000, 7).unwrap();
        assert_eq!(a.0.to_bits(), b.0.to_bits());
        assert_eq!(a.1.to_bits(), b.1.to_bits());
        assert_ne!(a, a_monte_carlo(2, 1, 10_000, 8).unwrap());
    }

    #[test]
    fn monte_carlo_trivial_walk() {
        assert_eq!(a_monte_carlo(0, 3, 17, 1).unwrap(), (1.0, 0.0));
        assert!(a_monte_carlo(1, 0, 0, 1).is_err());
    }

    #[test]
    fn monte_carlo_prefix_consistency() {
        // sample i depends on (seed, i) only, so a longer run extends a shorter one
        let short = sample_tau_hist(2, 5000, 3);
        let long = sample_tau_hist(2, 5000 + MC_CHUNK, 3);
        assert!(short.iter().zip(&long).all(|(s, l)| s <= l));
    }

    #[test]
    fn polya_examples() {
        assert_eq!(polya_series(0.0, 10).unwrap(), 1.0);
        assert!(polya_series(1.0, 10).is_err());
    }
}
