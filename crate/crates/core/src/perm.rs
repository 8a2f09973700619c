//! Brute-force ground truth over the symmetric group.
//!
//! Permutations are enumerated in lexicographic order. Parallel runs split the
//! lexicographic index range into fixed blocks, unrank the first permutation
//! of each block, and merge block results by exact addition, so every result
//! is independent of the number of workers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::domain;
use crate::exact::{binomial, factorial};
use crate::{Error, ExactInt, ExactRational, Result};

/// Largest `n` the enumerating routines accept.
pub const MAX_ENUM_N: usize = 9;

/// A permutation of `{1, …, n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    /// Validates that `values` is a bijection on `{1, …, n}`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(domain(format!("{values:?} is not a permutation")));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(π_n, …, π_1)`
    pub fn reversed(&self) -> Self {
        Permutation(self.0.iter().rev().copied().collect())
    }

    /// `(n+1−π_1, …, n+1−π_n)`
    pub fn complemented(&self) -> Self {
        let n = self.0.len() as u32;
        Permutation(self.0.iter().map(|&v| n + 1 - v).collect())
    }
}

/// Number of increasing subsequences of length `k`, by a DP over
/// (position, length). Counts stay in `u128` while `n ≤ 128`, where
/// `C(n, k)` cannot overflow; beyond that the DP runs on big integers.
pub fn count_increasing(pi: &Permutation, k: usize) -> Result<ExactInt> {
    let n = pi.len();
    if k == 0 || k > n {
        return Err(domain(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    if n <= 128 {
        Ok(count_u128(pi.values(), k).into())
    } else {
        Ok(count_big(pi.values(), k))
    }
}

fn count_u128(v: &[u32], k: usize) -> u128 {
    let n = v.len();
    // ends[i][l]: increasing subsequences of length l+1 ending at i
    let mut ends = vec![vec![0u128; k]; n];
    let mut total = 0u128;
    for i in 0..n {
        ends[i][0] = 1;
        for p in 0..i {
            if v[p] < v[i] {
                for l in 1..k {
                    ends[i][l] += ends[p][l - 1];
                }
            }
        }
        total += ends[i][k - 1];
    }
    total
}

fn count_big(v: &[u32], k: usize) -> BigInt {
    let n = v.len();
    let mut ends = vec![vec![BigInt::zero(); k]; n];
    let mut total = BigInt::zero();
    for i in 0..n {
        ends[i][0] = BigInt::one();
        for p in 0..i {
            if v[p] < v[i] {
                for l in 1..k {
                    let add = ends[p][l - 1].clone();
                    ends[i][l] += add;
                }
            }
        }
        total += &ends[i][k - 1];
    }
    total
}

/// Length of the longest increasing subsequence (patience sorting).
pub fn lis_length(pi: &Permutation) -> usize {
    let mut piles: Vec<u32> = Vec::new();
    for &v in pi.values() {
        let pos = piles.partition_point(|&top| top < v);
        if pos == piles.len() {
            piles.push(v);
        } else {
            piles[pos] = v;
        }
    }
    piles.len()
}

/// Advances `v` to the next permutation in lexicographic order; returns
/// `false` after the last one.
fn next_permutation(v: &mut [u32]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The permutation with lexicographic rank `rank` (0-based).
fn unrank(n: usize, mut rank: u64) -> Vec<u32> {
    let mut pool: Vec<u32> = (1..=n as u32).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f: u64 = (1..=i as u64).product();
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_ENUM_N {
        return Err(Error::Guard { what: "n", value: n as u64, limit: MAX_ENUM_N as u64 });
    }
    Ok(())
}

const BLOCK: u64 = 720;

/// Folds `visit` over all of `S_n` in lexicographic blocks and merges the
/// block accumulators in block order.
fn fold_all<A, F, M>(n: usize, init: impl Fn() -> A + Sync, visit: F, merge: M) -> A
where
    A: Send,
    F: Fn(&mut A, &[u32]) + Sync,
    M: Fn(A, A) -> A,
{
    let total: u64 = (1..=n as u64).product();
    let blocks = total.div_ceil(BLOCK);
    let parts: Vec<A> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = init();
            let mut v = unrank(n, b * BLOCK);
            let len = BLOCK.min(total - b * BLOCK);
            for i in 0..len {
                visit(&mut acc, &v);
                if i + 1 < len {
                    next_permutation(&mut v);
                }
            }
            acc
        })
        .collect();
    parts.into_iter().reduce(merge).unwrap_or_else(init)
}

fn merge_hist<K: Ord>(mut a: BTreeMap<K, u64>, b: BTreeMap<K, u64>) -> BTreeMap<K, u64> {
    for (k, c) in b {
        *a.entry(k).or_insert(0) += c;
    }
    a
}

/// Exact histogram of `Z_{n,k}` over `S_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZDistribution {
    pub n: usize,
    pub k: usize,
    /// value of `Z` → number of permutations attaining it
    pub counts: BTreeMap<ExactInt, ExactInt>,
}

impl ZDistribution {
    pub fn total(&self) -> ExactInt {
        self.counts.values().sum()
    }

    /// CSV with header `z,count`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("z,count\n");
        for (z, c) in &self.counts {
            writeln!(s, "{z},{c}").unwrap();
        }
        s
    }
}

/// Enumerates `S_n` and tabulates `Z_{n,k}`.
pub fn z_distribution(n: usize, k: usize) -> Result<ZDistribution> {
    guard(n)?;
    if k == 0 || k > n {
        return Err(domain(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    let hist = fold_all(
        n,
        BTreeMap::<u128, u64>::new,
        |h, v| *h.entry(count_u128(v, k)).or_insert(0) += 1,
        merge_hist,
    );
    let counts = hist.into_iter().map(|(z, c)| (z.into(), c.into())).collect();
    Ok(ZDistribution { n, k, counts })
}

/// `E[Z^p]` under the distribution.
pub fn moment(dist: &ZDistribution, p: u32) -> ExactRational {
    let num: BigInt = dist.counts.iter().map(|(z, c)| z.pow(p) * c).sum();
    ExactRational::new(num, dist.total())
}

/// `E[Z_{n,k} · Z_{n,ℓ}]` by joint enumeration.
pub fn mixed_moment(n: usize, k: usize, l: usize) -> Result<ExactRational> {
    guard(n)?;
    if k == 0 || l == 0 || k > n || l > n {
        return Err(domain(format!("need 1 <= k, l <= n, got n={n} k={k} l={l}")));
    }
    let hist = fold_all(
        n,
        BTreeMap::<(u128, u128), u64>::new,
        |h, v| *h.entry((count_u128(v, k), count_u128(v, l))).or_insert(0) += 1,
        merge_hist,
    );
    let num: BigInt = hist
        .into_iter()
        .map(|((a, b), c)| BigInt::from(a) * BigInt::from(b) * BigInt::from(c))
        .sum();
    Ok(ExactRational::new(num, factorial(n as u64)))
}

/// `E[C(Z, s)]` from a precomputed distribution.
pub fn factorial_moment_of(dist: &ZDistribution, s: u64) -> ExactRational {
    let num: BigInt = dist
        .counts
        .iter()
        .map(|(z, c)| binomial(z.to_u64().expect("small support"), s as i64) * c)
        .sum();
    ExactRational::new(num, dist.total())
}

/// `E[C(Z_{n,k}, s)]`.
pub fn factorial_moment(n: usize, k: usize, s: u64) -> Result<ExactRational> {
    Ok(factorial_moment_of(&z_distribution(n, k)?, s))
}

/// `P(Z ≥ r)` from a precomputed distribution.
pub fn prob_at_least_of(dist: &ZDistribution, r: u64) -> ExactRational {
    let r = BigInt::from(r);
    let num: BigInt = dist.counts.iter().filter(|(z, _)| **z >= r).map(|(_, c)| c).sum();
    ExactRational::new(num, dist.total())
}

/// `P(Z_{n,k} ≥ r)`; at `r = 1` this is `P(L_n ≥ k)`.
pub fn prob_at_least(n: usize, k: usize, r: u64) -> Result<ExactRational> {
    Ok(prob_at_least_of(&z_distribution(n, k)?, r))
}

/// Visits every permutation of `S_n` in lexicographic order (single thread).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&Permutation)) -> Result<()> {
    guard(n)?;
    let mut v: Vec<u32> = (1..=n as u32).collect();
    loop {
        f(&Permutation(v.clone()));
        if !next_permutation(&mut v) {
            return Ok(());
        }
    }
}
