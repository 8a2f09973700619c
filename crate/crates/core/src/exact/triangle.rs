//! The arrays `K(L, M, j)` and `A(N, j) = K(N, N, j)`.
//!
//! `K(·,·,j)` is the `(j+1)`-fold two-dimensional convolution power of the
//! kernel `T(ℓ, m) = C(ℓ+m, ℓ)²`, whose generating function is
//! `1/√((1−x−y)² − 4xy)`. Hence `K(·,·,j)` has generating function
//! `P^{−(j+1)/2}` with `P = 1 − 2x − 2y + x² − 2xy + y²`, and the ODE
//! `P ∂ₓF + s (∂ₓP) F = 0` gives a five-point recurrence that fills a whole
//! column `A(0..=N, j)` in `O(N²)` big-integer operations. The convolution and
//! the literal composition sum are kept as slower, independent routes.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::binomial;
use crate::ExactInt;

type Grid = Vec<Vec<BigInt>>;

fn kernel(l_max: usize, m_max: usize) -> Grid {
    (0..=l_max)
        .map(|l| {
            (0..=m_max)
                .map(|m| {
                    let c = binomial((l + m) as u64, l as i64);
                    &c * &c
                })
                .collect()
        })
        .collect()
}

fn convolve(a: &Grid, b: &Grid) -> Grid {
    let l_max = a.len() - 1;
    let m_max = a[0].len() - 1;
    (0..=l_max)
        .map(|l| {
            (0..=m_max)
                .map(|m| {
                    let mut acc = BigInt::zero();
                    for l1 in 0..=l {
                        for m1 in 0..=m {
                            acc += &a[l1][m1] * &b[l - l1][m - m1];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// The tables `K(·,·,i)` for `i = 0..=j`, truncated to `ℓ ≤ L`, `m ≤ M`.
pub fn k_layers(l_max: usize, m_max: usize, j: usize) -> Vec<Grid> {
    let t = kernel(l_max, m_max);
    let mut layers = vec![t.clone()];
    for _ in 0..j {
        let next = convolve(layers.last().unwrap(), &t);
        layers.push(next);
    }
    layers
}

/// `K(L, M, j)` by repeated truncated convolution.
pub fn k_array(l: usize, m: usize, j: usize) -> ExactInt {
    k_layers(l, m, j).pop().unwrap()[l][m].clone()
}

/// `A(N, j)` by literal enumeration of the composition pairs. Exponential in
/// `j`; kept as an oracle.
pub fn a_array_direct(n: usize, j: usize) -> ExactInt {
    let comps = compositions(n, j + 1);
    let mut total = BigInt::zero();
    for ls in &comps {
        for ms in &comps {
            let mut prod = BigInt::one();
            for (&l, &m) in ls.iter().zip(ms) {
                let c = binomial((l + m) as u64, l as i64);
                prod *= &c * &c;
            }
            total += prod;
        }
    }
    total
}

/// All weak compositions of `n` into `parts` parts, in lexicographic order.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `A(N, j)` for `N = 0..=n_max` at fixed `j`, via the five-point recurrence.
pub fn a_column(n_max: usize, j: usize) -> Vec<ExactInt> {
    let n = n_max;
    let jj = BigInt::from(j as u64 + 1);
    // f[l][m] = [x^l y^m] P^{-(j+1)/2}
    let mut f: Grid = Vec::with_capacity(n + 1);
    f.push((0..=n).map(|m| binomial((m + j) as u64, j as i64)).collect());
    let zero = BigInt::zero();
    for l in 0..n {
        let lb = BigInt::from(l as u64);
        let l1 = BigInt::from(l as u64 + 1);
        let lm1 = BigInt::from(l as i64 - 1);
        let mut row: Vec<BigInt> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let cur = &f[l][m];
            let left = if m >= 1 { &f[l][m - 1] } else { &zero };
            let below = if l >= 1 { &f[l - 1][m] } else { &zero };
            let new1 = if m >= 1 { &row[m - 1] } else { &zero };
            let new2 = if m >= 2 { &row[m - 2] } else { &zero };
            let mut rhs: BigInt = 2 * &lb * cur;
            rhs += 2 * &l1 * new1;
            rhs -= &lm1 * below;
            rhs += 2 * &lb * left;
            rhs -= &l1 * new2;
            rhs += &jj * (cur - below + left);
            debug_assert!((&rhs % &l1).is_zero());
            row.push(rhs / &l1);
        }
        f.push(row);
    }
    (0..=n).map(|i| f[i][i].clone()).collect()
}

/// `A(N, j) = K(N, N, j)`.
pub fn a_array(n: usize, j: usize) -> ExactInt {
    a_column(n, j).pop().unwrap()
}

/// The table `A(N, j)` for `0 ≤ N ≤ n_max`, `0 ≤ j ≤ j_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTriangle {
    n_max: usize,
    j_max: usize,
    /// `entries[N][j]`
    entries: Vec<Vec<ExactInt>>,
    layers: Option<Vec<Grid>>,
}

impl MomentTriangle {
    /// Default size used by the command line.
    pub const DEFAULT_N_MAX: usize = 30;

    /// Builds the table by the recurrence, one column per `j` in parallel.
    pub fn build(n_max: usize, j_max: usize) -> Self {
        let cols: Vec<Vec<ExactInt>> = (0..=j_max).into_par_iter().map(|j| a_column(n_max, j)).collect();
        let entries = (0..=n_max)
            .map(|n| cols.iter().map(|c| c[n].clone()).collect())
            .collect();
        MomentTriangle { n_max, j_max, entries, layers: None }
    }

    /// Builds the table by convolution and keeps every `K(·,·,j)` layer.
    pub fn build_with_layers(n_max: usize, j_max: usize) -> Self {
        let layers = k_layers(n_max, n_max, j_max);
        let entries = (0..=n_max)
            .map(|n| layers.iter().map(|k| k[n][n].clone()).collect())
            .collect();
        MomentTriangle { n_max, j_max, entries, layers: Some(layers) }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    /// `A(N, j)`; panics outside the table.
    pub fn get(&self, n: usize, j: usize) -> &ExactInt {
        &self.entries[n][j]
    }

    /// The retained `K(ℓ, m, j)`, if the table was built with layers.
    pub fn k(&self, l: usize, m: usize, j: usize) -> Option<&ExactInt> {
        self.layers.as_ref().map(|ls| &ls[j][l][m])
    }

    /// CSV with header `N,j,A`, rows ordered by `N` then `j`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("N,j,A\n");
        for (n, row) in self.entries.iter().enumerate() {
            for (j, a) in row.iter().enumerate() {
                writeln!(s, "{n},{j},{a}").unwrap();
            }
        }
        s
    }
}
