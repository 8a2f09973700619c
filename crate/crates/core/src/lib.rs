//! Exact and numeric machinery for the second moment of the number of
//! increasing k-subsequences of a uniform random permutation.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`] holds arbitrary-precision combinatorics, the array `A(N,j)` and
//!   the exact moment formulas.
//! * [`perm`] is the brute-force oracle over the symmetric group.
//! * [`walk`] realises `A(N,j)` through two-dimensional simple random walks.
//! * [`genfun`] evaluates the generating functions by series and by contour
//!   quadrature.
//! * [`elliptic`] evaluates the same generating function through quartic
//!   roots, a residue, a branch-cut integral and a Legendre reduction.
//! * [`bounds`] carries the Bonferroni, Stirling and Chebyshev-style bounds.
//! * [`verify`] bundles the invariant suites used by the command-line gate.

// Domain guards are written `!(a < b)` so that NaN is rejected as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod elliptic;
pub mod error;
pub mod exact;
pub mod fmt;
pub mod genfun;
pub mod numeric;
pub mod perm;
pub mod verify;
pub mod walk;

pub use error::{Error, Result};

/// Arbitrary-precision signed integer used for every combinatorial count.
pub type ExactInt = num_bigint::BigInt;

/// Reduced arbitrary-precision rational with positive denominator.
pub type ExactRational = num_rational::BigRational;

/// Double-precision complex scalar used by the contour and residue code.
pub type ComplexValue = num_complex::Complex64;
