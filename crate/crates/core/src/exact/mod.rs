//! Arbitrary-precision combinatorics and the exact second-moment formula.
//!
//! Every quantity here is an [`ExactInt`](crate::ExactInt) or
//! [`ExactRational`](crate::ExactRational); nothing is ever rounded.

mod combinatorics;
mod moments;
mod triangle;

pub use combinatorics::{
    b_coefficient, bell_polynomial, binomial, elementary_from_power_sums, factorial,
    falling_factorial, multinomial,
};
pub use moments::{check_square_identity, first_moment, second_moment, second_moment_from};
pub use triangle::{a_array, a_array_direct, a_column, k_array, k_layers, MomentTriangle};
