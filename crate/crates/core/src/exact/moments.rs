use crate::error::domain;
use crate::{ExactRational, Result};

use super::{a_array, b_coefficient, binomial, factorial, multinomial, MomentTriangle};

fn check_range(n: u64, k: u64) -> Result<()> {
    if k == 0 || k > n {
        return Err(domain(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    Ok(())
}

/// `E[Z_{n,k}] = C(n,k) / k!`.
pub fn first_moment(n: u64, k: u64) -> Result<ExactRational> {
    check_range(n, k)?;
    Ok(ExactRational::new(binomial(n, k as i64), factorial(k)))
}

/// `E[Z²_{n,k}] = Σ_{i=0}^{k} A(k−i, i) · B(n, 2k−i)`.
pub fn second_moment(n: u64, k: u64) -> Result<ExactRational> {
    check_range(n, k)?;
    let k = k as usize;
    Ok((0..=k)
        .map(|i| ExactRational::from_integer(a_array(k - i, i)) * b_coefficient(n, (2 * k - i) as u64))
        .sum())
}

/// Same as [`second_moment`], reading `A` from a prebuilt table.
pub fn second_moment_from(table: &MomentTriangle, n: u64, k: u64) -> Result<ExactRational> {
    check_range(n, k)?;
    let k = k as usize;
    if k > table.n_max() || k > table.j_max() {
        return Err(domain(format!("table too small for k={k}")));
    }
    Ok((0..=k)
        .map(|i| ExactRational::from_integer(table.get(k - i, i).clone()) * b_coefficient(n, (2 * k - i) as u64))
        .sum())
}

/// Checks `Σₙ (ℓ+m)! / (n! n! (ℓ−n)! (m−n)!) = C(ℓ+m, ℓ)²` exactly.
pub fn check_square_identity(l: u64, m: u64) -> bool {
    let lhs: num_bigint::BigInt = (0..=l.min(m))
        .map(|n| multinomial(l + m, &[n as i64, n as i64, (l - n) as i64, (m - n) as i64]))
        .sum();
    let c = binomial(l + m, l as i64);
    lhs == &c * &c
}
