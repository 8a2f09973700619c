use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{error::domain, ExactInt, ExactRational, Result};

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> ExactInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: u64, k: i64) -> ExactInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    // acc stays integral: after step i it equals C(n-k+i, i).
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// `n! / ∏ pᵢ!`, zero unless every part is nonnegative and the parts sum to `n`.
pub fn multinomial(n: u64, parts: &[i64]) -> ExactInt {
    if parts.iter().any(|&p| p < 0) || parts.iter().map(|&p| p as u64).sum::<u64>() != n {
        return BigInt::zero();
    }
    let mut rest = n;
    let mut acc = BigInt::one();
    for &p in parts {
        acc *= binomial(rest, p);
        rest -= p as u64;
    }
    acc
}

/// Falling factorial `(z)_n = z (z−1) ⋯ (z−n+1)`.
pub fn falling_factorial(z: &ExactRational, n: u64) -> ExactRational {
    let mut acc = ExactRational::one();
    let mut t = z.clone();
    for _ in 0..n {
        acc *= &t;
        t -= ExactRational::one();
    }
    acc
}

/// Exponential Bell polynomial, normalised so that
/// `bell_polynomial(r, [−0!z, −1!z, …, −(r−1)!z]) = (z)_r / r!`.
///
/// This is `(−1)^r / r!` times the complete Bell polynomial `Y_r`, where
/// `Y_0 = 1` and `Y_m = Σ_{s<m} C(m−1, s) x_{s+1} Y_{m−1−s}`.
pub fn bell_polynomial(r: usize, x: &[ExactRational]) -> Result<ExactRational> {
    if x.len() < r {
        return Err(domain(format!("bell_polynomial needs {r} arguments, got {}", x.len())));
    }
    let mut y: Vec<ExactRational> = Vec::with_capacity(r + 1);
    y.push(ExactRational::one());
    for m in 1..=r {
        let mut acc = ExactRational::zero();
        for s in 0..m {
            let c = ExactRational::from_integer(binomial(m as u64 - 1, s as i64));
            acc += c * &x[s] * &y[m - 1 - s];
        }
        y.push(acc);
    }
    let sign = if r.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    Ok(ExactRational::new(sign, factorial(r as u64)) * &y[r])
}

/// The elementary symmetric function `e_r` of 0/1-valued variables whose
/// power sums all equal `z`, computed through Newton's identity in Bell form.
/// For integer `z` this is `C(z, r)`.
pub fn elementary_from_power_sums(r: usize, z: &ExactRational) -> ExactRational {
    let x: Vec<ExactRational> = (0..r)
        .map(|s| -ExactRational::from_integer(factorial(s as u64)) * z)
        .collect();
    bell_polynomial(r, &x).expect("argument list has length r")
}

/// `B(N, j) = C(N, j) / j!`.
pub fn b_coefficient(n: u64, j: u64) -> ExactRational {
    ExactRational::new(binomial(n, j as i64), factorial(j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> ExactRational {
        ExactRational::new(p.into(), d.into())
    }

    fn pascal(n: usize) -> Vec<Vec<BigInt>> {
        let mut rows = vec![vec![BigInt::one()]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigInt::one(); i + 1];
            for k in 1..i {
                row[k] = &prev[k - 1] + &prev[k];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), 6.into());
        assert_eq!(binomial(3, 4), 0.into());
        assert_eq!(binomial(3, -1), 0.into());
        assert_eq!(binomial(40, 20), 137846528820u64.into());
    }

    #[test]
    fn binomial_matches_pascal() {
        let rows = pascal(60);
        for n in 0..=60u64 {
            for k in 0..=n {
                assert_eq!(binomial(n, k as i64), rows[n as usize][k as usize]);
            }
        }
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(2, &[1, 1, 0, 0]), 2.into());
        assert_eq!(multinomial(4, &[2, 1, 1]), 12.into());
        assert_eq!(multinomial(2, &[0, 0, 1, 1]), 2.into());
        assert_eq!(multinomial(2, &[3, -1]), 0.into());
        assert_eq!(multinomial(3, &[1, 1]), 0.into());
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(&q(-1, 2), 2), q(3, 4));
        assert_eq!(falling_factorial(&q(7, 3), 0), q(1, 1));
        assert_eq!(falling_factorial(&q(-3, 1), 2), q(12, 1));
    }

    #[test]
    fn pochhammer_half_identity() {
        for n in 0..=20u64 {
            let lhs = falling_factorial(&q(-1, 2), n)
                * ExactRational::from_integer(BigInt::from(4u8).pow(n as u32) * factorial(n));
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(lhs * q(sign, 1), ExactRational::from_integer(factorial(2 * n)));
        }
    }

    #[test]
    fn pochhammer_negative_integer_identity() {
        for n in 1..=8u64 {
            for k in 0..=8u64 {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let rhs = ExactRational::new(factorial(n + k - 1) * sign, factorial(n - 1));
                assert_eq!(falling_factorial(&q(-(n as i64), 1), k), rhs);
            }
        }
    }

    #[test]
    fn bell_examples() {
        assert_eq!(bell_polynomial(0, &[]).unwrap(), q(1, 1));
        assert_eq!(bell_polynomial(1, &[q(-2, 1)]).unwrap(), q(2, 1));
        let z = q(1, 2);
        let x = vec![-z.clone(), -z.clone(), q(-2, 1) * &z];
        assert_eq!(bell_polynomial(3, &x).unwrap(), q(1, 16));
        assert!(bell_polynomial(2, &[q(1, 1)]).is_err());
    }

    #[test]
    fn bell_specialisation() {
        for z in [q(-2, 1), q(-1, 2), q(0, 1), q(1, 2), q(3, 1)] {
            for r in 0..=8usize {
                let x: Vec<_> = (0..r)
                    .map(|s| -ExactRational::from_integer(factorial(s as u64)) * &z)
                    .collect();
                let lhs = bell_polynomial(r, &x).unwrap();
                let rhs = falling_factorial(&z, r as u64) / ExactRational::from_integer(factorial(r as u64));
                assert_eq!(lhs, rhs, "r={r} z={z}");
            }
        }
    }

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_from_power_sums(1, &q(5, 1)), q(5, 1));
        assert_eq!(elementary_from_power_sums(2, &q(3, 1)), q(3, 1));
        assert_eq!(elementary_from_power_sums(4, &q(3, 1)), q(0, 1));
        for z in 0..10i64 {
            for r in 0..10usize {
                assert_eq!(
                    elementary_from_power_sums(r, &q(z, 1)),
                    ExactRational::from_integer(binomial(z as u64, r as i64))
                );
            }
        }
    }

    #[test]
    fn b_coefficient_examples() {
        assert_eq!(b_coefficient(3, 2), q(3, 2));
        assert_eq!(b_coefficient(3, 4), q(0, 1));
        assert_eq!(b_coefficient(4, 3), q(2, 3));
    }
}
