use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::CoverError;
use crate::{integer, Rational};

pub(crate) fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn binomial(n: usize, r: usize) -> u64 {
    factorial(n) / (factorial(r) * factorial(n - r))
}

fn check(k: usize, k_prime: usize) -> Result<(), CoverError> {
    if k_prime == 0 || k_prime > k || k > 20 {
        return Err(CoverError::BadArguments { k, k_prime });
    }
    Ok(())
}

/// `α(k, k′) = max_{0 ≤ j < k′} (1/(k−j)) Σ_{i=j+1}^{k′} C(k, i)`.
pub fn alpha(k: usize, k_prime: usize) -> Result<Rational, CoverError> {
    check(k, k_prime)?;
    if k_prime == 1 {
        return Ok(Rational::one());
    }
    let best = (0..k_prime)
        .map(|j| {
            let total: u64 = (j + 1..=k_prime).map(|i| binomial(k, i)).sum();
            Rational::new(BigInt::from(total), BigInt::from(k - j))
        })
        .max()
        .expect("k′ ≥ 1");
    Ok(best)
}

/// Number of times the systems of `T_j` contain each category with `i`
/// indices, for `1 ≤ i, j ≤ k′` (row `i − 1`, column `j − 1`).
pub fn coefficients_a(k: usize, k_prime: usize) -> Result<Vec<Vec<u64>>, CoverError> {
    check(k, k_prime)?;
    Ok((1..=k_prime)
        .map(|i| {
            (1..=k_prime)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Less => factorial(k - i) * factorial(i) / factorial(k - j + 1),
                    std::cmp::Ordering::Equal => factorial(j),
                    std::cmp::Ordering::Greater => 0,
                })
                .collect()
        })
        .collect())
}

/// `|T_j| = k!/(k−j+1)!`.
pub fn tree_family_size(k: usize, j: usize) -> u64 {
    factorial(k) / factorial(k - j + 1)
}

/// The solution `x̃` of `A x = 1` and its positive part `x̃⁺`.
pub fn xtilde(k: usize, k_prime: usize) -> Result<(Vec<Rational>, Vec<Rational>), CoverError> {
    check(k, k_prime)?;
    let mut x = vec![Rational::zero(); k_prime];
    x[k_prime - 1] = Rational::new(BigInt::one(), BigInt::from(factorial(k_prime)));
    for j in (1..k_prime).rev() {
        let step = integer(k as i64 - j as i64 - 1) * &x[j];
        let shift = Rational::new(BigInt::from(2 * j as i64 - k as i64 + 1), BigInt::from(factorial(j + 1)));
        x[j - 1] = step + shift;
    }
    let plus = x.iter().map(|v| if v.is_negative() { Rational::zero() } else { v.clone() }).collect();
    Ok((x, plus))
}

/// Objective of the per-type cover program: `Σ_j |T_j| x_j`.
pub fn lp5_objective(k: usize, x: &[Rational]) -> Rational {
    x.iter()
        .enumerate()
        .map(|(j, v)| integer(tree_family_size(k, j + 1) as i64) * v)
        .sum()
}

/// The complementary dual: `t`, the largest index with `x̃_t < 0` (or 0), and
/// the value `1/(k−t)` placed on every category with more than `t` indices.
pub fn dual_certificate(k: usize, k_prime: usize) -> Result<(usize, Rational), CoverError> {
    let (x, _) = xtilde(k, k_prime)?;
    let t = x.iter().rposition(|v| v.is_negative()).map_or(0, |p| p + 1);
    Ok((t, Rational::new(BigInt::one(), BigInt::from(k - t))))
}
