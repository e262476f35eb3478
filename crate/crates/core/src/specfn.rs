//! Special functions and exact combinatorics.
//!
//! Integer-valued quantities (Stirling numbers, binomials, factorials,
//! double factorials, ordering weights) are computed with arbitrary-size
//! integers and only converted to `f64` at the point of use.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Associated Laguerre polynomial `L_n^k(x)` by upward three-term recurrence
/// in `n`.
pub fn assoc_laguerre(n: u32, k: u32, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = k + 1.0 - x;
    for j in 1..n {
        let j = j as f64;
        let next = ((2.0 * j + k + 1.0 - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Signature shared by Laguerre evaluators; lets callers swap in an
/// alternative implementation (e.g. a fault-injected one in tests).
pub type LaguerreFn = fn(u32, u32, f64) -> f64;

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, j| acc * j)
}

/// `n! / k!` for `k <= n` (the rising product `(k+1)(k+2)...n`).
pub fn falling_ratio(n: u32, k: u32) -> BigUint {
    debug_assert!(k <= n);
    (k + 1..=n).fold(BigUint::one(), |acc, j| acc * j)
}

pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Stirling number of the second kind `S(r, n)`, the number of partitions of
/// an `r`-set into `n` non-empty blocks.
pub fn stirling2(r: u32, n: u32) -> BigUint {
    if n > r {
        return BigUint::zero();
    }
    if r == 0 {
        return BigUint::one();
    }
    if n == 0 {
        return BigUint::zero();
    }
    // row recurrence S(i, j) = j S(i-1, j) + S(i-1, j-1)
    let n = n as usize;
    let mut row = vec![BigUint::zero(); n + 1];
    row[0] = BigUint::one();
    for _ in 1..=r {
        for j in (1..=n).rev() {
            let carried = &row[j] * j + &row[j - 1];
            row[j] = carried;
        }
        row[0] = BigUint::zero();
    }
    row[n].clone()
}

/// `n!!` for `n >= -1`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigUint> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!(
            "double factorial needs n >= -1, got {n}"
        )));
    }
    let mut acc = BigUint::one();
    let mut j = n;
    while j > 1 {
        acc *= j as u64;
        j -= 2;
    }
    Ok(acc)
}

/// Coherent-state reference value of the `l`-th quadrature central moment,
/// `(1/2)_(l/2) = (l-1)!! / 2^(l/2)`.
pub fn squeezing_threshold(l: u32) -> Result<f64> {
    if l == 0 || l % 2 == 1 {
        return Err(Error::OddOrder(l));
    }
    let df = double_factorial(l as i64 - 1)?;
    Ok(to_f64(&df) / 2f64.powi((l / 2) as i32))
}

pub fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Weights rewriting `a^p a†^q` in normal order:
/// `a^p a†^q = Σ_k weight(k) a†^(q-k) a^(p-k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingCoeffs {
    pub p: u32,
    pub q: u32,
    /// `(k, weight)` pairs for `k = 0..=min(p, q)`.
    pub coeffs: Vec<(u32, BigUint)>,
}

impl OrderingCoeffs {
    pub fn weight(&self, k: u32) -> Option<&BigUint> {
        self.coeffs.get(k as usize).map(|(_, w)| w)
    }
}

/// `weight(k) = k! C(p,k) C(q,k)`.
pub fn ordering_coeffs(p: u32, q: u32) -> OrderingCoeffs {
    let coeffs = (0..=p.min(q))
        .map(|k| (k, factorial(k) * binomial(p, k) * binomial(q, k)))
        .collect();
    OrderingCoeffs { p, q, coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn laguerre_low_orders() {
        assert_eq!(assoc_laguerre(0, 5, 3.7), 1.0);
        assert_eq!(assoc_laguerre(1, 1, 0.5), 1.5);
        assert_eq!(assoc_laguerre(2, 0, 1.0), -0.5);
        // L_2^k(x) = (k+2)(k+1)/2 - (k+2)x + x^2/2
        for k in 0..6 {
            for &x in &[-3.0, -0.25, 0.0, 0.7, 4.0] {
                let kf = k as f64;
                let exact = (kf + 2.0) * (kf + 1.0) / 2.0 - (kf + 2.0) * x + x * x / 2.0;
                assert!((assoc_laguerre(2, k, x) - exact).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn stirling_values() {
        assert_eq!(stirling2(0, 0), big(1));
        assert_eq!(stirling2(3, 2), big(3));
        assert_eq!(stirling2(4, 0), big(0));
        assert_eq!(stirling2(2, 5), big(0));
        assert_eq!(stirling2(10, 4), big(34105));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), big(6));
        assert_eq!(binomial(7, 0), big(1));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(binomial(60, 30), "118264581564861424".parse::<BigUint>().unwrap());
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(5).unwrap(), big(15));
        assert_eq!(double_factorial(-1).unwrap(), big(1));
        assert_eq!(double_factorial(0).unwrap(), big(1));
        assert_eq!(double_factorial(6).unwrap(), big(48));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(squeezing_threshold(2).unwrap(), 0.5);
        assert_eq!(squeezing_threshold(4).unwrap(), 0.75);
        assert_eq!(squeezing_threshold(6).unwrap(), 1.875);
        assert_eq!(squeezing_threshold(3), Err(Error::OddOrder(3)));
        assert_eq!(squeezing_threshold(0), Err(Error::OddOrder(0)));
    }

    #[test]
    fn ordering_small_cases() {
        let c = ordering_coeffs(1, 1);
        assert_eq!(c.coeffs, vec![(0, big(1)), (1, big(1))]);
        let c = ordering_coeffs(0, 3);
        assert_eq!(c.coeffs, vec![(0, big(1))]);
        let c = ordering_coeffs(2, 2);
        assert_eq!(c.coeffs, vec![(0, big(1)), (1, big(4)), (2, big(2))]);
    }
}
