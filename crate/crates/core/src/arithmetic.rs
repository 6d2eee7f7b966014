//! Exact integer arithmetic: binomials, sums-of-squares counts, ball
//! lattice counts, divisor pairs and the factorization weight `theta_l(n)`.
//!
//! Every count is exact. Hot loops run in `u128` with checked arithmetic
//! and fall back to arbitrary precision on overflow.

use crate::error::{require_even, Result};
use crate::numeric::DoubleDouble;
use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

/// An exact nonnegative count.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        Self(BigUint::zero())
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.0.to_u128()
    }

    /// Nearest `f64` (exact below 2^53).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Double-double value, exact below 2^106.
    pub fn to_dd(&self) -> DoubleDouble {
        match self.to_u128() {
            Some(v) => DoubleDouble::from_u128(v),
            None => DoubleDouble::from_f64(self.to_f64()),
        }
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<u128> for BigCount {
    fn from(v: u128) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        Self(v)
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, o: BigCount) -> BigCount {
        BigCount(self.0 + o.0)
    }
}

impl<'a> Add<&'a BigCount> for BigCount {
    type Output = BigCount;
    fn add(self, o: &'a BigCount) -> BigCount {
        BigCount(self.0 + &o.0)
    }
}

impl Sum for BigCount {
    fn sum<I: Iterator<Item = BigCount>>(iter: I) -> Self {
        iter.fold(BigCount::zero(), |a, b| a + b)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for BigCount {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        BigUint::from_str(s.trim())
            .map(BigCount)
            .map_err(|e| crate::error::Error::Parse(format!("count {s:?}: {e}")))
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Factorization `n = h * m`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorPair {
    pub h: u64,
    pub m: u64,
}

/// `C(n, k)` in `u128`, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd_u128(acc, den);
        let (a, d) = (acc / g, den / g);
        let num = num / d; // d divides (n-i) once acc's factors are removed
        acc = a.checked_mul(num)?;
    }
    Some(acc)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if let Some(v) = binomial_u128(n, k) {
        return BigCount::from(v);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    BigCount(acc)
}

/// Table `r_n(0..=kmax)` of ordered signed representations as sums of `n` squares.
pub fn sum_of_squares_table(n: u32, kmax: u64) -> Vec<u128> {
    let len = kmax as usize + 1;
    let mut table = vec![0u128; len];
    table[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; len];
        for (k, slot) in next.iter_mut().enumerate() {
            let mut acc = table[k];
            let mut a: usize = 1;
            while a * a <= k {
                acc += 2 * table[k - a * a];
                a += 1;
            }
            *slot = acc;
        }
        table = next;
    }
    table
}

/// `r_n(k)`: the number of `(z_1..z_n) ∈ Z^n` with `Σ z_i² = k`.
pub fn sum_of_squares_count(n: u32, k: u64) -> BigCount {
    assert!(n >= 1, "dimension must be positive");
    if n == 1 {
        return BigCount::from(match k {
            0 => 1u64,
            _ if k.sqrt() * k.sqrt() == k => 2,
            _ => 0,
        });
    }
    // r_n(k) = Σ_a r_{n-1}(k - a²): recurse on the last coordinate with a table
    let table = sum_of_squares_table(n - 1, k);
    let mut acc: u128 = table[k as usize];
    let mut a: u64 = 1;
    while a * a <= k {
        acc += 2 * table[(k - a * a) as usize];
        a += 1;
    }
    BigCount::from(acc)
}

/// `floor(x²)` for `x >= 0`, exact.
pub fn floor_square(x: f64) -> u64 {
    assert!(x >= 0.0 && x.is_finite(), "radius must be a finite nonnegative real");
    let sq = DoubleDouble::square_f64(x);
    let f = sq.floor();
    (f.hi as i128 + f.lo as i128) as u64
}

/// `A_n(x)`: integer points of `Z^n` in the closed ball of radius `x`.
pub fn ball_lattice_count(n: u32, x: f64) -> BigCount {
    ball_count_sq(n, floor_square(x))
}

/// Integer points with `|z|² <= radius_sq`.
pub fn ball_count_sq(n: u32, radius_sq: u64) -> BigCount {
    match ball_count_u128(n, radius_sq) {
        Some(v) => BigCount::from(v),
        None => BigCount(ball_count_big(n, radius_sq)),
    }
}

const TABLE_LIMIT: u64 = 1 << 16;

fn ball_count_u128(n: u32, x: u64) -> Option<u128> {
    match n {
        0 => Some(1),
        1 => Some(2 * x.sqrt() as u128 + 1),
        2 => Some(circle_count(x)),
        4 => four_ball_count(x),
        3 if x <= TABLE_LIMIT => {
            let t = sum_of_squares_table(3, x);
            t.iter().try_fold(0u128, |a, &b| a.checked_add(b))
        }
        _ => {
            // slice recursion over the last coordinate
            let mut acc = ball_count_u128(n - 1, x)?;
            let mut a: u64 = 1;
            while a * a <= x {
                acc = acc.checked_add(ball_count_u128(n - 1, x - a * a)?.checked_mul(2)?)?;
                a += 1;
            }
            Some(acc)
        }
    }
}

fn ball_count_big(n: u32, x: u64) -> BigUint {
    if let Some(v) = ball_count_u128(n, x) {
        return BigUint::from(v);
    }
    let mut acc = ball_count_big(n - 1, x);
    let mut a: u64 = 1;
    while a * a <= x {
        acc += ball_count_big(n - 1, x - a * a) * 2u32;
        a += 1;
    }
    acc
}

fn circle_count(x: u64) -> u128 {
    let r = x.sqrt();
    let mut acc: u128 = 2 * r as u128 + 1;
    for a in 1..=r {
        acc += 2 * (2 * (x - a * a).sqrt() as u128 + 1);
    }
    acc
}

/// `A_4` from Jacobi's four-square theorem: `r_4(k) = 8σ(k) - 32σ(k/4)`.
fn four_ball_count(x: u64) -> Option<u128> {
    let d = divisor_sigma_summatory(x);
    let d4 = divisor_sigma_summatory(x / 4);
    (1u128 + 8 * d).checked_sub(32 * d4)
}

/// `Σ_{k <= y} σ(k) = Σ_{d <= y} d·floor(y/d)`, in O(√y) blocks.
pub fn divisor_sigma_summatory(y: u64) -> u128 {
    let mut acc: u128 = 0;
    let mut lo: u64 = 1;
    while lo <= y {
        let q = y / lo;
        let hi = y / q;
        let block = (lo as u128 + hi as u128) * (hi - lo + 1) as u128 / 2;
        acc += q as u128 * block;
        lo = hi + 1;
    }
    acc
}

/// All ordered factorizations `n = h·m`, ascending in `h`.
pub fn divisor_pairs(n: u64) -> Vec<DivisorPair> {
    assert!(n >= 1, "divisor_pairs needs n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: u64 = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small
        .into_iter()
        .chain(large.into_iter().rev())
        .map(|h| DivisorPair { h, m: n / h })
        .collect()
}

/// `theta_l(n) = Σ √(h/m)·(1 - h/m)^(l-1)` over `n = h·m`, `m > h`, `m ≡ h (mod 2)`.
///
/// Here `m = 2k - h`, so the pairs are exactly the `(h, k)` with
/// `h(2k-h) = n` and `k > h`.
pub fn theta(ell: u32, n: u64) -> Result<f64> {
    require_even(ell)?;
    let mut acc = 0.0;
    for DivisorPair { h, m } in divisor_pairs(n) {
        if m > h && (m - h) % 2 == 0 {
            let ratio = h as f64 / m as f64;
            acc += ratio.sqrt() * (1.0 - ratio).powi(ell as i32 - 1);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize) -> Vec<Vec<BigUint>> {
        let mut rows = vec![vec![BigUint::from(1u32)]];
        for i in 1..=n {
            let prev = &rows[i - 1];
            let mut row = vec![BigUint::from(1u32); i + 1];
            for j in 1..i {
                row[j] = &prev[j - 1] + &prev[j];
            }
            rows.push(row);
        }
        rows
    }

    #[test]
    fn binomial_spot_values() {
        assert_eq!(binomial(5, 2), BigCount::from(10u64));
        for n in 0..30 {
            assert_eq!(binomial(n, 0), BigCount::from(1u64));
        }
        assert_eq!(binomial(3, 7), BigCount::zero());
        let p = pascal(40);
        assert_eq!(binomial(40, 20).0, p[40][20]);
        assert_eq!(binomial(40, 20).to_string(), "137846528820");
    }

    #[test]
    fn binomial_obeys_pascal_rule_up_to_200() {
        for n in 1..=200u64 {
            for k in 1..=n {
                let lhs = binomial(n, k).0;
                let rhs = binomial(n - 1, k - 1).0 + binomial(n - 1, k).0;
                assert_eq!(lhs, rhs, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn binomial_big_fallback() {
        // C(200,100) > 2^128
        let p = pascal(200);
        assert_eq!(binomial(200, 100).0, p[200][100]);
    }

    fn brute_r(n: u32, k: i64) -> u64 {
        let b = (k as f64).sqrt() as i64 + 1;
        fn rec(n: u32, k: i64, b: i64) -> u64 {
            if n == 0 {
                return (k == 0) as u64;
            }
            (-b..=b).filter(|a| a * a <= k).map(|a| rec(n - 1, k - a * a, b)).sum()
        }
        rec(n, k, b)
    }

    #[test]
    fn sums_of_squares_spot_values() {
        assert_eq!(sum_of_squares_count(2, 0), BigCount::from(1u64));
        assert_eq!(sum_of_squares_count(2, 1), BigCount::from(brute_r(2, 1)));
        assert_eq!(sum_of_squares_count(2, 1), BigCount::from(4u64));
        assert_eq!(sum_of_squares_count(3, 2), BigCount::from(brute_r(3, 2)));
        assert_eq!(sum_of_squares_count(3, 2), BigCount::from(12u64));
        for k in 0..40 {
            for n in 1..=4 {
                assert_eq!(sum_of_squares_count(n, k), BigCount::from(brute_r(n, k as i64)));
            }
        }
    }

    #[test]
    fn ball_spot_values() {
        assert_eq!(ball_lattice_count(2, 1.0), BigCount::from(5u64));
        assert_eq!(ball_lattice_count(2, 0.0), BigCount::from(1u64));
        assert_eq!(ball_lattice_count(1, 2.5), BigCount::from(5u64));
        assert_eq!(ball_lattice_count(4, 1.0), BigCount::from(9u64));
    }

    #[test]
    fn floor_square_is_exact() {
        assert_eq!(floor_square(3.0), 9);
        assert_eq!(floor_square(0.1), 0);
        // 2^26 + 0.5 squared is 2^52 + 2^26 + 0.25
        assert_eq!(floor_square(67108864.5), (1u64 << 52) + (1 << 26));
    }

    #[test]
    fn four_ball_fast_path_matches_convolution() {
        let table = sum_of_squares_table(4, 5000);
        let mut prefix = 0u128;
        for (x, r) in table.iter().enumerate() {
            prefix += r;
            if x % 97 == 0 || x < 50 {
                assert_eq!(four_ball_count(x as u64), Some(prefix), "x={x}");
            }
        }
    }

    #[test]
    fn slice_recursion_matches_convolution_in_high_dimension() {
        for n in [5u32, 6, 8] {
            let table = sum_of_squares_table(n, 300);
            let prefix: u128 = table.iter().sum();
            assert_eq!(ball_count_sq(n, 300).to_u128(), Some(prefix));
        }
    }

    #[test]
    fn divisor_pairs_examples() {
        let p: Vec<(u64, u64)> = divisor_pairs(12).into_iter().map(|d| (d.h, d.m)).collect();
        assert_eq!(p, vec![(1, 12), (2, 6), (3, 4), (4, 3), (6, 2), (12, 1)]);
        assert_eq!(divisor_pairs(1), vec![DivisorPair { h: 1, m: 1 }]);
        let p: Vec<(u64, u64)> = divisor_pairs(97).into_iter().map(|d| (d.h, d.m)).collect();
        assert_eq!(p, vec![(1, 97), (97, 1)]);
        assert_eq!(divisor_pairs(36).len(), 9);
    }

    #[test]
    fn theta_spot_values() {
        for ell in [2, 4, 6] {
            assert_eq!(theta(ell, 2).unwrap(), 0.0);
        }
        let want = 2.0 / (3.0 * 3f64.sqrt());
        assert!((theta(2, 3).unwrap() - want).abs() < 1e-15);
        assert!((theta(2, 8).unwrap() - 0.5 / 2f64.sqrt()).abs() < 1e-15);
        assert!(theta(3, 8).is_err());
    }

    #[test]
    fn big_count_text_form() {
        let c: BigCount = "340282366920938463463374607431768211456".parse().unwrap();
        assert_eq!(c.to_u128(), None);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, "\"340282366920938463463374607431768211456\"");
        let back: BigCount = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
