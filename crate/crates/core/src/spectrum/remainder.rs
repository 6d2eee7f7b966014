//! The remainder pipeline `E(u)` (type-II count minus its smooth expansion)
//! and the sawtooth sum `E*(u)`.
//!
//! Writing `x = x(n_0) = (u²/n_0 - n_0 - l)/2` and `N = floor(x)`, each
//! `n_0` contributes `∏(N+i)` to the count and `∏(x+i-1/2)` to the smooth
//! part. With `δ = x - N - 1/2 = psi(x)` and `b_i = N + i` the difference is
//!
//! ```text
//! ∏ b_i - ∏ (b_i + δ) = -Σ_{j>=1} δ^j e_{l-j}(b),
//! ```
//!
//! which the floating paths evaluate directly so no cancellation between the
//! two large products ever happens.

use super::counting::SquaredRadius;
use super::manifold::HeisenbergManifold;
use crate::arithmetic::BigCount;
use crate::error::{require_even, Result};
use crate::numeric::{CompensatedSum, DoubleDouble};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::f64::consts::PI;

/// Accuracy/speed trade-off for floating remainder evaluation.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    /// `x(n_0)` in plain `f64`, compensated summation.
    Fast,
    /// `x(n_0)` in double-double, double-double accumulation.
    #[default]
    Extended,
}

impl std::str::FromStr for Precision {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Self::Fast),
            "extended" => Ok(Self::Extended),
            _ => Err(crate::Error::Parse(format!("precision must be fast|extended, got {s:?}"))),
        }
    }
}

/// `2^{l-2}(l-1)! / (r_1···r_l)`.
pub fn normalization(m: &HeisenbergManifold) -> f64 {
    let ell = m.ell() as i32;
    let fact: f64 = (1..ell).map(|k| k as f64).product();
    2f64.powi(ell - 2) * fact / m.r_product() as f64
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `x(n_0)` in double-double.
fn x_dd(scale: SquaredRadius, ell: u32, n0: u64) -> DoubleDouble {
    let base = (n0 as u128 * n0 as u128 + ell as u128 * n0 as u128) as f64;
    scale.as_dd().add_f64(-base).div_f64(2.0 * n0 as f64)
}

/// `(2 r_1···r_l / l!) Σ n_0^l ∏ (x(n_0) + i - 1/2)`.
pub fn smooth_type_ii(m: &HeisenbergManifold, u: f64) -> f64 {
    let ell = m.ell();
    let scale = SquaredRadius::from_u(u);
    let mut acc = DoubleDouble::ZERO;
    for (n0, _) in scale.levels(ell) {
        let x = x_dd(scale, ell, n0);
        let mut prod = DoubleDouble::from_f64(1.0);
        for i in 1..=ell {
            prod = prod * x.add_f64(i as f64 - 0.5);
        }
        for _ in 0..ell {
            prod = prod.mul_f64(n0 as f64);
        }
        acc += prod;
    }
    acc.mul_f64(2.0 * m.r_product() as f64 / factorial(ell)).to_f64()
}

/// `Σ n_0^l C(N+l, l)` and `Σ ∏_i (u² - n_0² + (2i-1-l) n_0)` at integer `u²`.
fn exact_parts(ell: u32, u_sq: u64) -> (BigInt, BigInt) {
    let scale = SquaredRadius::Exact(u_sq);
    let fast = scale.levels(ell).try_fold((0i128, 0i128), |(cnt, smo), (n0, n)| {
        let c = crate::arithmetic::binomial_u128(n + ell as u64, ell as u64)? as i128;
        let pow = (n0 as i128).checked_pow(ell)?;
        let mut prod: i128 = 1;
        for i in 1..=ell as i128 {
            let f = u_sq as i128 - (n0 as i128) * (n0 as i128) + (2 * i - 1 - ell as i128) * n0 as i128;
            prod = prod.checked_mul(f)?;
        }
        Some((cnt.checked_add(c.checked_mul(pow)?)?, smo.checked_add(prod)?))
    });
    if let Some((c, s)) = fast {
        return (BigInt::from(c), BigInt::from(s));
    }
    let mut cnt = BigInt::zero();
    let mut smo = BigInt::zero();
    for (n0, n) in scale.levels(ell) {
        let c = BigInt::from(crate::arithmetic::binomial(n + ell as u64, ell as u64).0);
        cnt += c * BigInt::from(n0).pow(ell);
        let mut prod = BigInt::one();
        for i in 1..=ell as i64 {
            let f = BigInt::from(u_sq) - BigInt::from(n0) * BigInt::from(n0)
                + BigInt::from(2 * i - 1 - ell as i64) * BigInt::from(n0);
            prod *= f;
        }
        smo += prod;
    }
    (cnt, smo)
}

/// Smooth expansion at integer `u²`, exactly.
pub fn smooth_type_ii_exact(m: &HeisenbergManifold, u_sq: u64) -> BigRational {
    let ell = m.ell();
    let (_, s) = exact_parts(ell, u_sq);
    let denom = (1..=ell as u64).map(BigInt::from).product::<BigInt>()
        * (BigInt::one() << ell as usize);
    BigRational::new(s * BigInt::from(2u128 * m.r_product()), denom)
}

/// `E(u)` at integer `u²`, exactly: `(l!·2^l·Σ n_0^l C(N+l,l) - S) / (2l)`.
///
/// The `r`-product cancels, so the value depends on `l` only.
pub fn e_exact_rational(m: &HeisenbergManifold, u_sq: u64) -> BigRational {
    let ell = m.ell();
    let (cnt, s) = exact_parts(ell, u_sq);
    let fact: BigInt = (1..=ell as u64).map(BigInt::from).product();
    let num = fact * (BigInt::one() << ell as usize) * cnt - s;
    BigRational::new(num, BigInt::from(2 * ell))
}

/// `e_0..e_l` of the values `b_1..b_l`, all nonnegative.
fn elementary_symmetric(b: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    out[0] = 1.0;
    for (k, &bi) in b.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            out[j] += bi * out[j - 1];
        }
    }
}

/// `E(u)` by the per-term difference formula.
pub fn e_exact_with(m: &HeisenbergManifold, u: f64, precision: Precision) -> f64 {
    let ell = m.ell();
    let scale = SquaredRadius::from_u(u);
    let u_sq_f = scale.to_f64();
    let lf = ell as usize;
    let mut b = vec![0.0; lf];
    let mut e = vec![0.0; lf + 1];
    let mut acc = CompensatedSum::new();
    let mut acc_dd = DoubleDouble::ZERO;
    for (n0, n) in scale.levels(ell) {
        let delta = match precision {
            Precision::Extended => (x_dd(scale, ell, n0) - DoubleDouble::from_f64(n as f64)).to_f64() - 0.5,
            Precision::Fast => {
                let nf = n0 as f64;
                let x = (u_sq_f - nf * nf - ell as f64 * nf) / (2.0 * nf);
                (x - n as f64).clamp(0.0, 1.0) - 0.5
            }
        };
        for (i, bi) in b.iter_mut().enumerate() {
            *bi = (n + 1 + i as u64) as f64;
        }
        elementary_symmetric(&b, &mut e);
        // -Σ_{j=1}^{l} δ^j e_{l-j}
        let mut diff = 0.0;
        let mut dp = 1.0;
        for j in 1..=lf {
            dp *= delta;
            diff -= dp * e[lf - j];
        }
        let term = diff * (n0 as f64).powi(ell as i32);
        match precision {
            Precision::Extended => acc_dd += DoubleDouble::from_f64(term),
            Precision::Fast => acc.add(term),
        }
    }
    let total = match precision {
        Precision::Extended => acc_dd.to_f64(),
        Precision::Fast => acc.value(),
    };
    // normalization · 2P/l! = 2^{l-1}/l
    total * 2f64.powi(ell as i32 - 1) / ell as f64
}

/// `E(u) = 2^{l-2}(l-1)!/(r_1···r_l) · (N_II(2πu²) - smooth)`.
///
/// Exact rational arithmetic when `u²` is an integer, the extended-precision
/// difference formula otherwise.
pub fn e_exact(m: &HeisenbergManifold, u: f64) -> f64 {
    match SquaredRadius::from_u(u) {
        SquaredRadius::Exact(u_sq) => e_exact_rational(m, u_sq).to_f64().unwrap_or(f64::NAN),
        SquaredRadius::Real(_) => e_exact_with(m, u, Precision::Extended),
    }
}

/// `E*(u)` at integer `u`: `-(1/2) Σ_{m<=u} a^{l-1}(r - m)` with
/// `a = u² - m²`, `r = a mod 2m`.
pub fn e_star_rational(ell: u32, u: u64) -> Result<BigRational> {
    require_even(ell)?;
    let u2 = u as i128 * u as i128;
    let fast = (1..=u as i128).try_fold(0i128, |acc, mm| {
        let a = u2 - mm * mm;
        let r = a % (2 * mm);
        let t = a.checked_pow(ell - 1)?.checked_mul(r - mm)?;
        acc.checked_add(t)
    });
    let sum = match fast {
        Some(v) => BigInt::from(v),
        None => {
            let mut acc = BigInt::zero();
            for mm in 1..=u as i128 {
                let a = u2 - mm * mm;
                let r = a % (2 * mm);
                acc += BigInt::from(a).pow(ell - 1) * BigInt::from(r - mm);
            }
            acc
        }
    };
    Ok(BigRational::new(-sum, BigInt::from(2)))
}

/// `E*(u)` by double-double accumulation, valid for any real `u >= 1`.
pub fn e_star_float(ell: u32, u: f64) -> Result<f64> {
    require_even(ell)?;
    let u_sq = DoubleDouble::square_f64(u);
    let mut acc = DoubleDouble::ZERO;
    let top = u.floor() as u64;
    for mm in 1..=top {
        let mf = mm as f64;
        let a = u_sq.add_f64(-mf * mf);
        let arg = a.div_f64(2.0 * mf);
        let psi = arg.fract() - 0.5;
        let mut p = DoubleDouble::from_f64(mf);
        for _ in 1..ell {
            p = p * a;
        }
        acc += p.mul_f64(psi);
    }
    Ok(-acc.to_f64())
}

/// `E*(u) = -Σ_{1<=m<=u} m(u²-m²)^{l-1} psi(u²/(2m) - m/2)`.
pub fn e_star(ell: u32, u: f64) -> Result<f64> {
    require_even(ell)?;
    if u.fract() == 0.0 && u < 3.0e9 {
        return Ok(e_star_rational(ell, u as u64)?.to_f64().unwrap_or(f64::NAN));
    }
    e_star_float(ell, u)
}

/// `(1/2) Σ_{m<=u} m(u²-m²)^{l-1}`, the termwise bound on `|E*(u)|`.
pub fn e_star_bound(ell: u32, u: f64) -> f64 {
    let u2 = u * u;
    (1..=u.floor() as u64)
        .map(|mm| {
            let mf = mm as f64;
            mf * (u2 - mf * mf).powi(ell as i32 - 1)
        })
        .sum::<f64>()
        / 2.0
}

/// `N_II` minus smooth part, unnormalized; exposed for diagnostics.
pub fn type_ii_oscillation(m: &HeisenbergManifold, u: f64) -> f64 {
    e_exact(m, u) / normalization(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct RemainderSample {
    pub u: f64,
    pub t: f64,
    pub e_exact: f64,
    pub e_star: f64,
    /// `normalization · R(2πu²)` with the literal single-term `R`.
    pub r_scaled: f64,
}

pub fn remainder_sample(m: &HeisenbergManifold, u: f64) -> Result<RemainderSample> {
    let t = 2.0 * PI * u * u;
    Ok(RemainderSample {
        u,
        t,
        e_exact: e_exact(m, u),
        e_star: e_star(m.ell(), u)?,
        r_scaled: normalization(m) * super::counting::remainder_r(m, t),
    })
}

/// `N_II(2πu²)` through the smooth/oscillation split, for cross-checks.
pub fn count_from_parts(m: &HeisenbergManifold, u_sq: u64) -> BigCount {
    let ell = m.ell();
    let fact: BigInt = (1..ell as u64).map(BigInt::from).product();
    // 1 / normalization
    let inv_norm = BigRational::new(BigInt::from(m.r_product()) * 4, fact * (BigInt::one() << ell as usize));
    let total = smooth_type_ii_exact(m, u_sq) + e_exact_rational(m, u_sq) * inv_norm;
    BigCount(total.to_integer().to_biguint().expect("nonnegative count"))
}
