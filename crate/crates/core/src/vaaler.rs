//! Vaaler's trigonometric approximation of the sawtooth `psi(w) = w - [w] - 1/2`.
//!
//! For every order `H >= 1` the pair
//!
//! ```text
//! Σ_H(w)  = Σ_{h<=H} α_{h,H} sin(2πhw)
//! Σ*_H(w) = Σ_{h<=H} β_{h,H} cos(2πhw) + 1/(2H+2)
//! ```
//!
//! satisfies `|psi(w) + Σ_H(w)| <= Σ*_H(w)` pointwise, with
//! `α_{h,H} = ρ(h/(H+1)) / (πh)`, `β_{h,H} = (1 - h/(H+1)) / (H+1)` and
//! `ρ(ξ) = πξ(1-ξ)cot(πξ) + ξ`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

/// Sawtooth `w - floor(w) - 1/2` for a real argument; always in `[-1/2, 1/2)`.
pub fn psi(w: f64) -> f64 {
    let mut frac = w - w.floor();
    if frac >= 1.0 {
        // w just below an integer: keep the nearest value inside the range
        frac = 1.0 - f64::EPSILON / 2.0;
    }
    frac - 0.5
}

/// Exact sawtooth of a rational.
pub fn psi_rational(w: &BigRational) -> BigRational {
    let floor = w.numer().div_floor(w.denom());
    w - BigRational::from_integer(floor) - BigRational::new(BigInt::from(1), BigInt::from(2))
}

// x·cot(x) = 1 - x²/3 - x⁴/45 - 2x⁶/945 - x⁸/4725 - 2x¹⁰/93555 - ...
fn x_cot_x_series(x: f64) -> f64 {
    let x2 = x * x;
    1.0 - x2 * (1.0 / 3.0 + x2 * (1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (1.0 / 4725.0 + x2 * (2.0 / 93555.0)))))
}

const ENDPOINT_SWITCH: f64 = 1e-6;
// Near ξ = 1 the closed form cancels to ~πη²; the series is exact to
// rounding for η below this.
const UPPER_SWITCH: f64 = 1e-2;

/// `ρ(ξ) = πξ(1-ξ)cot(πξ) + ξ` on `0 < ξ < 1`.
pub fn rho(xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::Domain(format!("rho needs 0 < xi < 1, got {xi}")));
    }
    if xi < ENDPOINT_SWITCH {
        // πξ·cot(πξ) → 1
        return Ok((1.0 - xi) * x_cot_x_series(PI * xi) + xi);
    }
    let eta = 1.0 - xi;
    if eta < UPPER_SWITCH {
        // cot(πξ) = -cot(πη), so ρ = ξ(1 - πη·cot(πη)) → 0
        let x = PI * eta;
        let x2 = x * x;
        let one_minus =
            x2 * (1.0 / 3.0 + x2 * (1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (1.0 / 4725.0 + x2 * (2.0 / 93555.0)))));
        return Ok(xi * one_minus);
    }
    Ok(PI * xi * eta / (PI * xi).tan() + xi)
}

/// Coefficient tables of order `H`.
#[derive(Clone, Debug, Serialize)]
pub struct VaalerApproximant {
    order: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl VaalerApproximant {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Domain("Vaaler order H must be >= 1".into()));
        }
        let hp1 = (order + 1) as f64;
        let mut alpha = Vec::with_capacity(order);
        let mut beta = Vec::with_capacity(order);
        for h in 1..=order {
            let hf = h as f64;
            alpha.push(rho(hf / hp1)? / (PI * hf));
            beta.push((1.0 - hf / hp1) / hp1);
        }
        Ok(Self { order, alpha, beta })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `α_{h,H}` for `h = 1..=H`.
    pub fn alpha(&self, h: usize) -> f64 {
        self.alpha[h - 1]
    }

    /// `β_{h,H}` for `h = 1..=H`.
    pub fn beta(&self, h: usize) -> f64 {
        self.beta[h - 1]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    /// `Σ_H(w)`.
    pub fn sigma(&self, w: f64) -> f64 {
        let w = w - w.floor();
        self.alpha
            .iter()
            .enumerate()
            .map(|(i, a)| a * (2.0 * PI * (i + 1) as f64 * w).sin())
            .sum()
    }

    /// `Σ*_H(w)`.
    pub fn sigma_star(&self, w: f64) -> f64 {
        let w = w - w.floor();
        let tail = 1.0 / (2.0 * self.order as f64 + 2.0);
        self.beta
            .iter()
            .enumerate()
            .map(|(i, b)| b * (2.0 * PI * (i + 1) as f64 * w).cos())
            .sum::<f64>()
            + tail
    }

    /// `Σ*_H(w) - |psi(w) + Σ_H(w)|`; nonnegative wherever the majorant holds.
    pub fn slack(&self, w: f64) -> f64 {
        self.sigma_star(w) - (psi(w) + self.sigma(w)).abs()
    }
}

/// Shorthand for [`VaalerApproximant::new`].
pub fn approximant(order: usize) -> Result<VaalerApproximant> {
    VaalerApproximant::new(order)
}

/// Outcome of sampling the majorant inequality.
#[derive(Clone, Debug, Serialize)]
pub struct VaalerReport {
    pub order: usize,
    pub samples: usize,
    pub violations: usize,
    /// Most negative slack seen (positive when no sample came close).
    pub min_slack: f64,
    pub worst_w: f64,
}

/// Checks `|psi + Σ_H| <= Σ*_H + tolerance` on `samples` seeded uniform points
/// in `[0,1)` plus the grid `j/256`.
pub fn check_majorant(order: usize, samples: usize, seed: u64, tolerance: f64) -> Result<VaalerReport> {
    let approx = VaalerApproximant::new(order)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = (0..256).map(|j| j as f64 / 256.0);
    let random: Vec<f64> = (0..samples).map(|_| rng.gen::<f64>()).collect();
    let mut report = VaalerReport {
        order,
        samples: samples + 256,
        violations: 0,
        min_slack: f64::INFINITY,
        worst_w: 0.0,
    };
    for w in grid.chain(random) {
        let s = approx.slack(w);
        if s < -tolerance {
            report.violations += 1;
        }
        if s < report.min_slack {
            report.min_slack = s;
            report.worst_w = w;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(0.75), 0.25);
        assert_eq!(psi(3.0), -0.5);
        assert_eq!(psi(-0.25), 0.25);
        assert!(psi(-1e-300) < 0.5);
        assert_eq!(psi_rational(&rat(3, 4)), rat(1, 4));
        assert_eq!(psi_rational(&rat(3, 1)), rat(-1, 2));
        assert_eq!(psi_rational(&rat(-1, 4)), rat(1, 4));
        assert_eq!(psi_rational(&rat(-7, 3)), rat(1, 6));
    }

    #[test]
    fn rho_examples() {
        assert!((rho(0.5).unwrap() - 0.5).abs() < 1e-15);
        let want = 3.0 * PI / 16.0 + 0.25;
        assert!((rho(0.25).unwrap() - want).abs() < 1e-15);
        assert!((rho(1e-8).unwrap() - 1.0).abs() < 1e-6);
        assert!(rho(1.0 - 1e-8).unwrap().abs() < 1e-6);
        assert!(rho(0.0).is_err());
        assert!(rho(1.0).is_err());
        assert!(rho(f64::NAN).is_err());
    }

    #[test]
    fn endpoint_series_agree_with_closed_form() {
        let closed = |xi: f64| PI * xi * (1.0 - xi) / (PI * xi).tan() + xi;
        let lower = 0.9 * ENDPOINT_SWITCH;
        assert!((rho(lower).unwrap() - closed(lower)).abs() < 1e-12);
        let upper = 1.0 - 0.9 * UPPER_SWITCH;
        let (a, b) = (rho(upper).unwrap(), closed(upper));
        // the closed form itself loses ~ε/η to cancellation here
        assert!((a - b).abs() < 1e-10 * a, "{a} vs {b}");
    }

    #[test]
    fn order_one_coefficients() {
        let a = approximant(1).unwrap();
        assert!((a.alpha(1) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(a.beta(1), 0.25);
        for h in [1usize, 2, 7, 64] {
            let a = approximant(h).unwrap();
            let hp1 = (h + 1) as f64;
            assert!((a.beta(h) - 1.0 / (hp1 * hp1)).abs() < 1e-16);
            assert_eq!(a.alphas().len(), h);
            assert!(a.betas().iter().all(|b| *b > 0.0));
        }
        assert!(approximant(0).is_err());
    }

    #[test]
    fn sums_at_zero() {
        for h in [1usize, 3, 10] {
            assert_eq!(approximant(h).unwrap().sigma(0.0), 0.0);
        }
        let a = approximant(1).unwrap();
        assert!((a.sigma_star(0.0) - 0.5).abs() < 1e-15);
        assert!(((psi(0.0) + a.sigma(0.0)).abs() - a.sigma_star(0.0)).abs() < 1e-15);
    }

    #[test]
    fn periodic() {
        let a = approximant(16).unwrap();
        for w in [0.1, 0.37, 0.999] {
            assert!((a.sigma(w + 1.0) - a.sigma(w)).abs() < 1e-12);
            assert!((a.sigma_star(w + 1.0) - a.sigma_star(w)).abs() < 1e-12);
        }
    }

    #[test]
    fn majorant_mean_is_constant_term() {
        // trapezoid on a periodic trig polynomial of degree H < N is exact
        for h in [1usize, 4, 32] {
            let a = approximant(h).unwrap();
            let n = 4096;
            let mean: f64 = (0..n).map(|j| a.sigma_star(j as f64 / n as f64)).sum::<f64>() / n as f64;
            assert!((mean - 1.0 / (2.0 * h as f64 + 2.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn majorant_holds_on_samples() {
        for h in [1usize, 2, 4, 8] {
            let r = check_majorant(h, 20_000, 7, 1e-12).unwrap();
            assert_eq!(r.violations, 0, "H={h}: {r:?}");
            assert!(r.min_slack >= -1e-12);
        }
    }
}
