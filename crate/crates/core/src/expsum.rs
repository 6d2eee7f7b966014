//! Exponential sums `Σ G(m) e(F(m))`, the stationary-phase (B-process)
//! transform, and the aggregated dual sum `S(u, U)`.
//!
//! The instance of interest is
//!
//! ```text
//! 𝓔_j(h,u) = Σ_{M_{j+1} < m <= M_j} m(u²-m²)^{l-1} e(-h(u²/(2m) - m/2)),
//! ```
//!
//! with `F(ξ) = -h(u²/(2ξ) - ξ/2)`, `F'(ξ) = h(u²/(2ξ²) + 1/2)` and
//! `F''(ξ) = -hu²/ξ³ < 0`. The stationary point of `F(ξ) - kξ` is
//! `u·sqrt(h/(2k-h))`, where the phase equals `-u·sqrt(h)·sqrt(2k-h)`.

use crate::error::{require_even, Error, Result};
use crate::numeric::{CompensatedSum, DoubleDouble};
use crate::vaaler::VaalerApproximant;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// `e(w) = exp(2πiw)`, reducing `w` modulo 1 first.
pub fn e(w: f64) -> Complex64 {
    let frac = w - w.round();
    let (s, c) = (2.0 * PI * frac).sin_cos();
    Complex64::new(c, s)
}

/// Complex accumulator with compensated real and imaginary parts.
#[derive(Clone, Debug, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `Σ_{A < m <= B} G(m) e(F(m))` over integers `m`.
pub fn exp_sum_direct(g: impl Fn(f64) -> f64, f: impl Fn(f64) -> f64, a: f64, b: f64) -> Complex64 {
    assert!(a < b, "exp_sum_direct needs A < B");
    let mut acc = ComplexSum::new();
    let mut m = a.floor() + 1.0;
    while m <= b {
        acc.add(e(f(m)) * g(m));
        m += 1.0;
    }
    acc.value()
}

/// `J` minimal with `(U-1)·2^{-J-1} < 1`.
pub fn dyadic_depth(big_u: f64) -> u32 {
    let mut j = 0u32;
    while (big_u - 1.0) * 0.5f64.powi(j as i32 + 1) >= 1.0 {
        j += 1;
    }
    j
}

/// `M_j = u·2^{-j}` for `j = 0..=J+1`.
#[derive(Clone, Debug, Serialize)]
pub struct DyadicDecomposition {
    pub u: f64,
    pub depth: u32,
    pub points: Vec<f64>,
}

impl DyadicDecomposition {
    pub fn new(u: f64, big_u: f64) -> Self {
        let depth = dyadic_depth(big_u);
        let points = (0..=depth + 1).map(|j| u * 0.5f64.powi(j as i32)).collect();
        Self { u, depth, points }
    }

    /// `]M_{j+1}, M_j]`.
    pub fn interval(&self, j: u32) -> (f64, f64) {
        (self.points[j as usize + 1], self.points[j as usize])
    }
}

/// `𝒟(U) = {(h,k): 1 <= h <= U, h < k <= K_h}` with `K_h = h/2 + 2^{2J+1}h`.
#[derive(Clone, Debug, Serialize)]
pub struct DomainD {
    pub big_u: f64,
    pub depth: u32,
}

impl DomainD {
    pub fn new(big_u: f64) -> Self {
        Self {
            big_u,
            depth: dyadic_depth(big_u.max(1.0)),
        }
    }

    pub fn h_max(&self) -> u64 {
        if self.big_u < 1.0 {
            0
        } else {
            self.big_u.floor() as u64
        }
    }

    /// `K_{h,U}`.
    pub fn k_bound(&self, h: u64) -> f64 {
        h as f64 / 2.0 + 2f64.powi(2 * self.depth as i32 + 1) * h as f64
    }

    /// Largest integer `k` with `k <= K_h`.
    pub fn k_max(&self, h: u64) -> u64 {
        // K_h is a half-integer multiple of h, exact in f64 at these sizes
        self.k_bound(h).floor() as u64
    }

    pub fn len(&self) -> u64 {
        (1..=self.h_max()).map(|h| self.k_max(h) - h).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, h: u64, k: u64) -> bool {
        h >= 1 && h <= self.h_max() && k > h && k <= self.k_max(h)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (1..=self.h_max()).flat_map(move |h| (h + 1..=self.k_max(h)).map(move |k| (h, k)))
    }
}

/// `h^{3/4}(2k-2h)^{l-1}(2k-h)^{-l-1/4}`, the dual-sum weight.
pub fn dual_weight(h: u64, k: u64, ell: u32) -> f64 {
    let hf = h as f64;
    let a = (2 * k - 2 * h) as f64;
    let b = (2 * k - h) as f64;
    hf.powf(0.75) * a.powi(ell as i32 - 1) * b.powf(-(ell as f64) - 0.25)
}

/// `𝓔_j(h,u)` by direct summation.
///
/// The phase `-h(u²-m²)/(2m)` is reduced in exact integer arithmetic when
/// `u` is an integer and in double-double otherwise.
pub fn curly_e_direct(j: u32, h: u64, u: f64, ell: u32) -> Complex64 {
    let hi = u * 0.5f64.powi(j as i32);
    let lo = hi / 2.0;
    let mut acc = ComplexSum::new();
    let u_sq = DoubleDouble::square_f64(u);
    let int_u = (u.fract() == 0.0 && u < 1e9).then_some(u as i128);
    let mut m = lo.floor() as u64 + 1;
    while (m as f64) <= hi {
        let mf = m as f64;
        let amp = mf * (u * u - mf * mf).powi(ell as i32 - 1);
        let frac = match int_u {
            Some(ui) => {
                let mi = m as i128;
                let num = (h as i128 * (ui * ui - mi * mi)).rem_euclid(2 * mi);
                num as f64 / (2 * mi) as f64
            }
            None => u_sq.add_f64(-mf * mf).mul_f64(h as f64).div_f64(2.0 * mf).fract(),
        };
        acc.add(e(-frac) * amp);
        m += 1;
    }
    acc.value()
}

/// A real phase function with the derivatives the B-process needs.
pub trait Phase {
    fn value(&self, x: f64) -> f64;
    fn d1(&self, x: f64) -> f64;
    fn d2(&self, x: f64) -> f64;
    /// `x` with `F'(x) = k`, on the monotone branch of interest.
    fn stationary_point(&self, k: f64) -> f64;
}

/// `F(ξ) = -h(u²/(2ξ) - ξ/2)`.
#[derive(Clone, Copy, Debug)]
pub struct DyadicPhase {
    pub h: f64,
    pub u: f64,
}

impl Phase for DyadicPhase {
    fn value(&self, x: f64) -> f64 {
        -self.h * (self.u * self.u / (2.0 * x) - x / 2.0)
    }
    fn d1(&self, x: f64) -> f64 {
        self.h * (self.u * self.u / (2.0 * x * x) + 0.5)
    }
    fn d2(&self, x: f64) -> f64 {
        -self.h * self.u * self.u / (x * x * x)
    }
    fn stationary_point(&self, k: f64) -> f64 {
        self.u * (self.h / (2.0 * k - self.h)).sqrt()
    }
}

/// Main term of the B-process:
/// `Σ_{k ∈ F'(]A,B])} G(x_k)/sqrt|F''(x_k)| · e(F(x_k) - k·x_k + sgn(F'')/8)`.
///
/// The image of `]A,B]` is taken half-open as `]min F', max F']`.
pub fn van_der_corput_b(g: impl Fn(f64) -> f64, phase: &impl Phase, a: f64, b: f64) -> Result<Complex64> {
    let (fa, fb) = (phase.d1(a), phase.d1(b));
    let (lo, hi) = if fa <= fb { (fa, fb) } else { (fb, fa) };
    let mut acc = ComplexSum::new();
    let mut k = lo.floor() + 1.0;
    while k <= hi {
        let x = phase.stationary_point(k);
        let slack = 1e-9 * b.abs().max(1.0);
        if !(x >= a - slack && x <= b + slack) {
            return Err(Error::StationaryPointOutOfRange {
                k: k as i64,
                point: x,
                lower: a,
                upper: b,
            });
        }
        let f2 = phase.d2(x);
        let sign = if f2 < 0.0 { -0.125 } else { 0.125 };
        acc.add(e(phase.value(x) - k * x + sign) * (g(x) / f2.abs().sqrt()));
        k += 1.0;
    }
    Ok(acc.value())
}

/// Direct sum, transformed main term and the shape of the error term for one
/// dyadic block.
#[derive(Clone, Debug, Serialize)]
pub struct TransformReport {
    pub h: u64,
    pub u: f64,
    pub ell: u32,
    pub j: u32,
    pub direct_re: f64,
    pub direct_im: f64,
    pub transformed_re: f64,
    pub transformed_im: f64,
    /// `Z(sqrt(Y) + log(2 + |J'|))`, unit constant.
    pub error_bound: f64,
    /// `|direct - transformed| / error_bound`.
    pub kappa: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// `k` runs over `k_lo < k <= k_hi`, both in half-units: `h(4^j+1)/2`.
    pub k_lo: f64,
    pub k_hi: f64,
    pub terms: u64,
}

impl TransformReport {
    pub fn direct(&self) -> Complex64 {
        Complex64::new(self.direct_re, self.direct_im)
    }

    pub fn transformed_main(&self) -> Complex64 {
        Complex64::new(self.transformed_re, self.transformed_im)
    }
}

/// `h^{3/4}u^{2l-1/2}(2k-2h)^{l-1}(2k-h)^{-l-1/4}`.
pub fn transformed_amplitude(h: u64, k: u64, u: f64, ell: u32) -> f64 {
    dual_weight(h, k, ell) * u.powf(2.0 * ell as f64 - 0.5)
}

/// Applies the transform to `𝓔_j(h,u)` and compares with direct summation.
///
/// `F'(M_j) = h(4^j+1)/2` does not depend on `u`, so the dual range
/// `F'(M_j) < k <= F'(M_{j+1})` is decided in integers.
pub fn vdc_transform(h: u64, u: f64, ell: u32, j: u32) -> Result<TransformReport> {
    if h == 0 || !(u > 0.0) {
        return Err(Error::Domain(format!("vdc_transform needs h >= 1 and u > 0, got h={h}, u={u}")));
    }
    let p = 4u64.pow(j);
    // k > h(p+1)/2  and  k <= h(4p+1)/2
    let k_first = h * (p + 1) / 2 + 1;
    let k_last = h * (4 * p + 1) / 2;
    let m_hi = u * 0.5f64.powi(j as i32);
    let m_lo = m_hi / 2.0;
    let phase = DyadicPhase { h: h as f64, u };
    let mut acc = ComplexSum::new();
    for k in k_first..=k_last {
        let x = phase.stationary_point(k as f64);
        let slack = 1e-9 * m_hi;
        if !(x >= m_lo - slack && x <= m_hi + slack) {
            return Err(Error::StationaryPointOutOfRange {
                k: k as i64,
                point: x,
                lower: m_lo,
                upper: m_hi,
            });
        }
        // e(-u·sqrt(h(2k-h)) - 1/8)
        let root = ((h * (2 * k - h)) as f64).sqrt();
        let w = u * root;
        acc.add(e(-(w - w.floor()) - 0.125) * transformed_amplitude(h, k, u, ell));
    }
    let transformed = acc.value();
    let direct = curly_e_direct(j, h, u, ell);
    let x = m_hi;
    let y = m_hi.powi(3) / (h as f64 * u * u);
    let z = m_hi * u.powi(2 * ell as i32 - 2);
    let len = 1.5 * h as f64 * p as f64;
    let error_bound = z * (y.sqrt() + (2.0 + len).ln());
    Ok(TransformReport {
        h,
        u,
        ell,
        j,
        direct_re: direct.re,
        direct_im: direct.im,
        transformed_re: transformed.re,
        transformed_im: transformed.im,
        error_bound,
        kappa: (direct - transformed).norm() / error_bound,
        x,
        y,
        z,
        k_lo: h as f64 * (p + 1) as f64 / 2.0,
        k_hi: h as f64 * (4 * p + 1) as f64 / 2.0,
        terms: k_last + 1 - k_first,
    })
}

/// One `(h,k)` term of `S(u,U)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DualTerm {
    pub h: u64,
    pub k: u64,
    /// `n = h(2k-h)`.
    pub n: u64,
    pub weight: f64,
    pub alpha: f64,
    pub beta: f64,
}

fn check_order(big_u: f64, approx: &VaalerApproximant) -> Result<()> {
    let want = big_u.floor() as usize;
    if approx.order() != want {
        return Err(Error::Domain(format!(
            "S(u,U) needs a Vaaler approximant of order [U] = {want}, got {}",
            approx.order()
        )));
    }
    Ok(())
}

/// Terms of `𝒟(U)` with their weights, grouped by `h` in ascending order.
pub fn dual_terms(big_u: f64, ell: u32, approx: &VaalerApproximant, keep: impl Fn(u64, u64) -> bool + Sync) -> Vec<Vec<DualTerm>> {
    let dom = DomainD::new(big_u);
    (1..=dom.h_max())
        .into_par_iter()
        .map(|h| {
            (h + 1..=dom.k_max(h))
                .filter(|&k| keep(h, k))
                .map(|k| DualTerm {
                    h,
                    k,
                    n: h * (2 * k - h),
                    weight: dual_weight(h, k, ell),
                    alpha: approx.alpha(h as usize),
                    beta: approx.beta(h as usize),
                })
                .collect()
        })
        .collect()
}

/// `sin(φ), cos(φ)` for `φ = 2π·u·sqrt(n) + π/4`, reducing `u·sqrt(n)` mod 1.
pub fn dual_phase(u: f64, n: u64) -> (f64, f64) {
    let w = u * (n as f64).sqrt();
    (2.0 * PI * (w - w.floor()) + PI / 4.0).sin_cos()
}

fn big_s_filtered(u: f64, big_u: f64, ell: u32, approx: &VaalerApproximant, keep: impl Fn(u64, u64) -> bool + Sync) -> Result<f64> {
    require_even(ell)?;
    if big_u < 1.0 {
        return Ok(0.0);
    }
    check_order(big_u, approx)?;
    let groups = dual_terms(big_u, ell, approx, keep);
    let partial: Vec<DoubleDouble> = groups
        .par_iter()
        .map(|g| {
            let mut acc = CompensatedSum::new();
            for t in g {
                let (s, c) = dual_phase(u, t.n);
                acc.add(t.weight * (t.alpha * s - t.beta * c));
            }
            acc.dd()
        })
        .collect();
    // fixed order merge
    let mut total = DoubleDouble::ZERO;
    for p in partial {
        total += p;
    }
    Ok(total.to_f64())
}

/// `S(u,U) = Σ_{𝒟(U)} w(h,k)·(α_{h,[U]} sin φ - β_{h,[U]} cos φ)`,
/// `φ = 2πu·sqrt(h(2k-h)) + π/4`.
pub fn big_s(u: f64, big_u: f64, ell: u32, approx: &VaalerApproximant) -> Result<f64> {
    big_s_filtered(u, big_u, ell, approx, |_, _| true)
}

/// `S(u,U)` restricted to the pairs accepted by `keep`.
pub fn big_s_subset(
    u: f64,
    big_u: f64,
    ell: u32,
    approx: &VaalerApproximant,
    keep: impl Fn(u64, u64) -> bool + Sync,
) -> Result<f64> {
    big_s_filtered(u, big_u, ell, approx, keep)
}

/// `true` when `h(2k-h)` is a perfect square.
pub fn is_square_pair(h: u64, k: u64) -> bool {
    let n = h * (2 * k - h);
    let r = num_integer::Roots::sqrt(&n);
    r * r == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn direct_sum_examples() {
        let s = exp_sum_direct(|_| 1.0, |_| 0.0, 0.0, 10.0);
        assert!((s - Complex64::new(10.0, 0.0)).norm() < 1e-14);
        let s = exp_sum_direct(|_| 1.0, |m| m / 2.0, 0.0, 4.0);
        assert!(s.norm() < 1e-14);
        let alpha = 2f64.sqrt();
        let s = exp_sum_direct(|m| m, |m| m * alpha, 0.0, 200.0);
        // reference: descending order, plain complex accumulation
        let mut r = Complex64::new(0.0, 0.0);
        for m in (1..=200).rev() {
            let mf = m as f64;
            r += Complex64::from_polar(mf, 2.0 * PI * (mf * alpha).fract());
        }
        assert!((s - r).norm() < 1e-12 * 200.0 * 200.0);
    }

    #[test]
    fn dyadic_depth_examples() {
        assert_eq!(dyadic_depth(10.0), 3);
        assert_eq!(dyadic_depth(1.0), 0);
        assert_eq!(dyadic_depth(2.9), 0);
        assert_eq!(dyadic_depth(3.0), 1);
        let d = DyadicDecomposition::new(64.0, 10.0);
        assert_eq!(d.points, vec![64.0, 32.0, 16.0, 8.0, 4.0]);
        assert_eq!(d.interval(0), (32.0, 64.0));
    }

    #[test]
    fn domain_examples() {
        let d = DomainD::new(10.0);
        assert_eq!(d.depth, 3);
        assert_eq!(d.k_bound(2), 1.0 + 256.0);
        assert!(d.contains(1, 2));
        assert!(!d.contains(1, 1));
        assert!(!d.contains(11, 12));
        assert_eq!(d.pairs().count() as u64, d.len());
        assert!(DomainD::new(0.5).is_empty());
        for h in 1..=10 {
            assert!(d.k_bound(h) > h as f64);
        }
    }

    #[test]
    fn curly_e_examples() {
        assert_eq!(curly_e_direct(5, 1, 10.0, 2), Complex64::new(0.0, 0.0));
        // endpoint m = u contributes nothing
        let one = curly_e_direct(0, 1, 3.0, 2);
        let without = exp_sum_direct(|m| m * (9.0 - m * m), |m| -(9.0 / (2.0 * m) - m / 2.0), 1.5, 2.0);
        assert!((one - without).norm() < 1e-12);
        let u = 64.0;
        let direct = curly_e_direct(0, 1, u, 2);
        let generic = exp_sum_direct(|m| m * (u * u - m * m), |m| -(u * u / (2.0 * m) - m / 2.0), 32.0, 64.0);
        assert!((direct - generic).norm() < 1e-10 * direct.norm().max(1.0), "{direct} vs {generic}");
        let real = curly_e_direct(1, 2, 64.25, 2);
        let generic = exp_sum_direct(
            |m| m * (64.25f64.powi(2) - m * m),
            |m| -2.0 * (64.25f64.powi(2) / (2.0 * m) - m / 2.0),
            64.25 / 4.0,
            64.25 / 2.0,
        );
        assert!((real - generic).norm() < 1e-9 * real.norm().max(1.0));
    }

    #[test]
    fn stationary_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let h = rng.gen_range(1..6u64);
            let u: f64 = rng.gen_range(10.0..300.0);
            let k = rng.gen_range(h + 1..h * 200 + 2);
            let ph = DyadicPhase { h: h as f64, u };
            let x = ph.stationary_point(k as f64);
            assert!((ph.d1(x) - k as f64).abs() < 1e-9 * k as f64);
            let phase = ph.value(x) - k as f64 * x;
            let want = -u * (h as f64).sqrt() * ((2 * k - h) as f64).sqrt();
            assert!((phase - want).abs() < 1e-9 * want.abs());
            let g = x * (u * u - x * x);
            let amp = g / ph.d2(x).abs().sqrt();
            let want = transformed_amplitude(h, k, u, 2);
            assert!((amp - want).abs() < 1e-9 * want.abs(), "{amp} vs {want}");
        }
    }

    #[test]
    fn k_range_starts_above_h_at_j0() {
        let r = vdc_transform(3, 50.0, 2, 0).unwrap();
        assert_eq!(r.k_lo, 3.0);
        assert!(r.terms > 0);
        let ph = DyadicPhase { h: 3.0, u: 50.0 };
        assert_eq!(ph.d1(50.0), 3.0);
    }

    #[test]
    fn closed_form_matches_generic_transform() {
        for (h, u, j) in [(1u64, 50.0, 0u32), (2, 100.0, 1), (3, 77.5, 0)] {
            let r = vdc_transform(h, u, 2, j).unwrap();
            let hi = u * 0.5f64.powi(j as i32);
            let generic = van_der_corput_b(|x| x * (u * u - x * x), &DyadicPhase { h: h as f64, u }, hi / 2.0, hi).unwrap();
            let main = r.transformed_main();
            assert!((generic - main).norm() < 1e-8 * main.norm().max(1.0), "{generic} vs {main}");
        }
    }

    #[test]
    fn transform_tracks_direct_sum() {
        for u in [50.0, 100.0] {
            let r = vdc_transform(1, u, 2, 0).unwrap();
            assert!(r.kappa < 1.0, "{r:?}");
            assert!(r.x > 0.0 && r.y > 0.0 && r.z > 0.0 && r.error_bound > 0.0);
        }
    }

    #[test]
    fn big_s_examples() {
        let a = VaalerApproximant::new(1).unwrap();
        assert_eq!(big_s(3.0, 0.5, 2, &a).unwrap(), 0.0);
        assert!(big_s(3.0, 1.0, 3, &a).is_err());
        assert!(big_s(3.0, 2.0, 2, &a).is_err());
        let a10 = VaalerApproximant::new(10).unwrap();
        let s = big_s(12.3, 10.0, 2, &a10).unwrap();
        // reference: serial double loop
        let d = DomainD::new(10.0);
        let mut r = 0.0;
        for (h, k) in d.pairs() {
            let phi = 2.0 * PI * 12.3 * ((h * (2 * k - h)) as f64).sqrt() + PI / 4.0;
            r += dual_weight(h, k, 2) * (a10.alpha(h as usize) * phi.sin() - a10.beta(h as usize) * phi.cos());
        }
        assert!((s - r).abs() < 1e-9, "{s} vs {r}");
    }

    #[test]
    fn square_subset_is_periodic() {
        let a = VaalerApproximant::new(6).unwrap();
        let base = big_s_subset(7.3, 6.0, 2, &a, is_square_pair).unwrap();
        for p in [1.0, 2.0, 5.0] {
            let shifted = big_s_subset(7.3 + p, 6.0, 2, &a, is_square_pair).unwrap();
            assert!((base - shifted).abs() < 1e-9 * base.abs().max(1.0));
        }
        assert!(is_square_pair(1, 5));
        assert!(!is_square_pair(1, 2));
    }

    #[test]
    fn transform_modulus_sanity() {
        let r = vdc_transform(2, 100.0, 2, 1).unwrap();
        let max_amp = (r.k_lo.floor() as u64 + 1..=r.k_hi.floor() as u64)
            .map(|k| transformed_amplitude(2, k, 100.0, 2))
            .fold(0.0, f64::max);
        assert!(r.transformed_main().norm() <= r.terms as f64 * max_amp);
    }
}
