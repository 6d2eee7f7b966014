//! The Fejér kernel `F_T(v) = T(sin(πTv)/(πTv))²` and the smoothed dual sum
//!
//! ```text
//! I(T,U) = ∫_{-1}^{1} S(U+v, U) F_T(v) dv.
//! ```
//!
//! Each term of `S(U+v,U)` is `w·(α sin(φ + 2πv·sqrt(n)) - β cos(φ + 2πv·sqrt(n)))`
//! with `φ = 2πU·sqrt(n) + π/4`. As `F_T` is even, integrating it against
//! that term gives `w·G(sqrt(n))·(α sin φ - β cos φ)` with
//! `G(Q) = ∫_{-1}^{1} F_T(v) cos(2πQv) dv`. [`i_numeric`] evaluates `G` from a
//! Legendre expansion of `F_T` sampled on a Gauss–Legendre rule, using
//! `∫ P_k(v) e^{ixv} dv = 2 i^k j_k(x)`; the oscillatory factor is integrated
//! exactly, so the node count only has to resolve `F_T`.

use crate::error::{require_even, Error, Result};
use crate::expsum::{big_s, dual_phase, dual_terms, DualTerm};
use crate::numeric::bessel::spherical_bessel_j;
use crate::numeric::quadrature::{gauss_legendre, integrate_adaptive, CompositeRule};
use crate::numeric::{CompensatedSum, DoubleDouble};
use crate::vaaler::VaalerApproximant;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Default Gauss–Legendre node count for [`i_numeric`].
pub const DEFAULT_NODES: usize = 2048;

/// `F_T(v)`, with the removable singularity at 0 filled in.
pub fn fejer(t: f64, v: f64) -> f64 {
    let x = PI * t * v;
    if x.abs() < 1e-8 {
        return t * (1.0 - x * x / 3.0);
    }
    let s = x.sin() / x;
    t * s * s
}

/// Quadrature value, closed form and their distance for
/// `∫_{-1}^{1} F_T(v) e(Qv + δ) dv` against `max(1 - Q/T, 0) e(δ)`.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma3Report {
    pub t: f64,
    pub q: f64,
    pub delta: f64,
    pub numeric_re: f64,
    pub numeric_im: f64,
    pub closed_re: f64,
    pub closed_im: f64,
    pub defect: f64,
}

impl Lemma3Report {
    pub fn numeric(&self) -> Complex64 {
        Complex64::new(self.numeric_re, self.numeric_im)
    }

    pub fn closed(&self) -> Complex64 {
        Complex64::new(self.closed_re, self.closed_im)
    }
}

pub const LEMMA3_TOLERANCE: f64 = 1e-10;

pub fn lemma3_check(t: f64, q: f64, delta: f64) -> Result<Lemma3Report> {
    if !(q > 0.0) || !(t >= 1.0) {
        return Err(Error::Domain(format!("lemma3 needs T >= 1 and Q > 0, got T={t}, Q={q}")));
    }
    // F_T is even, so the integral is e(δ)·∫ F_T(v) cos(2πQv) dv
    let panels = (4.0 * (t + q)).ceil() as usize;
    let g = integrate_adaptive(
        |v| fejer(t, v) * (2.0 * PI * q * v).cos(),
        -1.0,
        1.0,
        LEMMA3_TOLERANCE,
        panels,
        200_000,
    )?;
    let phase = crate::expsum::e(delta);
    let numeric = phase * g;
    let closed = phase * (1.0 - q / t).max(0.0);
    Ok(Lemma3Report {
        t,
        q,
        delta,
        numeric_re: numeric.re,
        numeric_im: numeric.im,
        closed_re: closed.re,
        closed_im: closed.im,
        defect: (numeric - closed).norm(),
    })
}

/// `∫_{-1}^{1} F_T` by adaptive quadrature.
pub fn fejer_mass(t: f64) -> Result<f64> {
    integrate_adaptive(|v| fejer(t, v), -1.0, 1.0, 1e-13, (8.0 * t).ceil() as usize, 100_000)
}

/// Legendre expansion `F_T ≈ Σ a_{2k} P_{2k}` on `[-1,1]`.
#[derive(Clone, Debug)]
pub struct FejerLegendre {
    pub t: f64,
    pub nodes: usize,
    coeffs: Vec<f64>,
}

impl FejerLegendre {
    /// Projects `F_T` onto Legendre polynomials with an `nodes`-point rule.
    pub fn new(t: f64, nodes: usize) -> Result<Self> {
        if !(t >= 1.0) {
            return Err(Error::Domain(format!("Fejér kernel needs T >= 1, got {t}")));
        }
        // F_T has about 2T oscillations on [-1,1]
        let needed = (16.0 * t).ceil() as usize;
        if nodes < needed {
            return Err(Error::Domain(format!(
                "{nodes} nodes under-resolve F_T at T={t}; need at least {needed}"
            )));
        }
        let (x, w) = gauss_legendre(nodes);
        let f: Vec<f64> = x.iter().map(|&v| fejer(t, v)).collect();
        // F_T is entire of exponential type πT; its coefficients decay
        // superexponentially once k exceeds ~πT
        let kmax = ((PI * t * 2.0) as usize + 80).min(nodes - 1);
        let mut coeffs = vec![0.0; kmax + 1];
        let mut p_prev = vec![1.0; nodes];
        let mut p_cur = x.clone();
        for (k, c) in coeffs.iter_mut().enumerate() {
            let pk: &[f64] = match k {
                0 => &p_prev,
                _ => &p_cur,
            };
            let mut acc = CompensatedSum::new();
            for i in 0..nodes {
                acc.add(w[i] * f[i] * pk[i]);
            }
            *c = (2 * k + 1) as f64 / 2.0 * acc.value();
            if k >= 1 {
                // advance P_k -> P_{k+1}
                let kf = k as f64;
                let next: Vec<f64> = (0..nodes)
                    .map(|i| ((2.0 * kf + 1.0) * x[i] * p_cur[i] - kf * p_prev[i]) / (kf + 1.0))
                    .collect();
                p_prev = std::mem::replace(&mut p_cur, next);
            }
        }
        Ok(Self { t, nodes, coeffs })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// `G(Q) = ∫_{-1}^{1} F_T(v) cos(2πQv) dv`.
    pub fn cosine_moment(&self, q: f64) -> f64 {
        let kmax = self.coeffs.len() - 1;
        let j = spherical_bessel_j(kmax, 2.0 * PI * q.abs());
        let mut acc = CompensatedSum::new();
        for k in (0..=kmax).step_by(2) {
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            acc.add(self.coeffs[k] * 2.0 * sign * j[k]);
        }
        acc.value()
    }
}

fn smoothed_sum(groups: &[Vec<DualTerm>], big_u: f64, factor: impl Fn(&DualTerm) -> f64 + Sync) -> f64 {
    let partial: Vec<DoubleDouble> = groups
        .par_iter()
        .map(|g| {
            let mut acc = CompensatedSum::new();
            for t in g {
                let f = factor(t);
                if f == 0.0 {
                    continue;
                }
                let (s, c) = dual_phase(big_u, t.n);
                acc.add(t.weight * f * (t.alpha * s - t.beta * c));
            }
            acc.dd()
        })
        .collect();
    let mut total = DoubleDouble::ZERO;
    for p in partial {
        total += p;
    }
    total.to_f64()
}

fn approximant_for(big_u: f64) -> Result<Option<VaalerApproximant>> {
    if big_u < 1.0 {
        return Ok(None);
    }
    Ok(Some(VaalerApproximant::new(big_u.floor() as usize)?))
}

/// `I(T,U)` with the default node count.
pub fn i_numeric(t: f64, big_u: f64, ell: u32) -> Result<f64> {
    i_numeric_with_nodes(t, big_u, ell, DEFAULT_NODES)
}

/// `I(T,U)` with `F_T` resolved on `nodes` Gauss–Legendre points.
pub fn i_numeric_with_nodes(t: f64, big_u: f64, ell: u32, nodes: usize) -> Result<f64> {
    require_even(ell)?;
    let kernel = FejerLegendre::new(t, nodes)?;
    let Some(approx) = approximant_for(big_u)? else {
        return Ok(0.0);
    };
    let groups = dual_terms(big_u, ell, &approx, |_, _| true);
    Ok(smoothed_sum(&groups, big_u, |term| kernel.cosine_moment((term.n as f64).sqrt())))
}

/// `I(T,U)` by sampling `S(U+v,U)·F_T(v)` on a composite Gauss–Legendre rule.
///
/// Costs one full `S` evaluation per node; meant for small `U`.
pub fn i_sampled(t: f64, big_u: f64, ell: u32, panels: usize, order: usize) -> Result<f64> {
    require_even(ell)?;
    let Some(approx) = approximant_for(big_u)? else {
        return Ok(0.0);
    };
    let rule = CompositeRule::new(-1.0, 1.0, panels, order);
    let values: Vec<f64> = rule
        .nodes
        .par_iter()
        .map(|&v| big_s(big_u + v, big_u, ell, &approx).map(|s| s * fejer(t, v)))
        .collect::<Result<_>>()?;
    let mut acc = CompensatedSum::new();
    for (f, w) in values.iter().zip(&rule.weights) {
        acc.add(f * w);
    }
    Ok(acc.value())
}

/// Truncated form of `I(T,U)` and its error budget.
#[derive(Clone, Debug, Serialize)]
pub struct TruncatedSum {
    pub value: f64,
    /// `Σ_{𝒟(U)} h^{-3/4}(2k-2h)^{l-1}(2k-h)^{-l-3/4}`.
    pub tail_budget: f64,
    pub terms: usize,
}

/// `Σ_{h(2k-h) <= T²} w(h,k)(1 - sqrt(h(2k-h))/T)(α sin φ - β cos φ)`.
pub fn i_truncated(t: f64, big_u: f64, ell: u32) -> Result<TruncatedSum> {
    require_even(ell)?;
    let Some(approx) = approximant_for(big_u)? else {
        return Ok(TruncatedSum {
            value: 0.0,
            tail_budget: 0.0,
            terms: 0,
        });
    };
    let t2 = t * t;
    let groups = dual_terms(big_u, ell, &approx, |h, k| (h * (2 * k - h)) as f64 <= t2);
    let terms = groups.iter().map(Vec::len).sum();
    let value = smoothed_sum(&groups, big_u, |term| 1.0 - (term.n as f64).sqrt() / t);
    Ok(TruncatedSum {
        value,
        tail_budget: tail_budget(big_u, ell),
        terms,
    })
}

/// `Σ_{𝒟(U)} h^{-3/4}(2k-2h)^{l-1}(2k-h)^{-l-3/4}`: the summed `O(1/Q)`
/// defects, each term weighted by `α_h <= 1/(πh)`-scale coefficients.
pub fn tail_budget(big_u: f64, ell: u32) -> f64 {
    let dom = crate::expsum::DomainD::new(big_u);
    let partial: Vec<f64> = (1..=dom.h_max())
        .into_par_iter()
        .map(|h| {
            let hf = h as f64;
            let mut acc = CompensatedSum::new();
            for k in h + 1..=dom.k_max(h) {
                let a = (2 * k - 2 * h) as f64;
                let b = (2 * k - h) as f64;
                acc.add(hf.powf(-0.75) * a.powi(ell as i32 - 1) * b.powf(-(ell as f64) - 0.75));
            }
            acc.value()
        })
        .collect();
    partial.iter().sum()
}
