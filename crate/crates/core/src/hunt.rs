//! Scans for large normalized remainders and mean-square growth fits.
//!
//! On the `u` scale (`t = 2πu²`) the conjectured extreme size `t^{l-1/4}` of
//! the remainder becomes `u^{2l-1/2}`; [`ScanRecord`] carries `E(u)` divided
//! by that, with and without the extra `(log u)^{1/4}`.

use crate::error::{Error, Result};
use crate::numeric::quadrature::gauss_legendre;
use crate::numeric::{fmt_real, json_real, CompensatedSum};
use crate::spectrum::{e_exact, e_exact_with, normalization, HeisenbergManifold, Precision};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRecord {
    pub u: f64,
    pub t: f64,
    pub e: f64,
    /// `E / u^{2l-1/2}`.
    pub norm1: f64,
    /// `E / (u^{2l-1/2} (log u)^{1/4})`.
    pub norm2: f64,
}

impl ScanRecord {
    pub fn new(ell: u32, u: f64, e: f64) -> Self {
        let norm1 = e / u.powf(2.0 * ell as f64 - 0.5);
        Self {
            u,
            t: 2.0 * PI * u * u,
            e,
            norm1,
            norm2: norm1 / u.ln().powf(0.25),
        }
    }
}

/// Largest `|norm2|` seen inside one decade of `u`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecadeMax {
    pub decade_start: f64,
    pub u: f64,
    pub abs_norm2: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanResult {
    pub records: Vec<ScanRecord>,
    /// Running maximum of `|norm2|`, one entry per record.
    pub running_max: Vec<f64>,
    pub decades: Vec<DecadeMax>,
    /// Whether the per-decade maxima never decrease (diagnostic only).
    pub decade_maxima_nondecreasing: bool,
}

impl ScanResult {
    /// The record attaining the final running maximum (first on ties).
    pub fn argmax(&self) -> Option<&ScanRecord> {
        let best = *self.running_max.last()?;
        self.records.iter().find(|r| r.norm2.abs() == best)
    }
}

/// `u_min + i·step` for `i = 0, 1, ...` up to `u_max`.
pub fn scan_grid(u_min: f64, u_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(u_min > 1.0 && u_min < u_max && step > 0.0) {
        return Err(Error::Domain(format!(
            "scan needs 1 < u_min < u_max and step > 0, got [{u_min}, {u_max}] step {step}"
        )));
    }
    let n = ((u_max - u_min) / step * (1.0 + 1e-12)).floor() as usize;
    Ok((0..=n).map(|i| u_min + i as f64 * step).collect())
}

/// `E(u)` under a precision mode; exact at integer `u²` in extended mode.
pub fn remainder_at(m: &HeisenbergManifold, u: f64, precision: Precision) -> f64 {
    match precision {
        Precision::Extended => e_exact(m, u),
        Precision::Fast => e_exact_with(m, u, Precision::Fast),
    }
}

pub fn omega_scan(m: &HeisenbergManifold, u_min: f64, u_max: f64, step: f64, precision: Precision) -> Result<ScanResult> {
    let grid = scan_grid(u_min, u_max, step)?;
    let ell = m.ell();
    let records: Vec<ScanRecord> = grid
        .par_iter()
        .map(|&u| ScanRecord::new(ell, u, remainder_at(m, u, precision)))
        .collect();
    Ok(summarize(records))
}

/// Running maxima and decade diagnostics for already computed records.
pub fn summarize(records: Vec<ScanRecord>) -> ScanResult {
    let mut running_max = Vec::with_capacity(records.len());
    let mut best = 0.0f64;
    let mut decades: Vec<DecadeMax> = Vec::new();
    for r in &records {
        let a = r.norm2.abs();
        best = best.max(a);
        running_max.push(best);
        let start = 10f64.powf(r.u.log10().floor());
        match decades.last_mut() {
            Some(d) if d.decade_start == start => {
                if a > d.abs_norm2 {
                    d.abs_norm2 = a;
                    d.u = r.u;
                }
            }
            _ => decades.push(DecadeMax {
                decade_start: start,
                u: r.u,
                abs_norm2: a,
            }),
        }
    }
    let nondecreasing = decades.windows(2).all(|w| w[1].abs_norm2 >= w[0].abs_norm2);
    ScanResult {
        records,
        running_max,
        decades,
        decade_maxima_nondecreasing: nondecreasing,
    }
}

pub const SCAN_HEADER: &str = "u,t,E,norm1,norm2";

pub fn scan_csv(records: &[ScanRecord]) -> String {
    let mut s = String::with_capacity(records.len() * 96);
    s.push_str(SCAN_HEADER);
    s.push('\n');
    for r in records {
        writeln!(s, "{},{},{},{},{}", fmt_real(r.u), fmt_real(r.t), fmt_real(r.e), fmt_real(r.norm1), fmt_real(r.norm2)).unwrap();
    }
    s
}

pub fn scan_json(records: &[ScanRecord]) -> String {
    let mut s = String::from("[");
    for (i, r) in records.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        write!(
            s,
            "\n{{\"u\":{},\"t\":{},\"E\":{},\"norm1\":{},\"norm2\":{}}}",
            json_real(r.u),
            json_real(r.t),
            json_real(r.e),
            json_real(r.norm1),
            json_real(r.norm2)
        )
        .unwrap();
    }
    s.push_str("\n]\n");
    s
}

/// Ordinary least squares of `log y` on `log x`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

pub fn exponent_fit(pairs: &[(f64, f64)]) -> Result<ExponentFit> {
    if pairs.len() < 3 {
        return Err(Error::DegenerateInput(format!("need >= 3 pairs, got {}", pairs.len())));
    }
    if let Some(p) = pairs.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::DegenerateInput(format!("non-positive pair {p:?}")));
    }
    let n = pairs.len() as f64;
    let lx: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateInput("all x equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(ExponentFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanSquareFit {
    pub t_grid: Vec<f64>,
    /// `∫_0^T R(t)² dt` at each grid point.
    pub integrals: Vec<f64>,
    pub fitted_exponent: f64,
    /// `exp(intercept)` of the free-exponent fit.
    pub fitted_prefactor: f64,
    /// Mean of `integral / T^{2l+1/2}` over the upper half of the grid.
    pub fitted_c: f64,
    pub residual: f64,
}

/// Largest panel width in `u` for the mean-square quadrature.
pub const U_PANEL: f64 = 0.25;

/// Decades of `T` spanned by the default mean-square grid.
pub const DEFAULT_DECADES: f64 = 3.0;

/// `T_i = T_max·10^{-d(1 - i/(n-1))}` for a span of `d` decades.
pub fn mean_square_grid(t_max: f64, n_grid: usize, decades: f64) -> Vec<f64> {
    (0..n_grid)
        .map(|i| t_max * 10f64.powf(-decades * (1.0 - i as f64 / (n_grid - 1) as f64)))
        .collect()
}

/// Mean-square integrals of an arbitrary signal `R(t)` and the power fit.
///
/// Integrates `R(2πu²)²·4πu du` with two-point Gauss–Legendre panels of width
/// at most [`U_PANEL`], panel edges including every grid point.
pub fn mean_square_with(
    signal: impl Fn(f64) -> f64 + Sync,
    ell: u32,
    t_max: f64,
    n_grid: usize,
    decades: f64,
) -> Result<MeanSquareFit> {
    if !(t_max > 1.0) || n_grid < 16 || !(decades > 0.0) {
        return Err(Error::Domain(format!(
            "mean square needs T_max > 1, n_grid >= 16 and a positive span, got {t_max}, {n_grid}, {decades}"
        )));
    }
    let t_grid = mean_square_grid(t_max, n_grid, decades);
    let u_of = |t: f64| (t / (2.0 * PI)).sqrt();
    let (x, w) = gauss_legendre(2);
    // panels between consecutive grid points (and 0 .. first point)
    let mut edges = vec![0.0];
    edges.extend(t_grid.iter().map(|&t| u_of(t)));
    let segments: Vec<f64> = edges
        .windows(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|e| {
            let (a, b) = (e[0], e[1]);
            let panels = ((b - a) / U_PANEL).ceil().max(1.0) as usize;
            let hw = (b - a) / panels as f64 / 2.0;
            let mut acc = CompensatedSum::new();
            for p in 0..panels {
                let mid = a + (2 * p + 1) as f64 * hw;
                for (xi, wi) in x.iter().zip(&w) {
                    let u = mid + hw * xi;
                    let r = signal(2.0 * PI * u * u);
                    acc.add(wi * hw * r * r * 4.0 * PI * u);
                }
            }
            acc.value()
        })
        .collect();
    let mut integrals = Vec::with_capacity(n_grid);
    let mut running = CompensatedSum::new();
    for s in segments {
        running.add(s);
        integrals.push(running.value());
    }
    if integrals.iter().all(|&v| v == 0.0) {
        return Err(Error::NoSignal);
    }
    let pairs: Vec<(f64, f64)> = t_grid
        .iter()
        .zip(&integrals)
        .filter(|(_, &v)| v > 0.0)
        .map(|(&t, &v)| (t, v))
        .collect();
    let fit = exponent_fit(&pairs)?;
    let expo = 2.0 * ell as f64 + 0.5;
    let upper = &pairs[pairs.len() / 2..];
    let fitted_c = upper.iter().map(|(t, v)| v / t.powf(expo)).sum::<f64>() / upper.len() as f64;
    Ok(MeanSquareFit {
        t_grid,
        integrals,
        fitted_exponent: fit.slope,
        fitted_prefactor: fit.intercept.exp(),
        fitted_c,
        residual: fit.residual,
    })
}

/// Mean square of the type-II oscillation `R(t) = E(u)/normalization`.
pub fn mean_square(
    m: &HeisenbergManifold,
    t_max: f64,
    n_grid: usize,
    decades: f64,
    precision: Precision,
) -> Result<MeanSquareFit> {
    let norm = normalization(m);
    mean_square_with(
        |t| {
            let u = (t / (2.0 * PI)).sqrt();
            if u < 1.0 {
                0.0
            } else {
                e_exact_with(m, u, precision) / norm
            }
        },
        m.ell(),
        t_max,
        n_grid,
        decades,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fit_examples() {
        let sq: Vec<(f64, f64)> = (1..10).map(|x| (x as f64, (x * x) as f64)).collect();
        let f = exponent_fit(&sq).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && f.residual < 1e-12);
        let p: Vec<(f64, f64)> = (1..10).map(|x| (x as f64, 5.0 * (x as f64).powf(4.5))).collect();
        let f = exponent_fit(&p).unwrap();
        assert!((f.slope - 4.5).abs() < 1e-12);
        assert!((f.intercept - 5f64.ln()).abs() < 1e-12);
        assert!(matches!(exponent_fit(&[(2.0, 1.0), (2.0, 3.0), (2.0, 4.0)]), Err(Error::DegenerateInput(_))));
        assert!(exponent_fit(&[(1.0, 1.0), (2.0, 3.0)]).is_err());
        assert!(exponent_fit(&[(1.0, 1.0), (2.0, -3.0), (3.0, 1.0)]).is_err());
    }

    #[test]
    fn noisy_fit() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p: Vec<(f64, f64)> = (0..200)
            .map(|i| {
                let x = 10f64.powf(i as f64 / 40.0);
                (x, x.powf(4.5) * (1.0 + 0.01 * rng.gen_range(-1.0..1.0)))
            })
            .collect();
        assert!((exponent_fit(&p).unwrap().slope - 4.5).abs() < 0.05);
    }

    #[test]
    fn record_normalization() {
        let r = ScanRecord::new(2, 3.0, 6.5);
        assert_eq!(r.t, 2.0 * PI * 9.0);
        assert_eq!(r.norm1, 6.5 / 3f64.powf(3.5));
        assert_eq!(r.norm2, r.norm1 / 3f64.ln().powf(0.25));
    }

    #[test]
    fn scan_running_max() {
        let m = HeisenbergManifold::standard(2).unwrap();
        let s = omega_scan(&m, 16.0, 400.0, 0.5, Precision::Extended).unwrap();
        assert!(s.running_max.windows(2).all(|w| w[1] >= w[0]));
        let independent = s.records.iter().map(|r| r.norm2.abs()).fold(0.0, f64::max);
        assert_eq!(*s.running_max.last().unwrap(), independent);
        assert_eq!(s.argmax().unwrap().norm2.abs(), independent);
        assert_eq!(s.decades.len(), 2);
        assert!(omega_scan(&m, 1.0, 5.0, 1.0, Precision::Fast).is_err());
    }

    #[test]
    fn csv_and_json_shape() {
        let recs = vec![ScanRecord::new(2, 3.0, 6.5), ScanRecord::new(2, 4.0, -1.0)];
        let csv = scan_csv(&recs);
        assert!(csv.starts_with("u,t,E,norm1,norm2\n3,"));
        assert_eq!(csv.lines().count(), 3);
        let v: serde_json::Value = serde_json::from_str(&scan_json(&recs)).unwrap();
        assert_eq!(v[0]["E"], 6.5);
        assert_eq!(v[1]["u"], 4.0);
    }

    #[test]
    fn synthetic_mean_square_exponent() {
        let f = mean_square_with(|t| t.powf(1.75), 2, 1e6, 24, DEFAULT_DECADES).unwrap();
        assert!((f.fitted_exponent - 4.5).abs() < 0.05, "{f:?}");
        assert!(f.integrals.windows(2).all(|w| w[1] >= w[0]));
        assert!(matches!(mean_square_with(|_| 0.0, 2, 1e4, 16, DEFAULT_DECADES), Err(Error::NoSignal)));
        assert!(mean_square_with(|t| t, 2, 1e4, 4, DEFAULT_DECADES).is_err());
    }

    #[test]
    fn oscillating_synthetic_exponent() {
        // sin²(log t) has period π in log T; the grid must cover several periods
        let f = mean_square_with(|t| t.powf(1.75) * t.max(1.0).ln().sin(), 2, 1e8, 32, 6.0).unwrap();
        assert!((f.fitted_exponent - 4.5).abs() < 0.05, "{f:?}");
    }
}
