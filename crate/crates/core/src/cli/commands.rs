use super::config::RunConfig;
use super::table::{Cell, Table};
use super::Command;
use crate::diophantine::dirichlet_search;
use crate::error::{Error, Result};
use crate::expsum::vdc_transform;
use crate::hunt::{mean_square, mean_square_with, omega_scan, scan_grid, summarize, ScanRecord, ScanResult};
use crate::numeric::fmt_real;
use crate::smoothing::lemma3_check;
use crate::spectrum::{count_report, CacheRecord, RemainderCache};
use crate::vaaler::check_majorant;
use rayon::prelude::*;

pub struct Outcome {
    pub table: Table,
    pub summary: Vec<String>,
    pub check_failed: bool,
}

impl Outcome {
    fn ok(table: Table, summary: Vec<String>) -> Self {
        Self {
            table,
            summary,
            check_failed: false,
        }
    }
}

fn parse_list<T: std::str::FromStr>(name: &str, s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|p| p.trim().parse().map_err(|e| Error::Parse(format!("--{name} entry {p:?}: {e}"))))
        .collect()
}

pub fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Count { t } => count(cfg, *t),
        Command::Scan { u_min, u_max, step } => scan(cfg, *u_min, *u_max, *step),
        Command::VaalerCheck { order, samples, tolerance } => vaaler(cfg, *order, *samples, *tolerance),
        Command::TransformCheck { u, h, j } => transform(cfg, u, h, j),
        Command::Dirichlet { t, budget, certificate } => dirichlet(*t, *budget, certificate.as_deref()),
        Command::MeanSquare { t_max, n_grid, decades, synthetic } => mean_sq(cfg, *t_max, *n_grid, *decades, *synthetic),
        Command::Lemma3 { t, q, delta } => lemma3(*t, *q, *delta),
    }
}

fn count(cfg: &RunConfig, t: f64) -> Result<Outcome> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("--t must be finite and >= 0, got {t}")));
    }
    let m = cfg.manifold()?;
    let r = count_report(&m, t);
    let mut table = Table::new(&["t", "N", "N_I", "N_II", "main_term", "R"]);
    table.push(vec![
        t.into(),
        (&r.n).into(),
        (&r.n_i).into(),
        (&r.n_ii).into(),
        r.main_term.into(),
        r.r.into(),
    ]);
    Ok(Outcome::ok(table, vec![format!("N = {}  R = {}", r.n, fmt_real(r.r))]))
}

fn scan_with_cache(cfg: &RunConfig, dir: &std::path::Path, u_min: f64, u_max: f64, step: f64) -> Result<ScanResult> {
    let m = cfg.manifold()?;
    let grid = scan_grid(u_min, u_max, step)?;
    let mut cache = RemainderCache::open(dir, &m, cfg.precision)?;
    let missing: Vec<f64> = grid.iter().copied().filter(|&u| cache.get(u).is_none()).collect();
    let fresh: Vec<CacheRecord> = missing
        .par_iter()
        .map(|&u| CacheRecord::compute(&m, u, cfg.precision))
        .collect();
    cache.append(&fresh)?;
    let records = grid
        .iter()
        .map(|&u| {
            let rec = cache.get(u).expect("record cached above");
            ScanRecord::new(m.ell(), u, rec.e_exact)
        })
        .collect();
    Ok(summarize(records))
}

fn scan(cfg: &RunConfig, u_min: f64, u_max: f64, step: f64) -> Result<Outcome> {
    let result = match &cfg.cache_dir {
        Some(dir) => scan_with_cache(cfg, dir, u_min, u_max, step)?,
        None => omega_scan(&cfg.manifold()?, u_min, u_max, step, cfg.precision)?,
    };
    let mut table = Table::new(&["u", "t", "E", "norm1", "norm2"]);
    for r in &result.records {
        table.push(vec![r.u.into(), r.t.into(), r.e.into(), r.norm1.into(), r.norm2.into()]);
    }
    let mut summary = Vec::new();
    if let Some(best) = result.argmax() {
        summary.push(format!("max |norm2| = {} at u = {}", fmt_real(best.norm2.abs()), fmt_real(best.u)));
    }
    for d in &result.decades {
        summary.push(format!("decade {}: max |norm2| = {} at u = {}", fmt_real(d.decade_start), fmt_real(d.abs_norm2), fmt_real(d.u)));
    }
    summary.push(format!("decade maxima nondecreasing: {}", result.decade_maxima_nondecreasing));
    Ok(Outcome::ok(table, summary))
}

fn vaaler(cfg: &RunConfig, order: usize, samples: usize, tolerance: f64) -> Result<Outcome> {
    let r = check_majorant(order, samples, cfg.seed, tolerance)?;
    let mut table = Table::new(&["H", "samples", "seed", "violations", "min_slack", "worst_w"]);
    table.push(vec![
        r.order.into(),
        r.samples.into(),
        cfg.seed.into(),
        r.violations.into(),
        r.min_slack.into(),
        r.worst_w.into(),
    ]);
    Ok(Outcome {
        table,
        summary: vec![format!("violations: {}", r.violations)],
        check_failed: r.violations > 0,
    })
}

fn transform(cfg: &RunConfig, u: &str, h: &str, j: &str) -> Result<Outcome> {
    let us: Vec<f64> = parse_list("u", u)?;
    let hs: Vec<u64> = parse_list("h", h)?;
    let js: Vec<u32> = parse_list("j", j)?;
    let mut work = Vec::new();
    for &u in &us {
        for &h in &hs {
            for &j in &js {
                work.push((u, h, j));
            }
        }
    }
    let reports = work
        .par_iter()
        .map(|&(u, h, j)| vdc_transform(h, u, cfg.ell, j))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&[
        "u",
        "h",
        "j",
        "k_lo",
        "k_hi",
        "terms",
        "direct_re",
        "direct_im",
        "transformed_re",
        "transformed_im",
        "X",
        "Y",
        "Z",
        "error_bound",
        "kappa",
    ]);
    for r in &reports {
        table.push(vec![
            r.u.into(),
            r.h.into(),
            r.j.into(),
            r.k_lo.into(),
            r.k_hi.into(),
            r.terms.into(),
            r.direct_re.into(),
            r.direct_im.into(),
            r.transformed_re.into(),
            r.transformed_im.into(),
            r.x.into(),
            r.y.into(),
            r.z.into(),
            r.error_bound.into(),
            r.kappa.into(),
        ]);
    }
    let mut summary = Vec::new();
    let mut per_u = Vec::new();
    for &u in &us {
        let k = reports.iter().filter(|r| r.u == u).map(|r| r.kappa).fold(0.0, f64::max);
        summary.push(format!("u = {}: kappa = {}", fmt_real(u), fmt_real(k)));
        per_u.push(k);
    }
    let lo = per_u.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = per_u.iter().copied().fold(0.0, f64::max);
    summary.push(format!("kappa spread across u: {}", fmt_real(hi / lo)));
    Ok(Outcome::ok(table, summary))
}

fn dirichlet(t: f64, budget: u64, certificate: Option<&std::path::Path>) -> Result<Outcome> {
    let cert = dirichlet_search(t, budget)?;
    let verified = cert.verify();
    if let Some(path) = certificate {
        std::fs::write(path, cert.to_text())?;
    }
    let mut table = Table::new(&["T", "U", "n", "h", "k", "distance"]);
    if cert.targets.is_empty() {
        table.push(vec![t.into(), cert.u.into(), Cell::Null, Cell::Null, Cell::Null, Cell::Null]);
    }
    for tg in &cert.targets {
        table.push(vec![t.into(), cert.u.into(), tg.n.into(), tg.h.into(), tg.k.into(), tg.distance.into()]);
    }
    Ok(Outcome {
        table,
        summary: vec![
            format!("U = {}", cert.u),
            format!("max distance = {}", fmt_real(cert.max_distance())),
            format!("verified: {verified}"),
        ],
        check_failed: !verified,
    })
}

fn mean_sq(cfg: &RunConfig, t_max: f64, n_grid: usize, decades: f64, synthetic: bool) -> Result<Outcome> {
    let m = cfg.manifold()?;
    let fit = if synthetic {
        let p = m.ell() as f64 - 0.25;
        mean_square_with(|t| t.powf(p), m.ell(), t_max, n_grid, decades)?
    } else {
        mean_square(&m, t_max, n_grid, decades, cfg.precision)?
    };
    let mut table = Table::new(&["T", "integral", "fitted_exponent", "fitted_c"]);
    for (t, v) in fit.t_grid.iter().zip(&fit.integrals) {
        table.push(vec![(*t).into(), (*v).into(), fit.fitted_exponent.into(), fit.fitted_c.into()]);
    }
    Ok(Outcome::ok(
        table,
        vec![
            format!("fitted exponent = {}", fmt_real(fit.fitted_exponent)),
            format!("fitted C = {}", fmt_real(fit.fitted_c)),
            format!("log residual = {}", fmt_real(fit.residual)),
        ],
    ))
}

fn lemma3(t: f64, q: f64, delta: f64) -> Result<Outcome> {
    let r = lemma3_check(t, q, delta)?;
    let mut table = Table::new(&[
        "T",
        "Q",
        "delta",
        "numeric_re",
        "numeric_im",
        "closed_re",
        "closed_im",
        "defect",
        "defect_times_Q",
    ]);
    table.push(vec![
        t.into(),
        q.into(),
        delta.into(),
        r.numeric_re.into(),
        r.numeric_im.into(),
        r.closed_re.into(),
        r.closed_im.into(),
        r.defect.into(),
        (r.defect * q).into(),
    ]);
    Ok(Outcome::ok(
        table,
        vec![format!("closed = {}  defect = {}", fmt_real(r.closed_re), fmt_real(r.defect))],
    ))
}
