//! Nearest-integer distances `‖x‖` and the search for an integer `U >= T²`
//! with `‖U·sqrt(n)‖ <= 1/16` for every `n = h(2k-h) <= T²`.

use crate::error::{Error, Result};
use crate::numeric::{fmt_real, DoubleDouble};
use num_integer::Roots;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// `‖x‖`, the distance from `x` to the nearest integer.
pub fn nearest_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// A constraint `n = h(2k-h)` with its smallest-`h` representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Target {
    pub n: u64,
    pub h: u64,
    pub k: u64,
}

fn is_square(n: u64) -> bool {
    let r = n.sqrt();
    r * r == n
}

/// Non-square `n = h(2k-h) <= T²` with `1 <= h < k`, ascending in `n`.
pub fn constraint_targets(t: f64) -> Vec<Target> {
    let limit = (t * t).floor() as u64;
    let mut found: BTreeMap<u64, Target> = BTreeMap::new();
    let mut h = 1u64;
    while h * (h + 2) <= limit {
        let mut k = h + 1;
        loop {
            let n = h * (2 * k - h);
            if n > limit {
                break;
            }
            if !is_square(n) {
                found.entry(n).or_insert(Target { n, h, k });
            }
            k += 1;
        }
        h += 1;
    }
    found.into_values().collect()
}

/// Exact test of `‖U·sqrt(n)‖ <= 1/16` in integers.
pub fn within_sixteenth(big_u: u64, n: u64) -> bool {
    let big_n = big_u as u128 * big_u as u128 * n as u128;
    let s = big_n.sqrt();
    let lhs = 256 * big_n;
    lhs <= (16 * s + 1).pow(2) || lhs >= (16 * s + 15).pow(2)
}

/// `‖U·sqrt(n)‖` from a double-double square root of `U²n`.
pub fn distance_extended(big_u: u64, n: u64) -> f64 {
    let big_n = big_u as u128 * big_u as u128 * n as u128;
    let root = DoubleDouble::from_u128(big_n).sqrt();
    let s = big_n.sqrt();
    let frac = (root - DoubleDouble::from_u128(s)).to_f64();
    frac.min(1.0 - frac).max(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedTarget {
    pub n: u64,
    pub h: u64,
    pub k: u64,
    pub distance: f64,
}

/// An integer `U` meeting `T² <= U <= T²·16^{T²}` and every distance bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirichletCertificate {
    pub t: f64,
    pub u: u64,
    pub targets: Vec<CertifiedTarget>,
    pub u_lower: f64,
    /// `log2(T²·16^{T²}) = log2(T²) + 4T²`.
    pub u_upper_log2: f64,
}

impl DirichletCertificate {
    fn build(t: f64, big_u: u64, targets: &[Target]) -> Self {
        let t2 = t * t;
        Self {
            t,
            u: big_u,
            targets: targets
                .iter()
                .map(|tg| CertifiedTarget {
                    n: tg.n,
                    h: tg.h,
                    k: tg.k,
                    distance: distance_extended(big_u, tg.n),
                })
                .collect(),
            u_lower: t2,
            u_upper_log2: t2.log2() + 4.0 * t2,
        }
    }

    /// Re-derives the target set and re-checks every bound.
    pub fn verify(&self) -> bool {
        let want: Vec<u64> = constraint_targets(self.t).iter().map(|t| t.n).collect();
        let have: Vec<u64> = self.targets.iter().map(|t| t.n).collect();
        want == have
            && self.u as f64 >= self.t * self.t
            && (self.u as f64).log2() <= self.u_upper_log2
            && self.targets.iter().all(|tg| {
                tg.h * (2 * tg.k - tg.h) == tg.n
                    && within_sixteenth(self.u, tg.n)
                    && (distance_extended(self.u, tg.n) - tg.distance).abs() < 1e-15
            })
    }

    /// Worst distance over the targets (0 when there are none).
    pub fn max_distance(&self) -> f64 {
        self.targets.iter().map(|t| t.distance).fold(0.0, f64::max)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# dirichlet certificate").unwrap();
        writeln!(s, "T {}", fmt_real(self.t)).unwrap();
        writeln!(s, "U {}", self.u).unwrap();
        writeln!(s, "U_lower {}", fmt_real(self.u_lower)).unwrap();
        writeln!(s, "U_upper_log2 {}", fmt_real(self.u_upper_log2)).unwrap();
        for t in &self.targets {
            writeln!(s, "target {} {} {} {}", t.n, t.h, t.k, fmt_real(t.distance)).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |l: &str| Error::Parse(format!("certificate line {l:?}"));
        let real = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        let int = |s: &str| s.parse::<u64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
        let (mut t, mut u, mut lo, mut hi) = (None, None, None, None);
        let mut targets = Vec::new();
        for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
            let f: Vec<&str> = line.split_whitespace().collect();
            match (f[0], f.len()) {
                ("T", 2) => t = Some(real(f[1])?),
                ("U", 2) => u = Some(int(f[1])?),
                ("U_lower", 2) => lo = Some(real(f[1])?),
                ("U_upper_log2", 2) => hi = Some(real(f[1])?),
                ("target", 5) => targets.push(CertifiedTarget {
                    n: int(f[1])?,
                    h: int(f[2])?,
                    k: int(f[3])?,
                    distance: real(f[4])?,
                }),
                _ => return Err(bad(line)),
            }
        }
        let missing = |w: &str| Error::Parse(format!("certificate lacks {w}"));
        Ok(Self {
            t: t.ok_or_else(|| missing("T"))?,
            u: u.ok_or_else(|| missing("U"))?,
            targets,
            u_lower: lo.ok_or_else(|| missing("U_lower"))?,
            u_upper_log2: hi.ok_or_else(|| missing("U_upper_log2"))?,
        })
    }
}

const BLOCK: u64 = 4096;

fn max_distance(big_u: u64, targets: &[Target]) -> f64 {
    targets
        .iter()
        .map(|t| distance_extended(big_u, t.n))
        .fold(0.0, f64::max)
}

/// Smallest integer `U >= T²` with every `‖U·sqrt(n)‖ <= 1/16`, scanning at
/// most `budget` candidates.
pub fn dirichlet_search(t: f64, budget: u64) -> Result<DirichletCertificate> {
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("dirichlet search needs T >= 1, got {t}")));
    }
    let targets = constraint_targets(t);
    let start = ((t * t).ceil() as u64).max(1);
    let end = start.saturating_add(budget);
    let mut best = (f64::INFINITY, start);
    let mut lo = start;
    while lo < end {
        let hi = (lo + BLOCK).min(end);
        let hit = (lo..hi)
            .into_par_iter()
            .find_first(|&u| targets.iter().all(|tg| within_sixteenth(u, tg.n)));
        if let Some(u) = hit {
            return Ok(DirichletCertificate::build(t, u, &targets));
        }
        // deterministic best-so-far: smallest worst distance, then smallest U
        let block_best = (lo..hi)
            .into_par_iter()
            .map(|u| (max_distance(u, &targets), u))
            .reduce(|| (f64::INFINITY, u64::MAX), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
        if block_best.0 < best.0 {
            best = block_best;
        }
        lo = hi;
    }
    Err(Error::BudgetExhausted {
        searched: end - start,
        best_u: best.1,
        best_distance: best.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn distance_examples() {
        assert_eq!(nearest_distance(2.75), 0.25);
        assert_eq!(nearest_distance(5.0), 0.0);
        assert!((nearest_distance(11.0 * 3f64.sqrt()) - 0.052559).abs() < 1e-6);
        assert!((distance_extended(11, 3) - 0.0525588832576519).abs() < 1e-13);
    }

    #[test]
    fn target_examples() {
        assert!(constraint_targets(1.0).is_empty());
        assert_eq!(constraint_targets(2.0), vec![Target { n: 3, h: 1, k: 2 }]);
        let n: Vec<u64> = constraint_targets(3.0).iter().map(|t| t.n).collect();
        assert_eq!(n, vec![3, 5, 7, 8]);
        let t3 = constraint_targets(3.0);
        assert_eq!(t3[3], Target { n: 8, h: 2, k: 3 });
    }

    #[test]
    fn targets_monotone_in_t() {
        let mut prev: Vec<u64> = Vec::new();
        for i in 4..40 {
            let cur: Vec<u64> = constraint_targets(i as f64 / 4.0).iter().map(|t| t.n).collect();
            assert!(prev.iter().all(|n| cur.contains(n)));
            prev = cur;
        }
    }

    #[test]
    fn search_examples() {
        let c = dirichlet_search(1.0, 10).unwrap();
        assert_eq!(c.u, 1);
        assert!(c.targets.is_empty());
        let c = dirichlet_search(2.0, 1000).unwrap();
        assert_eq!(c.u, 11);
        assert!((c.targets[0].distance - 0.0525589).abs() < 1e-7);
        assert!(c.verify());
        for u in 4..11 {
            assert!(!within_sixteenth(u, 3), "U={u}");
        }
        let text = c.to_text();
        assert_eq!(DirichletCertificate::from_text(&text).unwrap(), c);
    }

    #[test]
    fn budget_exhaustion_reports_best() {
        match dirichlet_search(2.0, 5) {
            Err(Error::BudgetExhausted { searched, best_u, best_distance }) => {
                assert_eq!(searched, 5);
                assert!((4..9).contains(&best_u));
                assert_eq!(best_distance, max_distance(best_u, &constraint_targets(2.0)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tampered_certificate_fails() {
        let mut c = dirichlet_search(2.0, 1000).unwrap();
        c.u = 12;
        assert!(!c.verify());
    }

    #[test]
    fn exact_test_agrees_with_extended_distance() {
        for u in 1..3000u64 {
            for n in [2u64, 3, 5, 7, 8] {
                let d = distance_extended(u, n);
                if (d - 0.0625).abs() > 1e-12 {
                    assert_eq!(within_sixteenth(u, n), d <= 0.0625, "U={u} n={n} d={d}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn distance_symmetries(x in -1e6f64..1e6) {
            let d = nearest_distance(x);
            prop_assert!((0.0..=0.5).contains(&d));
            prop_assert_eq!(nearest_distance(-x), d);
            let ulp = f64::EPSILON * (x.abs() + 1.0);
            prop_assert!((nearest_distance(x + 1.0) - d).abs() <= ulp);
        }
    }
}
