//! Exact eigenvalue counting `N(t) = N_I(t) + N_II(t)` and the Weyl main term.
//!
//! Type-II eigenvalues are `2π(n_0² + n_0(2n_1 + l))` with multiplicity
//! `2·n_0^l·r_1···r_l·C(n_1+l-1, l-1)`. Summing over `n_1` with the
//! hockey-stick identity leaves one term per `n_0`:
//!
//! ```text
//! N_II(2πu²) = Σ_{n_0 <= n*} 2·n_0^l·r_1···r_l·C(N(n_0)+l, l),
//! N(n_0)     = floor((u²/n_0 - n_0 - l) / 2).
//! ```
//!
//! Type-I eigenvalues are those of the flat torus `R^{2l} / (r*Z^l × Z^l)`,
//! i.e. `4π²(Σ (a_j/r_j)² + |b|²)`.

use super::manifold::HeisenbergManifold;
use crate::arithmetic::{ball_count_sq, binomial, binomial_u128, BigCount};
use crate::numeric::DoubleDouble;
use num_bigint::BigUint;
use serde::Serialize;
use std::f64::consts::PI;

/// `u²` for the type-II count, kept exact whenever it is an integer.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum SquaredRadius {
    Exact(u64),
    Real(DoubleDouble),
}

/// Values within this many ulps of an integer are treated as that integer
/// when converting `t` to a lattice radius, so eigenvalues sitting exactly at
/// `t` are counted.
const SNAP_ULPS: f64 = 4.0;

pub(crate) fn snap_to_integer(v: f64) -> Option<u64> {
    if !(v >= 0.0) || v > 9.0e15 {
        return None;
    }
    let r = v.round();
    if (v - r).abs() <= SNAP_ULPS * f64::EPSILON * v.max(1.0) {
        Some(r as u64)
    } else {
        None
    }
}

impl SquaredRadius {
    /// `u²` for a real `u >= 0`, exact when `u²` is within a few ulps of an integer.
    pub fn from_u(u: f64) -> Self {
        assert!(u >= 0.0 && u.is_finite(), "u must be finite and nonnegative");
        let sq = DoubleDouble::square_f64(u);
        if sq.hi.fract() == 0.0 && sq.lo.fract() == 0.0 && sq.hi < 9.0e15 {
            let v = sq.hi as i128 + sq.lo as i128;
            return Self::Exact(v as u64);
        }
        // a rounded sqrt(n) still means level n
        match snap_to_integer(sq.hi + sq.lo) {
            Some(n) => Self::Exact(n),
            None => Self::Real(sq),
        }
    }

    /// `u² = t / 2π`.
    pub fn from_t(t: f64) -> Self {
        assert!(t >= 0.0 && t.is_finite(), "t must be finite and nonnegative");
        let v = t / (2.0 * PI);
        match snap_to_integer(v) {
            Some(n) => Self::Exact(n),
            None => Self::Real(DoubleDouble::from_f64(t).div_f64(2.0 * PI)),
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Self::Exact(n) => n as f64,
            Self::Real(d) => d.to_f64(),
        }
    }

    pub fn as_dd(self) -> DoubleDouble {
        match self {
            Self::Exact(n) => DoubleDouble::from_u128(n as u128),
            Self::Real(d) => d,
        }
    }

    /// `N(n_0) = floor((u² - n_0² - l·n_0) / (2n_0))`, or `None` when negative.
    pub fn level(self, ell: u32, n0: u64) -> Option<u64> {
        let base = n0 as u128 * n0 as u128 + ell as u128 * n0 as u128;
        match self {
            Self::Exact(s) => {
                let s = s as u128;
                if base > s {
                    None
                } else {
                    Some(((s - base) / (2 * n0 as u128)) as u64)
                }
            }
            Self::Real(s) => {
                let num = s.add_f64(-(base as f64));
                if num.is_negative() {
                    return None;
                }
                let d = 2.0 * n0 as f64;
                let mut q = (num.to_f64() / d).floor();
                loop {
                    let r = num - DoubleDouble::from_f64(q).mul_f64(d);
                    if r.is_negative() {
                        q -= 1.0;
                    } else if r.hi >= d {
                        q += 1.0;
                    } else {
                        break;
                    }
                }
                Some(q as u64)
            }
        }
    }

    /// `(n_0, N(n_0))` for `n_0 = 1..=n*`.
    pub fn levels(self, ell: u32) -> impl Iterator<Item = (u64, u64)> {
        (1u64..).map_while(move |n0| self.level(ell, n0).map(|n| (n0, n)))
    }
}

/// Which spectral family an eigenvalue belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SpectrumKind {
    /// Torus eigenvalue `4π²q / r_l²` for the integer form value `q`.
    TypeI { q: u64 },
    TypeII { n0: u64, n1: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub lambda: f64,
    pub multiplicity: BigCount,
    pub kind: SpectrumKind,
}

fn type_ii_multiplicity(m: &HeisenbergManifold, n0: u64, n1: u64) -> BigCount {
    let ell = m.ell() as u64;
    let c = binomial(n1 + ell - 1, ell - 1).0;
    let pow = BigUint::from(n0).pow(m.ell());
    BigCount(c * pow * BigUint::from(m.r_product()) * 2u32)
}

/// Every type-II eigenvalue `<= t_max`, ordered by `n_0` then `n_1`.
pub fn type_ii_entries(m: &HeisenbergManifold, t_max: f64) -> Vec<SpectrumEntry> {
    let ell = m.ell();
    let scale = SquaredRadius::from_t(t_max);
    let mut out = Vec::new();
    for (n0, top) in scale.levels(ell) {
        for n1 in 0..=top {
            let q = n0 * n0 + n0 * (2 * n1 + ell as u64);
            out.push(SpectrumEntry {
                lambda: 2.0 * PI * q as f64,
                multiplicity: type_ii_multiplicity(m, n0, n1),
                kind: SpectrumKind::TypeII { n0, n1 },
            });
        }
    }
    out
}

fn count_type_ii_scale(m: &HeisenbergManifold, scale: SquaredRadius) -> BigCount {
    let ell = m.ell();
    let p = m.r_product();
    let fast = scale.levels(ell).try_fold(0u128, |acc, (n0, n)| {
        let c = binomial_u128(n + ell as u64, ell as u64)?;
        let pow = (n0 as u128).checked_pow(ell)?;
        let term = c.checked_mul(pow)?.checked_mul(p)?.checked_mul(2)?;
        acc.checked_add(term)
    });
    if let Some(v) = fast {
        return BigCount::from(v);
    }
    let mut acc = BigUint::default();
    for (n0, n) in scale.levels(ell) {
        acc += binomial(n + ell as u64, ell as u64).0 * BigUint::from(n0).pow(ell);
    }
    BigCount(acc * BigUint::from(p) * 2u32)
}

/// `N_II(2πu²)`.
pub fn count_type_ii(m: &HeisenbergManifold, u: f64) -> BigCount {
    count_type_ii_scale(m, SquaredRadius::from_u(u))
}

/// `N_II(2πu²)` for an integer `u²`.
pub fn count_type_ii_exact(m: &HeisenbergManifold, u_sq: u64) -> BigCount {
    count_type_ii_scale(m, SquaredRadius::Exact(u_sq))
}

/// `N_II(t)`.
pub fn count_type_ii_at(m: &HeisenbergManifold, t: f64) -> BigCount {
    count_type_ii_scale(m, SquaredRadius::from_t(t))
}

/// Integer bound `Y` such that torus eigenvalues `<= t` are the points with
/// `Σ (r_l/r_j)² a_j² + r_l²|b|² <= Y`.
fn torus_bound(m: &HeisenbergManifold, t: f64) -> u64 {
    let top = *m.r().last().expect("ell >= 1") as u128;
    let l = top * top;
    let x = t / (4.0 * PI * PI);
    if let Some(n) = snap_to_integer(x) {
        return (n as u128 * l) as u64;
    }
    let scaled = DoubleDouble::from_f64(t).div_f64(4.0 * PI * PI).mul_f64(l as f64).floor();
    (scaled.hi as i128 + scaled.lo as i128).max(0) as u64
}

fn torus_weights(m: &HeisenbergManifold) -> Vec<u64> {
    let top = *m.r().last().expect("ell >= 1");
    let mut w: Vec<u64> = m.r().iter().map(|&rj| (top / rj) * (top / rj)).collect();
    w.extend(std::iter::repeat_n(top * top, m.ell() as usize));
    w.sort_unstable_by(|a, b| b.cmp(a));
    w
}

fn weighted_count(weights: &[u64], y: u64) -> BigCount {
    if weights.iter().all(|&w| w == 1) {
        return ball_count_sq(weights.len() as u32, y);
    }
    let (w, rest) = weights.split_first().expect("non-empty weights");
    let mut acc = weighted_count(rest, y);
    let mut z: u64 = 1;
    while w * z * z <= y {
        let sub = weighted_count(rest, y - w * z * z);
        acc = acc + &sub + sub;
        z += 1;
    }
    acc
}

/// `N_I(t)`: torus eigenvalues `<= t` with multiplicity.
pub fn count_type_i(m: &HeisenbergManifold, t: f64) -> BigCount {
    let y = torus_bound(m, t);
    if m.is_standard() {
        return ball_count_sq(2 * m.ell(), y);
    }
    weighted_count(&torus_weights(m), y)
}

/// Distinct torus eigenvalues `<= t_max` with multiplicities (desk scale).
pub fn type_i_entries(m: &HeisenbergManifold, t_max: f64) -> Vec<SpectrumEntry> {
    let y = torus_bound(m, t_max) as usize;
    let mut table = vec![0u128; y + 1];
    table[0] = 1;
    for w in torus_weights(m) {
        let w = w as usize;
        let mut next = vec![0u128; y + 1];
        for (q, slot) in next.iter_mut().enumerate() {
            let mut acc = table[q];
            let mut z = 1usize;
            while w * z * z <= q {
                acc += 2 * table[q - w * z * z];
                z += 1;
            }
            *slot = acc;
        }
        table = next;
    }
    let top = *m.r().last().expect("ell >= 1") as f64;
    table
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(q, c)| SpectrumEntry {
            lambda: 4.0 * PI * PI * q as f64 / (top * top),
            multiplicity: BigCount::from(c),
            kind: SpectrumKind::TypeI { q: q as u64 },
        })
        .collect()
}

/// `N(t) = N_I(t) + N_II(t)`.
pub fn count_total(m: &HeisenbergManifold, t: f64) -> BigCount {
    count_type_i(m, t) + count_type_ii_at(m, t)
}

/// Coefficient of `t^{l+1/2}` in the Weyl term:
/// `r_1···r_l / (2^{2l+1/2} π^l Γ(l+3/2))`.
pub fn main_term_coefficient(m: &HeisenbergManifold) -> f64 {
    let ell = m.ell() as i32;
    // Γ(l + 3/2) = √π (2l+1)!! / 2^{l+1}
    let double_fact: f64 = (0..=ell).map(|k| (2 * k + 1) as f64).product();
    let gamma = PI.sqrt() * double_fact / 2f64.powi(ell + 1);
    m.r_product() as f64 / (2f64.powf(2.0 * ell as f64 + 0.5) * PI.powi(ell) * gamma)
}

/// Weyl main term `c_l·t^{l+1/2}`.
pub fn main_term(m: &HeisenbergManifold, t: f64) -> f64 {
    main_term_coefficient(m) * t.powf(m.ell() as f64 + 0.5)
}

/// `R(t) = N(t) - main term`, against the single leading term.
pub fn remainder_r(m: &HeisenbergManifold, t: f64) -> f64 {
    (count_total(m, t).to_dd() - DoubleDouble::from_f64(main_term(m, t))).to_f64()
}

/// All counting quantities at one `t`.
#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub t: f64,
    pub n: BigCount,
    pub n_i: BigCount,
    pub n_ii: BigCount,
    pub main_term: f64,
    pub r: f64,
}

pub fn count_report(m: &HeisenbergManifold, t: f64) -> CountReport {
    let n_i = count_type_i(m, t);
    let n_ii = count_type_ii_at(m, t);
    let n = n_i.clone() + &n_ii;
    let main = main_term(m, t);
    let r = (n.to_dd() - DoubleDouble::from_f64(main)).to_f64();
    CountReport {
        t,
        n,
        n_i,
        n_ii,
        main_term: main,
        r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::ball_lattice_count;

    fn std2() -> HeisenbergManifold {
        HeisenbergManifold::standard(2).unwrap()
    }

    /// Oracle: enumerate every (n_0, n_1) with multiplicity from the definition.
    fn brute_type_ii(m: &HeisenbergManifold, u_sq: u64) -> BigCount {
        let ell = m.ell() as u64;
        let mut acc = BigCount::zero();
        let mut n0 = 1u64;
        while n0 * n0 + n0 * ell <= u_sq {
            let mut n1 = 0u64;
            while n0 * n0 + n0 * (2 * n1 + ell) <= u_sq {
                acc = acc + type_ii_multiplicity(m, n0, n1);
                n1 += 1;
            }
            n0 += 1;
        }
        acc
    }

    #[test]
    fn type_ii_entry_examples() {
        let e = type_ii_entries(&std2(), 2.0 * PI * 4.0);
        assert_eq!(e.len(), 1);
        assert!((e[0].lambda - 6.0 * PI).abs() < 1e-12);
        assert_eq!(e[0].multiplicity, BigCount::from(2u64));
        assert_eq!(e[0].kind, SpectrumKind::TypeII { n0: 1, n1: 0 });
        assert!(type_ii_entries(&std2(), 2.0 * PI * 0.5).is_empty());
        let doubled = type_ii_entries(&HeisenbergManifold::new(2, vec![1, 2]).unwrap(), 2.0 * PI * 30.0);
        let base = type_ii_entries(&std2(), 2.0 * PI * 30.0);
        assert_eq!(doubled.len(), base.len());
        for (a, b) in doubled.iter().zip(&base) {
            assert_eq!(a.lambda, b.lambda);
            assert_eq!(a.multiplicity.0, &b.multiplicity.0 * 2u32);
        }
    }

    #[test]
    fn type_ii_entries_are_sorted_within_n0() {
        let e = type_ii_entries(&std2(), 2.0 * PI * 200.0);
        for w in e.windows(2) {
            if let (SpectrumKind::TypeII { n0: a, .. }, SpectrumKind::TypeII { n0: b, .. }) = (&w[0].kind, &w[1].kind) {
                if a == b {
                    assert!(w[0].lambda <= w[1].lambda);
                }
            }
        }
    }

    #[test]
    fn type_ii_count_examples() {
        let m = std2();
        assert_eq!(count_type_ii_exact(&m, 4), BigCount::from(2u64));
        assert_eq!(count_type_ii_exact(&m, 4), brute_type_ii(&m, 4));
        assert_eq!(count_type_ii_exact(&m, 1), BigCount::zero());
        assert_eq!(count_type_ii_exact(&m, 16), brute_type_ii(&m, 16));
        assert_eq!(count_type_ii(&m, 4.0), count_type_ii_exact(&m, 16));
    }

    #[test]
    fn type_ii_closed_form_matches_enumeration() {
        for ell in 1..=4u32 {
            for r in [vec![1u64; ell as usize], {
                let mut v = vec![2u64; ell as usize];
                v[0] = 1;
                v
            }] {
                let m = HeisenbergManifold::new(ell, r).unwrap();
                for u_sq in (0..600).step_by(7) {
                    assert_eq!(count_type_ii_exact(&m, u_sq), brute_type_ii(&m, u_sq), "ell={ell} u²={u_sq}");
                }
            }
        }
    }

    #[test]
    fn real_radius_levels_agree_with_exact() {
        let m = std2();
        for u_sq in [5u64, 17, 100, 1001] {
            let below = (u_sq as f64).sqrt() * (1.0 - 1e-12);
            let above = (u_sq as f64).sqrt() * (1.0 + 1e-12);
            assert_eq!(count_type_ii(&m, above), count_type_ii_exact(&m, u_sq));
            assert!(count_type_ii(&m, below) <= count_type_ii_exact(&m, u_sq));
            assert_eq!(count_type_ii(&m, below), count_type_ii_exact(&m, u_sq - 1));
        }
    }

    #[test]
    fn type_i_examples() {
        let m1 = HeisenbergManifold::standard(1).unwrap();
        let t = 4.0 * PI * PI;
        assert_eq!(count_type_i(&m1, t), ball_lattice_count(2, 1.0));
        assert_eq!(count_type_i(&m1, t), BigCount::from(5u64));
        assert_eq!(count_type_i(&std2(), t), BigCount::from(9u64));
        assert_eq!(count_type_i(&std2(), 0.0), BigCount::from(1u64));
        let m = HeisenbergManifold::new(2, vec![2, 4]).unwrap();
        assert_eq!(count_type_i(&m, 0.0), BigCount::from(1u64));
    }

    #[test]
    fn weighted_torus_count_matches_enumeration() {
        let m = HeisenbergManifold::new(2, vec![1, 2]).unwrap();
        for &x in &[0.3, 1.0, 2.7, 6.1] {
            let t = 4.0 * PI * PI * x;
            // (a1/1)² + (a2/2)² + b1² + b2² <= x
            let mut c = 0u64;
            let b = 6i64;
            for a1 in -b..=b {
                for a2 in -2 * b..=2 * b {
                    for b1 in -b..=b {
                        for b2 in -b..=b {
                            let v = (a1 * a1 + b1 * b1 + b2 * b2) as f64 + (a2 * a2) as f64 / 4.0;
                            if v <= x {
                                c += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(count_type_i(&m, t), BigCount::from(c), "x={x}");
            let from_entries: u128 = type_i_entries(&m, t).iter().map(|e| e.multiplicity.to_u128().unwrap()).sum();
            assert_eq!(from_entries, c as u128);
        }
    }

    #[test]
    fn total_count_examples() {
        let m = std2();
        assert_eq!(count_total(&m, 0.0), BigCount::from(1u64));
        let t = 2.0 * PI * 4.0;
        let want = ball_lattice_count(4, t.sqrt() / (2.0 * PI)) + BigCount::from(2u64);
        assert_eq!(count_total(&m, t), want);
        let mut prev = BigCount::zero();
        for i in 0..300 {
            let c = count_total(&m, i as f64 * 1.7);
            assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn main_term_examples() {
        let m = std2();
        let c = main_term_coefficient(&m);
        let gamma = 15.0 * PI.sqrt() / 8.0;
        let want = 1.0 / (2f64.powf(4.5) * PI * PI * gamma);
        assert!((c - want).abs() < 1e-18);
        assert!((c - 1.3473768e-3).abs() < 1e-10);
        assert_eq!(main_term(&m, 0.0), 0.0);
        let m2 = HeisenbergManifold::new(2, vec![1, 2]).unwrap();
        assert!((main_term(&m2, 77.0) - 2.0 * main_term(&m, 77.0)).abs() < 1e-12);
    }

    #[test]
    fn remainder_examples() {
        let m = std2();
        assert_eq!(remainder_r(&m, 0.0), 1.0);
        let t = 2.0 * PI * 4.0;
        let want = count_total(&m, t).to_f64() - main_term(&m, t);
        assert!((remainder_r(&m, t) - want).abs() < 1e-12);
        // strictly decreasing between eigenvalues: 6π and 4π² are the first two
        let a = remainder_r(&m, 20.0);
        let b = remainder_r(&m, 25.0);
        assert!(b < a);
        assert_eq!(count_total(&m, 20.0), count_total(&m, 25.0));
    }
}
