//! Double-double arithmetic (an unevaluated sum `hi + lo` of two `f64`s).
//!
//! Used wherever a sum of large terms must resolve a much smaller signal:
//! the fractional-part sums reach `u^(2l-1)` per term while the quantity of
//! interest is of size `u^(2l-1/2)`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact for every integer below 2^106 in magnitude.
    pub fn from_i128(x: i128) -> Self {
        let hi = x as f64;
        // `hi` rounds x; the remainder is exactly representable for |x| < 2^106
        let rest = x - hi as i128;
        let (h, l) = quick_two_sum(hi, rest as f64);
        Self { hi: h, lo: l }
    }

    pub fn from_u128(x: u128) -> Self {
        let hi = x as f64;
        let rest = x as i128 - hi as i128;
        let (h, l) = quick_two_sum(hi, rest as f64);
        Self { hi: h, lo: l }
    }

    /// Exact square of an `f64`.
    #[inline]
    pub fn square_f64(x: f64) -> Self {
        let (hi, lo) = two_prod(x, x);
        Self { hi, lo }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        Self { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let r = self - Self::from_f64(b).mul_f64(q1);
        let q2 = r.hi / b;
        let r = r - Self::from_f64(b).mul_f64(q2);
        let q3 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add_f64(q3)
    }

    pub fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            let (hi, lo) = quick_two_sum(fh, self.lo.floor());
            Self { hi, lo }
        } else {
            Self { hi: fh, lo: 0.0 }
        }
    }

    /// `self - floor(self)`, in `[0, 1)`.
    pub fn fract(self) -> f64 {
        let f = (self - self.floor()).to_f64();
        if f >= 1.0 {
            1.0 - f64::EPSILON / 2.0
        } else if f < 0.0 {
            0.0
        } else {
            f
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::ZERO;
        }
        let s = self.hi.sqrt();
        let r = self - Self::square_f64(s);
        Self::from_f64(s).add_f64(r.hi / (2.0 * s))
    }

    pub fn is_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, b: Self) -> Self {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, b: Self) {
        *self = *self + b;
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

/// Compensated accumulator with a fixed, order-dependent result.
#[derive(Copy, Clone, Debug, Default)]
pub struct CompensatedSum {
    acc: DoubleDouble,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        self.acc = self.acc.add_f64(x);
    }

    #[inline]
    pub fn add_dd(&mut self, x: DoubleDouble) {
        self.acc += x;
    }

    pub fn value(&self) -> f64 {
        self.acc.to_f64()
    }

    pub fn dd(&self) -> DoubleDouble {
        self.acc
    }
}

/// Sums a slice in order with double-double accumulation.
pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut s = CompensatedSum::new();
    for &x in xs {
        s.add(x);
    }
    s.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_round_trip_exactly() {
        let x: i128 = (1i128 << 100) + 12345;
        let d = DoubleDouble::from_i128(x);
        assert_eq!(d.hi as i128 + d.lo as i128, x);
    }

    #[test]
    fn cancellation_is_resolved() {
        let mut s = CompensatedSum::new();
        s.add(1e20);
        s.add(1.0);
        s.add(-1e20);
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn fract_of_large_argument() {
        // (10^10 + 0.25) is not representable as an f64 sum but is as a dd
        let d = DoubleDouble::from_f64(1e10).add_f64(0.25);
        assert_eq!(d.fract(), 0.25);
        let neg = DoubleDouble::from_f64(-3.0).add_f64(0.75);
        assert_eq!(neg.fract(), 0.75);
    }

    #[test]
    fn division_matches_rational() {
        let d = DoubleDouble::from_f64(1.0).div_f64(3.0);
        let back = d.mul_f64(3.0) - DoubleDouble::from_f64(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn sqrt_to_thirty_digits() {
        let r = DoubleDouble::from_f64(2.0).sqrt();
        let sq = r * r - DoubleDouble::from_f64(2.0);
        assert!(sq.to_f64().abs() < 1e-30);
    }
}
