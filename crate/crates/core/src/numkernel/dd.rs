//! Double-double arithmetic for long compensated sums.
//!
//! A [`DoubleDouble`] carries an unevaluated sum `hi + lo` with
//! `|lo| <= ulp(hi)/2`, giving roughly 106 bits of significand. Sums of up
//! to 10^9 positive terms stay within a few units of 2^-104 relative.

use std::ops::{Add, AddAssign, Mul, Sub};

use super::hpreal::HPReal;

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

#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    pub fn new(v: f64) -> Self {
        DoubleDouble { hi: v, lo: 0.0 }
    }

    /// `1/n` to double-double accuracy.
    #[inline]
    pub fn recip_u64(n: u64) -> Self {
        let d = n as f64;
        // n - d, exact; nonzero only above 2^53
        let dl = (n as i128 - d as i128) as f64;
        let hi = 1.0 / d;
        let r = (-hi).mul_add(d, 1.0);
        let r = (-hi).mul_add(dl, r);
        let (hi, lo) = quick_two_sum(hi, r / d);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let (hi, lo) = quick_two_sum(s, e + self.lo);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let r = self - DoubleDouble::new(q1).mul_f64(b);
        let q2 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Exact promotion when `prec >= 107` and the limbs do not straddle an
    /// exponent gap wider than the target precision.
    pub fn to_hpreal(self, prec: u32) -> HPReal {
        HPReal::from_f64(self.hi, prec) + HPReal::from_f64(self.lo, prec)
    }
}

impl Add for DoubleDouble {
    type Output = DoubleDouble;
    #[inline]
    fn add(self, b: DoubleDouble) -> DoubleDouble {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl AddAssign for DoubleDouble {
    #[inline]
    fn add_assign(&mut self, b: DoubleDouble) {
        *self = *self + b;
    }
}

impl Sub for DoubleDouble {
    type Output = DoubleDouble;
    #[inline]
    fn sub(self, b: DoubleDouble) -> DoubleDouble {
        self + DoubleDouble {
            hi: -b.hi,
            lo: -b.lo,
        }
    }
}

impl Mul for DoubleDouble {
    type Output = DoubleDouble;
    #[inline]
    fn mul(self, b: DoubleDouble) -> DoubleDouble {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

/// Neumaier-compensated f64 accumulator, for sums whose individual terms
/// only carry f64 accuracy anyway.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn as_dd(&self) -> DoubleDouble {
        let (hi, lo) = two_sum(self.sum, self.comp);
        DoubleDouble { hi, lo }
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recip_is_accurate() {
        let prec = 256;
        for n in [3u64, 7, 999_983, 1_000_000_007, (1 << 40) + 15] {
            let dd = DoubleDouble::recip_u64(n).to_hpreal(prec);
            let exact = HPReal::from_ratio(1, n as i64, prec);
            let rel = ((&dd - &exact) / &exact).abs().to_f64();
            assert!(rel < 1e-31, "n={n} rel={rel:e}");
        }
    }

    #[test]
    fn harmonic_sum_matches_high_precision() {
        let prec = 256;
        let mut dd = DoubleDouble::ZERO;
        let mut exact = HPReal::zero(prec);
        for n in 1..=20_000u64 {
            dd += DoubleDouble::recip_u64(n);
            exact += HPReal::from_ratio(1, n as i64, prec);
        }
        let err = (dd.to_hpreal(prec) - exact).abs().to_f64();
        assert!(err < 1e-28, "err={err:e}");
    }

    #[test]
    fn neumaier_cancels() {
        let s: NeumaierSum = [1.0, 1e100, 1.0, -1e100].into_iter().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn division() {
        let x = DoubleDouble::new(1.0).div_f64(3.0).mul_f64(3.0);
        assert!((x.to_f64() - 1.0).abs() < 1e-30 + f64::EPSILON);
        let prod = DoubleDouble::recip_u64(3) * DoubleDouble::new(3.0);
        assert!((prod.hi - 1.0).abs() <= f64::EPSILON && prod.lo.abs() < 1e-30);
    }
}
