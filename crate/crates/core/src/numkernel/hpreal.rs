use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::{Constant, Round};
use rug::integer::Order;
use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};

/// Smallest binary precision an [`HPReal`] will carry.
pub const MIN_PREC: u32 = 64;
/// Default binary precision for constant computations.
pub const DEFAULT_PREC: u32 = 192;

/// Arbitrary-precision real backed by MPFR.
///
/// Every operation is correctly rounded (round-to-nearest) at the precision
/// of the result, which is the larger of the operand precisions for binary
/// operations. Precisions below [`MIN_PREC`] are raised to it.
#[derive(Clone)]
pub struct HPReal(Float);

#[inline]
fn clamp(prec: u32) -> u32 {
    prec.max(MIN_PREC)
}

impl HPReal {
    pub fn zero(prec: u32) -> Self {
        HPReal(Float::new(clamp(prec)))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), v))
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), v))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), v))
    }

    pub fn from_integer(v: &Integer, prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), v))
    }

    pub fn from_rational(v: &rug::Rational, prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), v))
    }

    /// `num / den`, correctly rounded.
    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        let q = rug::Rational::from((num, den));
        Self::from_rational(&q, prec)
    }

    pub fn parse(s: &str, prec: u32) -> Result<Self> {
        let parsed = Float::parse(s.trim())
            .map_err(|e| Error::Domain(format!("cannot parse {s:?} as a real: {e}")))?;
        Ok(HPReal(Float::with_val(clamp(prec), parsed)))
    }

    pub fn from_float(f: Float) -> Self {
        if f.prec() < MIN_PREC {
            HPReal(Float::with_val(MIN_PREC, f))
        } else {
            HPReal(f)
        }
    }

    pub fn pi(prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), Constant::Pi))
    }

    /// Euler's constant.
    pub fn euler_gamma(prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), Constant::Euler))
    }

    pub fn ln2(prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), Constant::Log2))
    }

    /// `2^e` exactly.
    pub fn pow2(e: i32, prec: u32) -> Self {
        let mut f = Float::with_val(clamp(prec), 1);
        f <<= e;
        HPReal(f)
    }

    /// `n!` rounded to the working precision.
    pub fn factorial(n: u32, prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), Integer::from(Integer::factorial(n))))
    }

    pub fn binomial(n: u32, k: u32, prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), Integer::from(n).binomial(k)))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        HPReal(Float::with_val(clamp(prec), &self.0))
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero() && !self.0.is_nan()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i32> {
        self.0.get_exp()
    }

    pub fn abs(&self) -> Self {
        HPReal(Float::with_val(self.prec(), self.0.abs_ref()))
    }

    pub fn ln(&self) -> Self {
        HPReal(Float::with_val(self.prec(), self.0.ln_ref()))
    }

    pub fn exp(&self) -> Self {
        HPReal(Float::with_val(self.prec(), self.0.exp_ref()))
    }

    pub fn sqrt(&self) -> Self {
        HPReal(Float::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn recip(&self) -> Self {
        HPReal(Float::with_val(self.prec(), self.0.recip_ref()))
    }

    pub fn square(&self) -> Self {
        HPReal(Float::with_val(self.prec(), self.0.square_ref()))
    }

    pub fn powi(&self, n: i32) -> Self {
        HPReal(Float::with_val(self.prec(), (&self.0).pow(n)))
    }

    pub fn powf(&self, e: &HPReal) -> Self {
        let p = self.prec().max(e.prec());
        HPReal(Float::with_val(p, (&self.0).pow(&e.0)))
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        HPReal(Float::with_val(self.prec(), &self.0 * k))
    }

    pub fn div_i64(&self, k: i64) -> Self {
        HPReal(Float::with_val(self.prec(), &self.0 / k))
    }

    pub fn mul_pow2(&self, e: i32) -> Self {
        let mut f = self.0.clone();
        f <<= e;
        HPReal(f)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Fixed-point decimal rendering with `decimals` digits after the point,
    /// rounded half-to-even on the exact binary value.
    pub fn fmt_fixed(&self, decimals: usize) -> String {
        if !self.0.is_finite() {
            return self.0.to_string();
        }
        let scale = Integer::from(10).pow(decimals as u32);
        let scaled = Float::with_val(self.prec() + 64 + 4 * decimals as u32, &self.0 * &scale);
        let (int, _) = scaled
            .to_integer_round(Round::Nearest)
            .expect("finite value");
        let neg = int < 0;
        let digits = int.abs().to_string();
        let digits = if digits.len() <= decimals {
            format!("{}{}", "0".repeat(decimals + 1 - digits.len()), digits)
        } else {
            digits
        };
        let split = digits.len() - decimals;
        let (whole, frac) = digits.split_at(split);
        let sign = if neg { "-" } else { "" };
        if decimals == 0 {
            format!("{sign}{whole}")
        } else {
            format!("{sign}{whole}.{frac}")
        }
    }

    /// Scientific rendering with `digits` significant digits.
    pub fn fmt_sci(&self, digits: usize) -> String {
        format!("{:.*e}", digits.max(1), self.0)
    }

    /// Little-endian binary encoding: precision, sign/class byte, binary
    /// exponent, then 64-bit mantissa limbs. Round-trips bit-exactly.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.prec().to_le_bytes());
        match self.0.to_integer_exp() {
            None => {
                // zero (or non-finite, which never gets cached)
                out.push(if self.0.is_sign_negative() { 3 } else { 2 });
            }
            Some((mant, exp)) => {
                let neg = mant < 0;
                out.push(u8::from(neg));
                out.extend_from_slice(&exp.to_le_bytes());
                let limbs = mant.abs().to_digits::<u64>(Order::Lsf);
                out.extend_from_slice(&(limbs.len() as u32).to_le_bytes());
                for limb in limbs {
                    out.extend_from_slice(&limb.to_le_bytes());
                }
            }
        }
        out
    }

    /// Inverse of [`HPReal::to_bytes`]; returns the value and bytes consumed.
    pub fn from_bytes(buf: &[u8]) -> Result<(Self, usize)> {
        let bad = || Error::Cache("truncated real encoding".into());
        let prec = u32::from_le_bytes(buf.get(0..4).ok_or_else(bad)?.try_into().unwrap());
        let tag = *buf.get(4).ok_or_else(bad)?;
        if !(MIN_PREC..=1 << 20).contains(&prec) {
            return Err(Error::Cache(format!("implausible precision {prec}")));
        }
        match tag {
            2 | 3 => {
                let mut z = Float::new(prec);
                if tag == 3 {
                    z = -z;
                }
                Ok((HPReal(z), 5))
            }
            0 | 1 => {
                let exp = i32::from_le_bytes(buf.get(5..9).ok_or_else(bad)?.try_into().unwrap());
                let n = u32::from_le_bytes(buf.get(9..13).ok_or_else(bad)?.try_into().unwrap())
                    as usize;
                let end = 13 + 8 * n;
                let raw = buf.get(13..end).ok_or_else(bad)?;
                let limbs: Vec<u64> = raw
                    .chunks_exact(8)
                    .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
                    .collect();
                let mut mant = Integer::from_digits(&limbs, Order::Lsf);
                if tag == 1 {
                    mant = -mant;
                }
                let mut f = Float::with_val(prec, mant);
                f <<= exp;
                Ok((HPReal(f), end))
            }
            t => Err(Error::Cache(format!("unknown real tag {t}"))),
        }
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(d) => f.write_str(&self.fmt_fixed(d)),
            None => {
                // enough decimal digits to pin the binary value
                let digits = (self.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize;
                f.write_str(&self.fmt_sci(digits))
            }
        }
    }
}

/// Serialized as a decimal string carrying every significant digit.
impl serde::Serialize for HPReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Debug for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPReal({}, prec={})", self.fmt_sci(24), self.prec())
    }
}

impl PartialEq for HPReal {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for HPReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl PartialEq<f64> for HPReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for HPReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident, $op:tt) => {
        impl $trait<&HPReal> for &HPReal {
            type Output = HPReal;
            fn $method(self, rhs: &HPReal) -> HPReal {
                let p = self.prec().max(rhs.prec());
                HPReal(Float::with_val(p, &self.0 $op &rhs.0))
            }
        }
        impl $trait<HPReal> for HPReal {
            type Output = HPReal;
            fn $method(self, rhs: HPReal) -> HPReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HPReal> for HPReal {
            type Output = HPReal;
            fn $method(self, rhs: &HPReal) -> HPReal {
                (&self).$method(rhs)
            }
        }
        impl $trait<HPReal> for &HPReal {
            type Output = HPReal;
            fn $method(self, rhs: HPReal) -> HPReal {
                self.$method(&rhs)
            }
        }
        impl $assign_trait<&HPReal> for HPReal {
            fn $assign_method(&mut self, rhs: &HPReal) {
                let p = self.prec().max(rhs.prec());
                if p > self.prec() {
                    self.0.set_prec(p);
                }
                $assign_trait::$assign_method(&mut self.0, &rhs.0);
            }
        }
        impl $assign_trait<HPReal> for HPReal {
            fn $assign_method(&mut self, rhs: HPReal) {
                $assign_trait::$assign_method(self, &rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, +);
binop!(Sub, sub, SubAssign, sub_assign, -);
binop!(Mul, mul, MulAssign, mul_assign, *);
binop!(Div, div, DivAssign, div_assign, /);

impl Neg for HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal(-self.0)
    }
}

impl Neg for &HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal(Float::with_val(self.prec(), -&self.0))
    }
}

impl<'a> Sum<&'a HPReal> for HPReal {
    fn sum<I: Iterator<Item = &'a HPReal>>(iter: I) -> HPReal {
        let mut acc: Option<HPReal> = None;
        for x in iter {
            match acc.as_mut() {
                Some(a) => *a += x,
                None => acc = Some(x.clone()),
            }
        }
        acc.unwrap_or_else(|| HPReal::zero(MIN_PREC))
    }
}

impl Sum<HPReal> for HPReal {
    fn sum<I: Iterator<Item = HPReal>>(iter: I) -> HPReal {
        let mut acc: Option<HPReal> = None;
        for x in iter {
            match acc.as_mut() {
                Some(a) => *a += &x,
                None => acc = Some(x),
            }
        }
        acc.unwrap_or_else(|| HPReal::zero(MIN_PREC))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_floor() {
        assert_eq!(HPReal::one(10).prec(), MIN_PREC);
        assert_eq!(HPReal::one(200).prec(), 200);
    }

    #[test]
    fn binary_ops_take_larger_precision() {
        let a = HPReal::from_i64(1, 64);
        let b = HPReal::from_i64(3, 256);
        let q = &a / &b;
        assert_eq!(q.prec(), 256);
        let third = HPReal::from_ratio(1, 3, 256);
        assert_eq!(q, third);
    }

    #[test]
    fn fixed_formatting() {
        let x = HPReal::from_ratio(4, 3, 128);
        assert_eq!(x.fmt_fixed(6), "1.333333");
        assert_eq!((-x).fmt_fixed(2), "-1.33");
        assert_eq!(HPReal::from_ratio(1, 200, 128).fmt_fixed(3), "0.005");
        assert_eq!(HPReal::from_i64(42, 64).fmt_fixed(0), "42");
        assert_eq!(format!("{:.3}", HPReal::pi(128)), "3.142");
    }

    #[test]
    fn byte_round_trip() {
        for v in [
            HPReal::pi(192),
            -HPReal::euler_gamma(300),
            HPReal::zero(128),
            HPReal::from_f64(1e-300, 64),
        ] {
            let bytes = v.to_bytes();
            let (back, used) = HPReal::from_bytes(&bytes).unwrap();
            assert_eq!(used, bytes.len());
            assert_eq!(back.prec(), v.prec());
            assert_eq!(back, v);
        }
    }

    #[test]
    fn elementary_functions() {
        let p = 192;
        let two = HPReal::from_i64(2, p);
        let ln2 = two.ln();
        assert_eq!(ln2, HPReal::ln2(p));
        let back = ln2.exp();
        let err = (&back - &two).abs();
        assert!(err < HPReal::pow2(-(p as i32) + 4, p));
        assert_eq!(HPReal::factorial(5, p), HPReal::from_i64(120, p));
        assert_eq!(HPReal::binomial(6, 2, p), HPReal::from_i64(15, p));
    }
}
