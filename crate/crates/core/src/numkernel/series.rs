//! Truncated Taylor series with [`HPReal`] coefficients.

use std::fmt;

use super::hpreal::HPReal;
use crate::error::{Error, Result};

/// Truncated power series `c_0 + c_1 w + ... + c_order w^order`.
///
/// Every operation truncates explicitly at `order`; nothing ever reads past
/// the last stored coefficient.
#[derive(Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<HPReal>,
    /// Free-form tag naming the expansion point, e.g. `"s=2"`.
    pub center_label: String,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<HPReal>, center_label: impl Into<String>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least one coefficient");
        PowerSeries {
            coeffs,
            center_label: center_label.into(),
        }
    }

    pub fn zeros(order: usize, prec: u32) -> Self {
        PowerSeries::new(vec![HPReal::zero(prec); order + 1], "")
    }

    pub fn constant(c: HPReal, order: usize) -> Self {
        let prec = c.prec();
        let mut s = PowerSeries::zeros(order, prec);
        s.coeffs[0] = c;
        s
    }

    /// The series of `w` itself.
    pub fn variable(order: usize, prec: u32) -> Self {
        let mut s = PowerSeries::zeros(order, prec);
        if order >= 1 {
            s.coeffs[1] = HPReal::one(prec);
        }
        s
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> HPReal) -> Self {
        PowerSeries::new((0..=order).map(f).collect(), "")
    }

    /// `e^(c w)` truncated at `order`.
    pub fn exp_linear(c: &HPReal, order: usize) -> Self {
        let prec = c.prec();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = HPReal::one(prec);
        coeffs.push(term.clone());
        for n in 1..=order {
            term = (&term * c).div_i64(n as i64);
            coeffs.push(term.clone());
        }
        PowerSeries::new(coeffs, "")
    }

    /// Polynomial `(w + r_0)(w + r_1)...` truncated at `order`.
    pub fn from_linear_factors(roots_shift: &[HPReal], order: usize, prec: u32) -> Self {
        let mut s = PowerSeries::constant(HPReal::one(prec), order);
        for r in roots_shift {
            let mut next = PowerSeries::zeros(order, prec);
            for i in 0..=order {
                next.coeffs[i] = &s.coeffs[i] * r;
                if i > 0 {
                    next.coeffs[i] += &s.coeffs[i - 1];
                }
            }
            s = next;
        }
        s
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.center_label = label.into();
        self
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[HPReal] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<HPReal> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &HPReal {
        &self.coeffs[i]
    }

    pub fn coeff_mut(&mut self, i: usize) -> &mut HPReal {
        &mut self.coeffs[i]
    }

    pub fn prec(&self) -> u32 {
        self.coeffs.iter().map(HPReal::prec).max().unwrap_or(64)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        PowerSeries::new(self.coeffs[..=order].to_vec(), self.center_label.clone())
    }

    fn check_orders(&self, other: &PowerSeries) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PowerSeries) -> Result<Self> {
        self.check_orders(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(PowerSeries::new(coeffs, self.center_label.clone()))
    }

    pub fn sub(&self, other: &PowerSeries) -> Result<Self> {
        self.check_orders(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(PowerSeries::new(coeffs, self.center_label.clone()))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        PowerSeries::new(coeffs, self.center_label.clone())
    }

    pub fn scale(&self, c: &HPReal) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        PowerSeries::new(coeffs, self.center_label.clone())
    }

    /// Substitutes `w -> m w`.
    pub fn scale_variable(&self, m: &HPReal) -> Self {
        let mut pow = HPReal::one(m.prec());
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let out = a * &pow;
                pow = &pow * m;
                out
            })
            .collect();
        PowerSeries::new(coeffs, self.center_label.clone())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &PowerSeries) -> Result<Self> {
        self.check_orders(other)?;
        let n = self.order();
        let prec = self.prec().max(other.prec());
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = HPReal::zero(prec);
                for i in 0..=k {
                    acc += &self.coeffs[i] * &other.coeffs[k - i];
                }
                acc
            })
            .collect();
        Ok(PowerSeries::new(coeffs, self.center_label.clone()))
    }

    /// `exp(a)` for `a(0) = 0`, via `(exp a)' = a' exp a`:
    /// `b_n = (1/n) sum_{k=1..n} k a_k b_{n-k}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let prec = self.prec();
        let mut b: Vec<HPReal> = Vec::with_capacity(n + 1);
        b.push(HPReal::one(prec));
        for m in 1..=n {
            let mut acc = HPReal::zero(prec);
            for k in 1..=m {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc += (&self.coeffs[k] * &b[m - k]).mul_i64(k as i64);
            }
            b.push(acc.div_i64(m as i64));
        }
        Ok(PowerSeries::new(b, self.center_label.clone()))
    }

    /// `q` with `q * divisor = self` up to the common order.
    pub fn div(&self, divisor: &PowerSeries) -> Result<Self> {
        self.check_orders(divisor)?;
        if divisor.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let inv0 = divisor.coeffs[0].recip();
        let mut q: Vec<HPReal> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let mut acc = self.coeffs[m].clone();
            for k in 1..=m {
                acc -= &divisor.coeffs[k] * &q[m - k];
            }
            q.push(acc * &inv0);
        }
        Ok(PowerSeries::new(q, self.center_label.clone()))
    }

    /// Term-by-term derivative; the order drops by one (an order-0 input
    /// yields the order-0 zero series).
    pub fn deriv(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return PowerSeries::zeros(0, self.prec()).with_label(self.center_label.clone());
        }
        let coeffs = (1..=n).map(|k| self.coeffs[k].mul_i64(k as i64)).collect();
        PowerSeries::new(coeffs, self.center_label.clone())
    }

    /// Antiderivative with constant term `c0`; the order rises by one.
    pub fn integrate(&self, c0: HPReal) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(c0);
        for (k, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a.div_i64(k as i64 + 1));
        }
        PowerSeries::new(coeffs, self.center_label.clone())
    }

    /// `log(a)` for `a(0) > 0`, as `log a(0) + integral(a'/a)`.
    pub fn log(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if !a0.is_positive() {
            return Err(Error::Domain("series logarithm needs a positive constant term".into()));
        }
        let n = self.order();
        if n == 0 {
            return Ok(PowerSeries::constant(a0.ln(), 0).with_label(self.center_label.clone()));
        }
        let d = self.deriv();
        let q = d.div(&self.truncate(n - 1))?;
        Ok(q.integrate(a0.ln()))
    }

    /// Horner evaluation at `w`.
    pub fn eval(&self, w: &HPReal) -> HPReal {
        let mut acc = self.coeffs[self.order()].clone();
        for c in self.coeffs[..self.order()].iter().rev() {
            acc = &acc * w + c;
        }
        acc
    }
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeries")
            .field("center", &self.center_label)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 192;

    fn s(vals: &[i64]) -> PowerSeries {
        PowerSeries::new(vals.iter().map(|&v| HPReal::from_i64(v, P)).collect(), "")
    }

    fn close(a: &HPReal, b: &HPReal, bits: i32) -> bool {
        (a - b).abs() <= HPReal::pow2(-bits, P)
    }

    #[test]
    fn difference_of_squares() {
        let p = s(&[1, 1, 0]).mul(&s(&[1, -1, 0])).unwrap();
        assert_eq!(p, s(&[1, 0, -1]));
    }

    #[test]
    fn multiplicative_identity() {
        let a = s(&[3, -2, 7, 5]);
        assert_eq!(a.mul(&s(&[1, 0, 0, 0])).unwrap(), a);
    }

    #[test]
    fn order_mismatch_is_an_error() {
        assert!(matches!(
            s(&[1, 2]).mul(&s(&[1, 2, 3])),
            Err(Error::OrderMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn exp_of_variable() {
        let e = PowerSeries::variable(4, P).exp().unwrap();
        let want = [(1, 1), (1, 1), (1, 2), (1, 6), (1, 24)];
        for (c, (n, d)) in e.coeffs().iter().zip(want) {
            assert_eq!(*c, HPReal::from_ratio(n, d, P));
        }
        let zero = PowerSeries::zeros(3, P).exp().unwrap();
        assert_eq!(zero, s(&[1, 0, 0, 0]));
        assert!(matches!(s(&[1, 1]).exp(), Err(Error::NonzeroConstantTerm)));
    }

    #[test]
    fn exp_times_exp_of_negation_is_one() {
        let order = 20;
        let a = PowerSeries::from_fn(order, |k| {
            if k == 0 {
                HPReal::zero(P)
            } else {
                HPReal::from_ratio(((k * 7) % 11) as i64 - 5, (k + 1) as i64, P)
            }
        });
        let prod = a.exp().unwrap().mul(&a.neg().exp().unwrap()).unwrap();
        assert!(close(&prod.coeffs()[0], &HPReal::one(P), P as i32 - 8));
        for c in &prod.coeffs()[1..] {
            assert!(c.abs() < HPReal::pow2(-(P as i32) + 8, P), "{c:?}");
        }
    }

    #[test]
    fn gamma_series_reciprocal_at_one_half() {
        // log Gamma(1+w) = -gamma w + sum_{j>=2} zeta(j)(-w)^j / j
        let gamma = HPReal::euler_gamma(P);
        let series_at = |order: usize| {
            let a = PowerSeries::from_fn(order, |j| match j {
                0 => HPReal::zero(P),
                1 => -&gamma,
                _ => {
                    let z = HPReal::from_float(rug::Float::with_val(P, j as u32).zeta());
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    z.mul_i64(sign).div_i64(j as i64)
                }
            });
            a.exp().unwrap()
        };
        let half = HPReal::from_ratio(1, 2, P);
        // independent: 1/Gamma(3/2) = 2/sqrt(pi)
        let want = HPReal::from_i64(2, P) / HPReal::pi(P).sqrt();
        let g8 = series_at(8);
        let one = PowerSeries::constant(HPReal::one(P), 8);
        let inv8 = one.div(&g8).unwrap().eval(&half);
        assert!((&inv8 - &want).abs().to_f64() < 3e-3);
        let g48 = series_at(48);
        let one = PowerSeries::constant(HPReal::one(P), 48);
        let inv48 = one.div(&g48).unwrap().eval(&half);
        assert!((&inv48 - &want).abs().to_f64() < 1e-14);
        // and Gamma itself
        assert!((g48.eval(&half).recip() - &want).abs().to_f64() < 1e-12);
    }

    #[test]
    fn division() {
        let a = s(&[2, 5, -1, 4]);
        let q = a.div(&a).unwrap();
        assert_eq!(q, s(&[1, 0, 0, 0]));
        let geo = s(&[1, 0, 0, 0]).div(&s(&[1, -1, 0, 0])).unwrap();
        assert_eq!(geo, s(&[1, 1, 1, 1]));
        assert!(matches!(a.div(&s(&[0, 1, 0, 0])), Err(Error::ZeroConstantTerm)));
    }

    #[test]
    fn logarithmic_derivative_of_geometric_series() {
        // A = 1/(1-w): A'/A = 1/(1-w)
        let order = 10;
        let a = PowerSeries::from_fn(order, |_| HPReal::one(P));
        let q = a.deriv().div(&a.truncate(order - 1)).unwrap();
        for c in q.coeffs() {
            assert_eq!(*c, HPReal::one(P));
        }
    }

    #[test]
    fn derivative() {
        assert_eq!(s(&[5]).deriv(), s(&[0]));
        assert_eq!(s(&[0, 1, 1]).deriv(), s(&[1, 2]));
        let e = PowerSeries::variable(9, P).exp().unwrap();
        for (x, y) in e.deriv().coeffs().iter().zip(e.truncate(8).coeffs()) {
            assert!(close(x, y, P as i32 - 4));
        }
    }

    #[test]
    fn log_inverts_exp() {
        let a = PowerSeries::from_fn(12, |k| HPReal::from_ratio(k as i64 % 3, 2 + k as i64, P));
        let back = a.exp().unwrap().log().unwrap();
        for (x, y) in a.coeffs().iter().zip(back.coeffs()) {
            assert!(close(x, y, P as i32 - 10));
        }
    }

    #[test]
    fn variable_scaling() {
        let a = s(&[1, 1, 1, 1]);
        let m = HPReal::from_i64(2, P);
        assert_eq!(a.scale_variable(&m), s(&[1, 2, 4, 8]));
    }

    #[test]
    fn linear_factors() {
        // (w + 1)(w - 2) = w^2 - w - 2
        let p = PowerSeries::from_linear_factors(
            &[HPReal::from_i64(1, P), HPReal::from_i64(-2, P)],
            3,
            P,
        );
        assert_eq!(p, s(&[-2, -1, 1, 0]));
    }
}
