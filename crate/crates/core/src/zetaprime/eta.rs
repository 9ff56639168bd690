//! Taylor coefficients `eta_j` of `g(s) = -zeta'(s)/zeta(s) - 1/(s-1)` at
//! `s = 1`.
//!
//! With `w = s - 1` and `A(w) = w zeta(1 + w) = 1 + sum_n (-1)^n gamma_n
//! w^(n+1)/n!`, we have `g = -A'/A`, so `eta_0..eta_n` follow from
//! `gamma_0..gamma_n` by one series division.

use serde::Serialize;

use super::stieltjes::{stieltjes, MAX_STIELTJES};
use super::zeta::zeta;
use crate::error::{Error, Result};
use crate::numkernel::{HPReal, PowerSeries};

/// Extra Stieltjes orders computed beyond the requested `J`.
pub const ETA_SLACK: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct EtaTable {
    pub values: Vec<HPReal>,
    pub j_max: usize,
    pub stieltjes_used: Vec<HPReal>,
}

impl EtaTable {
    pub fn get(&self, j: usize) -> Option<&HPReal> {
        self.values.get(j)
    }

    /// `sum_{j<=J} eta_j (s-1)^j`.
    pub fn eval_partial(&self, j_max: usize, w: &HPReal) -> HPReal {
        let n = j_max.min(self.j_max);
        PowerSeries::new(self.values[..=n].to_vec(), "s=1").eval(w)
    }
}

/// `eta_0 ..= eta_J`, from `J + 8` Stieltjes constants.
pub fn eta_coeffs(j_max: usize, prec: u32) -> Result<EtaTable> {
    let n = j_max + ETA_SLACK;
    if n > MAX_STIELTJES {
        return Err(Error::LimitExceeded {
            requested: j_max as u64,
            limit: (MAX_STIELTJES - ETA_SLACK) as u64,
            hint: "eta coefficients need J + 8 Stieltjes constants (at most 48)",
        });
    }
    let wp = prec + 32;
    let gammas = stieltjes(n, wp.max(4 * n as u32))?;
    let order = n + 1;
    let mut a = PowerSeries::zeros(order, wp);
    *a.coeff_mut(0) = HPReal::one(wp);
    let mut fact = HPReal::one(wp);
    for (i, g) in gammas.iter().enumerate() {
        if i > 0 {
            fact = fact.mul_i64(i as i64);
        }
        let sign = if i % 2 == 0 { 1 } else { -1 };
        *a.coeff_mut(i + 1) = (g / &fact).mul_i64(sign);
    }
    let g = a.deriv().div(&a.truncate(order - 1))?.neg();
    let values = g.coeffs()[..=j_max].iter().map(|c| c.with_prec(prec)).collect();
    Ok(EtaTable {
        values,
        j_max,
        stieltjes_used: gammas.into_iter().map(|c| c.with_prec(prec)).collect(),
    })
}

/// `g(s)` evaluated from `zeta` directly, with a central difference of
/// `log zeta` at spacing `2^(-prec/3)`. Independent of the Stieltjes route.
pub fn g_by_difference(s: &HPReal) -> Result<HPReal> {
    let p = s.prec();
    let h = HPReal::pow2(-(p as i32) / 3, p);
    let up = zeta(&(s + &h))?.ln();
    let down = zeta(&(s - &h))?.ln();
    let dlog = (up - down) / h.mul_i64(2);
    Ok(-dlog - (s - HPReal::one(p)).recip())
}
