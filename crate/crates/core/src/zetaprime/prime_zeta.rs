//! The prime zeta function `P(s) = sum_p p^-s` by Möbius inversion of
//! `log zeta`, and its "rough" variant over the primes above a cut `L`.
//!
//! With `zeta_L(t) = zeta(t) prod_{p<=L} (1 - p^-t)` (the zeta function of
//! the integers free of primes `<= L`),
//!
//! ```text
//! P_L(s) = sum_{p>L} p^-s = sum_{m>=1} mu(m)/m log zeta_L(m s).
//! ```
//!
//! Taylor series in `w = s - s0` follow by expanding `log zeta_L` around
//! `m s0` and substituting `w -> m w`. The `m`-sum stops once the bound
//! `m^(j-1) sum_{n>L} (log n)^j n^(-m s0)` on the contribution to the
//! `j`-th derivative falls below the caller's tolerance for every `j`.

use crate::error::{Error, Result};
use crate::numkernel::{HPReal, PowerSeries};
use crate::primes::simple_primes;

use super::zeta::zeta_series;

const GUARD: u32 = 32;
const MAX_M: u64 = 400;

/// Möbius function by trial division.
pub fn moebius(mut m: u64) -> i32 {
    if m == 1 {
        return 1;
    }
    let mut sign = 1;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Natural log of `Gamma(j+1, x) = j! e^-x sum_{i<=j} x^i/i!`.
fn ln_upper_gamma_int(j: usize, x: f64) -> f64 {
    let mut ln_fact = 0.0;
    let mut terms = Vec::with_capacity(j + 1);
    for i in 0..=j {
        if i > 0 {
            ln_fact += (i as f64).ln();
        }
        let t = if x > 0.0 {
            i as f64 * x.ln() - ln_fact
        } else if i == 0 {
            0.0
        } else {
            f64::NEG_INFINITY
        };
        terms.push(t);
    }
    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = terms.iter().map(|t| (t - m).exp()).sum();
    ln_fact - x + m + s.ln()
}

/// Natural-log upper bound for `sum_{n>L} (log n)^j n^-t`, `t > 1`, using
/// that the summand is unimodal with peak at `e^(j/t)`:
/// the sum is at most the peak value on `[L+1, oo)` plus the integral.
pub fn ln_rough_power_sum_bound(j: usize, t: f64, cut: u64) -> f64 {
    let a = (cut + 1) as f64;
    let ln_a = a.ln();
    let jf = j as f64;
    let ln_f = |u: f64| -> f64 {
        if j == 0 {
            -t * u
        } else {
            jf * u.ln() - t * u
        }
    };
    let peak_u = (jf / t).max(ln_a);
    let ln_peak = ln_f(peak_u);
    let x = (t - 1.0) * ln_a;
    let ln_int = ln_upper_gamma_int(j, x) - (jf + 1.0) * (t - 1.0).ln();
    let m = ln_peak.max(ln_int);
    m + ((ln_peak - m).exp() + (ln_int - m).exp()).ln()
}

/// Taylor series of `log zeta_L(t0 + u)` in `u`.
pub fn rough_log_zeta_series(t0: &HPReal, cut: u64, order: usize, prec: u32) -> Result<PowerSeries> {
    let mut acc = zeta_series(t0, order, prec)?;
    let wp = acc.prec();
    for p in simple_primes(cut) {
        let ln_p = HPReal::from_u64(p, wp).ln();
        let c = (-t0 * &ln_p).exp();
        // 1 - p^-t0 e^(-u log p)
        let factor = PowerSeries::exp_linear(&-ln_p, order)
            .scale(&-c)
            .add(&PowerSeries::constant(HPReal::one(wp), order))?;
        acc = acc.mul(&factor)?;
    }
    acc.log()
}

/// Taylor series of `P_L(s0 + w) = sum_{p>L} p^-(s0+w)` up to `w^order`.
///
/// `tol_log2[j]` is the log2 of the absolute error allowed on
/// `j! [w^j] P_L`, i.e. on the `j`-th derivative; terms of the Möbius sum
/// whose bound is below it for every `j` are skipped.
pub fn prime_zeta_rough_series(
    s0: &HPReal,
    cut: u64,
    order: usize,
    prec: u32,
    tol_log2: &[f64],
) -> Result<PowerSeries> {
    if !(s0 > &1.0) {
        return Err(Error::Domain(format!(
            "prime zeta needs s > 1, got {}",
            s0.fmt_sci(10)
        )));
    }
    assert_eq!(tol_log2.len(), order + 1);
    let s0f = s0.to_f64();
    let ln2 = std::f64::consts::LN_2;
    let needed = |m: u64| -> bool {
        let t = m as f64 * s0f;
        (0..=order).any(|j| {
            let b = ((j as f64 - 1.0) * (m as f64).ln()
                + ln_rough_power_sum_bound(j, t, cut.max(1)))
                / ln2;
            b >= tol_log2[j]
        })
    };
    let m_max = (1..=MAX_M).rev().find(|&m| needed(m)).unwrap_or(0);
    if m_max == MAX_M {
        return Err(Error::TailBudget {
            bound: f64::INFINITY,
            requested: tol_log2.iter().cloned().fold(f64::INFINITY, f64::min).exp2(),
            hint: "Möbius sum did not converge; raise the prime cut".into(),
        });
    }
    let mut acc = PowerSeries::zeros(order, prec);
    for m in 1..=m_max {
        let mu = moebius(m);
        if mu == 0 {
            continue;
        }
        // the substitution w -> m w amplifies the j-th coefficient by m^j
        let extra = ((order as f64) * (m as f64).log2()).ceil() as u32;
        let wp = prec + GUARD + extra;
        let t0 = s0.with_prec(wp).mul_i64(m as i64);
        let ser = rough_log_zeta_series(&t0, cut, order, wp)?
            .scale_variable(&HPReal::from_u64(m, wp))
            .scale(&HPReal::from_ratio(mu as i64, m as i64, wp));
        acc = acc.add(&ser)?;
    }
    let coeffs = acc.into_coeffs().into_iter().map(|c| c.with_prec(prec)).collect();
    Ok(PowerSeries::new(coeffs, format!("s={}", s0.fmt_sci(12))))
}

/// `P(s)` for real `s > 1`, to absolute accuracy about `2^-prec`.
pub fn prime_zeta(s: &HPReal) -> Result<HPReal> {
    let prec = s.prec();
    let ser = prime_zeta_rough_series(s, 1, 0, prec, &[-(prec as f64) - 8.0])?;
    Ok(ser.coeff(0).clone())
}
