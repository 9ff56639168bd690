//! The Riemann zeta function on the real axis `s > 1` and its Taylor
//! expansions, by Euler–Maclaurin summation.
//!
//! With `s = s0 + w`,
//!
//! ```text
//! zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
//!         + sum_{k=1..K} B_2k/(2k)! (s)_(2k-1) N^(-s-2k+1) + R_K
//! ```
//!
//! where `(s)_r = s(s+1)...(s+r-1)`. Every piece is a power series in `w`.
//! The remainder satisfies
//! `|R_K| <= |(s)_(2K+1)| |B_(2K+2)|/(2K+2)! N^(-sigma-2K-1)` times a
//! modest factor for real `s`; for the Taylor coefficients we use the
//! Cauchy estimate on the disk `|w| <= 1`, i.e. the same bound with `|s|`
//! replaced by `s0 + 1` and `sigma` by `s0 - 1`. `N` is fixed at 64 (more
//! for very high precision) and `K` grows until the bound drops below
//! `2^-(prec+16)`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::numkernel::{bernoulli_over_factorial, HPReal, PowerSeries};

/// Extra working bits carried inside the summation.
const GUARD: u32 = 32;

fn cutoff(prec: u32) -> u64 {
    // smallest Euler–Maclaurin term is about exp(-2 pi N) = 2^(-9.06 N)
    (prec as u64 / 6).max(64)
}

/// log2 of the Euler–Maclaurin term bound for index `k` (B_2k term), using
/// |B_2k|/(2k)! <= 2.2 (2 pi)^-2k.
fn log2_term_bound(k: u64, s_abs: f64, sigma: f64, n: f64) -> f64 {
    let r = 2 * k - 1;
    let mut lp = 0.0;
    for i in 0..r {
        lp += (s_abs + i as f64).log2();
    }
    1.2 - 2.0 * k as f64 * (2.0 * std::f64::consts::PI).log2() + lp
        - (sigma + r as f64) * n.log2()
}

fn check_domain(s0: &HPReal) -> Result<()> {
    if !(s0 > &1.0) {
        return Err(Error::Domain(format!(
            "zeta needs s > 1, got {}",
            s0.fmt_sci(10)
        )));
    }
    Ok(())
}

/// Taylor coefficients of `zeta(s0 + w)` up to `w^order`, with absolute
/// error below `2^-(prec)` per coefficient (times the Cauchy radius factor
/// 1 for `|w| <= 1`).
pub fn zeta_series(s0: &HPReal, order: usize, prec: u32) -> Result<PowerSeries> {
    check_domain(s0)?;
    let key = (s0.to_bytes(), order, prec);
    if let Some(hit) = series_cache().lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(hit.clone());
    }
    let out = zeta_series_uncached(s0, order, prec)?;
    series_cache()
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, out.clone());
    Ok(out)
}

type SeriesKey = (Vec<u8>, usize, u32);

fn series_cache() -> &'static Mutex<HashMap<SeriesKey, PowerSeries>> {
    static CACHE: OnceLock<Mutex<HashMap<SeriesKey, PowerSeries>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn zeta_series_uncached(s0: &HPReal, order: usize, prec: u32) -> Result<PowerSeries> {
    let wp = prec + GUARD;
    let s0 = s0.with_prec(wp);
    let n_cut = cutoff(wp);
    let nf = n_cut as f64;
    let s_hi = s0.to_f64() + if order > 0 { 1.0 } else { 0.0 };
    let s_lo = s0.to_f64() - if order > 0 { 1.0 } else { 0.0 };
    let target = -(wp as f64) - 16.0;

    // direct part: sum_{n<N} n^-s0 e^(-w log n)
    let mut acc = PowerSeries::zeros(order, wp);
    for n in 2..n_cut {
        let ln = HPReal::from_u64(n, wp).ln();
        let base = (-&s0 * &ln).exp();
        let term = PowerSeries::exp_linear(&-ln, order).scale(&base);
        acc = acc.add(&term)?;
    }
    *acc.coeff_mut(0) += HPReal::one(wp);

    let big_n = HPReal::from_u64(n_cut, wp);
    let ln_n = big_n.ln();
    // N^-(s0+w) = N^-s0 e^(-w log N)
    let n_pow = (-&s0 * &ln_n).exp();
    let decay = PowerSeries::exp_linear(&-&ln_n, order).scale(&n_pow);

    // N^(1-s)/(s-1)
    let denom = PowerSeries::constant(&s0 - HPReal::one(wp), order)
        .add(&PowerSeries::variable(order, wp))?;
    let integral = decay.scale(&big_n).div(&denom)?;
    acc = acc.add(&integral)?;
    // N^-s / 2
    acc = acc.add(&decay.scale(&HPReal::from_ratio(1, 2, wp)))?;

    // sum_k B_2k/(2k)! (s)_(2k-1) N^(-2k+1), still to be multiplied by N^-s
    let mut poch = PowerSeries::constant(HPReal::one(wp), order);
    let mut corr = PowerSeries::zeros(order, wp);
    let n_inv_sq = big_n.square().recip();
    let mut n_pow_k = big_n.clone();
    let mut k = 1u64;
    loop {
        // (s)_(2k-1): multiply in the factors s+2k-3 and s+2k-2
        let lo_factor = if k == 1 { 0 } else { 2 * k - 3 };
        for i in lo_factor..=(2 * k - 2) {
            let shift = PowerSeries::constant(&s0 + HPReal::from_u64(i, wp), order)
                .add(&PowerSeries::variable(order, wp))?;
            poch = poch.mul(&shift)?;
        }
        n_pow_k = &n_pow_k * &n_inv_sq;
        let b = bernoulli_over_factorial(2 * k as usize, wp);
        corr = corr.add(&poch.scale(&(&b * &n_pow_k)))?;
        let next = log2_term_bound(k + 1, s_hi, s_lo, nf);
        if next < target {
            break;
        }
        if k > 4 * n_cut {
            return Err(Error::PrecisionTooLow {
                what: "Euler-Maclaurin zeta".into(),
                required: wp,
                have: prec,
            });
        }
        k += 1;
    }
    acc = acc.add(&corr.mul(&decay)?)?;
    let coeffs = acc.into_coeffs().into_iter().map(|c| c.with_prec(prec)).collect();
    Ok(PowerSeries::new(coeffs, format!("s={}", s0.fmt_sci(12))))
}

/// `zeta(s)` for real `s > 1`.
pub fn zeta(s: &HPReal) -> Result<HPReal> {
    let prec = s.prec();
    Ok(zeta_series(s, 0, prec)?.coeff(0).clone())
}

/// `zeta(n)` for an integer `n >= 2`, memoized per precision.
pub fn zeta_int(n: u32, prec: u32) -> Result<HPReal> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), HPReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(n, prec)) {
        return Ok(v.clone());
    }
    let v = zeta(&HPReal::from_u64(n as u64, prec))?;
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert((n, prec), v.clone());
    Ok(v)
}

/// Taylor series of `log zeta(s0 + w)`.
pub fn log_zeta_series(s0: &HPReal, order: usize, prec: u32) -> Result<PowerSeries> {
    zeta_series(s0, order, prec)?.log()
}
