//! `alpha_{j,a} = sum_p (log p)^j / p^a`, the magnitudes of the derivatives
//! of the prime zeta function at integer `a >= 2`.
//!
//! Two routes:
//!
//! * [`alpha_jk_column`] (used for all constants): the primes `p <= L` are
//!   summed exactly and the rest is `(-1)^j P_L^(j)(a)` from the Taylor
//!   series of the rough prime zeta function (see
//!   [`prime_zeta_rough_series`]). Accurate to the working precision.
//! * [`alpha_ja_direct`]: a plain prime sum up to `plimit` plus a tail bound
//!   from Chebyshev's estimate `pi(t) <= 1.3 t / log t`. Accurate only to the
//!   tail, which for large `j` is most of the value; kept as an independent
//!   cross-check.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::numkernel::{HPReal, NeumaierSum};
use crate::primes::{sieve_primes, simple_primes};
use crate::zetaprime::prime_zeta_rough_series;

/// Primes up to this cut are summed explicitly in the series route.
pub const DEFAULT_SPLIT: u64 = 100;

const GUARD: u32 = 32;

/// `alpha_{j,a}` for `j = 0..=j_max` at fixed `a >= 2`, memoized.
pub fn alpha_jk_column(a: u32, j_max: usize, prec: u32) -> Result<Vec<HPReal>> {
    if a < 2 {
        return Err(Error::Domain(format!("alpha_(j,a) needs a >= 2, got {a}")));
    }
    type Key = (u32, u32);
    static CACHE: OnceLock<Mutex<HashMap<Key, Vec<HPReal>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(col) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(a, prec)) {
        if col.len() > j_max {
            return Ok(col[..=j_max].to_vec());
        }
    }
    let col = compute_column(a, j_max, prec, DEFAULT_SPLIT)?;
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert((a, prec), col.clone());
    Ok(col)
}

/// Series route with an explicit split point; exposed for tests that vary
/// the cut to check independence from it.
pub fn compute_column(a: u32, j_max: usize, prec: u32, split: u64) -> Result<Vec<HPReal>> {
    let wp = prec + GUARD;
    let mut col: Vec<HPReal> = vec![HPReal::zero(wp); j_max + 1];
    for p in simple_primes(split) {
        let lp = HPReal::from_u64(p, wp).ln();
        let mut term = HPReal::from_u64(p, wp).powi(a as i32).recip();
        for c in col.iter_mut() {
            *c += &term;
            term = &term * &lp;
        }
    }
    // alpha_{j,a} >= (log 2)^j 2^-a, so this is a relative tolerance
    let tol: Vec<f64> = (0..=j_max)
        .map(|j| -(wp as f64) + j as f64 * std::f64::consts::LN_2.log2() - a as f64)
        .collect();
    let tail = prime_zeta_rough_series(&HPReal::from_u64(a as u64, wp), split, j_max, wp, &tol)?;
    let mut fact = HPReal::one(wp);
    for (j, c) in col.iter_mut().enumerate() {
        if j > 1 {
            fact = fact.mul_i64(j as i64);
        }
        let t = tail.coeff(j) * &fact;
        if j % 2 == 0 {
            *c += t;
        } else {
            *c -= t;
        }
    }
    Ok(col.into_iter().map(|c| c.with_prec(prec)).collect())
}

/// Natural log of an upper bound for `alpha_{j,a}`, used to truncate sums
/// over `a`.
pub fn ln_alpha_jk_upper(j: usize, a: f64) -> f64 {
    let first = j as f64 * std::f64::consts::LN_2.ln() - a * std::f64::consts::LN_2;
    let rest = crate::zetaprime::prime_zeta::ln_rough_power_sum_bound(j, a, 2);
    let m = first.max(rest);
    m + ((first - m).exp() + (rest - m).exp()).ln()
}

/// A truncated prime sum with its tail bound.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub value: f64,
    /// Bound on the omitted primes `p > plimit`, already doubled.
    pub tail_bound: f64,
}

/// `Gamma(j, x)` for integer `j >= 1`: `(j-1)! e^-x sum_{i<j} x^i / i!`.
fn upper_gamma(j: usize, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..j {
        term *= x / i as f64;
        sum += term;
    }
    let mut fact = 1.0;
    for i in 2..j {
        fact *= i as f64;
    }
    fact * (-x).exp() * sum
}

/// Bound on `sum_{p > X} (log p)^j / p^a` from `pi(t) <= 1.3 t/log t`
/// (valid for `t >= 17`), doubled for safety. By partial summation the
/// tail is at most `int_X^oo pi(t) |f'(t)| dt` with
/// `f(t) = (log t)^j t^-a`; for `log X >= j/a` this is below
/// `1.3 a Gamma(j, (a-1) log X) / (a-1)^j` (`j >= 1`) or
/// `1.3 a X^(1-a) / ((a-1) log X)` (`j = 0`).
pub fn chebyshev_tail(j: usize, a: u32, x: u64) -> Result<f64> {
    let xf = x as f64;
    let lx = xf.ln();
    let af = a as f64;
    if x < 17 || lx < j as f64 / af {
        return Err(Error::TailBudget {
            bound: f64::INFINITY,
            requested: 0.0,
            hint: format!("prime limit must exceed max(17, e^(j/a)) = {:.3e}", (j as f64 / af).exp()),
        });
    }
    let t = if j == 0 {
        1.3 * af * xf.powf(1.0 - af) / ((af - 1.0) * lx)
    } else {
        1.3 * af * upper_gamma(j, (af - 1.0) * lx) / (af - 1.0).powi(j as i32)
    };
    Ok(2.0 * t)
}

/// `alpha_{j,a}` for `j = 0..=j_max` by direct summation over `p <= plimit`.
pub fn alpha_ja_direct(j_max: usize, a: u32, plimit: u64) -> Result<Vec<DirectSum>> {
    let mut sums = vec![NeumaierSum::new(); j_max + 1];
    for p in sieve_primes(plimit) {
        let pf = p as f64;
        let lp = pf.ln();
        let mut t = pf.powi(-(a as i32));
        for s in sums.iter_mut() {
            s.add(t);
            t *= lp;
        }
    }
    sums.iter()
        .enumerate()
        .map(|(j, s)| {
            Ok(DirectSum {
                value: s.value(),
                tail_bound: chebyshev_tail(j, a, plimit)?,
            })
        })
        .collect()
}

/// Direct-sum `alpha_{j,a}`, failing when the tail bound exceeds `tol`.
pub fn alpha_ja_checked(j: usize, a: u32, plimit: u64, tol: f64) -> Result<DirectSum> {
    let d = alpha_ja_direct(j, a, plimit)?.swap_remove(j);
    if d.tail_bound > tol {
        return Err(Error::TailBudget {
            bound: d.tail_bound,
            requested: tol,
            hint: "increase the prime limit".into(),
        });
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 192;

    #[test]
    fn independent_of_split_point() {
        let a = compute_column(2, 12, P, 100).unwrap();
        let b = compute_column(2, 12, P, 300).unwrap();
        for (j, (x, y)) in a.iter().zip(&b).enumerate() {
            let rel = ((x - y) / x).abs();
            assert!(rel < HPReal::pow2(-(P as i32) + 16, P), "j={j}: {x:?} vs {y:?}");
        }
    }

    #[test]
    fn direct_sums_bracket_series_values() {
        let col = alpha_jk_column(2, 3, P).unwrap();
        for lim in [1_000_000u64, 10_000_000] {
            let direct = alpha_ja_direct(3, 2, lim).unwrap();
            for j in 0..=3 {
                let v = col[j].to_f64();
                let d = &direct[j];
                assert!(v >= d.value - 1e-12 && v <= d.value + d.tail_bound, "j={j} lim={lim}");
            }
        }
    }

    #[test]
    fn upper_bound_is_an_upper_bound() {
        for a in [2u32, 3, 7, 40] {
            let col = alpha_jk_column(a, 10, P).unwrap();
            for (j, v) in col.iter().enumerate() {
                assert!(v.ln().to_f64() <= ln_alpha_jk_upper(j, a as f64), "j={j} a={a}");
            }
        }
    }

    #[test]
    fn tail_needs_large_enough_limit() {
        assert!(chebyshev_tail(40, 2, 1_000_000).is_err());
        assert!(chebyshev_tail(2, 2, 1_000_000).unwrap() < 1e-3);
        assert!(alpha_ja_checked(2, 2, 10_000, 1e-9).is_err());
    }
}
