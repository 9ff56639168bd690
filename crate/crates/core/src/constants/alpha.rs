//! `alpha_j`, `beta`, `d_{j,k}` and the ratio diagnostics.
//!
//! `alpha_j` comes from the decomposition of `-zeta'/zeta - 1/(s-1)` into
//! prime-power terms:
//!
//! ```text
//! alpha_j = (1/j) ( sum_{k>=2} k^(j-1) alpha_{j,k} + (-1)^j (j-1)! eta_{j-1} ).
//! ```

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use super::alpha_jk::{alpha_jk_column, compute_column, ln_alpha_jk_upper, DEFAULT_SPLIT};
use crate::error::{Error, Result};
use crate::numkernel::HPReal;
use crate::primes::simple_primes;
use crate::zetaprime::{eta_coeffs, prime_zeta, prime_zeta_rough_series, MAX_STIELTJES};

/// Largest `j` for which `alpha_j` is supported (limited by the `eta`
/// table, which needs `j + 7` Stieltjes constants).
pub const MAX_ALPHA_J: usize = 40;

const GUARD: u32 = 32;
const K_CHUNK: u32 = 16;

/// `alpha_1 ..= alpha_{j_max}` plus how far the `k`-sum ran for each.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaSums {
    /// Index `j - 1` holds `alpha_j`.
    pub values: Vec<HPReal>,
    /// Last `k` included in the `k`-sum, per `j`.
    pub k_cut: Vec<u32>,
    /// Prime split used for `alpha_{j,k}`.
    pub split: u64,
}

impl AlphaSums {
    pub fn get(&self, j: usize) -> Option<&HPReal> {
        j.checked_sub(1).and_then(|i| self.values.get(i))
    }
}

fn check_j(j_max: usize) -> Result<()> {
    if j_max == 0 {
        return Err(Error::Domain("alpha_j needs j >= 1".into()));
    }
    if j_max > MAX_ALPHA_J || j_max - 1 + crate::zetaprime::eta::ETA_SLACK > MAX_STIELTJES {
        return Err(Error::LimitExceeded {
            requested: j_max as u64,
            limit: MAX_ALPHA_J as u64,
            hint: "alpha_j is supported for j <= 40",
        });
    }
    Ok(())
}

/// `alpha_1 ..= alpha_{j_max}` at `prec` bits, memoized.
pub fn alpha_all(j_max: usize, prec: u32) -> Result<AlphaSums> {
    check_j(j_max)?;
    static CACHE: OnceLock<Mutex<HashMap<u32, AlphaSums>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&prec) {
        if s.values.len() >= j_max {
            return Ok(AlphaSums {
                values: s.values[..j_max].to_vec(),
                k_cut: s.k_cut[..j_max].to_vec(),
                split: s.split,
            });
        }
    }
    let out = alpha_with(j_max, prec, DEFAULT_SPLIT, 0)?;
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(prec, out.clone());
    Ok(out)
}

/// `alpha_j` at `prec` bits.
pub fn alpha(j: usize, prec: u32) -> Result<HPReal> {
    Ok(alpha_all(j, prec)?.values[j - 1].clone())
}

/// The `k`-sum with explicit knobs: the prime split for `alpha_{j,k}` and
/// a number of extra `k` terms beyond the truncation rule (for stability
/// checks).
pub fn alpha_with(j_max: usize, prec: u32, split: u64, extra_k: u32) -> Result<AlphaSums> {
    check_j(j_max)?;
    let wp = prec + GUARD;
    let column = |k: u32| -> Result<Vec<HPReal>> {
        if split == DEFAULT_SPLIT {
            alpha_jk_column(k, j_max, wp)
        } else {
            compute_column(k, j_max, wp, split)
        }
    };
    let mut sums = vec![HPReal::zero(wp); j_max + 1];
    let mut done = vec![false; j_max + 1];
    done[0] = true;
    let mut k_cut = vec![0u32; j_max + 1];
    let mut extra_left = vec![extra_k; j_max + 1];
    let mut k0 = 2u32;
    let ln2 = std::f64::consts::LN_2;
    while done.iter().any(|d| !d) {
        let ks: Vec<u32> = (k0..k0 + K_CHUNK).collect();
        let cols: Vec<Vec<HPReal>> = ks.par_iter().map(|&k| column(k)).collect::<Result<_>>()?;
        for (&k, col) in ks.iter().zip(&cols) {
            let kf = HPReal::from_u64(k as u64, wp);
            let mut kpow = HPReal::one(wp);
            for j in 1..=j_max {
                if j > 1 {
                    kpow = &kpow * &kf;
                }
                if done[j] {
                    continue;
                }
                sums[j] += &kpow * &col[j];
                k_cut[j] = k;
                // remaining terms decrease once k is past the peak of k^(j-1) 2^-k
                let past_peak = k as f64 > (j as f64 - 1.0) / ln2 + 1.0;
                let next = k as f64 + 1.0;
                let ln_next = (j as f64 - 1.0) * next.ln() + ln_alpha_jk_upper(j, next);
                // geometric tail with ratio at most about 1/2 beyond the peak
                let ln_tail = ln_next + (2.0f64).ln() * 2.0;
                let ln_total = sums[j].abs().ln().to_f64();
                if past_peak && ln_tail < ln_total - (wp as f64) * ln2 {
                    if extra_left[j] == 0 {
                        done[j] = true;
                    } else {
                        extra_left[j] -= 1;
                    }
                }
            }
        }
        k0 += K_CHUNK;
        if k0 > 4000 {
            return Err(Error::TailBudget {
                bound: f64::INFINITY,
                requested: (-(wp as f64)).exp2(),
                hint: "k-sum did not terminate".into(),
            });
        }
    }
    let eta = eta_coeffs(j_max - 1, wp)?;
    let mut values = Vec::with_capacity(j_max);
    let mut fact = HPReal::one(wp); // (j-1)!
    for j in 1..=j_max {
        if j > 1 {
            fact = fact.mul_i64(j as i64 - 1);
        }
        let e = &eta.values[j - 1] * &fact;
        let s = if j % 2 == 0 { &sums[j] + e } else { &sums[j] - e };
        values.push(s.div_i64(j as i64).with_prec(prec));
    }
    Ok(AlphaSums {
        values,
        k_cut: k_cut[1..].to_vec(),
        split,
    })
}

/// `beta = gamma + sum_p (1/p + log(1 - 1/p))`, computed as
/// `gamma + sum_{p<=L} (1/p + log(1-1/p)) - sum_{r>=2} P_L(r)/r` with
/// `P_L` the prime zeta function over `p > L`.
pub fn beta(prec: u32) -> Result<HPReal> {
    static CACHE: OnceLock<Mutex<HashMap<u32, HPReal>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&prec) {
        return Ok(b.clone());
    }
    let wp = prec + GUARD;
    let split = DEFAULT_SPLIT;
    let mut acc = HPReal::euler_gamma(wp);
    for p in simple_primes(split) {
        let inv = HPReal::from_u64(p, wp).recip();
        acc += &inv + (HPReal::one(wp) - &inv).ln();
    }
    let ln2 = std::f64::consts::LN_2;
    let mut r = 2u32;
    loop {
        let ln_bound = crate::zetaprime::prime_zeta::ln_rough_power_sum_bound(0, r as f64, split);
        if ln_bound < -(wp as f64 + 8.0) * ln2 {
            break;
        }
        let tol = [-(wp as f64) - 8.0];
        let p = prime_zeta_rough_series(&HPReal::from_u64(r as u64, wp), split, 0, wp, &tol)?;
        acc -= p.coeff(0).div_i64(r as i64);
        r += 1;
    }
    let out = acc.with_prec(prec);
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert(prec, out.clone());
    Ok(out)
}

/// `d_{j,k} = (alpha_{j,k} - P(k) log^j 2) / j`.
pub fn d_jk(j: usize, k: u32, prec: u32) -> Result<HPReal> {
    if j == 0 || k < 2 {
        return Err(Error::Domain(format!("d_(j,k) needs j >= 1, k >= 2; got ({j}, {k})")));
    }
    let wp = prec + GUARD;
    let a = alpha_jk_column(k, j, wp)?;
    let pk = prime_zeta(&HPReal::from_u64(k as u64, wp))?;
    let d = (&a[j] - pk * HPReal::ln2(wp).powi(j as i32)).div_i64(j as i64);
    Ok(d.with_prec(prec))
}

/// `j! 2^j / (2 j^2)`, the leading asymptotic of `alpha_j`.
pub fn alpha_asymptotic(j: usize, prec: u32) -> HPReal {
    let jf = HPReal::from_u64(j as u64, prec);
    HPReal::factorial(j as u32, prec) * HPReal::pow2(j as i32, prec) / (jf.square().mul_i64(2))
}

/// `(j, alpha_j / (j! 2^j / (2 j^2)))` for `j = 1..=j_max`.
pub fn ratio_table(j_max: usize, prec: u32) -> Result<Vec<(usize, HPReal)>> {
    let sums = alpha_all(j_max, prec)?;
    Ok(sums
        .values
        .iter()
        .enumerate()
        .map(|(i, a)| (i + 1, a / alpha_asymptotic(i + 1, prec)))
        .collect())
}

/// `(ratio_j - 1) (4/3)^j` for inspection: the conditional refinement
/// predicts `ratio_j - 1 ~ (3/4)^j (2/3 + o(1))`. Report only.
pub fn rh_refinement_diagnostic(ratios: &[(usize, HPReal)]) -> Vec<(usize, f64)> {
    ratios
        .iter()
        .map(|(j, r)| (*j, (r.to_f64() - 1.0) * (4.0f64 / 3.0).powi(*j as i32)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 192;

    fn close(a: &HPReal, b: &HPReal, rel_bits: i32) -> bool {
        let scale = a.abs().max(HPReal::one(a.prec()));
        (a - b).abs() <= scale * HPReal::pow2(-rel_bits, a.prec())
    }

    #[test]
    fn alpha_one_is_euler_plus_prime_sum() {
        let a1 = alpha(1, P).unwrap();
        assert!((a1.to_f64() - 1.332_582).abs() < 5e-7);
        // gamma + sum_{k>=2} alpha_{1,k}
        let wp = P + 32;
        let mut s = HPReal::euler_gamma(wp);
        for k in 2..400 {
            s += &alpha_jk_column(k, 1, wp).unwrap()[1];
        }
        assert!(close(&a1, &s.with_prec(P), P as i32 - 16));
    }

    #[test]
    fn beta_value() {
        let b = beta(P).unwrap();
        assert!((b.to_f64() - 0.261_497_212_847_642_78).abs() < 1e-15);
        assert!(b < HPReal::euler_gamma(P));
    }

    #[test]
    fn beta_from_log_p2_series() {
        // beta = gamma - sum_{r>=2} P(r)/r with full prime zeta values
        let wp = P + 16;
        let mut s = HPReal::euler_gamma(wp);
        for r in 2..=(wp + 8) {
            s -= prime_zeta(&HPReal::from_u64(r as u64, wp)).unwrap().div_i64(r as i64);
        }
        assert!(close(&beta(P).unwrap(), &s.with_prec(P), P as i32 - 16));
    }

    #[test]
    fn d_identity_and_sign() {
        let wp = P + 32;
        let d12 = d_jk(1, 2, P).unwrap();
        let p2 = prime_zeta(&HPReal::from_i64(2, wp)).unwrap();
        let a12 = &alpha_jk_column(2, 1, wp).unwrap()[1];
        let rebuilt = p2 * HPReal::ln2(wp) + d12.with_prec(wp);
        assert!(close(&rebuilt.with_prec(P), &a12.with_prec(P), P as i32 - 8));
        for j in 1..=6 {
            for k in 2..=6 {
                assert!(d_jk(j, k, P).unwrap().is_positive(), "d_({j},{k})");
            }
        }
    }

    #[test]
    fn stable_under_split_and_k_cut() {
        let a = alpha_all(12, P).unwrap();
        let b = alpha_with(12, P, 200, 20).unwrap();
        for j in 1..=12 {
            assert!(close(a.get(j).unwrap(), b.get(j).unwrap(), P as i32 - 20), "j={j}");
        }
    }

    #[test]
    fn growth_matches_leading_asymptotic() {
        let r = ratio_table(30, P).unwrap();
        for w in r.windows(2).skip(14) {
            let (j, rj) = (&w[0].0, &w[0].1);
            let ratio = (&w[1].1 / rj).to_f64();
            assert!((ratio - 1.0).abs() < 0.05, "j={j}: {ratio}");
            assert!(rj > &1.0);
        }
    }

    #[test]
    fn limits() {
        assert!(alpha(0, P).is_err());
        assert!(alpha(41, P).is_err());
        assert!(d_jk(0, 2, P).is_err());
    }
}
