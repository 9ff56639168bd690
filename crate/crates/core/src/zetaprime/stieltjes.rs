//! Stieltjes constants `gamma_n = lim (sum_{m<=x} log^n m / m - log^(n+1) x/(n+1))`
//! by Euler–Maclaurin summation of `f(t) = log^n t / t`:
//!
//! ```text
//! gamma_n = sum_{m<N} f(m) - log^(n+1) N/(n+1) + f(N)/2
//!         - sum_{k=1..K} B_2k/(2k)! f^(2k-1)(N) - R_K.
//! ```
//!
//! Derivatives are `f^(r)(t) = t^(-1-r) Q_r(log t)` with integer polynomials
//! `Q_0 = u^n`, `Q_(r+1) = -(1+r) Q_r + Q_r'`. `K` grows until the next
//! correction term falls below `2^-(wp+8)`; the remainder is bounded by
//! twice the first omitted term (`f^(2K)` is one-signed beyond `N` once
//! `log N` exceeds the root range of `Q_2K`, which holds for the `N` used).
//!
//! The partial sums cancel down to `|gamma_n|`, losing about
//! `n log2(log N)` bits, so the working precision carries that many guard
//! bits on top of the requested precision.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::Integer;

use crate::error::{Error, Result};
use crate::numkernel::{bernoulli_over_factorial, HPReal};

/// Largest supported Stieltjes index.
pub const MAX_STIELTJES: usize = 48;

/// Summation cutoff `N`; the smallest correction term is near
/// `exp(-2 pi N)`, so `N` grows with the precision.
fn cutoff(prec: u32) -> u64 {
    (prec as u64 / 4).max(64)
}

/// Precision needed to deliver `gamma_0..=gamma_n_max` at `prec` bits.
pub fn working_precision(n_max: usize, prec: u32) -> u32 {
    let ln_n = (cutoff(prec) as f64).ln();
    prec + 64 + (n_max as f64 * ln_n.log2()).ceil() as u32
}

/// `gamma_0 ..= gamma_{n_max}` to about `prec` bits (absolute), memoized.
pub fn stieltjes(n_max: usize, prec: u32) -> Result<Vec<HPReal>> {
    if n_max > MAX_STIELTJES {
        return Err(Error::LimitExceeded {
            requested: n_max as u64,
            limit: MAX_STIELTJES as u64,
            hint: "Stieltjes constants are only computed up to index 48",
        });
    }
    // each constant needs prec >= 4 n so the cancellation budget stays sane
    let required = 4 * n_max as u32;
    if prec < required {
        return Err(Error::PrecisionTooLow {
            what: format!("Stieltjes constants up to index {n_max}"),
            required,
            have: prec,
        });
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Vec<HPReal>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(n_max, prec)) {
        return Ok(v.clone());
    }
    let out: Vec<HPReal> = (0..=n_max).map(|n| stieltjes_one(n, n_max, prec)).collect::<Result<_>>()?;
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert((n_max, prec), out.clone());
    Ok(out)
}

fn eval_poly(coeffs: &[Integer], u: &HPReal) -> HPReal {
    let prec = u.prec();
    let mut acc = HPReal::zero(prec);
    for c in coeffs.iter().rev() {
        acc = &acc * u + HPReal::from_integer(c, prec);
    }
    acc
}

fn stieltjes_one(n: usize, n_max: usize, prec: u32) -> Result<HPReal> {
    let wp = working_precision(n_max, prec);
    let n_cut = cutoff(prec);
    let big_n = HPReal::from_u64(n_cut, wp);
    let ln_n = big_n.ln();

    let f = |m: u64| -> HPReal {
        let t = HPReal::from_u64(m, wp);
        t.ln().powi(n as i32) / t
    };
    let mut sum = HPReal::zero(wp);
    for m in 2..n_cut {
        sum += f(m);
    }
    if n == 0 {
        sum += HPReal::one(wp);
    }
    sum -= ln_n.powi(n as i32 + 1).div_i64(n as i64 + 1);
    sum += f(n_cut).div_i64(2);

    // Q_r as coefficient vectors in u = log t (index = power)
    let mut q: Vec<Integer> = vec![Integer::new(); n + 1];
    q[n] = Integer::from(1);
    let mut r = 0usize;
    let target = HPReal::pow2(-(wp as i32) - 8, wp);
    let mut k = 1usize;
    loop {
        // advance Q_r to Q_(2k-1)
        while r < 2 * k - 1 {
            let mut next: Vec<Integer> = q.iter().map(|c| Integer::from(c * -(1 + r as i64))).collect();
            for i in 1..=n {
                next[i - 1] += Integer::from(&q[i] * i as u32);
            }
            q = next;
            r += 1;
        }
        let deriv = eval_poly(&q, &ln_n) / big_n.powi(2 * k as i32);
        let term = bernoulli_over_factorial(2 * k, wp) * deriv;
        let small = term.abs() < target;
        sum -= term;
        if small && k > 2 {
            break;
        }
        if k > 8 * n_cut as usize {
            return Err(Error::PrecisionTooLow {
                what: format!("Euler-Maclaurin for gamma_{n}"),
                required: wp,
                have: prec,
            });
        }
        k += 1;
    }
    Ok(sum.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_constant() {
        let p = 192;
        let g = stieltjes(4, p).unwrap();
        let err = (&g[0] - HPReal::euler_gamma(p)).abs();
        assert!(err < HPReal::pow2(-(p as i32) + 8, p), "{err:?}");
    }

    /// Limit definition at x = 10^6 with a first-order Euler–Maclaurin
    /// correction f(x)/2, in binary64.
    fn limit_oracle(n: i32, x: u64) -> f64 {
        let mut s = crate::numkernel::NeumaierSum::new();
        for m in 1..=x {
            let mf = m as f64;
            s.add(mf.ln().powi(n) / mf);
        }
        let lx = (x as f64).ln();
        s.value() - lx.powi(n + 1) / (n + 1) as f64 - lx.powi(n) / (2.0 * x as f64)
    }

    #[test]
    fn first_constants_match_limit_definition() {
        let g = stieltjes(2, 128).unwrap();
        let x = 1_000_000;
        assert!((g[0].to_f64() - limit_oracle(0, x)).abs() < 1e-11);
        assert!((g[1].to_f64() - limit_oracle(1, x)).abs() < 1e-9);
        assert!((g[1].to_f64() + 0.072_815_845_483_676_72).abs() < 1e-15);
    }

    #[test]
    fn stable_under_precision_doubling() {
        let a = stieltjes(30, 192).unwrap();
        let b = stieltjes(30, 384).unwrap();
        for (n, (x, y)) in a.iter().zip(&b).enumerate() {
            let tol = HPReal::pow2(-192 + 16, 384) * x.abs().max(HPReal::one(384));
            assert!((x - y).abs() < tol, "gamma_{n}: {x:?} vs {y:?}");
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(stieltjes(49, 512), Err(Error::LimitExceeded { .. })));
        assert!(matches!(stieltjes(40, 128), Err(Error::PrecisionTooLow { .. })));
    }
}
