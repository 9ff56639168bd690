//! `S_k(x)` from the Hankel-contour representation
//!
//! ```text
//! S_k(x) ~ (1/2 pi i) \int_H (log(1/s) + sum_{i<=N} h_i s^i / i!)^k x^s ds/s,
//! ```
//!
//! with `h(s) = P(s+1) - log(1/s)`, `h_0 = beta - gamma`,
//! `h_i = (-1)^(i-1) i alpha_i`. Expanding by the multinomial theorem over
//! `m + k_0 + ... + k_N = k` and using
//!
//! ```text
//! I(m, M, x) = sum_{j<=m} C(m,j) (log_2 x)^j (1/Gamma)^(m-j)(1-M) / (log x)^M
//! ```
//!
//! for `(log 1/s)^m s^M`, where `M = sum i k_i`, gives a polynomial in
//! `log_2 x` per power of `1/log x`.

use crate::constants::ConstantsTable;
use crate::error::{Error, Result};
use crate::gammaderiv::inv_gamma_jet;
use crate::numkernel::HPReal;

use super::Expansion;

/// Largest `k` accepted by [`generate_sk`].
pub const MAX_K: u32 = 6;
/// Largest truncation order accepted by [`generate_sk`].
pub const MAX_N: u32 = 8;

/// Multinomial data for one composition `m + k_0 + ... + k_N = k`.
struct Composition {
    m: u32,
    ks: Vec<u32>,
    weight: u32,
}

fn compositions(k: u32, n: u32) -> Vec<Composition> {
    fn rec(i: u32, n: u32, left: u32, weight: u32, ks: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if i > n {
            out.push(Composition {
                m: left,
                ks: ks.clone(),
                weight,
            });
            return;
        }
        for c in 0..=left {
            let w = weight + i * c;
            if w > n {
                break;
            }
            ks.push(c);
            rec(i + 1, n, left - c, w, ks, out);
            ks.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// `S_k` expansion through `1/(log x)^n`, centered on `log_2 x + beta`.
pub fn generate_sk(k: u32, n: u32, consts: &ConstantsTable) -> Result<Expansion> {
    generate_sk_with(k, n, consts, true)
}

/// As [`generate_sk`]; with `skip_vanishing` the compositions with `m = 0`
/// and `M >= 1` (whose Hankel integral is zero) are dropped up front.
pub fn generate_sk_with(k: u32, n: u32, consts: &ConstantsTable, skip_vanishing: bool) -> Result<Expansion> {
    if k == 0 || k > MAX_K {
        return Err(Error::LimitExceeded {
            requested: k as u64,
            limit: MAX_K as u64,
            hint: "the S_k generator supports 1 <= k <= 6",
        });
    }
    if n > MAX_N {
        return Err(Error::LimitExceeded {
            requested: n as u64,
            limit: MAX_N as u64,
            hint: "the S_k generator supports truncation orders up to 8",
        });
    }
    let prec = consts.prec;
    // h_i / i!
    let mut h = vec![&consts.beta - &consts.gamma];
    for i in 1..=n {
        let a = consts.alpha(i as usize)?;
        let v = a.mul_i64(i as i64) / HPReal::factorial(i, prec);
        h.push(if i % 2 == 1 { v } else { -v });
    }
    let jets: Vec<Vec<HPReal>> = (0..=n)
        .map(|big_m| Ok(inv_gamma_jet(big_m, k as usize, prec)?.derivs))
        .collect::<Result<_>>()?;

    let mut out = Expansion::new(k, n, false, consts.beta.clone());
    let k_fact = HPReal::factorial(k, prec);
    for comp in compositions(k, n) {
        let big_m = comp.weight;
        if skip_vanishing && comp.m == 0 && big_m >= 1 {
            continue;
        }
        let mut c = &k_fact / HPReal::factorial(comp.m, prec);
        for (i, &ki) in comp.ks.iter().enumerate() {
            if ki > 0 {
                c = c * h[i].powi(ki as i32) / HPReal::factorial(ki, prec);
            }
        }
        let jet = &jets[big_m as usize];
        for j in 0..=comp.m {
            let d = &jet[(comp.m - j) as usize];
            if d.is_zero() {
                continue;
            }
            out.add_term(j, big_m, &c * HPReal::binomial(comp.m, j, prec) * d);
        }
    }
    Ok(out.recentered())
}
