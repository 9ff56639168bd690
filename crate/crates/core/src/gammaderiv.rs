//! Derivatives of `1/Gamma` at the points `1 - M` and closed forms for
//! `Gamma'(M)`, `Gamma''(M)`.
//!
//! Around `z = 1 - M + w`,
//! `1/Gamma(z) = [w (w-1)(w-2)...(w-(M-1))] / Gamma(1+w)` and
//! `1/Gamma(1+w) = exp(gamma w - sum_{j>=2} zeta(j) (-w)^j / j)`,
//! so every jet is an exact polynomial times one exponential series.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{HPReal, PowerSeries};
use crate::zetaprime::zeta_int;

/// Longest series carried for `1/Gamma(1+w)`.
pub const MAX_SERIES_ORDER: usize = 64;

/// `(1/Gamma)^(n)(1 - M)` for `n = 0..=order`.
#[derive(Clone, Debug, Serialize)]
pub struct InvGammaJet {
    pub m: u32,
    pub order: usize,
    pub derivs: Vec<HPReal>,
}

/// Taylor series of `1/Gamma(1 + w)`, memoized.
pub fn inv_gamma_series(order: usize, prec: u32) -> Result<PowerSeries> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), PowerSeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(order, prec)) {
        return Ok(s.clone());
    }
    let wp = prec + 16;
    let mut a = PowerSeries::zeros(order, wp);
    if order >= 1 {
        *a.coeff_mut(1) = HPReal::euler_gamma(wp);
    }
    for j in 2..=order {
        let z = zeta_int(j as u32, wp)?.div_i64(j as i64);
        // -(zeta(j)/j) (-1)^j
        *a.coeff_mut(j) = if j % 2 == 0 { -z } else { z };
    }
    let e = a.exp()?;
    let out = PowerSeries::new(
        e.into_coeffs().into_iter().map(|c| c.with_prec(prec)).collect(),
        "z=1",
    );
    cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .insert((order, prec), out.clone());
    Ok(out)
}

/// Taylor series of `1/Gamma(1 - M + w)`; `M = 0` gives the series at 1.
pub fn inv_gamma_series_at(m: u32, order: usize, prec: u32) -> Result<PowerSeries> {
    if order + m as usize > MAX_SERIES_ORDER {
        return Err(Error::LimitExceeded {
            requested: (order + m as usize) as u64,
            limit: MAX_SERIES_ORDER as u64,
            hint: "order + M must stay within the 1/Gamma series order",
        });
    }
    let base = inv_gamma_series(order, prec)?;
    if m == 0 {
        return Ok(base);
    }
    // w (w - 1) ... (w - (M-1))
    let shifts: Vec<HPReal> = (0..m).map(|i| HPReal::from_i64(-(i as i64), prec)).collect();
    let poly = PowerSeries::from_linear_factors(&shifts, order, prec);
    Ok(poly.mul(&base)?.with_label(format!("z={}", 1 - m as i64)))
}

/// Derivatives of `1/Gamma` at `1 - M` up to `order`.
pub fn inv_gamma_jet(m: u32, order: usize, prec: u32) -> Result<InvGammaJet> {
    let ser = inv_gamma_series_at(m, order, prec)?;
    let mut fact = HPReal::one(prec);
    let derivs = ser
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            if n > 1 {
                fact = fact.mul_i64(n as i64);
            }
            c * &fact
        })
        .collect();
    Ok(InvGammaJet { m, order, derivs })
}

fn harmonic(n: u32, power: i32, prec: u32) -> HPReal {
    let mut h = HPReal::zero(prec);
    for j in 1..=n {
        h += HPReal::from_u64(j as u64, prec).powi(power).recip();
    }
    h
}

/// `Gamma'(M) = (M-1)! (H_(M-1) - gamma)`.
pub fn gamma_prime(m: u32, prec: u32) -> HPReal {
    assert!(m >= 1, "Gamma'(M) needs M >= 1");
    HPReal::factorial(m - 1, prec) * (harmonic(m - 1, 1, prec) - HPReal::euler_gamma(prec))
}

/// `Gamma''(M) = (M-1)! ((H_(M-1) - gamma)^2 + zeta(2) - H^(2)_(M-1))`.
pub fn gamma_double_prime(m: u32, prec: u32) -> Result<HPReal> {
    assert!(m >= 1, "Gamma''(M) needs M >= 1");
    let d = harmonic(m - 1, 1, prec) - HPReal::euler_gamma(prec);
    let inner = d.square() + zeta_int(2, prec)? - harmonic(m - 1, 2, prec);
    Ok(HPReal::factorial(m - 1, prec) * inner)
}

/// Closed form `(1/Gamma)'(1-M) = (-1)^(M-1) (M-1)!`.
pub fn inv_gamma_first_closed(m: u32, prec: u32) -> HPReal {
    let f = HPReal::factorial(m - 1, prec);
    if m % 2 == 1 {
        f
    } else {
        -f
    }
}

/// Closed form `(1/Gamma)''(1-M) = 2 (-1)^M (M-1)! (H_(M-1) - gamma)`.
pub fn inv_gamma_second_closed(m: u32, prec: u32) -> HPReal {
    let v = (HPReal::factorial(m - 1, prec) * (harmonic(m - 1, 1, prec) - HPReal::euler_gamma(prec)))
        .mul_i64(2);
    if m.is_multiple_of(2) {
        v
    } else {
        -v
    }
}
