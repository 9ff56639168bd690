//! Negative-order polylogarithms `Li_{-k}(z) = sum_n n^k z^n`, the integral
//! `I(k, x) = int_1^oo t^k x^-t dt`, and numerical checks of the bounds
//! relating them.
//!
//! `Li_{-k}` is evaluated through the Eulerian numbers:
//! `Li_{-k}(z) = z sum_{i<k} A(k, i) z^i / (1 - z)^(k+1)` for `k >= 1`,
//! which is what repeatedly applying `z d/dz` to `z/(1-z)` produces. All
//! coefficients are positive, so evaluation has no cancellation.

use std::sync::{Mutex, OnceLock};

use rug::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::HPReal;

/// Rows `A(k, 0..k)` of the Eulerian triangle, memoized.
pub fn eulerian_row(k: u32) -> Vec<Integer> {
    static ROWS: OnceLock<Mutex<Vec<Vec<Integer>>>> = OnceLock::new();
    let rows = ROWS.get_or_init(|| Mutex::new(vec![vec![Integer::from(1)]]));
    let mut rows = rows.lock().unwrap_or_else(|e| e.into_inner());
    while rows.len() <= k as usize {
        let n = rows.len() as u32; // building row n from row n-1
        let prev = rows.last().unwrap();
        // A(n, i) = (i + 1) A(n-1, i) + (n - i) A(n-1, i-1)
        let row: Vec<Integer> = (0..n.max(1))
            .map(|i| {
                let mut v = Integer::new();
                if let Some(a) = prev.get(i as usize) {
                    v += Integer::from(a * (i + 1));
                }
                if i >= 1 {
                    if let Some(a) = prev.get(i as usize - 1) {
                        v += Integer::from(a * (n - i));
                    }
                }
                v
            })
            .collect();
        rows.push(row);
    }
    rows[k as usize].clone()
}

/// `Li_{-k}(z)` for `0 < z < 1`.
pub fn li_neg(k: u32, z: &HPReal) -> Result<HPReal> {
    if !(z < &1.0) {
        return Err(Error::Domain(format!("Li_(-k)(z) diverges for z >= 1 (z = {})", z.fmt_sci(6))));
    }
    if !z.is_positive() {
        return Err(Error::Domain(format!("Li_(-k)(z) is only provided for z > 0 (z = {})", z.fmt_sci(6))));
    }
    let prec = z.prec();
    let one_minus = HPReal::one(prec) - z;
    if k == 0 {
        return Ok(z / one_minus);
    }
    let row = eulerian_row(k);
    let mut poly = HPReal::zero(prec);
    for a in row.iter().rev() {
        poly = poly * z + HPReal::from_integer(a, prec);
    }
    Ok(z * poly / one_minus.powi(k as i32 + 1))
}

/// `I(k, x) = (1/x) sum_{j=1}^{k+1} k!/(k+1-j)! / log^j x` for `x > 1`.
pub fn i_integral(k: u32, x: &HPReal) -> Result<HPReal> {
    if !(x > &1.0) {
        return Err(Error::Domain(format!("I(k, x) needs x > 1 (x = {})", x.fmt_sci(6))));
    }
    let prec = x.prec();
    let inv_v = x.ln().recip();
    // term_j = k!/(k+1-j)! v^-j; term_1 = v^-1, term_{j+1} = term_j (k+1-j)/v
    let mut term = inv_v.clone();
    let mut sum = HPReal::zero(prec);
    for j in 1..=k + 1 {
        sum += &term;
        term = term.mul_i64((k + 1 - j) as i64) * &inv_v;
    }
    Ok(sum / x)
}

#[derive(Clone, Debug, Serialize)]
pub struct NegPolyEval {
    pub k: u32,
    pub x: HPReal,
    /// `Li_{-k}(1/x)`
    pub li_value: HPReal,
    /// `I(k, x)`
    pub i_value: HPReal,
    pub ratio: HPReal,
}

pub fn neg_poly_eval(k: u32, x: &HPReal) -> Result<NegPolyEval> {
    let li_value = li_neg(k, &x.recip())?;
    let i_value = i_integral(k, x)?;
    let ratio = &li_value / &i_value;
    Ok(NegPolyEval {
        k,
        x: x.clone(),
        li_value,
        i_value,
        ratio,
    })
}

/// One grid point `x` with a printable label.
#[derive(Clone, Debug)]
pub struct GridPoint {
    pub label: String,
    pub x: HPReal,
}

/// `{1.5, 2, e, 10, e^16}`.
pub fn default_grid(prec: u32) -> Vec<GridPoint> {
    let e = HPReal::one(prec).exp();
    vec![
        GridPoint { label: "1.5".into(), x: HPReal::from_ratio(3, 2, prec) },
        GridPoint { label: "2".into(), x: HPReal::from_i64(2, prec) },
        GridPoint { label: "e".into(), x: e },
        GridPoint { label: "10".into(), x: HPReal::from_i64(10, prec) },
        GridPoint { label: "e^16".into(), x: HPReal::from_i64(16, prec).exp() },
    ]
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub k: u32,
    pub x: String,
    /// The quantity being bounded.
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolylogBoundReport {
    pub k_max: u32,
    /// `|Li_{-k}(1/x)/I(k,x) - 1| < x/sqrt(2 pi k)`.
    pub sum_vs_integral: Vec<BoundCheck>,
    /// `1 - v^(k+1)/(k+1)! < I(k,x) v^(k+1)/k! < 1 - v^(k+1)/(x (k+1)!)`,
    /// reported as the deficit `1 - I v^(k+1)/k!` against its bounds.
    pub integral_sandwich: Vec<BoundCheck>,
    /// `1 <= k!/((k/e)^k sqrt(2 pi k)) <= e^(1/(12k))`.
    pub stirling: Vec<BoundCheck>,
    /// `max Li_{1-j}(1/x) log^j x / (j-1)!` over the grid with `x >= 2`,
    /// `2 <= j <= k_max + 1`.
    pub polylog_constant: f64,
    pub polylog_constant_at: (u32, String),
    /// For each `x`, `|ratio - 1|` at `k = k_max/2` and `k_max`.
    pub ratio_tail: Vec<(String, f64, f64)>,
    pub all_pass: bool,
}

impl PolylogBoundReport {
    pub fn failures(&self) -> Vec<&BoundCheck> {
        self.sum_vs_integral
            .iter()
            .chain(&self.integral_sandwich)
            .chain(&self.stirling)
            .filter(|c| !c.holds)
            .collect()
    }
}

/// Sandwich check at enough precision to resolve the deficit.
fn sandwich_check(k: u32, g: &GridPoint, prec: u32) -> Result<BoundCheck> {
    let vf = g.x.ln().to_f64();
    // log2 of v^(k+1)/(x (k+1)!), the smaller bound
    let mut lg = (k as f64 + 1.0) * vf.log2() - g.x.ln().to_f64() / std::f64::consts::LN_2;
    for i in 2..=k + 1 {
        lg -= (i as f64).log2();
    }
    let wp = prec + 64 + (-lg).max(0.0).ceil() as u32;
    let x = g.x.with_prec(wp);
    let v = x.ln();
    let ival = i_integral(k, &x)?;
    let scale = v.powi(k as i32 + 1) / HPReal::factorial(k, wp);
    let deficit = HPReal::one(wp) - ival * &scale;
    let t = v.powi(k as i32 + 1) / HPReal::factorial(k + 1, wp);
    let lower = &t / &x;
    let holds = deficit > lower && deficit < t;
    // report in log2 so tiny values stay readable
    let l2 = |h: &HPReal| h.abs().ln().to_f64() / std::f64::consts::LN_2 * h.to_f64().signum();
    Ok(BoundCheck {
        k,
        x: g.label.clone(),
        value: l2(&deficit),
        lower: Some(l2(&lower)),
        upper: Some(l2(&t)),
        holds,
    })
}

/// Runs all checks for `1 <= k <= k_max` on `grid`.
pub fn polylog_bound_suite(grid: &[GridPoint], k_max: u32, prec: u32) -> Result<PolylogBoundReport> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let two_pi = HPReal::pi(prec).mul_i64(2);
    let mut sum_vs_integral = Vec::new();
    let mut integral_sandwich = Vec::new();
    let mut ratio_tail = Vec::new();
    let mut best = (f64::NEG_INFINITY, 0u32, String::new());
    for g in grid {
        let x = g.x.with_prec(prec);
        let mut mid = f64::NAN;
        let mut last = f64::NAN;
        for k in 1..=k_max {
            let ev = neg_poly_eval(k, &x)?;
            let dev = (&ev.ratio - HPReal::one(prec)).abs();
            let bound = &x / (&two_pi * HPReal::from_u64(k as u64, prec)).sqrt();
            sum_vs_integral.push(BoundCheck {
                k,
                x: g.label.clone(),
                value: dev.to_f64(),
                lower: None,
                upper: Some(bound.to_f64()),
                holds: dev < bound,
            });
            if k == k_max / 2 {
                mid = dev.to_f64();
            }
            if k == k_max {
                last = dev.to_f64();
            }
            integral_sandwich.push(sandwich_check(k, g, prec)?);
            // Li_{1-j}(1/x) log^j x / (j-1)! with j = k + 1
            if x >= 2.0 {
                let c = (&ev.li_value * x.ln().powi(k as i32 + 1) / HPReal::factorial(k, prec)).to_f64();
                if c > best.0 {
                    best = (c, k + 1, g.label.clone());
                }
            }
        }
        ratio_tail.push((g.label.clone(), mid, last));
    }
    // j = 2 .. k_max + 1 covered above; j = 1 is excluded by the statement
    let mut stirling = Vec::new();
    for k in 1..=k_max.max(200) {
        let kf = HPReal::from_u64(k as u64, prec);
        let base = (&kf / HPReal::one(prec).exp()).powi(k as i32) * (&two_pi * &kf).sqrt();
        let r = HPReal::factorial(k, prec) / base;
        let upper = (HPReal::one(prec) / kf.mul_i64(12)).exp();
        stirling.push(BoundCheck {
            k,
            x: "-".into(),
            value: r.to_f64(),
            lower: Some(1.0),
            upper: Some(upper.to_f64()),
            holds: r >= 1.0 && r <= upper,
        });
    }
    let mut report = PolylogBoundReport {
        k_max,
        sum_vs_integral,
        integral_sandwich,
        stirling,
        polylog_constant: best.0,
        polylog_constant_at: (best.1, best.2),
        ratio_tail,
        all_pass: false,
    };
    report.all_pass = report.failures().is_empty() && report.polylog_constant.is_finite();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 192;

    fn h(s: &str) -> HPReal {
        HPReal::parse(s, P).unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(li_neg(0, &h("0.5")).unwrap(), HPReal::one(P));
        assert_eq!(li_neg(1, &h("0.5")).unwrap(), HPReal::from_i64(2, P));
        // Li_{-2}(1/2) = z(1+z)/(1-z)^3 = 6
        assert_eq!(li_neg(2, &h("0.5")).unwrap(), HPReal::from_i64(6, P));
        assert!(li_neg(3, &HPReal::one(P)).is_err());
    }

    #[test]
    fn eulerian_rows() {
        let r: Vec<i64> = eulerian_row(4).iter().map(|v| v.to_i64().unwrap()).collect();
        assert_eq!(r, vec![1, 11, 11, 1]);
        // rows sum to k!
        let s: Integer = eulerian_row(12).iter().sum();
        assert_eq!(s, Integer::from(Integer::factorial(12)));
    }

    #[test]
    fn matches_direct_series() {
        let z = HPReal::from_ratio(1, 3, P);
        let mut direct = HPReal::zero(P);
        let mut zn = HPReal::one(P);
        for n in 1..=400u64 {
            zn = &zn * &z;
            direct += HPReal::from_u64(n, P).powi(10) * &zn;
        }
        let v = li_neg(10, &z).unwrap();
        assert!((&v - &direct).abs() <= v.abs() * HPReal::pow2(-(P as i32) + 16, P));
    }

    #[test]
    fn integral_closed_form_and_recurrence() {
        let x = HPReal::from_i64(2, P);
        let l = x.ln();
        let i0 = i_integral(0, &x).unwrap();
        assert!((&i0 - (&x * &l).recip()).abs() < HPReal::pow2(-180, P));
        let mut prev = i0;
        for k in 1..=20u32 {
            let ik = i_integral(k, &x).unwrap();
            let rec = (&x * &l).recip() + HPReal::from_u64(k as u64, P) / &l * &prev;
            assert!((&ik - &rec).abs() <= ik.abs() * HPReal::pow2(-180, P), "k={k}");
            prev = ik;
        }
    }

    #[test]
    fn monotone_in_order_for_large_z() {
        for z in ["0.5", "0.75"] {
            let z = h(z);
            let mut prev = li_neg(0, &z).unwrap();
            for k in 1..=40 {
                let v = li_neg(k, &z).unwrap();
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn polylog_bounds_hold_on_default_grid() {
        let rep = polylog_bound_suite(&default_grid(P), 200, P).unwrap();
        assert!(rep.all_pass, "{:?}", rep.failures());
        let c = rep.sum_vs_integral.iter().find(|c| c.k == 25 && c.x == "2").unwrap();
        assert!(c.value < 2.0 / (50.0 * std::f64::consts::PI).sqrt());
        assert!(rep.polylog_constant.is_finite() && rep.polylog_constant > 0.0);
        for (_, mid, last) in &rep.ratio_tail {
            assert!(last < mid || *last < 1e-45, "{mid} {last}");
        }
        let s1 = &rep.stirling[0];
        assert!((s1.value - std::f64::consts::E / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
    }
}
