//! Closed-form coefficients and the truncated expansions of `S_2`, `S_3`,
//! `R_2`, `R_3` and `R_4` built from them. Here `Y = log_2 x + beta`.

use serde::Serialize;

use crate::constants::ConstantsTable;
use crate::error::{Error, Result};
use crate::numkernel::HPReal;
use crate::zetaprime::zeta_int;

use super::generator::generate_sk;
use super::r4::generate_r4;
use super::Expansion;

fn harmonic(n: u32, prec: u32) -> HPReal {
    (1..=n).fold(HPReal::zero(prec), |acc, i| acc + HPReal::from_u64(i as u64, prec).recip())
}

/// `r_j = 2^(j-1) alpha_{j,2}/j + sum_{1<=i<j} (alpha_j/i + i C(j-1,i) alpha_i alpha_{j-i}/2)`.
pub fn r_coeff(j: usize, consts: &ConstantsTable) -> Result<HPReal> {
    if j == 0 {
        return Err(Error::Domain("r_j needs j >= 1".into()));
    }
    let prec = consts.prec;
    let mut r = (consts.alpha_ja(j, 2)? * HPReal::pow2(j as i32 - 1, prec)).div_i64(j as i64);
    let aj = consts.alpha(j)?;
    for i in 1..j {
        r += aj.div_i64(i as i64);
        let c = HPReal::binomial(j as u32 - 1, i as u32, prec).mul_i64(i as i64);
        r += (c * consts.alpha(i)? * consts.alpha(j - i)?).div_i64(2);
    }
    Ok(r)
}

/// `v_k = 3 sum_{1<=j<k} (2 alpha_k/j + j C(k-1,j) alpha_j alpha_{k-j})`.
pub fn v_coeff(k: usize, consts: &ConstantsTable) -> Result<HPReal> {
    if k == 0 {
        return Err(Error::Domain("v_k needs k >= 1".into()));
    }
    let prec = consts.prec;
    let ak = consts.alpha(k)?;
    let mut v = HPReal::zero(prec);
    for j in 1..k {
        v += ak.mul_i64(2).div_i64(j as i64);
        v += HPReal::binomial(k as u32 - 1, j as u32, prec).mul_i64(j as i64) * consts.alpha(j)? * consts.alpha(k - j)?;
    }
    Ok(v.mul_i64(3))
}

/// `t_1 = alpha_{1,3}`, `t_2 = 3 alpha_{2,3}/2 - (alpha_{2,2} + alpha_1 alpha_{1,2} + alpha_1^2/2)`.
/// Higher `t_j` have no closed form; use [`generate_r4`].
pub fn t_coeff(j: usize, consts: &ConstantsTable) -> Result<HPReal> {
    match j {
        1 => consts.alpha_ja(1, 3),
        2 => {
            let a1 = consts.alpha(1)?;
            let inner = consts.alpha_ja(2, 2)? + a1 * consts.alpha_ja(1, 2)? + a1.square().div_i64(2);
            Ok(consts.alpha_ja(2, 3)?.mul_i64(3).div_i64(2) - inner)
        }
        _ => Err(Error::Unsupported(format!(
            "t_{j} has no closed form; take it from the generated R_4 expansion"
        ))),
    }
}

fn zetas(prec: u32) -> Result<[HPReal; 3]> {
    Ok([zeta_int(2, prec)?, zeta_int(3, prec)?, zeta_int(4, prec)?])
}

/// `S_2 = Y^2 - zeta(2) + sum_{j<=n} 2 alpha_j / log^j x`.
pub fn s2_expansion(n: u32, consts: &ConstantsTable) -> Result<Expansion> {
    let prec = consts.prec;
    let [z2, ..] = zetas(prec)?;
    let mut e = Expansion::new(2, n, true, consts.beta.clone());
    e.add_term(2, 0, HPReal::one(prec));
    e.add_term(0, 0, -z2);
    for j in 1..=n {
        e.add_term(0, j, consts.alpha(j as usize)?.mul_i64(2));
    }
    Ok(e)
}

/// `S_3 = Y^3 - 3 zeta(2) Y + 2 zeta(3) + sum_{k<=n} (6 alpha_k Y - v_k) / log^k x`.
pub fn s3_expansion(n: u32, consts: &ConstantsTable) -> Result<Expansion> {
    let prec = consts.prec;
    let [z2, z3, _] = zetas(prec)?;
    let mut e = Expansion::new(3, n, true, consts.beta.clone());
    e.add_term(3, 0, HPReal::one(prec));
    e.add_term(1, 0, z2.mul_i64(-3));
    e.add_term(0, 0, z3.mul_i64(2));
    for k in 1..=n {
        e.add_term(1, k, consts.alpha(k as usize)?.mul_i64(6));
        e.add_term(0, k, -v_coeff(k as usize, consts)?);
    }
    Ok(e)
}

/// `sum_{pq^a <= x} 1/(p q^a) = P(a) Y - sum_{j<=n} a^j alpha_{j,a} / (j log^j x)`.
pub fn pq_a_expansion(a: u32, n: u32, consts: &ConstantsTable) -> Result<Expansion> {
    if a < 2 {
        return Err(Error::Domain(format!("pq^a sums need a >= 2, got {a}")));
    }
    let prec = consts.prec;
    let mut e = Expansion::new(0, n, true, consts.beta.clone());
    e.add_term(1, 0, consts.pzeta(a)?.clone());
    for j in 1..=n {
        let c = consts.alpha_ja(j as usize, a)? * HPReal::from_u64(a as u64, prec).powi(j as i32);
        e.add_term(0, j, -c.div_i64(j as i64));
    }
    Ok(e)
}

/// `R_2 = Y^2/2 + (P(2) - zeta(2))/2 + sum_{j<=n} alpha_j / log^j x`.
pub fn r2_expansion(n: u32, consts: &ConstantsTable) -> Result<Expansion> {
    let prec = consts.prec;
    let [z2, ..] = zetas(prec)?;
    let mut e = Expansion::new(2, n, true, consts.beta.clone());
    e.add_term(2, 0, HPReal::from_ratio(1, 2, prec));
    e.add_term(0, 0, (consts.pzeta(2)? - z2).div_i64(2));
    for j in 1..=n {
        e.add_term(0, j, consts.alpha(j as usize)?.clone());
    }
    Ok(e)
}

/// `R_3 = Y^3/6 + (P(2) - zeta(2)) Y/2 + (P(3) + zeta(3))/3
///        + sum_{j<=n} (alpha_j Y - r_j) / log^j x`.
pub fn r3_expansion(n: u32, consts: &ConstantsTable) -> Result<Expansion> {
    let prec = consts.prec;
    let [z2, z3, _] = zetas(prec)?;
    let mut e = Expansion::new(3, n, true, consts.beta.clone());
    e.add_term(3, 0, HPReal::from_ratio(1, 6, prec));
    e.add_term(1, 0, (consts.pzeta(2)? - z2).div_i64(2));
    e.add_term(0, 0, (consts.pzeta(3)? + z3).div_i64(3));
    for j in 1..=n {
        e.add_term(1, j, consts.alpha(j as usize)?.clone());
        e.add_term(0, j, -r_coeff(j as usize, consts)?);
    }
    Ok(e)
}

/// Largest truncation order for [`eval_r4`]: `t_1`, `t_2` are closed
/// forms and `t_3` comes from the generated expansion.
const R4_EVAL_MAX_N: u32 = 3;

/// `R_4` with the constant block `P(4)/4 + zeta(4)/16 + P(2)^2/8 - P(2) zeta(2)/4`
/// and terms `(alpha_j (Y^2 + P(2) - zeta(2))/2 - r_j Y - t_j) / log^j x`.
pub fn r4_expansion(n: u32, consts: &ConstantsTable) -> Result<Expansion> {
    if n > R4_EVAL_MAX_N {
        return Err(Error::LimitExceeded {
            requested: n as u64,
            limit: R4_EVAL_MAX_N as u64,
            hint: "R_4 evaluation supports N <= 3",
        });
    }
    let prec = consts.prec;
    let [z2, z3, z4] = zetas(prec)?;
    let p2 = consts.pzeta(2)?;
    let mut e = Expansion::new(4, n, true, consts.beta.clone());
    e.add_term(4, 0, HPReal::from_ratio(1, 24, prec));
    e.add_term(2, 0, (p2 - &z2).div_i64(4));
    e.add_term(1, 0, (consts.pzeta(3)? + &z3).div_i64(3));
    let constant =
        consts.pzeta(4)?.div_i64(4) + z4.div_i64(16) + p2.square().div_i64(8) - (p2 * &z2).div_i64(4);
    e.add_term(0, 0, constant);
    let generated = if n >= 3 { Some(generate_r4(n, consts)?) } else { None };
    for j in 1..=n {
        let aj = consts.alpha(j as usize)?;
        e.add_term(2, j, aj.div_i64(2));
        e.add_term(0, j, (aj * (p2 - &z2)).div_i64(2));
        e.add_term(1, j, -r_coeff(j as usize, consts)?);
        let t = match &generated {
            Some(g) if j >= 3 => -g.coeff(0, j) + (aj * (p2 - &z2)).div_i64(2),
            _ => t_coeff(j as usize, consts)?,
        };
        e.add_term(0, j, -t);
    }
    Ok(e)
}

pub fn eval_s2(x: &HPReal, n: u32, consts: &ConstantsTable) -> Result<HPReal> {
    s2_expansion(n, consts)?.eval(x)
}

pub fn eval_s3(x: &HPReal, n: u32, consts: &ConstantsTable) -> Result<HPReal> {
    s3_expansion(n, consts)?.eval(x)
}

pub fn eval_r2(x: &HPReal, n: u32, consts: &ConstantsTable) -> Result<HPReal> {
    r2_expansion(n, consts)?.eval(x)
}

pub fn eval_r3(x: &HPReal, n: u32, consts: &ConstantsTable) -> Result<HPReal> {
    r3_expansion(n, consts)?.eval(x)
}

pub fn eval_r4(x: &HPReal, n: u32, consts: &ConstantsTable) -> Result<HPReal> {
    r4_expansion(n, consts)?.eval(x)
}

/// Generated vs predicted coefficients of `(log_2 x)^(k-2) / log^M x`
/// and `(log_2 x)^(k-3) / log^M x` in `S_k`.
#[derive(Clone, Debug, Serialize)]
pub struct LeadingTermCheck {
    pub k: u32,
    pub m: u32,
    /// (generated, `k(k-1) alpha_M`)
    pub leading: (HPReal, HPReal),
    /// (generated, `k(k-1)(k-2)(alpha_M (beta - H_{M-1}) - sum_i i C(M-1,i) alpha_i alpha_{M-i} / 2)`),
    /// only for `k >= 3`.
    pub next: Option<(HPReal, HPReal)>,
}

pub fn leading_term_check(k: u32, m: u32, consts: &ConstantsTable) -> Result<LeadingTermCheck> {
    if k < 2 || m == 0 {
        return Err(Error::Domain(format!("leading-term check needs k >= 2 and M >= 1, got k={k}, M={m}")));
    }
    let prec = consts.prec;
    let e = generate_sk(k, m, consts)?.uncentered();
    let am = consts.alpha(m as usize)?;
    let kk = (k * (k - 1)) as i64;
    let leading = (e.coeff(k - 2, m), am.mul_i64(kk));
    let next = if k >= 3 {
        let mut s = HPReal::zero(prec);
        for i in 1..m {
            s += HPReal::binomial(m - 1, i, prec).mul_i64(i as i64) * consts.alpha(i as usize)? * consts.alpha((m - i) as usize)?;
        }
        let inner = am * (&consts.beta - harmonic(m - 1, prec)) - s.div_i64(2);
        Some((e.coeff(k - 3, m), inner.mul_i64(kk * (k as i64 - 2))))
    } else {
        None
    };
    Ok(LeadingTermCheck { k, m, leading, next })
}

/// `r_j / (1.5 alpha_j log j)` and `v_k / (9 alpha_k log k)` over a range.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub r_ratio: Vec<(usize, f64)>,
    pub v_ratio: Vec<(usize, f64)>,
    pub r_positive: bool,
    /// All ratios with index in `[5, 40]` lie in `[0.2, 5]`.
    pub bounded: bool,
}

pub fn growth_diagnostics(consts: &ConstantsTable) -> Result<GrowthReport> {
    let top = consts.j_max().min(40);
    let mut r_ratio = Vec::new();
    let mut v_ratio = Vec::new();
    let mut r_positive = true;
    for j in 1..=top {
        let r = r_coeff(j, consts)?;
        r_positive &= r.is_positive();
        if j < 2 {
            continue; // log 1 = 0
        }
        let a = consts.alpha(j)?.to_f64();
        let lj = (j as f64).ln();
        r_ratio.push((j, r.to_f64() / (1.5 * a * lj)));
        v_ratio.push((j, v_coeff(j, consts)?.to_f64() / (9.0 * a * lj)));
    }
    let in_range = |v: &[(usize, f64)]| v.iter().filter(|(j, _)| *j >= 5).all(|(_, r)| (0.2..=5.0).contains(r));
    let bounded = in_range(&r_ratio) && in_range(&v_ratio);
    Ok(GrowthReport {
        r_ratio,
        v_ratio,
        r_positive,
        bounded,
    })
}
