//! The full `R_4` expansion from its five prime-power sums:
//!
//! ```text
//! 24 R_4 = S_4 + 6 sum_{p^2 q r} + 3 sum_{p^2 q^2} + 8 sum_{p^3 q} + 6 sum_{p^4}.
//! ```
//!
//! `sum_{p^2 q r <= x} = sum_p p^-2 S_2(x/p^2)` is expanded by writing
//! `log_2(x/p^2) = log_2 x - sum_m (2 log p)^m / (m log^m x)` and
//! `1/log(x/p^2) = sum_m 2^(m-1) log^(m-1) p / log^m x`, then summing over
//! `p` with `sum_p p^-2 log^n p = alpha_{n,2}`. The `p^2 q^2` and `p^4`
//! sums are `P(2)^2` and `P(4)` up to negligible error.

use crate::constants::ConstantsTable;
use crate::error::{Error, Result};
use crate::numkernel::HPReal;
use crate::zetaprime::zeta_int;

use super::closed::pq_a_expansion;
use super::generator::generate_sk;
use super::Expansion;

/// Largest truncation order for [`generate_r4`].
pub const MAX_R4_N: u32 = 4;

/// Polynomial in `u = 1/log x` (truncated at `u^n`) and `lambda = log p`.
#[derive(Clone)]
struct Biv {
    c: Vec<Vec<HPReal>>, // c[m][k]: u^m lambda^k
}

impl Biv {
    fn zero(n: usize, prec: u32) -> Self {
        Self {
            c: vec![vec![HPReal::zero(prec); n + 1]; n + 1],
        }
    }

    fn n(&self) -> usize {
        self.c.len() - 1
    }

    fn add(&self, o: &Biv) -> Biv {
        let mut out = self.clone();
        for (m, row) in o.c.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                out.c[m][k] += v;
            }
        }
        out
    }

    fn scale(&self, s: &HPReal) -> Biv {
        Biv {
            c: self.c.iter().map(|r| r.iter().map(|v| v * s).collect()).collect(),
        }
    }

    fn mul(&self, o: &Biv) -> Biv {
        let n = self.n();
        let prec = self.c[0][0].prec();
        let mut out = Biv::zero(n, prec);
        for m1 in 0..=n {
            for m2 in 0..=n - m1 {
                for k1 in 0..=n {
                    if self.c[m1][k1].is_zero() {
                        continue;
                    }
                    for k2 in 0..=n - k1 {
                        if o.c[m2][k2].is_zero() {
                            continue;
                        }
                        out.c[m1 + m2][k1 + k2] += &self.c[m1][k1] * &o.c[m2][k2];
                    }
                }
            }
        }
        out
    }

    /// Replaces `lambda^k` by `moments[k]`, leaving a series in `u`.
    fn integrate(&self, moments: &[HPReal]) -> Vec<HPReal> {
        self.c
            .iter()
            .map(|row| {
                row.iter()
                    .zip(moments)
                    .fold(HPReal::zero(moments[0].prec()), |acc, (v, mo)| acc + v * mo)
            })
            .collect()
    }
}

/// `sum_{p^2 q r <= x} 1/(p^2 q r)` through `1/log^n x`, centered on
/// `log_2 x + beta`.
pub fn p2qr_expansion(n: u32, consts: &ConstantsTable) -> Result<Expansion> {
    let prec = consts.prec;
    let nn = n as usize;
    // D = sum_m (2 lambda)^m / (m u^-m),  G = sum_m 2^(m-1) lambda^(m-1) u^m
    let mut d = Biv::zero(nn, prec);
    let mut g = Biv::zero(nn, prec);
    for m in 1..=nn {
        d.c[m][m] = HPReal::pow2(m as i32, prec).div_i64(m as i64);
        g.c[m][m - 1] = HPReal::pow2(m as i32 - 1, prec);
    }
    let z2 = zeta_int(2, prec)?;
    let mut one = Biv::zero(nn, prec);
    one.c[0][0] = HPReal::one(prec);

    // Y^0 part: D^2 - zeta(2) + sum_j 2 alpha_j G^j
    let mut y0 = d.mul(&d).add(&one.scale(&-z2));
    let mut gpow = one.clone();
    for j in 1..=nn {
        gpow = gpow.mul(&g);
        y0 = y0.add(&gpow.scale(&consts.alpha(j)?.mul_i64(2)));
    }
    let y1 = d.scale(&HPReal::from_i64(-2, prec));

    let moments: Vec<HPReal> = (0..=nn).map(|k| consts.alpha_ja(k, 2)).collect::<Result<_>>()?;
    let mut e = Expansion::new(2, n, true, consts.beta.clone());
    e.add_term(2, 0, moments[0].clone());
    for (b, poly) in [(0u32, &y0), (1, &y1)] {
        for (m, c) in poly.integrate(&moments).into_iter().enumerate() {
            e.add_term(b, m as u32, c);
        }
    }
    Ok(e)
}

/// Full `R_4` expansion through `1/log^n x`, centered on `log_2 x + beta`.
/// The coefficient of `Y^0 / log^j x` is `alpha_j (P(2) - zeta(2))/2 - t_j`.
pub fn generate_r4(n: u32, consts: &ConstantsTable) -> Result<Expansion> {
    if n > MAX_R4_N {
        return Err(Error::LimitExceeded {
            requested: n as u64,
            limit: MAX_R4_N as u64,
            hint: "the R_4 generator supports N <= 4",
        });
    }
    let prec = consts.prec;
    let mut e = Expansion::new(4, n, true, consts.beta.clone());
    e.add_scaled(&generate_sk(4, n, consts)?, &HPReal::from_ratio(1, 24, prec))?;
    e.add_scaled(&p2qr_expansion(n, consts)?, &HPReal::from_ratio(1, 4, prec))?;
    e.add_scaled(&pq_a_expansion(3, n, consts)?, &HPReal::from_ratio(1, 3, prec))?;
    let p2 = consts.pzeta(2)?;
    e.add_term(0, 0, p2.square().div_i64(8) + consts.pzeta(4)?.div_i64(4));
    Ok(e)
}
