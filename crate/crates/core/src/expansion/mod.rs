//! Fine-scale expansions of `S_k(x) = sum_{p_1...p_k <= x} 1/(p_1...p_k)`
//! and of the almost-prime reciprocal sums `R_k(x)` in powers of
//! `log_2 x = log log x` and `1/log x`.

mod closed;
mod generator;
mod r4;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::HPReal;

pub use closed::{
    eval_r2, eval_r3, eval_r4, eval_s2, eval_s3, growth_diagnostics, leading_term_check, pq_a_expansion,
    r2_expansion, r3_expansion, r4_expansion, r_coeff, s2_expansion, s3_expansion, t_coeff, v_coeff, GrowthReport,
    LeadingTermCheck,
};
pub use generator::{generate_sk, generate_sk_with, MAX_K, MAX_N};
pub use r4::{generate_r4, p2qr_expansion, MAX_R4_N};

/// One term `coeff * Y^llx_pow / (log x)^lx_pow`, where `Y` is `log_2 x`
/// or `log_2 x + beta` depending on the expansion's centering.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ExpansionTerm {
    pub coeff: HPReal,
    pub llx_pow: u32,
    pub lx_pow: u32,
}

/// A truncated expansion: a polynomial in `Y` for each power of `1/log x`
/// up to `n`.
#[derive(Clone, Debug, Serialize)]
pub struct Expansion {
    pub k: u32,
    pub n: u32,
    pub centered_on_beta: bool,
    pub beta: HPReal,
    #[serde(serialize_with = "serialize_terms")]
    terms: BTreeMap<(u32, u32), HPReal>,
}

fn serialize_terms<S: serde::Serializer>(
    terms: &BTreeMap<(u32, u32), HPReal>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(terms.len()))?;
    for ((b, m), c) in terms {
        seq.serialize_element(&ExpansionTerm {
            coeff: c.clone(),
            llx_pow: *b,
            lx_pow: *m,
        })?;
    }
    seq.end()
}

impl Expansion {
    pub fn new(k: u32, n: u32, centered_on_beta: bool, beta: HPReal) -> Self {
        Self {
            k,
            n,
            centered_on_beta,
            beta,
            terms: BTreeMap::new(),
        }
    }

    pub fn prec(&self) -> u32 {
        self.beta.prec()
    }

    /// Adds `c Y^b / (log x)^m`; terms beyond the truncation order are
    /// dropped.
    pub fn add_term(&mut self, b: u32, m: u32, c: HPReal) {
        if m > self.n {
            return;
        }
        let e = self.terms.entry((b, m)).or_insert_with(|| HPReal::zero(c.prec()));
        *e += c;
    }

    /// Coefficient of `Y^b / (log x)^m` (zero when absent).
    pub fn coeff(&self, b: u32, m: u32) -> HPReal {
        self.terms
            .get(&(b, m))
            .cloned()
            .unwrap_or_else(|| HPReal::zero(self.prec()))
    }

    pub fn terms(&self) -> Vec<ExpansionTerm> {
        self.terms
            .iter()
            .map(|(&(b, m), c)| ExpansionTerm {
                coeff: c.clone(),
                llx_pow: b,
                lx_pow: m,
            })
            .collect()
    }

    /// Highest power of `Y` with a nonzero coefficient at `1/(log x)^m`.
    pub fn max_llx_pow(&self, m: u32) -> Option<u32> {
        self.terms
            .iter()
            .filter(|(&(_, mm), c)| mm == m && !c.is_zero())
            .map(|(&(b, _), _)| b)
            .max()
    }

    /// `self + scale * other`; both must share centering and `beta`.
    pub fn add_scaled(&mut self, other: &Expansion, scale: &HPReal) -> Result<()> {
        if self.centered_on_beta != other.centered_on_beta {
            return Err(Error::Domain("cannot add expansions with different centering".into()));
        }
        for (&(b, m), c) in &other.terms {
            self.add_term(b, m, c * scale);
        }
        Ok(())
    }

    fn shifted(&self, shift: &HPReal, centered: bool) -> Expansion {
        // Y_old^b = (Y_new + shift)^b
        let mut out = Expansion::new(self.k, self.n, centered, self.beta.clone());
        let prec = self.prec();
        for (&(b, m), c) in &self.terms {
            let mut spow = HPReal::one(prec);
            for i in (0..=b).rev() {
                let binom = HPReal::binomial(b, b - i, prec);
                out.add_term(i, m, c * &binom * &spow);
                spow = &spow * shift;
            }
        }
        out
    }

    /// Rewrites a `log_2 x` polynomial in `Y = log_2 x + beta`.
    pub fn recentered(&self) -> Expansion {
        if self.centered_on_beta {
            return self.clone();
        }
        // log_2 x = Y - beta
        self.shifted(&-&self.beta, true)
    }

    /// Rewrites a `log_2 x + beta` polynomial in `log_2 x`.
    pub fn uncentered(&self) -> Expansion {
        if !self.centered_on_beta {
            return self.clone();
        }
        self.shifted(&self.beta, false)
    }

    /// The expansion truncated to powers `1/(log x)^m` with `m <= n`.
    pub fn truncated(&self, n: u32) -> Expansion {
        let mut out = Expansion::new(self.k, n.min(self.n), self.centered_on_beta, self.beta.clone());
        for (&(b, m), c) in &self.terms {
            out.add_term(b, m, c.clone());
        }
        out
    }

    /// Value at `x` (needs `x > e`).
    pub fn eval(&self, x: &HPReal) -> Result<HPReal> {
        if !(x > &std::f64::consts::E) {
            return Err(Error::Domain(format!("expansion needs x > e, got {}", x.fmt_sci(6))));
        }
        let prec = self.prec().max(x.prec());
        let lx = x.with_prec(prec).ln();
        let llx = lx.ln();
        let y = if self.centered_on_beta { &llx + &self.beta } else { llx };
        let inv = lx.recip();
        let mut total = HPReal::zero(prec);
        for (&(b, m), c) in &self.terms {
            total += c * y.powi(b as i32) * inv.powi(m as i32);
        }
        Ok(total)
    }

    /// Largest absolute coefficient difference with `other` after bringing
    /// both to this expansion's centering.
    pub fn max_abs_diff(&self, other: &Expansion) -> HPReal {
        let other = if self.centered_on_beta { other.recentered() } else { other.uncentered() };
        let mut keys: Vec<(u32, u32)> = self.terms.keys().cloned().collect();
        keys.extend(other.terms.keys().cloned());
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|(b, m)| (self.coeff(b, m) - other.coeff(b, m)).abs())
            .fold(HPReal::zero(self.prec()), |a, d| a.max(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recentering_round_trip() {
        let p = 128;
        let beta = HPReal::parse("0.2614972128476427837554", p).unwrap();
        let mut e = Expansion::new(3, 2, false, beta.clone());
        e.add_term(3, 0, HPReal::one(p));
        e.add_term(1, 1, HPReal::from_i64(6, p));
        e.add_term(0, 2, HPReal::from_i64(-5, p));
        e.add_term(0, 3, HPReal::one(p)); // beyond n, dropped
        let back = e.recentered().uncentered();
        assert!(e.max_abs_diff(&back) < HPReal::pow2(-120, p));
        assert!(back.coeff(0, 3).is_zero());
        // evaluation does not depend on the centering
        let x = HPReal::from_u64(1_000_000, p);
        let d = (e.eval(&x).unwrap() - e.recentered().eval(&x).unwrap()).abs();
        assert!(d < HPReal::pow2(-110, p));
    }
}
