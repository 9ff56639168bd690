use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::alpha::{alpha_all, beta};
use super::alpha_jk::alpha_jk_column;
use crate::error::{Error, Result};
use crate::numkernel::HPReal;
use crate::zetaprime::{eta_coeffs, EtaTable};

/// Every constant the expansions need, computed once and then shared.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantsTable {
    pub prec: u32,
    pub beta: HPReal,
    pub gamma: HPReal,
    /// `alpha_j` keyed by `j >= 1`.
    pub alpha: BTreeMap<usize, HPReal>,
    /// `alpha_{j,a}` for `j = 0..=j_max`, keyed by `a >= 2`.
    pub alpha_ja: BTreeMap<u32, Vec<HPReal>>,
    pub eta: EtaTable,
    /// `P(a)` keyed by `a`.
    pub pzeta: BTreeMap<u32, HPReal>,
    /// Absolute error bound per stored value, keyed like `alpha[3]`,
    /// `alpha_ja[2,3]`, `beta`.
    pub error_budget: BTreeMap<String, HPReal>,
    /// Last `k` used in the `alpha_j` sum, per `j`.
    pub k_cut: BTreeMap<usize, u32>,
}

fn budget(v: &HPReal, bits: u32) -> HPReal {
    let prec = v.prec();
    let floor = HPReal::pow2(-(prec as i32), prec);
    (v.abs() * HPReal::pow2(-(bits as i32), prec)).max(floor)
}

impl ConstantsTable {
    /// `alpha_1..=alpha_{j_max}`, `alpha_{j,a}` for `j <= j_max` and
    /// `2 <= a <= a_max`, `eta_0..=eta_{j_max}`, `beta` and `gamma`.
    pub fn build(j_max: usize, a_max: u32, prec: u32) -> Result<Self> {
        if a_max < 2 {
            return Err(Error::Domain(format!("a_max must be at least 2, got {a_max}")));
        }
        let sums = alpha_all(j_max.max(1), prec)?;
        let cols: Vec<(u32, Vec<HPReal>)> = (2..=a_max)
            .into_par_iter()
            .map(|a| Ok((a, alpha_jk_column(a, j_max, prec)?)))
            .collect::<Result<_>>()?;
        let eta = eta_coeffs(j_max, prec)?;
        let beta = beta(prec)?;
        let gamma = HPReal::euler_gamma(prec);

        // the series routes carry 32 guard bits; leave half of them as margin
        let bits = prec.saturating_sub(16);
        let mut error_budget = BTreeMap::new();
        error_budget.insert("beta".to_string(), budget(&beta, bits));
        error_budget.insert("gamma".to_string(), budget(&gamma, prec - 1));
        let mut alpha = BTreeMap::new();
        let mut k_cut = BTreeMap::new();
        for (i, v) in sums.values.iter().enumerate().take(j_max) {
            error_budget.insert(format!("alpha[{}]", i + 1), budget(v, bits));
            alpha.insert(i + 1, v.clone());
            k_cut.insert(i + 1, sums.k_cut[i]);
        }
        let mut pzeta = BTreeMap::new();
        let mut alpha_ja = BTreeMap::new();
        for (a, col) in cols {
            for (j, v) in col.iter().enumerate() {
                error_budget.insert(format!("alpha_ja[{j},{a}]"), budget(v, bits));
            }
            error_budget.insert(format!("pzeta[{a}]"), budget(&col[0], bits));
            pzeta.insert(a, col[0].clone());
            alpha_ja.insert(a, col);
        }
        for (j, v) in eta.values.iter().enumerate() {
            error_budget.insert(format!("eta[{j}]"), budget(v, bits));
        }
        Ok(Self {
            prec,
            beta,
            gamma,
            alpha,
            alpha_ja,
            eta,
            pzeta,
            error_budget,
            k_cut,
        })
    }

    pub fn j_max(&self) -> usize {
        self.alpha.keys().next_back().copied().unwrap_or(0)
    }

    pub fn alpha(&self, j: usize) -> Result<&HPReal> {
        self.alpha
            .get(&j)
            .ok_or_else(|| Error::MissingConstant(format!("alpha_{j}")))
    }

    /// `alpha_{j,a}`; `a = 1` gives `-j alpha_j` by convention.
    pub fn alpha_ja(&self, j: usize, a: u32) -> Result<HPReal> {
        if a == 1 {
            if j == 0 {
                return Err(Error::Domain("alpha_(0,1) is not defined".into()));
            }
            return Ok(-self.alpha(j)?.mul_i64(j as i64));
        }
        self.alpha_ja
            .get(&a)
            .and_then(|c| c.get(j))
            .cloned()
            .ok_or_else(|| Error::MissingConstant(format!("alpha_({j},{a})")))
    }

    pub fn pzeta(&self, a: u32) -> Result<&HPReal> {
        self.pzeta
            .get(&a)
            .ok_or_else(|| Error::MissingConstant(format!("P({a})")))
    }

    pub fn eta(&self, j: usize) -> Result<&HPReal> {
        self.eta
            .get(j)
            .ok_or_else(|| Error::MissingConstant(format!("eta_{j}")))
    }

    pub fn budget(&self, key: &str) -> Option<&HPReal> {
        self.error_budget.get(key)
    }
}
