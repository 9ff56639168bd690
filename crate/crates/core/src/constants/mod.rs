//! Mertens-type constants: `alpha_{j,a}`, `alpha_j`, `beta`, `d_{j,k}`,
//! and the table that bundles them for the expansions.

pub mod alpha;
pub mod alpha_jk;
pub mod convergent;
mod table;

pub use alpha::{
    alpha, alpha_all, alpha_asymptotic, alpha_with, beta, d_jk, ratio_table, rh_refinement_diagnostic,
    AlphaSums, MAX_ALPHA_J,
};
pub use alpha_jk::{alpha_ja_checked, alpha_ja_direct, alpha_jk_column, chebyshev_tail, DirectSum, DEFAULT_SPLIT};
pub use convergent::{alpha_via_convergent_formula, convergent_prime_sum, d_jk_quadrature, Estimate};
pub use table::ConstantsTable;
