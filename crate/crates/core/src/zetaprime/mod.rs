//! The zeta function on `s > 1`, the prime zeta function, Stieltjes
//! constants and the `eta_j` coefficients of `-zeta'/zeta - 1/(s-1)`.

pub mod eta;
pub mod prime_zeta;
pub mod stieltjes;
pub mod zeta;

pub use eta::{eta_coeffs, g_by_difference, EtaTable};
pub use prime_zeta::{moebius, prime_zeta, prime_zeta_rough_series};
pub use stieltjes::{stieltjes, MAX_STIELTJES};
pub use zeta::{log_zeta_series, zeta, zeta_int, zeta_series};
