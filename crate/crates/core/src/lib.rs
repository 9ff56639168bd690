pub mod constants;
pub mod error;
pub mod expansion;
pub mod gammaderiv;
pub mod numkernel;
pub mod oracle;
pub mod polylog;
pub mod primes;
pub mod zetaprime;

pub use error::{Error, Result};
pub use numkernel::{HPReal, PowerSeries, DEFAULT_PREC};
