//! Precision-parameterized reals, double-double accumulators, truncated
//! power series and Bernoulli numbers.

pub mod bernoulli;
pub mod dd;
pub mod hpreal;
pub mod series;

pub use bernoulli::{bernoulli, bernoulli_over_factorial};
pub use dd::{DoubleDouble, NeumaierSum};
pub use hpreal::{HPReal, DEFAULT_PREC, MIN_PREC};
pub use series::PowerSeries;
