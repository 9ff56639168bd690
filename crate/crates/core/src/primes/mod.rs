//! Prime enumeration, Ω-sieves and checkpointed prime prefix sums.

pub mod omega;
pub mod sieve;
pub mod store;
pub mod table;

pub use omega::{omega_sieve, OmegaBlock};
pub use sieve::{iroot, isqrt, primes_in_range, sieve_primes, simple_primes};
pub use store::{PrimeStore, CHECKPOINT_SPACING, MAX_STORED_J};
pub use table::PrimeTable;
