//! In-memory prime list with double-double prefix sums of `1/p`, for the
//! brute-force oracles that issue millions of prefix queries.

use super::sieve::sieve_primes;
use crate::numkernel::DoubleDouble;

#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    /// `recip_prefix[i] = sum_{k < i} 1/p_k`.
    recip_prefix: Vec<DoubleDouble>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let primes: Vec<u64> = sieve_primes(limit).collect();
        let mut recip_prefix = Vec::with_capacity(primes.len() + 1);
        let mut acc = DoubleDouble::ZERO;
        recip_prefix.push(acc);
        for &p in &primes {
            acc += DoubleDouble::recip_u64(p);
            recip_prefix.push(acc);
        }
        PrimeTable {
            limit,
            primes,
            recip_prefix,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `pi(x)`, for `x <= limit`.
    pub fn pi(&self, x: u64) -> usize {
        debug_assert!(x <= self.limit, "query {x} beyond table limit {}", self.limit);
        self.primes.partition_point(|&p| p <= x)
    }

    /// `sum_{p <= x} 1/p`.
    pub fn recip_sum(&self, x: u64) -> DoubleDouble {
        self.recip_prefix[self.pi(x)]
    }

    /// `sum_{i <= p <= x} 1/p` over primes with index in `[from, pi(x))`.
    pub fn recip_sum_from(&self, from: usize, x: u64) -> DoubleDouble {
        let hi = self.pi(x);
        if hi <= from {
            return DoubleDouble::ZERO;
        }
        self.recip_prefix[hi] - self.recip_prefix[from]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_queries() {
        let t = PrimeTable::new(1000);
        assert_eq!(t.pi(1), 0);
        assert_eq!(t.pi(2), 1);
        assert_eq!(t.pi(100), 25);
        assert_eq!(t.pi(1000), 168);
        let want = 0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0;
        assert!((t.recip_sum(10).to_f64() - want).abs() < 1e-15);
        assert!((t.recip_sum_from(1, 10).to_f64() - (want - 0.5)).abs() < 1e-15);
        assert_eq!(t.recip_sum_from(4, 10), DoubleDouble::ZERO);
    }
}
