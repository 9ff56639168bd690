//! Ω(n), the number of prime factors counted with multiplicity, over ranges.

use rayon::prelude::*;

use super::sieve::{base_primes, SEGMENT_LEN};

/// `Ω(n)` for every `n` in `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaBlock {
    pub lo: u64,
    pub hi: u64,
    pub omega: Vec<u8>,
}

impl OmegaBlock {
    pub fn get(&self, n: u64) -> Option<u8> {
        if n < self.lo || n >= self.hi {
            return None;
        }
        Some(self.omega[(n - self.lo) as usize])
    }

    /// `(n, Ω(n))` pairs in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u8)> + '_ {
        self.omega.iter().enumerate().map(|(i, &w)| (self.lo + i as u64, w))
    }
}

/// Sieves one block with the given base primes (all primes `<= sqrt(hi-1)`).
///
/// Each prime power `p^e` increments Ω at its multiples and multiplies a
/// running cofactor by `p`; whatever is left of `n` after all small primes
/// is a single prime above `sqrt(n)`, worth one more.
pub fn omega_block_with(lo: u64, hi: u64, base: &[u64]) -> OmegaBlock {
    let len = (hi - lo) as usize;
    let mut omega = vec![0u8; len];
    let mut smooth = vec![1u64; len];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let mut q = p;
        loop {
            let mut m = lo.div_ceil(q) * q;
            while m < hi {
                let i = (m - lo) as usize;
                omega[i] += 1;
                smooth[i] *= p;
                m += q;
            }
            match q.checked_mul(p) {
                Some(next) if next < hi => q = next,
                _ => break,
            }
        }
    }
    for (i, (w, s)) in omega.iter_mut().zip(&smooth).enumerate() {
        let n = lo + i as u64;
        if n > 1 && *s < n {
            *w += 1;
        }
    }
    OmegaBlock { lo, hi, omega }
}

/// `Ω(n)` for `n` in `[lo, hi)`. Ω(0) is reported as 0 by convention.
pub fn omega_sieve(lo: u64, hi: u64) -> OmegaBlock {
    let base = base_primes(hi);
    let segments: Vec<(u64, u64)> = segment_bounds(lo, hi);
    let blocks: Vec<OmegaBlock> = segments
        .par_iter()
        .map(|&(a, b)| omega_block_with(a, b, &base))
        .collect();
    let mut omega = Vec::with_capacity((hi - lo) as usize);
    for b in blocks {
        omega.extend_from_slice(&b.omega);
    }
    OmegaBlock { lo, hi, omega }
}

pub(crate) fn segment_bounds(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        let b = (a + SEGMENT_LEN).min(hi);
        out.push((a, b));
        a = b;
    }
    out
}
