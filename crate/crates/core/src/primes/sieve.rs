//! Segmented sieve of Eratosthenes over odd numbers.

/// Default segment length in integers.
pub const SEGMENT_LEN: u64 = 1 << 20;

/// Monolithic sieve returning all primes `<= limit`. Used for base primes
/// and as a reference in tests; memory is `O(limit)`.
pub fn simple_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut m = i.saturating_mul(i);
        while m <= n {
            composite[m] = true;
            m += i;
        }
    }
    out
}

/// `floor(sqrt(n))` without floating-point surprises.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|s| s > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= n) {
        r += 1;
    }
    r
}

/// `floor(n^(1/k))`.
pub fn iroot(n: u64, k: u32) -> u64 {
    if k == 1 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64) as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

/// Sieving primes needed for any segment below `limit`.
pub fn base_primes(limit: u64) -> Vec<u64> {
    simple_primes(isqrt(limit.max(4)))
}

/// Appends the primes in `[lo, hi)` to `out`. `base` must contain every
/// prime up to `sqrt(hi - 1)`.
pub fn sieve_segment(lo: u64, hi: u64, base: &[u64], out: &mut Vec<u64>) {
    if hi <= lo || hi <= 2 {
        return;
    }
    if lo <= 2 {
        out.push(2);
    }
    // odd numbers lo' = first odd >= max(lo, 3)
    let start = lo.max(3) | 1;
    if start >= hi {
        return;
    }
    let count = (hi - start).div_ceil(2);
    let mut composite = vec![false; count as usize];
    for &p in base.iter().skip(1) {
        let pp = p * p;
        if pp >= hi {
            break;
        }
        let mut m = if pp >= start {
            pp
        } else {
            let r = start.div_ceil(p) * p;
            if r % 2 == 0 {
                r + p
            } else {
                r
            }
        };
        while m < hi {
            composite[((m - start) / 2) as usize] = true;
            m += 2 * p;
        }
    }
    for (i, &c) in composite.iter().enumerate() {
        if !c {
            let n = start + 2 * i as u64;
            if n > 1 {
                out.push(n);
            }
        }
    }
}

/// Iterator over the primes `<= limit` in increasing order, sieving one
/// segment at a time.
pub struct PrimeIter {
    base: Vec<u64>,
    next_lo: u64,
    end: u64,
    buf: Vec<u64>,
    pos: usize,
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.pos == self.buf.len() {
            if self.next_lo >= self.end {
                return None;
            }
            let hi = (self.next_lo + SEGMENT_LEN).min(self.end);
            self.buf.clear();
            self.pos = 0;
            sieve_segment(self.next_lo, hi, &self.base, &mut self.buf);
            self.next_lo = hi;
        }
        let p = self.buf[self.pos];
        self.pos += 1;
        Some(p)
    }
}

/// Primes `<= limit`; empty when `limit < 2`.
pub fn sieve_primes(limit: u64) -> PrimeIter {
    PrimeIter {
        base: base_primes(limit.saturating_add(1)),
        next_lo: 0,
        end: if limit < 2 { 0 } else { limit + 1 },
        buf: Vec::new(),
        pos: 0,
    }
}

/// Primes in `[lo, hi)` collected into a vector.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let base = base_primes(hi);
    let mut out = Vec::new();
    let mut a = lo;
    while a < hi {
        let b = (a + SEGMENT_LEN).min(hi);
        sieve_segment(a, b, &base, &mut out);
        a = b;
    }
    out
}
