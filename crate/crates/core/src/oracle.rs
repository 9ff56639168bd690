//! Brute-force evaluations at finite `x` that the expansions are tested
//! against: `R_k(x)` from an Ω-sieve, `S_k(x)` by recursion over prime
//! prefix sums, the mixed prime-power sums that make up `R_3` and `R_4`, and
//! the slowly converging limit definition of `alpha_j`.
//!
//! Sums are accumulated in double-double. Parallel loops collect per-item
//! partial sums in index order and reduce them sequentially, so results do
//! not depend on the worker count.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{DoubleDouble, HPReal, DEFAULT_PREC};
use crate::primes::omega::{omega_block_with, segment_bounds};
use crate::primes::sieve::base_primes;
use crate::primes::{iroot, isqrt, PrimeStore, PrimeTable};

/// Largest `x` accepted by [`rk_sieve`].
pub const RK_CEILING: u64 = 100_000_000;

/// Largest `x` accepted by [`sk_recursive`], indexed by `k`.
pub const SK_CEILINGS: [u64; 5] = [0, 100_000_000, 100_000_000, 10_000_000, 1_000_000];

/// Relative rounding error charged per double-double operation.
const DD_ULP: f64 = 1.0 / (1u128 << 100) as f64;

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub quantity: String,
    pub x: u64,
    pub k_or_j: u32,
    pub value: HPReal,
    pub abs_error_budget: HPReal,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl OracleResult {
    fn new(quantity: &str, x: u64, k_or_j: u32, value: HPReal, budget: f64, started: Instant) -> Self {
        let prec = value.prec();
        OracleResult {
            quantity: quantity.to_string(),
            x,
            k_or_j,
            value,
            // doubled worst-case bound, kept strictly positive
            abs_error_budget: HPReal::from_f64((2.0 * budget).max(f64::MIN_POSITIVE), prec),
            wall_time: started.elapsed(),
        }
    }

    fn from_dd(quantity: &str, x: u64, k_or_j: u32, acc: Acc, started: Instant) -> Self {
        let budget = acc.budget();
        Self::new(quantity, x, k_or_j, acc.sum.to_hpreal(DEFAULT_PREC), budget, started)
    }
}

/// A double-double sum with a count of the operations that fed it.
#[derive(Clone, Copy, Debug, Default)]
struct Acc {
    sum: DoubleDouble,
    ops: u64,
}

impl Acc {
    fn add(&mut self, v: DoubleDouble) {
        self.sum += v;
        self.ops += 1;
    }

    fn merge(&mut self, o: Acc) {
        self.sum += o.sum;
        self.ops += o.ops + 1;
    }

    /// `o` scaled by `c`, one extra rounding.
    fn scaled(o: Acc, c: DoubleDouble) -> Acc {
        Acc {
            sum: o.sum * c,
            ops: o.ops + 2,
        }
    }

    fn budget(&self) -> f64 {
        self.sum.to_f64().abs() * (self.ops as f64 + 1.0) * DD_ULP
    }
}

fn ordered_sum(parts: impl IntoIterator<Item = Acc>) -> Acc {
    let mut total = Acc::default();
    for p in parts {
        total.merge(p);
    }
    total
}

/// Shared prime table, grown on demand.
fn prime_table(limit: u64) -> Arc<PrimeTable> {
    static TABLE: OnceLock<Mutex<Option<Arc<PrimeTable>>>> = OnceLock::new();
    let cell = TABLE.get_or_init(|| Mutex::new(None));
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = guard.as_ref() {
        if t.limit() >= limit {
            return t.clone();
        }
    }
    let t = Arc::new(PrimeTable::new(limit.max(1 << 16)));
    *guard = Some(t.clone());
    t
}

/// Per-`Ω` reciprocal sums over `1 <= n <= x`, index `Ω(n)`.
fn omega_recip_sums(x: u64) -> Arc<Vec<Acc>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<Acc>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&x) {
        return v.clone();
    }
    // Ω(n) <= log2(n) < 64
    let base = base_primes(x + 1);
    let parts: Vec<Vec<Acc>> = segment_bounds(1, x + 1)
        .par_iter()
        .map(|&(a, b)| {
            let blk = omega_block_with(a, b, &base);
            let mut acc = vec![Acc::default(); 64];
            for (n, w) in blk.iter() {
                acc[w as usize].add(DoubleDouble::recip_u64(n));
            }
            acc
        })
        .collect();
    let mut out = vec![Acc::default(); 64];
    for part in parts {
        for (o, p) in out.iter_mut().zip(part) {
            o.merge(p);
        }
    }
    let out = Arc::new(out);
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(x, out.clone());
    out
}

/// `R_k(x) = sum_{n <= x, Ω(n) = k} 1/n` from an Ω-sieve.
pub fn rk_sieve(k: u32, x: u64) -> Result<OracleResult> {
    if k == 0 {
        return Err(Error::Domain("R_k needs k >= 1".into()));
    }
    if x > RK_CEILING {
        return Err(Error::LimitExceeded {
            requested: x,
            limit: RK_CEILING,
            hint: "larger x needs the streaming sieve used by the benchmarks",
        });
    }
    let started = Instant::now();
    let sums = omega_recip_sums(x);
    let acc = sums.get(k as usize).copied().unwrap_or_default();
    Ok(OracleResult::from_dd("R_k", x, k, acc, started))
}

fn s_rec(t: &PrimeTable, k: u32, y: u64) -> Acc {
    if k == 1 {
        let n = t.pi(y) as u64;
        return Acc {
            sum: t.recip_sum(y),
            ops: n,
        };
    }
    let bound = y >> (k - 1);
    let mut acc = Acc::default();
    for &p in t.primes() {
        if p > bound {
            break;
        }
        acc.merge(Acc::scaled(s_rec(t, k - 1, y / p), DoubleDouble::recip_u64(p)));
    }
    acc
}

/// `S_k(x) = sum_{p_1 ... p_k <= x} 1/(p_1 ... p_k)` over ordered tuples,
/// via `S_k(x) = sum_{p <= x/2^(k-1)} S_{k-1}(x/p)/p`.
pub fn sk_recursive(k: u32, x: u64) -> Result<OracleResult> {
    if k == 0 || k as usize >= SK_CEILINGS.len() {
        return Err(Error::LimitExceeded {
            requested: k as u64,
            limit: (SK_CEILINGS.len() - 1) as u64,
            hint: "the recursive S_k oracle supports 1 <= k <= 4",
        });
    }
    let ceiling = SK_CEILINGS[k as usize];
    if x > ceiling {
        return Err(Error::LimitExceeded {
            requested: x,
            limit: ceiling,
            hint: "raise the ceiling only for offline runs; cost grows like x log log x",
        });
    }
    let started = Instant::now();
    let t = prime_table(x);
    let acc = sk_with(&t, k, x);
    Ok(OracleResult::from_dd("S_k", x, k, acc, started))
}

fn sk_with(t: &PrimeTable, k: u32, x: u64) -> Acc {
    if k == 1 {
        return s_rec(t, 1, x);
    }
    let bound = x >> (k - 1);
    let n = t.pi(bound.min(t.limit()));
    let parts: Vec<Acc> = t.primes()[..n]
        .par_iter()
        .map(|&p| Acc::scaled(s_rec(t, k - 1, x / p), DoubleDouble::recip_u64(p)))
        .collect();
    ordered_sum(parts)
}

/// `sum_{p q^a <= x} 1/(p q^a)` over primes `p, q` (including `p = q`).
pub fn pq_a_sum(a: u32, x: u64) -> Result<OracleResult> {
    if a < 2 {
        return Err(Error::Domain(format!("pq^a sums need a >= 2 (a = {a})")));
    }
    let started = Instant::now();
    let t = prime_table(x / 2);
    let qmax = iroot(x / 2, a);
    let acc = ordered_sum(t.primes().iter().take_while(|&&q| q <= qmax).map(|&q| {
        let qa = q.pow(a);
        Acc::scaled(s_rec(&t, 1, x / qa), DoubleDouble::recip_u64(qa))
    }));
    Ok(OracleResult::from_dd("pq^a", x, a, acc, started))
}

/// `sum_{p^a <= x} p^-a`.
pub fn prime_power_sum(a: u32, x: u64) -> Result<OracleResult> {
    if a == 0 {
        return Err(Error::Domain("prime power sums need a >= 1".into()));
    }
    let started = Instant::now();
    let pmax = iroot(x, a);
    let t = prime_table(pmax);
    let mut acc = Acc::default();
    for &p in t.primes().iter().take_while(|&&p| p <= pmax) {
        acc.add(DoubleDouble::recip_u64(p).pow_dd(a));
    }
    acc.ops *= a as u64;
    Ok(OracleResult::from_dd("p^a", x, a, acc, started))
}

/// `sum_{p^2 q r <= x} 1/(p^2 q r) = sum_p p^-2 S_2(x/p^2)`.
pub fn p2qr_sum(x: u64) -> Result<OracleResult> {
    let started = Instant::now();
    let t = prime_table(x / 4);
    let pmax = isqrt(x / 4);
    let parts: Vec<Acc> = t
        .primes()
        .iter()
        .take_while(|&&p| p <= pmax)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&p| Acc::scaled(s_rec(&t, 2, x / (p * p)), DoubleDouble::recip_u64(p * p)))
        .collect();
    Ok(OracleResult::from_dd("p^2qr", x, 4, ordered_sum(parts), started))
}

/// `sum_{p^2 q^2 <= x} 1/(p^2 q^2)` over ordered pairs.
pub fn p2q2_sum(x: u64) -> Result<OracleResult> {
    let started = Instant::now();
    let pmax = isqrt(x / 4);
    let t = prime_table(pmax.max(2));
    let sq: Vec<u64> = t.primes().iter().take_while(|&&p| p <= pmax).map(|&p| p * p).collect();
    let mut acc = Acc::default();
    for &a in &sq {
        let mut inner = Acc::default();
        for &b in sq.iter().take_while(|&&b| a * b <= x) {
            inner.add(DoubleDouble::recip_u64(b));
        }
        acc.merge(Acc::scaled(inner, DoubleDouble::recip_u64(a)));
    }
    Ok(OracleResult::from_dd("p^2q^2", x, 4, acc, started))
}

/// `(1/j)(log^j x / j - sum_{p <= x} log^j p / p)`, which tends to
/// `alpha_j`. The budget covers only the prefix-sum rounding.
pub fn alpha_limit_estimate(j: u32, x: u64, store: &PrimeStore) -> Result<OracleResult> {
    if j == 0 {
        return Err(Error::Domain("alpha_j needs j >= 1".into()));
    }
    let started = Instant::now();
    let prec = store.prec();
    let s = store.logpow_prefix(j as usize, x)?;
    let lx = HPReal::from_u64(x, prec).ln();
    let v = (lx.powi(j as i32).div_i64(j as i64) - s).div_i64(j as i64);
    let budget = store.prefix_error_bound(j as usize, x) / j as f64;
    Ok(OracleResult::new("alpha_limit", x, j, v, budget, started))
}

/// Both sides of an exact combinatorial identity at one `x`.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub x: u64,
    pub lhs: HPReal,
    pub rhs: HPReal,
    pub diff: f64,
    pub budget: f64,
}

impl IdentityCheck {
    fn build(name: &str, x: u64, lhs: &OracleResult, lhs_scale: i64, rhs: &[(&OracleResult, HPReal)]) -> Self {
        let lhs_v = lhs.value.mul_i64(lhs_scale);
        let mut budget = lhs.abs_error_budget.to_f64() * lhs_scale as f64;
        let mut rhs_v = HPReal::zero(lhs_v.prec());
        for (r, c) in rhs {
            rhs_v += &r.value * c;
            budget += r.abs_error_budget.to_f64() * c.to_f64().abs();
        }
        IdentityCheck {
            name: name.to_string(),
            x,
            diff: (&lhs_v - &rhs_v).abs().to_f64(),
            lhs: lhs_v,
            rhs: rhs_v,
            budget,
        }
    }

    pub fn holds(&self) -> bool {
        self.diff <= self.budget
    }
}

/// `R_3 = S_3/6 + (1/2) sum 1/(p q^2) + (1/3) sum 1/p^3` at finite `x`.
pub fn r3_identity(x: u64) -> Result<IdentityCheck> {
    let p = DEFAULT_PREC;
    let lhs = rk_sieve(3, x)?;
    let s3 = sk_recursive(3, x)?;
    let pq2 = pq_a_sum(2, x)?;
    let p3 = prime_power_sum(3, x)?;
    Ok(IdentityCheck::build(
        "R_3 decomposition",
        x,
        &lhs,
        1,
        &[
            (&s3, HPReal::from_ratio(1, 6, p)),
            (&pq2, HPReal::from_ratio(1, 2, p)),
            (&p3, HPReal::from_ratio(1, 3, p)),
        ],
    ))
}

/// `24 R_4 = S_4 + 6 sum 1/(p^2 q r) + 3 sum 1/(p^2 q^2) + 8 sum 1/(p^3 q)
/// + 6 sum 1/p^4` at finite `x`.
pub fn r4_identity(x: u64) -> Result<IdentityCheck> {
    let p = DEFAULT_PREC;
    let lhs = rk_sieve(4, x)?;
    let parts = [
        (sk_recursive(4, x)?, 1),
        (p2qr_sum(x)?, 6),
        (p2q2_sum(x)?, 3),
        (pq_a_sum(3, x)?, 8),
        (prime_power_sum(4, x)?, 6),
    ];
    let rhs: Vec<(&OracleResult, HPReal)> = parts.iter().map(|(r, c)| (r, HPReal::from_i64(*c, p))).collect();
    Ok(IdentityCheck::build("R_4 decomposition", x, &lhs, 24, &rhs))
}

trait PowDD {
    fn pow_dd(self, a: u32) -> DoubleDouble;
}

impl PowDD for DoubleDouble {
    fn pow_dd(self, a: u32) -> DoubleDouble {
        let mut r = self;
        for _ in 1..a {
            r = r * self;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_omega(mut n: u64) -> u32 {
        let mut c = 0;
        let mut d = 2;
        while d * d <= n {
            while n.is_multiple_of(d) {
                n /= d;
                c += 1;
            }
            d += 1;
        }
        c + (n > 1) as u32
    }

    #[test]
    fn r1_small() {
        let r = rk_sieve(1, 10).unwrap();
        let want = 0.5 + 1.0 / 3.0 + 0.2 + 1.0 / 7.0;
        assert!((r.value.to_f64() - want).abs() < 1e-15);
        assert!(r.abs_error_budget > 0.0);
    }

    #[test]
    fn r2_matches_trial_division() {
        let semis: Vec<u64> = (2..=100).filter(|&n| trial_omega(n) == 2).collect();
        assert_eq!(semis.len(), 34);
        let want: f64 = semis.iter().map(|&n| 1.0 / n as f64).sum();
        let got = rk_sieve(2, 100).unwrap();
        assert!((got.value.to_f64() - want).abs() < 1e-14);
        assert!(got.abs_error_budget < 1e-12);
    }

    #[test]
    fn s1_and_s2_match_direct_loops() {
        let ps: Vec<u64> = crate::primes::simple_primes(1000);
        let s1: f64 = ps.iter().map(|&p| 1.0 / p as f64).sum();
        assert!((sk_recursive(1, 1000).unwrap().value.to_f64() - s1).abs() < 1e-14);
        let mut s2 = 0.0;
        for &p in &ps {
            for &q in &ps {
                if p * q <= 1000 {
                    s2 += 1.0 / (p * q) as f64;
                }
            }
        }
        assert!((sk_recursive(2, 1000).unwrap().value.to_f64() - s2).abs() < 1e-13);
    }

    #[test]
    fn s2_splits_into_distinct_pairs_and_squares() {
        // S_2 = 2 R_2 - sum_{p^2 <= x} 1/p^2
        for x in [1000, 100_000] {
            let s2 = sk_recursive(2, x).unwrap().value;
            let r2 = rk_sieve(2, x).unwrap().value;
            let sq = prime_power_sum(2, x).unwrap().value;
            assert!((s2 - (r2.mul_i64(2) - sq)).abs() < 1e-14);
        }
    }

    #[test]
    fn pq2_by_hand() {
        // q=2: p<=25, q=3: p<=11, q=5: p<=4, q=7: p<=2
        let s = |m: u64| -> f64 { crate::primes::simple_primes(m).iter().map(|&p| 1.0 / p as f64).sum() };
        let want = s(25) / 4.0 + s(11) / 9.0 + s(4) / 25.0 + s(2) / 49.0;
        assert!((pq_a_sum(2, 100).unwrap().value.to_f64() - want).abs() < 1e-15);
    }

    #[test]
    fn decompositions_at_small_x() {
        for x in [1000, 10_000] {
            let c = r3_identity(x).unwrap();
            assert!(c.holds() && c.diff < 1e-12, "{c:?}");
            let c = r4_identity(x).unwrap();
            assert!(c.holds() && c.diff < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn deterministic() {
        let a = sk_recursive(3, 200_000).unwrap();
        let b = sk_recursive(3, 200_000).unwrap();
        assert_eq!(a.value.to_bytes(), b.value.to_bytes());
    }

    #[test]
    fn alpha_1_limit() {
        let store = PrimeStore::build(1 << 20, 128);
        let e = alpha_limit_estimate(1, 1_000_000, &store).unwrap();
        assert!((e.value.to_f64() - 1.332582).abs() < 2e-3, "{}", e.value);
    }

    #[test]
    fn ceilings() {
        assert!(rk_sieve(2, RK_CEILING + 1).is_err());
        assert!(sk_recursive(4, 2_000_000).is_err());
        assert!(sk_recursive(5, 100).is_err());
        assert!(pq_a_sum(1, 100).is_err());
    }
}
