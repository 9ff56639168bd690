//! Checkpointed prime prefix sums with an on-disk cache.
//!
//! The store keeps, every [`CHECKPOINT_SPACING`] integers, the running sums
//! `sum_{p <= b} (log p)^j / p` for `j = 0..=`[`MAX_STORED_J`]. Within a
//! segment the terms are accumulated in double-double; the segment totals
//! are promoted to [`HPReal`] and added in segment order by a single writer,
//! so the result does not depend on the number of worker threads.
//!
//! Error budget per checkpoint: the `j = 0` terms `1/p` are double-double
//! accurate (relative `2^-104`), so the accumulated error stays below
//! `pi(x) * 2^-100`. For `j >= 1` each term is formed in binary64, adding a
//! relative error below `2^-50` per term.
//!
//! # Cache layout
//!
//! `<cache_dir>/manifest.json` describes the store (format version, limit,
//! precision, spacing, file list). Each `prefix_L<limit>_P<prec>_j<j>.bin`
//! holds one `j`: the 8-byte magic `MRTNPFX\0`, then little-endian `u32`
//! version, `u64` limit, `u32` precision, `u32` j, `u64` spacing, `u64`
//! checkpoint count, and per checkpoint `u64` bound, `u64` prime count and
//! the encoded real (see [`HPReal::to_bytes`]). Any mismatch or truncation
//! triggers a rebuild with a warning.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::omega::segment_bounds;
use super::sieve::{base_primes, sieve_segment};
use crate::error::{Error, Result};
use crate::numkernel::{DoubleDouble, HPReal};

pub const CHECKPOINT_SPACING: u64 = 1 << 20;
pub const MAX_STORED_J: usize = 4;
pub const CACHE_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"MRTNPFX\0";
const MANIFEST: &str = "manifest.json";

const LIMIT_HINT: &str = "rebuild the prime store with a larger prime limit";

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    /// Sums cover the primes `p <= bound`.
    pub bound: u64,
    pub count: u64,
    /// `sums[j] = sum_{p <= bound} (log p)^j / p`.
    pub sums: Vec<HPReal>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
struct Manifest {
    version: u32,
    limit: u64,
    prec_bits: u32,
    spacing: u64,
    files: Vec<ManifestFile>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    j: usize,
    file: String,
    checkpoints: usize,
}

#[derive(Clone, Debug)]
pub struct PrimeStore {
    limit: u64,
    prec: u32,
    checkpoints: Vec<Checkpoint>,
    base: Vec<u64>,
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy)]
struct SegmentSums {
    count: u64,
    sums: [DoubleDouble; MAX_STORED_J + 1],
}

fn segment_sums(lo: u64, hi: u64, base: &[u64], scratch: &mut Vec<u64>) -> SegmentSums {
    scratch.clear();
    sieve_segment(lo, hi, base, scratch);
    let mut sums = [DoubleDouble::ZERO; MAX_STORED_J + 1];
    for &p in scratch.iter() {
        sums[0] += DoubleDouble::recip_u64(p);
        let lp = (p as f64).ln();
        let inv = 1.0 / p as f64;
        let mut t = inv;
        for s in sums.iter_mut().skip(1) {
            t *= lp;
            *s = s.add_f64(t);
        }
    }
    SegmentSums {
        count: scratch.len() as u64,
        sums,
    }
}

/// Rounds `limit` up to a multiple of the checkpoint spacing.
pub fn effective_limit(limit: u64) -> u64 {
    limit.max(1).div_ceil(CHECKPOINT_SPACING) * CHECKPOINT_SPACING
}

impl PrimeStore {
    /// Sieves up to `limit` (rounded up to a multiple of the checkpoint
    /// spacing) without touching the disk.
    pub fn build(limit: u64, prec: u32) -> Self {
        let limit = effective_limit(limit);
        let prec = HPReal::zero(prec).prec();
        let base = base_primes(limit + 1);
        let segs = segment_bounds(0, limit);
        let totals: Vec<SegmentSums> = segs
            .par_iter()
            .map_init(Vec::new, |scratch, &(a, b)| segment_sums(a, b, &base, scratch))
            .collect();
        let mut checkpoints = Vec::with_capacity(totals.len() + 1);
        let mut running: Vec<HPReal> = vec![HPReal::zero(prec); MAX_STORED_J + 1];
        let mut count = 0;
        checkpoints.push(Checkpoint {
            bound: 0,
            count: 0,
            sums: running.clone(),
        });
        // segment i is [i*spacing, (i+1)*spacing); checkpoints sit at the
        // even bounds, so "p < bound" and "p <= bound" coincide
        for (i, seg) in totals.iter().enumerate() {
            count += seg.count;
            for (r, s) in running.iter_mut().zip(&seg.sums) {
                *r += s.to_hpreal(prec);
            }
            checkpoints.push(Checkpoint {
                bound: (i as u64 + 1) * CHECKPOINT_SPACING,
                count,
                sums: running.clone(),
            });
        }
        PrimeStore {
            limit,
            prec,
            checkpoints,
            base,
            cache_dir: None,
        }
    }

    /// Loads the store from `cache_dir`, rebuilding (and rewriting the
    /// cache) when it is missing, stale or corrupt.
    pub fn open(limit: u64, prec: u32, cache_dir: &Path) -> Result<Self> {
        let limit = effective_limit(limit);
        let prec = HPReal::zero(prec).prec();
        match Self::load(limit, prec, cache_dir) {
            Ok(mut store) => {
                log::debug!("loaded prime store from {}", cache_dir.display());
                store.cache_dir = Some(cache_dir.to_path_buf());
                return Ok(store);
            }
            Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::NotFound => {
                log::info!("no prime cache in {}; sieving to {limit}", cache_dir.display());
            }
            Err(e) => {
                log::warn!("discarding prime cache in {}: {e}", cache_dir.display());
            }
        }
        let mut store = Self::build(limit, prec);
        store.save(cache_dir)?;
        store.cache_dir = Some(cache_dir.to_path_buf());
        Ok(store)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    fn check_limit(&self, x: u64) -> Result<()> {
        if x > self.limit {
            return Err(Error::LimitExceeded {
                requested: x,
                limit: self.limit,
                hint: LIMIT_HINT,
            });
        }
        Ok(())
    }

    /// Sum over the primes in `(checkpoint, x]`, re-sieving one segment.
    fn partial(&self, x: u64) -> (&Checkpoint, SegmentSums) {
        let idx = (x / CHECKPOINT_SPACING) as usize;
        let cp = &self.checkpoints[idx];
        let mut scratch = Vec::new();
        let seg = segment_sums(cp.bound, x + 1, &self.base, &mut scratch);
        (cp, seg)
    }

    /// `pi(x)`.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        self.check_limit(x)?;
        let (cp, seg) = self.partial(x);
        Ok(cp.count + seg.count)
    }

    /// `sum_{p <= x} 1/p`.
    pub fn mertens_prefix(&self, x: u64) -> Result<HPReal> {
        self.logpow_prefix(0, x)
    }

    /// `sum_{p <= x} (log p)^j / p`. Orders above [`MAX_STORED_J`] are
    /// summed directly from the sieve.
    pub fn logpow_prefix(&self, j: usize, x: u64) -> Result<HPReal> {
        self.check_limit(x)?;
        if j > MAX_STORED_J {
            return Ok(direct_logpow_sum(j, x, &self.base, self.prec));
        }
        let (cp, seg) = self.partial(x);
        Ok(&cp.sums[j] + seg.sums[j].to_hpreal(self.prec))
    }

    /// Engineering bound on the accumulated rounding error of
    /// [`PrimeStore::logpow_prefix`].
    pub fn prefix_error_bound(&self, j: usize, x: u64) -> f64 {
        let pi = x as f64 / (x.max(3) as f64).ln() * 1.3 + 10.0;
        if j == 0 {
            pi * 2f64.powi(-100)
        } else {
            let lx = (x.max(3) as f64).ln();
            lx.powi(j as i32 + 1) * 2f64.powi(-49)
        }
    }

    fn file_name(&self, j: usize) -> String {
        format!("prefix_L{}_P{}_j{}.bin", self.limit, self.prec, j)
    }

    /// Writes every stored order plus the manifest.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut files = Vec::new();
        for j in 0..=MAX_STORED_J {
            let mut buf = Vec::new();
            buf.extend_from_slice(MAGIC);
            buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
            buf.extend_from_slice(&self.limit.to_le_bytes());
            buf.extend_from_slice(&self.prec.to_le_bytes());
            buf.extend_from_slice(&(j as u32).to_le_bytes());
            buf.extend_from_slice(&CHECKPOINT_SPACING.to_le_bytes());
            buf.extend_from_slice(&(self.checkpoints.len() as u64).to_le_bytes());
            for cp in &self.checkpoints {
                buf.extend_from_slice(&cp.bound.to_le_bytes());
                buf.extend_from_slice(&cp.count.to_le_bytes());
                buf.extend_from_slice(&cp.sums[j].to_bytes());
            }
            let name = self.file_name(j);
            write_atomic(&dir.join(&name), &buf)?;
            files.push(ManifestFile {
                j,
                file: name,
                checkpoints: self.checkpoints.len(),
            });
        }
        let manifest = Manifest {
            version: CACHE_VERSION,
            limit: self.limit,
            prec_bits: self.prec,
            spacing: CHECKPOINT_SPACING,
            files,
        };
        let json = serde_json::to_vec_pretty(&manifest)
            .map_err(|e| Error::Cache(format!("manifest encoding: {e}")))?;
        write_atomic(&dir.join(MANIFEST), &json)?;
        Ok(())
    }

    fn load(limit: u64, prec: u32, dir: &Path) -> Result<Self> {
        let raw = fs::read(dir.join(MANIFEST))?;
        let manifest: Manifest = serde_json::from_slice(&raw)
            .map_err(|e| Error::Cache(format!("manifest: {e}")))?;
        if manifest.version != CACHE_VERSION
            || manifest.limit != limit
            || manifest.prec_bits != prec
            || manifest.spacing != CHECKPOINT_SPACING
        {
            return Err(Error::Cache(format!(
                "manifest is for version {} limit {} prec {}, wanted version {} limit {limit} prec {prec}",
                manifest.version, manifest.limit, manifest.prec_bits, CACHE_VERSION
            )));
        }
        let mut columns: Vec<Vec<(u64, u64, HPReal)>> = Vec::new();
        for j in 0..=MAX_STORED_J {
            let entry = manifest
                .files
                .iter()
                .find(|f| f.j == j)
                .ok_or_else(|| Error::Cache(format!("manifest lists no file for j={j}")))?;
            let buf = fs::read(dir.join(&entry.file)).map_err(|e| {
                Error::Cache(format!("{}: {e}", entry.file))
            })?;
            columns.push(parse_file(&buf, limit, prec, j)?);
        }
        let n = columns[0].len();
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Cache("checkpoint counts differ between files".into()));
        }
        let mut checkpoints = Vec::with_capacity(n);
        for i in 0..n {
            let (bound, count, _) = columns[0][i];
            let mut sums = Vec::with_capacity(MAX_STORED_J + 1);
            for col in &columns {
                if col[i].0 != bound || col[i].1 != count {
                    return Err(Error::Cache("checkpoint bounds differ between files".into()));
                }
                sums.push(col[i].2.clone());
            }
            checkpoints.push(Checkpoint { bound, count, sums });
        }
        let expected = (limit / CHECKPOINT_SPACING) as usize + 1;
        if checkpoints.len() != expected {
            return Err(Error::Cache(format!(
                "expected {expected} checkpoints, found {}",
                checkpoints.len()
            )));
        }
        Ok(PrimeStore {
            limit,
            prec,
            checkpoints,
            base: base_primes(limit + 1),
            cache_dir: None,
        })
    }
}

fn parse_file(buf: &[u8], limit: u64, prec: u32, j: usize) -> Result<Vec<(u64, u64, HPReal)>> {
    let bad = |what: &str| Error::Cache(format!("j={j}: {what}"));
    let mut r = Reader { buf, pos: 0 };
    if r.take(8).ok_or_else(|| bad("truncated header"))? != MAGIC {
        return Err(bad("bad magic"));
    }
    let version = r.u32().ok_or_else(|| bad("truncated header"))?;
    let f_limit = r.u64().ok_or_else(|| bad("truncated header"))?;
    let f_prec = r.u32().ok_or_else(|| bad("truncated header"))?;
    let f_j = r.u32().ok_or_else(|| bad("truncated header"))?;
    let spacing = r.u64().ok_or_else(|| bad("truncated header"))?;
    let n = r.u64().ok_or_else(|| bad("truncated header"))?;
    if version != CACHE_VERSION
        || f_limit != limit
        || f_prec != prec
        || f_j as usize != j
        || spacing != CHECKPOINT_SPACING
    {
        return Err(bad("header does not match the manifest"));
    }
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let bound = r.u64().ok_or_else(|| bad("truncated checkpoint"))?;
        let count = r.u64().ok_or_else(|| bad("truncated checkpoint"))?;
        let (v, used) = HPReal::from_bytes(&r.buf[r.pos..])?;
        r.pos += used;
        out.push((bound, count, v));
    }
    if r.pos != buf.len() {
        return Err(bad("trailing bytes"));
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Option<&[u8]> {
        let s = self.buf.get(self.pos..self.pos + n)?;
        self.pos += n;
        Some(s)
    }

    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().ok()?))
    }

    fn u64(&mut self) -> Option<u64> {
        Some(u64::from_le_bytes(self.take(8)?.try_into().ok()?))
    }
}

fn write_atomic(path: &Path, data: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, data)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// `sum_{p <= x} (log p)^j / p` straight from the sieve.
pub fn direct_logpow_sum(j: usize, x: u64, base: &[u64], prec: u32) -> HPReal {
    let segs = segment_bounds(0, x + 1);
    let parts: Vec<DoubleDouble> = segs
        .par_iter()
        .map_init(Vec::new, |scratch, &(a, b)| {
            scratch.clear();
            sieve_segment(a, b, base, scratch);
            let mut acc = DoubleDouble::ZERO;
            for &p in scratch.iter() {
                if j == 0 {
                    acc += DoubleDouble::recip_u64(p);
                } else {
                    acc = acc.add_f64((p as f64).ln().powi(j as i32) / p as f64);
                }
            }
            acc
        })
        .collect();
    let mut total = HPReal::zero(prec);
    for part in parts {
        total += part.to_hpreal(prec);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve::simple_primes;

    #[test]
    fn small_prefixes() {
        let store = PrimeStore::build(1, 128);
        assert_eq!(store.limit(), CHECKPOINT_SPACING);
        let want = HPReal::from_ratio(1, 2, 128)
            + HPReal::from_ratio(1, 3, 128)
            + HPReal::from_ratio(1, 5, 128)
            + HPReal::from_ratio(1, 7, 128);
        let got = store.mertens_prefix(10).unwrap();
        assert!((&got - &want).abs().to_f64() < 1e-30);
        assert_eq!(store.mertens_prefix(2).unwrap(), HPReal::from_ratio(1, 2, 128));
        assert!(store.mertens_prefix(1).unwrap().is_zero());
        assert_eq!(store.prime_count(100).unwrap(), 25);
    }

    #[test]
    fn logpow_at_one_hundred_matches_enumeration() {
        let store = PrimeStore::build(1, 128);
        let direct: f64 = simple_primes(100).iter().map(|&p| (p as f64).ln().powi(2) / p as f64).sum();
        let got = store.logpow_prefix(2, 100).unwrap().to_f64();
        assert!((got - direct).abs() < 1e-13);
        assert_eq!(
            store.logpow_prefix(0, 1000).unwrap(),
            store.mertens_prefix(1000).unwrap()
        );
    }

    #[test]
    fn beyond_limit_is_an_error() {
        let store = PrimeStore::build(1, 128);
        assert!(matches!(
            store.mertens_prefix(CHECKPOINT_SPACING + 1),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn checkpoint_queries_agree_with_direct_sums() {
        let store = PrimeStore::build(3 * CHECKPOINT_SPACING, 192);
        let base = base_primes(store.limit() + 1);
        for x in [CHECKPOINT_SPACING, 2 * CHECKPOINT_SPACING + 12345, store.limit()] {
            let a = store.mertens_prefix(x).unwrap();
            let b = direct_logpow_sum(0, x, &base, 192);
            assert!((&a - &b).abs().to_f64() < 1e-28, "x={x}");
            let a = store.logpow_prefix(3, x).unwrap();
            let b = direct_logpow_sum(3, x, &base, 192);
            assert!((&a - &b).abs().to_f64() < 1e-9, "x={x}");
        }
    }

    #[test]
    fn cache_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let built = PrimeStore::open(2 * CHECKPOINT_SPACING, 160, dir.path()).unwrap();
        let loaded = PrimeStore::open(2 * CHECKPOINT_SPACING, 160, dir.path()).unwrap();
        assert_eq!(built.checkpoints(), loaded.checkpoints());
        let fresh = PrimeStore::build(2 * CHECKPOINT_SPACING, 160);
        assert_eq!(fresh.checkpoints(), loaded.checkpoints());
    }

    #[test]
    fn corrupt_cache_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let built = PrimeStore::open(CHECKPOINT_SPACING, 128, dir.path()).unwrap();
        let victim = dir.path().join(built.file_name(2));
        let mut bytes = fs::read(&victim).unwrap();
        bytes.truncate(bytes.len() - 3);
        fs::write(&victim, bytes).unwrap();
        let again = PrimeStore::open(CHECKPOINT_SPACING, 128, dir.path()).unwrap();
        assert_eq!(built.checkpoints(), again.checkpoints());
        // stale precision also forces a rebuild rather than a misread
        let other = PrimeStore::open(CHECKPOINT_SPACING, 256, dir.path()).unwrap();
        assert_eq!(other.prec(), 256);
    }
}
