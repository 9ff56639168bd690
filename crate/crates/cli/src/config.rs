//! Run configuration: defaults, an optional flat `key = value` file, and
//! command-line flags (which clap also fills from the environment).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use mertens_core::HPReal;
use serde::Serialize;

use crate::error::CliError;

pub const MIN_PREC_BITS: u32 = 64;
pub const MIN_PRIME_LIMIT: u64 = 10_000;
pub const DEFAULT_PRIME_LIMIT: u64 = 100_000_000;
pub const DEFAULT_CACHE_DIR: &str = ".mertens-cache";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <OutputFormat as ValueEnum>::from_str(s, true)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub prec_bits: u32,
    pub prime_limit: u64,
    pub cache_dir: PathBuf,
    pub output_format: OutputFormat,
    /// Worker threads; `None` uses every logical core.
    pub threads: Option<usize>,
    pub suite_tolerances: BTreeMap<String, HPReal>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prec_bits: mertens_core::DEFAULT_PREC,
            prime_limit: DEFAULT_PRIME_LIMIT,
            cache_dir: PathBuf::from(DEFAULT_CACHE_DIR),
            output_format: OutputFormat::Text,
            threads: None,
            suite_tolerances: BTreeMap::new(),
        }
    }
}

/// One source of settings; unset fields defer to the layer below.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigLayer {
    pub prec_bits: Option<u32>,
    pub prime_limit: Option<u64>,
    pub cache_dir: Option<PathBuf>,
    pub output_format: Option<OutputFormat>,
    pub threads: Option<usize>,
    /// Raw tolerance strings, parsed once the precision is known.
    pub suite_tolerances: BTreeMap<String, String>,
}

impl ConfigLayer {
    /// Parses the flat config format. Blank lines and `#` comments are
    /// skipped; `tolerance.<suite> = <value>` sets a suite tolerance.
    pub fn parse(text: &str, origin: &Path) -> Result<Self, CliError> {
        let mut layer = ConfigLayer::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| CliError::Config {
                path: origin.to_path_buf(),
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, found {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "prec_bits" => layer.prec_bits = Some(value.parse().map_err(|e| err(format!("prec_bits: {e}")))?),
                "prime_limit" => layer.prime_limit = Some(parse_count(value).map_err(|e| err(format!("prime_limit: {e}")))?),
                "cache_dir" => layer.cache_dir = Some(PathBuf::from(value)),
                "output_format" => layer.output_format = Some(value.parse().map_err(|e| err(format!("output_format: {e}")))?),
                "threads" => layer.threads = Some(value.parse().map_err(|e| err(format!("threads: {e}")))?),
                k if k.starts_with("tolerance.") && k.len() > "tolerance.".len() => {
                    value.parse::<f64>().map_err(|e| err(format!("{k}: {e}")))?;
                    layer.suite_tolerances.insert(k["tolerance.".len()..].to_string(), value.to_string());
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(layer)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        Self::parse(&text, path)
    }
}

impl RunConfig {
    /// Applies `layers` from lowest to highest priority over the defaults.
    pub fn resolve(layers: &[&ConfigLayer]) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let mut tolerances = BTreeMap::new();
        for l in layers {
            cfg.prec_bits = l.prec_bits.unwrap_or(cfg.prec_bits);
            cfg.prime_limit = l.prime_limit.unwrap_or(cfg.prime_limit);
            if let Some(d) = &l.cache_dir {
                cfg.cache_dir = d.clone();
            }
            cfg.output_format = l.output_format.unwrap_or(cfg.output_format);
            cfg.threads = l.threads.or(cfg.threads);
            tolerances.extend(l.suite_tolerances.clone());
        }
        if cfg.prec_bits < MIN_PREC_BITS {
            return Err(CliError::Usage(format!(
                "precision {} is below the minimum of {MIN_PREC_BITS} bits",
                cfg.prec_bits
            )));
        }
        if cfg.prime_limit < MIN_PRIME_LIMIT {
            return Err(CliError::Usage(format!(
                "prime limit {} is below the minimum of {MIN_PRIME_LIMIT}",
                cfg.prime_limit
            )));
        }
        if cfg.threads == Some(0) {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        for (k, v) in tolerances {
            let t = HPReal::parse(&v, cfg.prec_bits)?;
            if !t.is_positive() {
                return Err(CliError::Usage(format!("tolerance.{k} must be positive")));
            }
            cfg.suite_tolerances.insert(k, t);
        }
        Ok(cfg)
    }

    pub fn tolerance(&self, suite: &str, default: f64) -> f64 {
        self.suite_tolerances.get(suite).map_or(default, HPReal::to_f64)
    }
}

/// Parses counts written as `100000000`, `100_000_000`, `1e8`, `2.5e6` or
/// `10^8`. Fractional results are rejected.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    if let Some((base, exp)) = t.split_once('^') {
        let base: u64 = base.parse().map_err(|_| format!("invalid count {s:?}"))?;
        let exp: u32 = exp.parse().map_err(|_| format!("invalid count {s:?}"))?;
        return base.checked_pow(exp).ok_or_else(|| format!("count {s:?} overflows"));
    }
    let (mant, exp) = t
        .split_once(['e', 'E'])
        .ok_or_else(|| format!("invalid count {s:?}"))?;
    let exp: u32 = exp.parse().map_err(|_| format!("invalid exponent in {s:?}"))?;
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("invalid count {s:?}"));
    }
    let frac = frac.trim_end_matches('0');
    if frac.len() as u32 > exp {
        return Err(format!("count {s:?} is not an integer"));
    }
    let digits = format!("{int}{frac}");
    let v: u64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| format!("count {s:?} overflows"))? };
    10u64
        .checked_pow(exp - frac.len() as u32)
        .and_then(|p| v.checked_mul(p))
        .ok_or_else(|| format!("count {s:?} overflows"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e8"), Ok(100_000_000));
        assert_eq!(parse_count("2.5e6"), Ok(2_500_000));
        assert_eq!(parse_count("10^6"), Ok(1_000_000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert_eq!(parse_count("1.50e1"), Ok(15));
        assert!(parse_count("1.25e1").is_err());
        assert!(parse_count("abc").is_err());
        assert!(parse_count("1e30").is_err());
        assert!(parse_count("-5").is_err());
    }

    #[test]
    fn config_file() {
        let text = "# defaults for CI\nprec_bits = 256\nprime_limit = 1e7 # smaller\n\ntolerance.identities = 1e-11\n";
        let l = ConfigLayer::parse(text, Path::new("ci.conf")).unwrap();
        assert_eq!(l.prec_bits, Some(256));
        assert_eq!(l.prime_limit, Some(10_000_000));
        let cfg = RunConfig::resolve(&[&l]).unwrap();
        assert_eq!(cfg.tolerance("identities", 1.0), 1e-11);
        assert_eq!(cfg.tolerance("other", 0.5), 0.5);
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = ConfigLayer::parse("prec_bits = 128\n\nprecision = 3\n", Path::new("x.conf")).unwrap_err();
        match err {
            CliError::Config { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("precision"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn later_layers_win() {
        let file = ConfigLayer {
            prec_bits: Some(128),
            prime_limit: Some(1_000_000),
            ..Default::default()
        };
        let flags = ConfigLayer {
            prec_bits: Some(320),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(&[&file, &flags]).unwrap();
        assert_eq!(cfg.prec_bits, 320);
        assert_eq!(cfg.prime_limit, 1_000_000);
    }

    #[test]
    fn invariants() {
        let low = ConfigLayer {
            prec_bits: Some(32),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&[&low]).is_err());
        let small = ConfigLayer {
            prime_limit: Some(100),
            ..Default::default()
        };
        assert!(RunConfig::resolve(&[&small]).is_err());
    }
}
