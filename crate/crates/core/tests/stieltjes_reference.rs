use std::fmt::Write as _;

use mertens_core::zetaprime::stieltjes;
use mertens_core::HPReal;
use sha2::{Digest, Sha256};

const DATA: &str = include_str!("../testdata/stieltjes_reference.txt");

fn load() -> (String, Vec<(usize, String)>) {
    let mut recorded = String::new();
    let mut rows = Vec::new();
    for line in DATA.lines() {
        if let Some(rest) = line.strip_prefix("# sha256 of the data lines: ") {
            recorded = rest.trim().to_string();
        } else if !line.starts_with('#') && !line.trim().is_empty() {
            let (n, v) = line.split_once(' ').expect("malformed row");
            rows.push((n.parse().unwrap(), v.to_string()));
        }
    }
    (recorded, rows)
}

#[test]
fn checksum_matches() {
    let (recorded, _) = load();
    let mut hasher = Sha256::new();
    for line in DATA.lines().filter(|l| !l.starts_with('#')) {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    let mut hex = String::new();
    for b in hasher.finalize() {
        write!(hex, "{b:02x}").unwrap();
    }
    assert_eq!(hex, recorded);
}

#[test]
fn computed_constants_match_reference() {
    let (_, rows) = load();
    assert_eq!(rows.len(), 20);
    let prec = 192;
    let computed = stieltjes(19, prec).unwrap();
    for (n, v) in rows {
        let want = HPReal::parse(&v, prec).unwrap();
        // 45 significant digits
        let tol = want.abs() * HPReal::parse("1e-44", prec).unwrap();
        assert!((&computed[n] - &want).abs() <= tol, "gamma_{n}: {} vs {v}", computed[n]);
    }
}
