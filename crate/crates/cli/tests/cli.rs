use std::process::{Command, Output};

use mertens_cli::emit::validate_doc;

fn mertens(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mertens"));
    cmd.args(args).env_remove("MERTENS_PREC_BITS").env_remove("MERTENS_CACHE_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("spawn mertens")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn prec_of(o: &Output) -> u32 {
    let doc = validate_doc(&stdout(o)).expect("valid document");
    doc.provenance.prec_bits
}

#[test]
fn unknown_flag_is_usage_error() {
    let o = mertens(&["--no-such-flag"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--no-such-flag"));
}

#[test]
fn below_minimum_settings_are_rejected() {
    assert_eq!(mertens(&["--prime-limit", "5", "zeta", "eval", "--s", "2"], &[]).status.code(), Some(2));
    assert_eq!(mertens(&["--prec", "16", "zeta", "eval", "--s", "2"], &[]).status.code(), Some(2));
}

#[test]
fn identity_suite_succeeds() {
    let o = mertens(&["oracle", "identity-suite", "--x", "1e4"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn flags_beat_env_beat_config() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "prec_bits = 100\n").unwrap();
    let conf = conf.to_str().unwrap();
    let base = ["--json", "--config", conf, "zeta", "eval", "--s", "2"];

    assert_eq!(prec_of(&mertens(&base, &[])), 100);
    assert_eq!(prec_of(&mertens(&base, &[("MERTENS_PREC_BITS", "128")])), 128);
    let mut flagged = vec!["--prec", "160"];
    flagged.extend(base);
    assert_eq!(prec_of(&mertens(&flagged, &[("MERTENS_PREC_BITS", "128")])), 160);
}

#[test]
fn unknown_config_key_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "# comment\nprec_bits = 128\nprecision = 3\n").unwrap();
    let o = mertens(&["--config", conf.to_str().unwrap(), "zeta", "eval", "--s", "2"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3") && err.contains("precision"), "{err}");
}

#[test]
fn constants_table_json_validates() {
    let o = mertens(&["--json", "constants", "table", "--jmax", "8"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let doc = validate_doc(&stdout(&o)).unwrap();
    assert_eq!(doc.command, "constants table");
    assert_eq!(doc.rows.len(), 8);
    let j = doc.columns.iter().position(|c| c == "j").unwrap();
    let ratio = doc.columns.iter().position(|c| c == "ratio").unwrap();
    assert_eq!(doc.rows[0][j], "1");
    assert!(doc.rows[0][ratio].starts_with("1.332582"));
}

#[test]
fn csv_output_parses() {
    let o = mertens(&["--format", "csv", "expand", "rk", "--k", "2", "--n", "3", "--x", "1e6"], &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("# prec_bits=192"));
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    assert!(rdr.records().count() > 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "oracle", "rk", "--k", "3", "--x", "1e5"];
    let a = mertens(&args, &[]);
    let mut single = vec!["--threads", "1"];
    single.extend(args);
    let b = mertens(&single, &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}
