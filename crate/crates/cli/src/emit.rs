//! Table output as CSV, aligned text or versioned JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::OutputFormat;

pub const SCHEMA_VERSION: u32 = 1;

/// Columns plus string-valued rows; numbers are pre-rendered so no digits
/// are lost to a float round trip.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub prec_bits: u32,
    pub prime_limit: u64,
    /// Truncation orders and other per-command parameters.
    pub truncation: BTreeMap<String, String>,
    pub git_describe: String,
}

impl Provenance {
    pub fn new(prec_bits: u32, prime_limit: u64) -> Self {
        Provenance {
            prec_bits,
            prime_limit,
            truncation: BTreeMap::new(),
            git_describe: env!("MERTENS_GIT_DESCRIBE").to_string(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.truncation.insert(key.to_string(), value.to_string());
        self
    }

    fn comment(&self) -> String {
        let mut s = format!("# prec_bits={} prime_limit={}", self.prec_bits, self.prime_limit);
        for (k, v) in &self.truncation {
            s += &format!(" {k}={v}");
        }
        s + &format!(" git={}", self.git_describe)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub schema_version: u32,
    pub command: String,
    pub provenance: Provenance,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema version {found}, expected {SCHEMA_VERSION}")]
    Version { found: u32 },
    #[error("row {row} has {found} cells for {expected} columns")]
    RowWidth { row: usize, found: usize, expected: usize },
    #[error("duplicate column {0:?}")]
    DuplicateColumn(String),
}

/// Parses and checks a JSON table document.
pub fn validate_doc(json: &str) -> Result<TableDoc, SchemaError> {
    let doc: TableDoc = serde_json::from_str(json)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(SchemaError::Version {
            found: doc.schema_version,
        });
    }
    for (i, c) in doc.columns.iter().enumerate() {
        if doc.columns[..i].contains(c) {
            return Err(SchemaError::DuplicateColumn(c.clone()));
        }
    }
    for (i, r) in doc.rows.iter().enumerate() {
        if r.len() != doc.columns.len() {
            return Err(SchemaError::RowWidth {
                row: i,
                found: r.len(),
                expected: doc.columns.len(),
            });
        }
    }
    Ok(doc)
}

/// The bare table: CSV with RFC 4180 quoting, decimal-aligned text, or a
/// JSON object with `columns` and `rows`.
pub fn emit_table(table: &Table, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.columns).expect("in-memory write");
            for r in &table.rows {
                w.write_record(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
        }
        OutputFormat::Text => aligned(table),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Bare<'a> {
                columns: &'a [String],
                rows: &'a [Vec<String>],
            }
            let mut s = serde_json::to_string_pretty(&Bare {
                columns: &table.columns,
                rows: &table.rows,
            })
            .expect("serializable");
            s.push('\n');
            s
        }
    }
}

/// Table with provenance: a JSON document, or a `#` comment line ahead of
/// the CSV/text body.
pub fn render(table: &Table, format: OutputFormat, command: &str, provenance: &Provenance) -> String {
    match format {
        OutputFormat::Json => {
            let doc = TableDoc {
                schema_version: SCHEMA_VERSION,
                command: command.to_string(),
                provenance: provenance.clone(),
                columns: table.columns.clone(),
                rows: table.rows.clone(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
        _ => format!("{}\n{}", provenance.comment(), emit_table(table, format)),
    }
}

fn is_numeric(s: &str) -> bool {
    let t = s.strip_prefix('-').unwrap_or(s);
    t.starts_with(|c: char| c.is_ascii_digit()) && s.parse::<f64>().is_ok()
}

/// Left-aligns text cells and lines numeric cells up on the decimal point.
fn aligned(table: &Table) -> String {
    let n = table.columns.len();
    let mut int_w = vec![0; n];
    let mut frac_w = vec![0; n];
    let mut text_w: Vec<usize> = table.columns.iter().map(|c| c.chars().count()).collect();
    for r in &table.rows {
        for (i, c) in r.iter().enumerate() {
            if is_numeric(c) {
                let (a, b) = c.split_at(c.find('.').unwrap_or(c.len()));
                int_w[i] = int_w[i].max(a.len());
                frac_w[i] = frac_w[i].max(b.len());
            } else {
                text_w[i] = text_w[i].max(c.chars().count());
            }
        }
    }
    let width: Vec<usize> = (0..n).map(|i| text_w[i].max(int_w[i] + frac_w[i])).collect();
    let mut out = String::new();
    let mut line = |cells: Vec<String>| {
        let l = cells.join("  ");
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(
        table
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:<w$}", w = width[i]))
            .collect(),
    );
    for r in &table.rows {
        line(
            r.iter()
                .enumerate()
                .map(|(i, c)| {
                    if is_numeric(c) {
                        let (a, b) = c.split_at(c.find('.').unwrap_or(c.len()));
                        format!("{:>iw$}{:<fw$}", a, b, iw = int_w[i], fw = width[i] - int_w[i])
                    } else {
                        format!("{c:<w$}", w = width[i])
                    }
                })
                .collect(),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(["j", "value", "note"]);
        t.push(["1", "1.5", "plain"]);
        t.push(["12", "-10.25", "has, comma"]);
        t.push(["3", "7", "say \"hi\""]);
        t
    }

    #[test]
    fn empty_rows_give_header_only() {
        let t = Table::new(["a", "b"]);
        assert_eq!(emit_table(&t, OutputFormat::Csv), "a,b\n");
        assert_eq!(emit_table(&t, OutputFormat::Text), "a  b\n");
        let v: serde_json::Value = serde_json::from_str(&emit_table(&t, OutputFormat::Json)).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn csv_quoting() {
        let s = emit_table(&sample(), OutputFormat::Csv);
        assert!(s.contains("\"has, comma\""));
        assert!(s.contains("\"say \"\"hi\"\"\""));
        let mut r = csv::Reader::from_reader(s.as_bytes());
        let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
        assert_eq!(&rows[1][2], "has, comma");
    }

    #[test]
    fn text_aligns_decimal_points() {
        let s = emit_table(&sample(), OutputFormat::Text);
        let lines: Vec<&str> = s.lines().collect();
        let dots: Vec<usize> = lines[1..3].iter().map(|l| l.find('.').unwrap()).collect();
        assert_eq!(dots[0], dots[1], "{s}");
        // an integer cell ends where the others' integer parts end
        let seven = lines[3].find('7').unwrap();
        assert_eq!(seven + 1, dots[0], "{s}");
    }

    #[test]
    fn json_round_trips_through_validator() {
        let prov = Provenance::new(192, 100_000_000).with("jmax", 26);
        let s = render(&sample(), OutputFormat::Json, "constants table", &prov);
        let doc = validate_doc(&s).unwrap();
        assert_eq!(doc.provenance, prov);
        assert_eq!(doc.rows, sample().rows);
    }

    #[test]
    fn validator_rejects_bad_documents() {
        let prov = Provenance::new(192, 10_000);
        let good = render(&sample(), OutputFormat::Json, "x", &prov);
        let mut v: serde_json::Value = serde_json::from_str(&good).unwrap();
        v["schema_version"] = 99.into();
        assert!(matches!(validate_doc(&v.to_string()), Err(SchemaError::Version { found: 99 })));
        let mut v: serde_json::Value = serde_json::from_str(&good).unwrap();
        v["rows"][0] = serde_json::json!(["1"]);
        assert!(matches!(validate_doc(&v.to_string()), Err(SchemaError::RowWidth { .. })));
        let mut v: serde_json::Value = serde_json::from_str(&good).unwrap();
        v["extra"] = 1.into();
        assert!(validate_doc(&v.to_string()).is_err());
    }
}
