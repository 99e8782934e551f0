//! Scan reports: versioned JSON, per-bucket CSV, and gnuplot-compatible
//! plot-data files. Serialization is deterministic: ordered maps, exact
//! rationals rendered as strings, and a fixed field layout.

use serde::Serialize;
use serde_json::Value;

use crate::lab::envelope::{AffineFit, BucketTable, BucketValue};
use crate::lab::workers::Counts;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Every sample satisfies the fitted inequality and the scan's
    /// hypotheses held.
    Pass,
    /// An inequality was violated by a witness: a bug or a counterexample.
    Fail,
    /// Budget, precision, or enumeration limits prevented a conclusion.
    Inconclusive,
    /// A hypothesis of the underlying statement was violated by the input.
    NotApplicable,
    /// The input is degenerate for this experiment (e.g. solution lines).
    Degenerate,
    /// Informational run with nothing to pass or fail.
    Complete,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass | Verdict::Complete => 0,
            Verdict::Fail => 2,
            Verdict::Inconclusive | Verdict::NotApplicable | Verdict::Degenerate => 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BucketRow {
    pub key: i64,
    /// "7" for an exact maximum, ">=9" when censored by truncation.
    pub value: String,
    pub exact: bool,
    pub witness: Vec<String>,
    pub samples: u64,
    pub censored: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub schema: u32,
    pub subcommand: String,
    pub params: Value,
    /// Column names: the bucket key, the bucket value, then witnesses.
    pub columns: Vec<String>,
    pub buckets: Vec<BucketRow>,
    pub fit: Option<AffineFit>,
    pub verdict: Verdict,
    pub counts: Counts,
    pub notes: Vec<String>,
    pub extra: Value,
}

impl ScanReport {
    pub fn from_table(
        subcommand: &str,
        params: Value,
        columns: &[&str],
        table: &BucketTable,
        fit: Option<AffineFit>,
        verdict: Verdict,
        counts: Counts,
        notes: Vec<String>,
        extra: Value,
    ) -> ScanReport {
        let buckets = table
            .buckets
            .iter()
            .map(|(k, e)| BucketRow {
                key: *k,
                value: match e.value {
                    BucketValue::Exact(v) => format!("{v}"),
                    BucketValue::Censored { lower } => format!(">={lower}"),
                },
                exact: e.value.is_exact(),
                witness: vec![e.witness.0.clone(), e.witness.1.clone()],
                samples: e.samples,
                censored: e.censored,
            })
            .collect();
        ScanReport {
            schema: SCHEMA_VERSION,
            subcommand: subcommand.to_string(),
            params,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            buckets,
            fit,
            verdict,
            counts,
            notes,
            extra,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per bucket, exactly the named columns.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for b in &self.buckets {
            let mut fields = vec![b.key.to_string(), b.value.clone()];
            for w in &b.witness {
                fields.push(csv_quote(w));
            }
            while fields.len() < self.columns.len() {
                fields.push(String::new());
            }
            fields.truncate(self.columns.len());
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    /// Two columns, gnuplot-compatible; censored buckets appear as comments.
    pub fn to_plot_data(&self) -> String {
        let mut out = format!("# {} {}\n", self.columns[0], self.columns[1]);
        for b in &self.buckets {
            if b.exact {
                out.push_str(&format!("{} {}\n", b.key, b.value));
            } else {
                out.push_str(&format!("# {} {} (censored)\n", b.key, b.value));
            }
        }
        out
    }

    /// Writes report.json, table.csv, and plot.dat under `dir`.
    pub fn write_files(&self, dir: &std::path::Path) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        std::fs::write(dir.join("table.csv"), self.to_csv())?;
        std::fs::write(dir.join("plot.dat"), self.to_plot_data())?;
        Ok(())
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
