//! The report envelope and CSV emission.

use serde::Serialize;

use crate::config::RunConfig;

pub const TOOL: &str = "askey-hankel";

/// Everything a command writes in JSON mode. `--timings` appends a `timings`
/// object afterwards; without it reports are byte-identical across runs.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub results: serde_json::Value,
}

impl ReportDocument {
    pub fn new(command: &str, config: &RunConfig, results: impl Serialize) -> Self {
        ReportDocument {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            config: config.clone(),
            results: serde_json::to_value(results).expect("results serialize"),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Formats a float for CSV; non-finite values become empty cells.
pub fn cell(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        String::new()
    }
}

pub fn opt_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}
