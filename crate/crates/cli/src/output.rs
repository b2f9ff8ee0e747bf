//! CSV rows and the JSON summary. Everything written to disk passes through
//! [`Writer`], which owns both files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use griffiths_core::verify::VerificationReport;
use serde::Serialize;

use crate::CliError;

pub const CSV_HEADER: [&str; 7] = [
    "check_id",
    "instance",
    "parameter",
    "value",
    "margin",
    "tolerance",
    "passed",
];

/// Reports from one check at one sweep point.
#[derive(Debug, Clone)]
pub struct Batch {
    /// `(sweep point, check)`; rows are written in key order.
    pub key: (usize, usize),
    pub parameter: Option<(String, f64)>,
    pub reports: Vec<VerificationReport>,
}

#[derive(Debug, Serialize)]
struct ReportSummary {
    check_id: String,
    parameter: Option<String>,
    value: Option<f64>,
    passed: bool,
    worst_margin: Option<f64>,
    tolerance: f64,
    instances: usize,
    config_digest: String,
    notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub command: String,
    pub config_digest: String,
    pub timestamp_unix: u64,
    pub passed: bool,
    pub exit_code: u8,
    reports: Vec<ReportSummary>,
}

pub struct Writer {
    csv: Option<csv::Writer<File>>,
    json_path: Option<PathBuf>,
    pending: BTreeMap<(usize, usize), Batch>,
    expected: Vec<(usize, usize)>,
    next: usize,
    summaries: Vec<ReportSummary>,
    echo: bool,
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Shortest representation that parses back to the same bits.
fn fmt_exact(x: f64) -> String {
    format!("{x:e}")
}

impl Writer {
    /// `expected` lists every batch key in output order.
    pub fn new(
        csv_path: Option<PathBuf>,
        json_path: Option<PathBuf>,
        expected: Vec<(usize, usize)>,
        echo: bool,
    ) -> Result<Self, CliError> {
        let csv = match csv_path {
            Some(p) => {
                let mut w = csv::Writer::from_path(&p)?;
                w.write_record(CSV_HEADER)?;
                Some(w)
            }
            None => None,
        };
        Ok(Self {
            csv,
            json_path,
            pending: BTreeMap::new(),
            expected,
            next: 0,
            summaries: Vec::new(),
            echo,
        })
    }

    /// Accept a batch; emits every batch that is now next in order.
    pub fn accept(&mut self, batch: Batch) -> Result<(), CliError> {
        self.pending.insert(batch.key, batch);
        while let Some(key) = self.expected.get(self.next) {
            let Some(b) = self.pending.remove(key) else { break };
            self.emit(b)?;
            self.next += 1;
        }
        Ok(())
    }

    fn emit(&mut self, b: Batch) -> Result<(), CliError> {
        let (pname, pvalue) = match &b.parameter {
            Some((n, v)) => (n.clone(), fmt_f64(*v)),
            None => (String::new(), String::new()),
        };
        for r in &b.reports {
            if let Some(w) = self.csv.as_mut() {
                for i in &r.instances {
                    let passed = !i.margin.is_nan() && i.margin >= -r.tolerance;
                    w.write_record([
                        r.check_id.as_str(),
                        i.label.as_str(),
                        pname.as_str(),
                        pvalue.as_str(),
                        fmt_exact(i.margin).as_str(),
                        fmt_exact(r.tolerance).as_str(),
                        if passed { "true" } else { "false" },
                    ])?;
                }
            }
            if self.echo {
                let at = b
                    .parameter
                    .as_ref()
                    .map(|(n, v)| format!(" {n}={v}"))
                    .unwrap_or_default();
                println!(
                    "{:<44}{at} {:>6}  worst {:>11.3e}  tol {:.0e}  ({} instances)",
                    r.check_id,
                    if r.passed { "ok" } else { "FAILED" },
                    r.worst_margin,
                    r.tolerance,
                    r.instance_count()
                );
            }
            self.summaries.push(ReportSummary {
                check_id: r.check_id.clone(),
                parameter: b.parameter.as_ref().map(|p| p.0.clone()),
                value: b.parameter.as_ref().map(|p| p.1),
                passed: r.passed,
                worst_margin: r.worst_margin.is_finite().then_some(r.worst_margin),
                tolerance: r.tolerance,
                instances: r.instance_count(),
                config_digest: r.config_digest.clone(),
                notes: r.notes.clone(),
            });
        }
        Ok(())
    }

    /// Flush the CSV and write the JSON summary. Returns whether every
    /// report passed.
    pub fn finish(mut self, command: &str, digest: &str) -> Result<bool, CliError> {
        if self.next != self.expected.len() {
            return Err(CliError::Config(format!(
                "internal: {} of {} batches written",
                self.next,
                self.expected.len()
            )));
        }
        if let Some(w) = self.csv.as_mut() {
            w.flush()?;
        }
        let passed = self.summaries.iter().all(|s| s.passed);
        if let Some(path) = &self.json_path {
            let summary = Summary {
                schema_version: crate::config::SCHEMA_VERSION,
                command: command.into(),
                config_digest: digest.into(),
                timestamp_unix: SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
                passed,
                exit_code: if passed { 0 } else { 1 },
                reports: std::mem::take(&mut self.summaries),
            };
            let mut f = File::create(path)?;
            serde_json::to_writer_pretty(&mut f, &summary).map_err(|e| CliError::Config(e.to_string()))?;
            writeln!(f)?;
        }
        Ok(passed)
    }
}
