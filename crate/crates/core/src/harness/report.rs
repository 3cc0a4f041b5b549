//! Run reports: `report.json`, `results.csv` and gnuplot `.dat` tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::cache::CacheStats;
use super::HarnessError;
use crate::semiclassics::ConvergenceTable;

pub const REPORT_FILE: &str = "report.json";
pub const CSV_FILE: &str = "results.csv";
pub const PLOT_DIR: &str = "plots";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckItem {
    /// E.g. `dirac[f0,g0]`.
    pub label: String,
    pub passed: bool,
    pub detail: String,
    #[serde(default)]
    pub tables: Vec<ConvergenceTable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub passed: bool,
    pub items: Vec<CheckItem>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToleranceRecord {
    pub slope: f64,
    pub slope_second_order: f64,
    pub identity: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub root: String,
    pub hits: u64,
    pub misses: u64,
    pub corrupt: u64,
    pub assemblies: u64,
}

impl CacheRecord {
    pub fn new(root: &Path, stats: CacheStats) -> Self {
        Self {
            root: root.display().to_string(),
            hits: stats.hits,
            misses: stats.misses,
            corrupt: stats.corrupt,
            assemblies: stats.assemblies,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub name: String,
    pub manifold: String,
    pub seed: u64,
    pub m_list: Vec<u32>,
    pub symbols: Vec<String>,
    pub tolerances: ToleranceRecord,
    /// Convention constants and the oracle outcomes behind them.
    pub calibration: serde_json::Value,
    pub checks: Vec<CheckReport>,
    pub cache: CacheRecord,
    pub warnings: Vec<String>,
    pub timings_ms: BTreeMap<String, f64>,
    pub version: String,
    pub all_passed: bool,
}

impl RunReport {
    pub fn tables(&self) -> impl Iterator<Item = &ConvergenceTable> {
        self.checks
            .iter()
            .flat_map(|c| c.items.iter())
            .flat_map(|i| i.tables.iter())
    }

    /// `check,m,value` rows in run order. Contains no timings, so identical inputs give
    /// identical bytes.
    pub fn csv(&self) -> String {
        let mut out = String::from("check,m,value\n");
        for t in self.tables() {
            for r in &t.records {
                let _ = writeln!(out, "{},{},{:.16e}", t.quantity, r.m, r.value);
            }
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "experiment {} on {} (m = {:?})", self.name, self.manifold, self.m_list);
        for c in &self.checks {
            let _ = writeln!(out, "{:<5} {}", if c.passed { "PASS" } else { "FAIL" }, c.check);
            for i in c.items.iter().filter(|i| !i.passed) {
                let _ = writeln!(out, "      {}: {}", i.label, i.detail);
            }
        }
        let _ = writeln!(
            out,
            "cache: {} hits, {} misses, {} corrupt",
            self.cache.hits, self.cache.misses, self.cache.corrupt
        );
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        let _ = writeln!(out, "{}", if self.all_passed { "all checks passed" } else { "some checks failed" });
        out
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// File name for a table label: `dirac[f0,g0]` becomes `dirac_f0_g0.dat`.
pub fn plot_file_name(label: &str) -> String {
    let mut name: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect();
    while name.ends_with('_') {
        name.pop();
    }
    format!("{name}.dat")
}

pub fn write_outputs(report: &RunReport, dir: &Path) -> Result<(), HarnessError> {
    let plots = dir.join(PLOT_DIR);
    std::fs::create_dir_all(&plots).map_err(io_err(&plots))?;

    let json = serde_json::to_string_pretty(report).expect("report serialises");
    let path = dir.join(REPORT_FILE);
    std::fs::write(&path, json + "\n").map_err(io_err(&path))?;

    let path = dir.join(CSV_FILE);
    std::fs::write(&path, report.csv()).map_err(io_err(&path))?;

    for t in report.tables() {
        let mut dat = format!("# {}\n# m value\n", t.quantity);
        for r in &t.records {
            let _ = writeln!(dat, "{} {:.16e}", r.m, r.value);
        }
        let path = plots.join(plot_file_name(&t.quantity));
        std::fs::write(&path, dat).map_err(io_err(&path))?;
    }
    Ok(())
}

pub fn read_report(dir: &Path) -> Result<RunReport, HarnessError> {
    let path: PathBuf = dir.join(REPORT_FILE);
    let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::BadReport {
        path,
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_names_are_sanitised() {
        assert_eq!(plot_file_name("dirac[f0,g0]"), "dirac_f0_g0.dat");
        assert_eq!(plot_file_name("spectrum[f0,k=2]"), "spectrum_f0_k_2.dat");
    }
}
