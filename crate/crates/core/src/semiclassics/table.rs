use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values below this are treated as exact zeros and excluded from slope fits.
pub const EXACT_IDENTITY_THRESHOLD: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub m: u32,
    pub value: f64,
}

/// Least-squares line through `(log m, log value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SlopeFit {
    Line {
        slope: f64,
        intercept: f64,
        /// Root-mean-square deviation in log space.
        residual: f64,
        points: usize,
    },
    /// Every value is below [`EXACT_IDENTITY_THRESHOLD`].
    ExactIdentity,
}

impl SlopeFit {
    pub fn slope(&self) -> Option<f64> {
        match self {
            SlopeFit::Line { slope, .. } => Some(*slope),
            SlopeFit::ExactIdentity => None,
        }
    }

    /// Passes if the fitted slope is at most `threshold`, or the data vanish identically.
    pub fn decays_at_least(&self, threshold: f64) -> bool {
        self.slope().is_none_or(|s| s <= threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub quantity: String,
    pub records: Vec<Record>,
    #[serde(default)]
    pub fit: Option<SlopeFit>,
}

impl ConvergenceTable {
    pub fn new(quantity: impl Into<String>) -> Self {
        Self {
            quantity: quantity.into(),
            records: Vec::new(),
            fit: None,
        }
    }

    /// Builds a table from unordered records; rejects repeated levels and non-finite values.
    pub fn from_records(quantity: impl Into<String>, mut records: Vec<Record>) -> Result<Self> {
        records.sort_by_key(|r| r.m);
        if records.windows(2).any(|w| w[0].m == w[1].m) {
            return Err(Error::DegenerateTable("repeated level".into()));
        }
        if let Some(r) = records.iter().find(|r| !r.value.is_finite()) {
            return Err(Error::DegenerateTable(format!("non-finite value at m = {}", r.m)));
        }
        Ok(Self {
            quantity: quantity.into(),
            records,
            fit: None,
        })
    }

    pub fn push(&mut self, m: u32, value: f64) -> Result<()> {
        if self.records.last().is_some_and(|r| r.m >= m) {
            return Err(Error::DegenerateTable(format!("level {m} is not increasing")));
        }
        if !value.is_finite() {
            return Err(Error::DegenerateTable(format!("non-finite value at m = {m}")));
        }
        self.records.push(Record { m, value });
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.value).collect()
    }

    pub fn max_value(&self) -> f64 {
        self.records.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Fits and stores the slope.
    pub fn fit(&mut self) -> Result<SlopeFit> {
        let fit = loglog_slope(self)?;
        self.fit = Some(fit);
        Ok(fit)
    }

    /// `max_m m^power · value`.
    pub fn scaled_max(&self, power: i32) -> f64 {
        self.records
            .iter()
            .map(|r| (r.m as f64).powi(power) * r.value)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Log-log slope over the upper half of the nonzero records.
pub fn loglog_slope(table: &ConvergenceTable) -> Result<SlopeFit> {
    if table.records.len() < 4 {
        return Err(Error::DegenerateTable(format!(
            "{} needs at least 4 records, has {}",
            table.quantity,
            table.records.len()
        )));
    }
    if let Some(r) = table.records.iter().find(|r| r.value < 0.0 || !r.value.is_finite()) {
        return Err(Error::DegenerateTable(format!(
            "{} has a negative or non-finite value at m = {}",
            table.quantity, r.m
        )));
    }
    let nonzero: Vec<&Record> = table
        .records
        .iter()
        .filter(|r| r.value >= EXACT_IDENTITY_THRESHOLD && r.m > 0)
        .collect();
    if nonzero.is_empty() {
        return Ok(SlopeFit::ExactIdentity);
    }
    if nonzero.len() < 2 {
        return Err(Error::DegenerateTable(format!(
            "{} has a single nonzero record",
            table.quantity
        )));
    }
    let take = nonzero.len().div_ceil(2).max(2);
    let pts: Vec<(f64, f64)> = nonzero[nonzero.len() - take..]
        .iter()
        .map(|r| ((r.m as f64).ln(), r.value.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(SlopeFit::Line {
        slope,
        intercept,
        residual,
        points: pts.len(),
    })
}
