//! Data ingestion: a numeric CSV column, optionally converted from prices
//! to centered log returns.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;

use crate::fail::Failure;

/// Shared input flags for commands that read a data column.
#[derive(Args, Debug)]
pub struct DataOpts {
    /// CSV input with one observation per row (header optional)
    #[arg(long, value_name = "FILE")]
    pub data: PathBuf,
    /// Zero-based column to read
    #[arg(long, default_value_t = 0, value_name = "INDEX")]
    pub column: usize,
    /// Interpret the column as prices and model centered log returns
    #[arg(long)]
    pub returns_from_prices: bool,
}

impl DataOpts {
    pub fn load(&self) -> Result<Dataset, Failure> {
        ingest(&self.data, self.column, self.returns_from_prices)
    }
}

/// How the values in a [`Dataset`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Values taken from the file as-is.
    Raw,
    /// Values are log price ratios with their mean removed.
    ReturnsFromPrices,
}

/// A single ingested series.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub values: Vec<f64>,
    pub provenance: Provenance,
    /// Mean log return subtracted during centering (zero for raw input).
    pub mu: f64,
}

impl Dataset {
    /// Sample standard deviation (n - 1 denominator).
    pub fn sd(&self) -> f64 {
        let n = self.values.len() as f64;
        let mean = self.values.iter().sum::<f64>() / n;
        let ss = self.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
        (ss / (n - 1.0)).sqrt()
    }
}

/// Read one column of `path` (optional header row) and, with
/// `returns_from_prices`, convert the prices x_t to returns
/// r_t = log(x_{t+1} / x_t) - mu with mu chosen so the returns sum to zero.
pub fn ingest(path: &Path, column: usize, returns_from_prices: bool) -> Result<Dataset, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    let raw = parse_column(&text, column)?;
    if returns_from_prices {
        let (values, mu) = center_log_returns(&raw)?;
        Ok(Dataset { values, provenance: Provenance::ReturnsFromPrices, mu })
    } else {
        Ok(Dataset { values: raw, provenance: Provenance::Raw, mu: 0.0 })
    }
}

fn parse_column(text: &str, column: usize) -> Result<Vec<f64>, Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Failure::Data(format!("row {}: {e}", row + 1)))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let field = record
            .get(column)
            .ok_or_else(|| Failure::Data(format!("row {}: no column {column}", row + 1)))?;
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => {
                return Err(Failure::Data(format!("row {}: non-finite value", row + 1)));
            }
            // A single leading non-numeric row is a header.
            Err(_) if row == 0 => {}
            Err(_) => {
                return Err(Failure::Data(format!("row {}: not a number: {field:?}", row + 1)));
            }
        }
    }
    if values.is_empty() {
        return Err(Failure::Data(format!("no numeric rows in column {column}")));
    }
    Ok(values)
}

fn center_log_returns(prices: &[f64]) -> Result<(Vec<f64>, f64), Failure> {
    if prices.len() < 2 {
        return Err(Failure::Data("need at least two prices to form a return".into()));
    }
    if let Some(i) = prices.iter().position(|&p| p <= 0.0) {
        return Err(Failure::Data(format!("price {} at row {} is not positive", prices[i], i + 1)));
    }
    let mut returns: Vec<f64> = prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    let mu = returns.iter().sum::<f64>() / returns.len() as f64;
    for r in &mut returns {
        *r -= mu;
    }
    Ok((returns, mu))
}
