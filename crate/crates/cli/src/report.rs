//! JSON form of a study report. Cells whose every replication failed
//! serialize as nulls, mirroring the in-memory `Option`s.

use serde::{Deserialize, Serialize};
use tailmix_core::study::{Aggregate, StudyReport, Summary};

use crate::model_file::{mode_name, WarpSpec, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SummaryFile {
    pub mean: f64,
    pub sd: f64,
}

impl From<Summary> for SummaryFile {
    fn from(s: Summary) -> Self {
        SummaryFile { mean: s.mean, sd: s.sd }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellFile {
    pub size: usize,
    pub kind: String,
    pub attempted: usize,
    pub used: usize,
    pub params: Option<Vec<SummaryFile>>,
    pub thresholds: Option<[SummaryFile; 2]>,
    pub quantiles: Option<Vec<SummaryFile>>,
    pub l1: Option<SummaryFile>,
    pub loglik: Option<SummaryFile>,
}

impl From<&Aggregate> for CellFile {
    fn from(a: &Aggregate) -> Self {
        CellFile {
            size: a.size,
            kind: a.kind.as_str().to_string(),
            attempted: a.attempted,
            used: a.used,
            params: a.params.as_ref().map(|v| v.iter().map(|&s| s.into()).collect()),
            thresholds: a.thresholds.map(|(u1, u2)| [u1.into(), u2.into()]),
            quantiles: a.quantiles.as_ref().map(|v| v.iter().map(|&s| s.into()).collect()),
            l1: a.l1.map(Into::into),
            loglik: a.loglik.map(Into::into),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub generator: String,
    pub generator_params: Vec<f64>,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub fit_kinds: Vec<String>,
    pub probs: Vec<f64>,
    pub seed: u64,
    pub warp: WarpSpec,
    pub multistart: usize,
    pub cells: Vec<CellFile>,
}

impl From<&StudyReport> for ReportFile {
    fn from(report: &StudyReport) -> Self {
        let c = &report.config;
        ReportFile {
            schema_version: SCHEMA_VERSION,
            generator: c.generator.as_str().to_string(),
            generator_params: c.generator_params.clone(),
            sample_sizes: c.sample_sizes.clone(),
            replications: c.replications,
            fit_kinds: c.fit_kinds.iter().map(|k| k.as_str().to_string()).collect(),
            probs: c.probs.clone(),
            seed: c.seed,
            warp: WarpSpec {
                eps: c.fit_options.transform.eps,
                mode: mode_name(c.fit_options.transform.mode).to_string(),
            },
            multistart: c.fit_options.multistart,
            cells: report.aggregates.iter().map(Into::into).collect(),
        }
    }
}
