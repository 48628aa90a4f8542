//! Seeded cross-fitting Monte Carlo studies.
//!
//! A study simulates from one generator model, fits a list of model kinds
//! to every sample, and aggregates parameters, thresholds, quantiles,
//! likelihoods and L1 distances across replications. Every replication
//! draws from its own counter-derived RNG substream, so results do not
//! depend on execution order and parallel drivers reproduce the serial
//! fold bit for bit.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagnostics::{l1_distance, DEFAULT_PROBS};
use crate::error::{Error, Result};
use crate::estimate::{build_model, fit, FitOptions, ModelKind};
use crate::model::Model;

/// Full description of a study; same config and seed means same report.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    /// Kind of the generating model.
    pub generator: ModelKind,
    /// Parameters of the generating model.
    pub generator_params: Vec<f64>,
    /// Sample sizes to simulate at (each at least 100).
    pub sample_sizes: Vec<usize>,
    /// Number of replications (at least 2).
    pub replications: usize,
    /// Model kinds fitted to every sample.
    pub fit_kinds: Vec<ModelKind>,
    /// Probabilities at which fitted-model quantiles are recorded.
    pub probs: Vec<f64>,
    /// Master seed; replication substreams derive from it by counter.
    pub seed: u64,
    /// Template fitting options; the warp geometry in here also applies to
    /// the generator when it is a warped-normal model. The `seed` field is
    /// overridden per fit.
    pub fit_options: FitOptions,
}

impl StudyConfig {
    /// A study with the default sizes (1000 and 10000), 50 replications,
    /// all fitted kinds, and the default quantile probabilities.
    pub fn new(generator: ModelKind, generator_params: Vec<f64>) -> Self {
        Self {
            generator,
            generator_params,
            sample_sizes: vec![1000, 10000],
            replications: 50,
            fit_kinds: ModelKind::all().to_vec(),
            probs: DEFAULT_PROBS.to_vec(),
            seed: 0,
            fit_options: FitOptions::default(),
        }
    }

    /// Check counts, sizes and that the generator parameters build.
    pub fn validate(&self) -> Result<()> {
        if self.replications < 2 {
            return Err(Error::InvalidConfig("need at least 2 replications"));
        }
        if self.sample_sizes.is_empty() || self.sample_sizes.iter().any(|&m| m < 100) {
            return Err(Error::InvalidConfig("sample sizes must be at least 100"));
        }
        if self.fit_kinds.is_empty() {
            return Err(Error::InvalidConfig("need at least one kind to fit"));
        }
        if self.probs.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::InvalidConfig("probabilities must lie inside (0, 1)"));
        }
        build_model(self.generator, &self.generator_params, &self.fit_options.transform)?;
        Ok(())
    }
}

/// One fit inside one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    /// Sample size the fit saw.
    pub size: usize,
    /// Fitted kind.
    pub kind: ModelKind,
    /// Whether the fit completed and converged; only such outcomes enter
    /// the aggregated means.
    pub ok: bool,
    /// Fitted parameters (NaN when the fit failed outright).
    pub params: Vec<f64>,
    /// Fitted lower threshold.
    pub u1: f64,
    /// Fitted upper threshold.
    pub u2: f64,
    /// Fitted-model quantiles at the configured probabilities.
    pub quantiles: Vec<f64>,
    /// Binned L1 distance between the fitted and generating models.
    pub l1: f64,
    /// Log likelihood of the sample under the fitted model.
    pub loglik: f64,
}

/// All fits of one replication, across sizes and kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRecord {
    /// Replication index, starting at zero.
    pub replication: usize,
    /// Outcomes ordered by sample size, then fitted kind.
    pub outcomes: Vec<FitOutcome>,
}

/// Mean and standard deviation over the used replications. With a single
/// usable replication the standard deviation is zero by convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    /// Sample mean.
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub sd: f64,
}

fn summarize(values: &[f64]) -> Option<Summary> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() < 2 {
        0.0
    } else {
        libm::sqrt(values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0))
    };
    Some(Summary { mean, sd })
}

/// Aggregated statistics for one (fitted kind, sample size) cell. Cells are
/// `None` when no replication produced a usable fit.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    /// Sample size of this cell.
    pub size: usize,
    /// Fitted kind of this cell.
    pub kind: ModelKind,
    /// Replications attempted.
    pub attempted: usize,
    /// Replications whose fit completed and converged.
    pub used: usize,
    /// Per-parameter summaries, in [`ModelKind::param_names`] order.
    pub params: Option<Vec<Summary>>,
    /// Threshold summaries `(u1, u2)`.
    pub thresholds: Option<(Summary, Summary)>,
    /// Per-probability quantile summaries.
    pub quantiles: Option<Vec<Summary>>,
    /// L1 distance to the generator.
    pub l1: Option<Summary>,
    /// Log likelihood.
    pub loglik: Option<Summary>,
}

/// Aggregated study results.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    /// The configuration that produced this report.
    pub config: StudyConfig,
    /// One cell per (sample size, fitted kind), in configuration order.
    pub aggregates: Vec<Aggregate>,
}

fn fit_seed(master: u64, size_index: usize, replication: usize, kind_index: usize) -> u64 {
    let counter = ((size_index as u64) << 40) | ((kind_index as u64) << 32) | replication as u64;
    master ^ counter.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Simulate and fit one replication; deterministic in `(config, index)`.
///
/// Individual fit failures are recorded in the outcome (`ok = false`, NaN
/// statistics) rather than failing the replication.
pub fn run_replication(config: &StudyConfig, replication: usize) -> Result<ReplicationRecord> {
    config.validate()?;
    let generator =
        build_model(config.generator, &config.generator_params, &config.fit_options.transform)?;
    let mut outcomes = Vec::with_capacity(config.sample_sizes.len() * config.fit_kinds.len());
    for (si, &m) in config.sample_sizes.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(((si as u64) << 32) | replication as u64);
        let data = generator.sample(&mut rng, m);
        for (ki, &kind) in config.fit_kinds.iter().enumerate() {
            let mut options = config.fit_options.clone();
            options.seed = fit_seed(config.seed, si, replication, ki);
            let outcome = match fit(kind, &data, &options) {
                Ok(result) => {
                    let model = result.model(&options.transform)?;
                    let quantiles = config
                        .probs
                        .iter()
                        .map(|&p| model.quantile(p))
                        .collect::<Result<Vec<f64>>>()?;
                    FitOutcome {
                        size: m,
                        kind,
                        ok: result.converged,
                        params: result.params,
                        u1: result.u1,
                        u2: result.u2,
                        quantiles,
                        l1: l1_distance(&model, &generator, &generator),
                        loglik: result.loglik,
                    }
                }
                Err(_) => FitOutcome {
                    size: m,
                    kind,
                    ok: false,
                    params: vec![f64::NAN; 5],
                    u1: f64::NAN,
                    u2: f64::NAN,
                    quantiles: vec![f64::NAN; config.probs.len()],
                    l1: f64::NAN,
                    loglik: f64::NAN,
                },
            };
            outcomes.push(outcome);
        }
    }
    Ok(ReplicationRecord { replication, outcomes })
}

/// Fold replication records into a report. Drivers that parallelize over
/// replications feed the records here in index order and obtain the same
/// report as the serial fold.
pub fn aggregate(config: &StudyConfig, records: &[ReplicationRecord]) -> StudyReport {
    let mut aggregates = Vec::new();
    for &m in &config.sample_sizes {
        for &kind in &config.fit_kinds {
            let cell: Vec<&FitOutcome> = records
                .iter()
                .flat_map(|r| r.outcomes.iter())
                .filter(|o| o.size == m && o.kind == kind)
                .collect();
            let usable: Vec<&FitOutcome> = cell.iter().copied().filter(|o| o.ok).collect();

            let column = |f: &dyn Fn(&FitOutcome) -> f64| -> Vec<f64> {
                usable.iter().map(|o| f(o)).collect()
            };
            let params = (0..5)
                .map(|j| summarize(&column(&|o| o.params[j])))
                .collect::<Option<Vec<Summary>>>();
            let quantiles = (0..config.probs.len())
                .map(|j| summarize(&column(&|o| o.quantiles[j])))
                .collect::<Option<Vec<Summary>>>();
            let thresholds = match (summarize(&column(&|o| o.u1)), summarize(&column(&|o| o.u2)))
            {
                (Some(a), Some(b)) => Some((a, b)),
                _ => None,
            };
            aggregates.push(Aggregate {
                size: m,
                kind,
                attempted: cell.len(),
                used: usable.len(),
                params,
                thresholds,
                quantiles,
                l1: summarize(&column(&|o| o.l1)),
                loglik: summarize(&column(&|o| o.loglik)),
            });
        }
    }
    StudyReport { config: config.clone(), aggregates }
}

/// Run every replication serially and aggregate.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.replications);
    for r in 0..config.replications {
        records.push(run_replication(config, r)?);
    }
    Ok(aggregate(config, &records))
}
