//! Command line for fitting, querying and simulating blended-tail return
//! models. Diagnostics and logs go to standard error; data and documents go
//! to standard output or `--out`.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use tailmix_core::diagnostics::{qq_normal_data, quantile_table, tail_plot_series, DEFAULT_PROBS};
use tailmix_core::estimate::{fit, FitOptions, FittedModel, ModelKind, TransformSettings};
use tailmix_core::study::{aggregate, run_replication, StudyConfig};
use tailmix_core::transform::WarpMode;
use tailmix_core::Model;

mod data;
mod fail;
mod model_file;
mod report;

use data::DataOpts;
use fail::{stage, Failure};
use model_file::{parse_mode, ModelFile};
use report::ReportFile;

#[derive(Parser)]
#[command(name = "tailmix", version, about = "Heavy-tailed return models: fit, query, simulate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model to a data column and write it as JSON
    Fit(FitArgs),
    /// Draw samples from a model as a one-column CSV
    Simulate(SimulateArgs),
    /// Print (p, x) quantile pairs of a model
    Quantile(QuantileArgs),
    /// Tabulate (x, pdf, cdf) of a model over a grid
    Density(DensityArgs),
    /// Simulate-and-refit study across replications and sample sizes
    Study(StudyArgs),
    /// Log-log tail comparison of a model against a data column
    Tailplot(TailplotArgs),
    /// Normal probability plot data for a data column
    Qq(QqArgs),
}

fn kind_parser(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|_| {
        format!("unknown model kind {s:?} (expected gpd-n-gpd, weibull-n-weibull or transform-normal)")
    })
}

/// Where a model comes from: a saved JSON document, or a kind with explicit
/// parameters.
#[derive(Args)]
struct ModelSpec {
    /// Saved model JSON produced by `fit`
    #[arg(long, value_name = "FILE", conflicts_with_all = ["kind", "params", "warp_eps", "warp_mode"])]
    model_file: Option<PathBuf>,
    /// Model kind: gpd-n-gpd, weibull-n-weibull or transform-normal
    #[arg(long, value_parser = kind_parser, requires = "params")]
    kind: Option<ModelKind>,
    /// Five model parameters, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "kind")]
    params: Option<Vec<f64>>,
    /// Warp zone half-width for transform-normal models
    #[arg(long, value_name = "EPS", default_value_t = 1.0)]
    warp_eps: f64,
    /// Warp blend: quartic or quintic
    #[arg(long, value_parser = parse_mode, default_value = "quintic")]
    warp_mode: WarpMode,
}

impl ModelSpec {
    fn resolve(&self) -> Result<(ModelKind, FittedModel, TransformSettings), Failure> {
        if let Some(path) = &self.model_file {
            return ModelFile::load(path)?.build();
        }
        let (Some(kind), Some(params)) = (self.kind, &self.params) else {
            return Err(Failure::Usage(
                "give either --model-file or --kind with --params".into(),
            ));
        };
        if params.len() != 5 {
            return Err(Failure::Usage(format!(
                "--params needs exactly 5 values, got {}",
                params.len()
            )));
        }
        let transform = TransformSettings { eps: self.warp_eps, mode: self.warp_mode };
        ModelFile::from_params(kind, params, &transform)?.build()
    }
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    data: DataOpts,
    /// Model kind to fit
    #[arg(long, short = 'm', value_parser = kind_parser)]
    model: ModelKind,
    /// Seed for the optimizer's extra starts (default: TAILMIX_SEED or 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Extra optimizer starts from jittered initial points
    #[arg(long, default_value_t = 4)]
    multistart: usize,
    /// Simplex rebuilds around the incumbent after convergence
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Simplex iteration budget per start
    #[arg(long, default_value_t = 2000)]
    max_iterations: usize,
    /// Simplex convergence tolerance
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Warp zone half-width for transform-normal (default: sample st.dev.)
    #[arg(long, value_name = "EPS")]
    warp_eps: Option<f64>,
    /// Warp blend: quartic or quintic
    #[arg(long, value_parser = parse_mode, default_value = "quintic")]
    warp_mode: WarpMode,
    /// Write the model JSON here instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelSpec,
    /// Number of draws
    #[arg(long, short = 'n')]
    n: usize,
    /// RNG seed (default: TAILMIX_SEED or 0)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QuantileArgs {
    #[command(flatten)]
    model: ModelSpec,
    /// Probabilities to evaluate, comma separated
    #[arg(long = "p", value_name = "PROBS", value_delimiter = ',')]
    probs: Option<Vec<f64>>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    model: ModelSpec,
    /// Grid start (default: the 1e-9 quantile)
    #[arg(long, allow_negative_numbers = true)]
    min: Option<f64>,
    /// Grid end (default: the 1 - 1e-9 quantile)
    #[arg(long, allow_negative_numbers = true)]
    max: Option<f64>,
    /// Number of grid points
    #[arg(long, default_value_t = 2001)]
    points: usize,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    /// Generating model kind
    #[arg(long, value_parser = kind_parser)]
    generator: ModelKind,
    /// Generating model parameters, comma separated
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    params: Vec<f64>,
    /// Sample sizes to simulate at
    #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 10000])]
    sizes: Vec<usize>,
    /// Number of replications
    #[arg(long, default_value_t = 50)]
    replications: usize,
    /// Kinds to fit to every sample (default: all three)
    #[arg(long = "fit", value_delimiter = ',', value_parser = kind_parser)]
    fit: Option<Vec<ModelKind>>,
    /// Quantile probabilities to track
    #[arg(long, value_delimiter = ',')]
    probs: Option<Vec<f64>>,
    /// Master seed (default: TAILMIX_SEED or 0)
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 4)]
    multistart: usize,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Warp zone half-width used for transform-normal generation and fits
    #[arg(long, default_value_t = 1.0)]
    warp_eps: f64,
    #[arg(long, value_parser = parse_mode, default_value = "quintic")]
    warp_mode: WarpMode,
    /// Run replications sequentially instead of in parallel
    #[arg(long)]
    serial: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TailplotArgs {
    #[command(flatten)]
    model: ModelSpec,
    #[command(flatten)]
    data: DataOpts,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QqArgs {
    #[command(flatten)]
    data: DataOpts,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("TAILMIX_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("TAILMIX_SEED is not an unsigned integer: {v:?}"))),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(Failure::Usage(format!("TAILMIX_SEED: {e}"))),
    }
}

fn out_writer(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(io::BufWriter::new(
            File::create(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut w = out_writer(out)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| Failure::Data(format!("write: {e}")))?;
    w.write_all(b"\n").and_then(|()| w.flush()).map_err(|e| Failure::Data(format!("write: {e}")))
}

/// CSV emitter with a fixed header; values serialize at full round-trip
/// precision.
fn write_csv<R, I>(out: Option<&Path>, header: &[&str], rows: I) -> Result<(), Failure>
where
    R: Serialize,
    I: IntoIterator<Item = R>,
{
    let mut w = csv::Writer::from_writer(out_writer(out)?);
    let werr = |e: csv::Error| Failure::Data(format!("write: {e}"));
    w.write_record(header).map_err(werr)?;
    for row in rows {
        w.serialize(row).map_err(werr)?;
    }
    w.flush().map_err(|e| Failure::Data(format!("write: {e}")))
}

fn cmd_fit(args: &FitArgs) -> Result<(), Failure> {
    let ds = args.data.load()?;
    if ds.provenance == data::Provenance::ReturnsFromPrices {
        eprintln!("ingest: {} centered log returns (mean log return {:e})", ds.values.len(), ds.mu);
    }
    let seed = resolve_seed(args.seed)?;
    let transform =
        TransformSettings { eps: args.warp_eps.unwrap_or_else(|| ds.sd()), mode: args.warp_mode };
    let options = FitOptions {
        max_iterations: args.max_iterations,
        tolerance: args.tolerance,
        multistart: args.multistart,
        restarts: args.restarts,
        seed,
        transform,
        ..FitOptions::default()
    };
    let result = stage("fit", fit(args.model, &ds.values, &options))?;
    eprintln!(
        "fit: {} on {} observations: loglik {:.6}, converged {}, {} iterations",
        result.kind,
        ds.values.len(),
        result.loglik,
        result.converged,
        result.iterations
    );
    let file = ModelFile::from_fit(&result, &options.transform, seed, &ds.values);
    write_json(args.out.as_deref(), &file)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let (_, model, _) = args.model.resolve()?;
    let seed = resolve_seed(args.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = model.sample(&mut rng, args.n);
    write_csv(args.out.as_deref(), &["value"], draws)
}

fn cmd_quantile(args: &QuantileArgs) -> Result<(), Failure> {
    let (_, model, _) = args.model.resolve()?;
    let probs = args.probs.clone().unwrap_or_else(|| DEFAULT_PROBS.to_vec());
    if probs.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
        return Err(Failure::Usage("--p values must lie strictly inside (0, 1)".into()));
    }
    let rows = stage("quantile", quantile_table(&model, &probs))?;
    write_csv(args.out.as_deref(), &["p", "x"], rows)
}

fn cmd_density(args: &DensityArgs) -> Result<(), Failure> {
    let (_, model, _) = args.model.resolve()?;
    if args.points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    let lo = match args.min {
        Some(v) => v,
        None => stage("quantile", model.quantile(1e-9))?,
    };
    let hi = match args.max {
        Some(v) => v,
        None => stage("quantile", model.quantile(1.0 - 1e-9))?,
    };
    if !(hi > lo) {
        return Err(Failure::Usage(format!("empty grid: min {lo} is not below max {hi}")));
    }
    let step = (hi - lo) / (args.points - 1) as f64;
    let rows = (0..args.points).map(|i| {
        let x = if i + 1 == args.points { hi } else { lo + step * i as f64 };
        (x, model.pdf(x), model.cdf(x))
    });
    write_csv(args.out.as_deref(), &["x", "pdf", "cdf"], rows)
}

fn cmd_study(args: &StudyArgs) -> Result<(), Failure> {
    let seed = resolve_seed(args.seed)?;
    let config = StudyConfig {
        generator: args.generator,
        generator_params: args.params.clone(),
        sample_sizes: args.sizes.clone(),
        replications: args.replications,
        fit_kinds: args.fit.clone().unwrap_or_else(|| ModelKind::all().to_vec()),
        probs: args.probs.clone().unwrap_or_else(|| DEFAULT_PROBS.to_vec()),
        seed,
        fit_options: FitOptions {
            max_iterations: args.max_iterations,
            tolerance: args.tolerance,
            multistart: args.multistart,
            restarts: args.restarts,
            seed,
            transform: TransformSettings { eps: args.warp_eps, mode: args.warp_mode },
            ..FitOptions::default()
        },
    };
    config.validate().map_err(|e| Failure::Usage(format!("study: {e}")))?;
    eprintln!(
        "study: {} replications x {} sizes x {} kinds from {}",
        config.replications,
        config.sample_sizes.len(),
        config.fit_kinds.len(),
        config.generator
    );
    // Replications use counter-derived RNG substreams, so the parallel
    // map yields exactly the records of the serial loop.
    let records = if args.serial {
        (0..config.replications).map(|r| run_replication(&config, r)).collect()
    } else {
        (0..config.replications)
            .into_par_iter()
            .map(|r| run_replication(&config, r))
            .collect::<tailmix_core::Result<Vec<_>>>()
    };
    let records = stage("study", records)?;
    let report = aggregate(&config, &records);
    write_json(args.out.as_deref(), &ReportFile::from(&report))?;
    eprintln!("study: done");
    Ok(())
}

fn cmd_tailplot(args: &TailplotArgs) -> Result<(), Failure> {
    let (_, model, _) = args.model.resolve()?;
    let ds = args.data.load()?;
    let series = stage("tailplot", tail_plot_series(&model, &ds.values))?;
    if series.clamped > 0 {
        eprintln!("tailplot: {} model probabilities hit the underflow floor", series.clamped);
    }
    let rows = series
        .left
        .iter()
        .map(|&(a, b)| ("left", a, b))
        .chain(series.right.iter().map(|&(a, b)| ("right", a, b)))
        .collect::<Vec<_>>();
    write_csv(args.out.as_deref(), &["side", "log_rank", "log_prob"], rows)
}

fn cmd_qq(args: &QqArgs) -> Result<(), Failure> {
    let ds = args.data.load()?;
    let rows = stage("qq", qq_normal_data(&ds.values))?;
    write_csv(args.out.as_deref(), &["theoretical", "empirical"], rows)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Fit(args) => cmd_fit(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Quantile(args) => cmd_quantile(args),
        Command::Density(args) => cmd_density(args),
        Command::Study(args) => cmd_study(args),
        Command::Tailplot(args) => cmd_tailplot(args),
        Command::Qq(args) => cmd_qq(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("tailmix: {failure}");
            ExitCode::from(failure.code() as u8)
        }
    }
}
