//! Command-line front end for the chronocast toolkit.
//!
//! Subcommands: `stats`, `prepare`, `train`, `evaluate`, `compare`,
//! `forecast`. No numeric logic lives here; every command is a thin
//! adapter over the library. Exit codes: 0 success, 1 usage error,
//! 2 data error, 3 model/convergence error. Diagnostics go to stderr,
//! results to files plus a human-readable summary on stdout.

use chronocast::checkpoint::{Checkpoint, CheckpointError};
use chronocast::data::{self, DataError, TimeSeries};
use chronocast::harness::{
    forecast_future, run_experiment, DataFormat, DataSourceConfig, ExperimentConfig,
    HarnessError, ModelKind, Profile,
};
use chronocast::metrics::Scale;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_MODEL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "chronocast",
    about = "Daily time-series forecasting benchmark: grey prediction, ARIMA/SARIMAX, \
             dense nets, random forests and LSTMs over one dataset",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// country,date,sector,value with DD/MM/YYYY dates; sectors sum per day
    CarbonMonitor,
    /// date,value with ISO dates
    Tidy,
}

impl From<FormatArg> for DataFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::CarbonMonitor => DataFormat::CarbonMonitor,
            FormatArg::Tidy => DataFormat::Tidy,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    /// Short trainings (300 epochs) for fast verification
    Ci,
    /// Production epoch budgets (3000 epochs)
    Full,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Ci => Profile::Ci,
            ProfileArg::Full => Profile::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Normalized,
    Physical,
    Both,
}

#[derive(Args)]
struct InputArgs {
    /// Input CSV path
    #[arg(long)]
    input: PathBuf,

    /// Input layout
    #[arg(long, value_enum, default_value = "carbon-monitor")]
    format: FormatArg,
}

#[derive(Args)]
struct OptionalInputArgs {
    /// Input CSV path (falls back to the config file's [data] table)
    #[arg(long)]
    input: Option<PathBuf>,

    /// Input layout
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment config file (TOML); flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,

    /// Pin every model to the published benchmark settings
    #[arg(long)]
    paper_config: bool,

    /// Epoch budget preset
    #[arg(long, value_enum)]
    profile: Option<ProfileArg>,

    /// Master seed (wins over CHRONOCAST_SEED and the config file)
    #[arg(long)]
    seed: Option<u64>,

    /// Exhaustive hyperparameter search before the final fit
    #[arg(long)]
    grid_search: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the descriptive statistics of a series
    Stats {
        #[command(flatten)]
        input: InputArgs,

        /// Emit JSON instead of the table
        #[arg(long)]
        json: bool,
    },

    /// Window, normalize and split a series; print the preparation summary
    Prepare {
        #[command(flatten)]
        input: InputArgs,

        /// Lag-window length
        #[arg(long, default_value_t = 3)]
        window: usize,

        /// Write the summary JSON here as well
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Train a single model and write its checkpoint
    Train {
        #[command(flatten)]
        input: OptionalInputArgs,

        /// Model to train
        #[arg(long)]
        model: String,

        #[command(flatten)]
        experiment: ExperimentArgs,

        /// Output directory
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },

    /// Evaluate a checkpoint on the dataset's test split
    Evaluate {
        /// Checkpoint file
        #[arg(long)]
        checkpoint: PathBuf,

        #[command(flatten)]
        input: InputArgs,

        /// Which scale(s) to print
        #[arg(long, value_enum, default_value = "both")]
        scale: ScaleArg,
    },

    /// Run the full model comparison and write tables, traces, checkpoints
    Compare {
        #[command(flatten)]
        input: OptionalInputArgs,

        #[command(flatten)]
        experiment: ExperimentArgs,

        /// Restrict to a comma-separated model list
        #[arg(long)]
        models: Option<String>,

        /// Days of future forecast emitted from the winning model
        #[arg(long, default_value_t = 92)]
        horizon: usize,

        /// Output directory
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },

    /// Multi-day recursive forecast from a checkpoint
    Forecast {
        /// Checkpoint file
        #[arg(long)]
        checkpoint: PathBuf,

        /// Days to forecast
        #[arg(long)]
        horizon: usize,

        /// Output CSV (date,predicted)
        #[arg(long, default_value = "forecast.csv")]
        out: PathBuf,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError { code: EXIT_DATA, message: e.to_string() }
    }
}

impl From<CheckpointError> for CliError {
    fn from(e: CheckpointError) -> Self {
        CliError { code: EXIT_DATA, message: e.to_string() }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        let code = match &e {
            HarnessError::Data(_) | HarnessError::Io(_) | HarnessError::Checkpoint(_) => EXIT_DATA,
            HarnessError::BadConfig { .. } => EXIT_USAGE,
            _ => EXIT_MODEL,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: EXIT_DATA, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Stats { input, json } => cmd_stats(&input, json),
        Command::Prepare { input, window, out } => cmd_prepare(&input, window, out.as_deref()),
        Command::Train { input, model, experiment, out_dir } => {
            cmd_train(&input, &model, &experiment, &out_dir)
        }
        Command::Evaluate { checkpoint, input, scale } => {
            cmd_evaluate(&checkpoint, &input, scale)
        }
        Command::Compare { input, experiment, models, horizon, out_dir } => {
            cmd_compare(&input, &experiment, models.as_deref(), horizon, &out_dir)
        }
        Command::Forecast { checkpoint, horizon, out } => cmd_forecast(&checkpoint, horizon, &out),
    }
}

fn load_series(input: &InputArgs) -> Result<TimeSeries, CliError> {
    let file = std::fs::File::open(&input.input).map_err(|e| CliError {
        code: EXIT_DATA,
        message: format!("{}: {e}", input.input.display()),
    })?;
    let series = match input.format {
        FormatArg::CarbonMonitor => data::ingest_carbon_monitor(file)?,
        FormatArg::Tidy => data::ingest_tidy(file)?,
    };
    Ok(series)
}

/// Seed precedence: explicit flag, then CHRONOCAST_SEED, then config file.
fn resolve_seed(flag: Option<u64>, config_seed: u64) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("CHRONOCAST_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| CliError::usage(format!("CHRONOCAST_SEED is not an integer: {text:?}"))),
        Err(_) => Ok(config_seed),
    }
}

/// Config-file schema: an [experiment] table with `ExperimentConfig`
/// fields plus an optional [data] table (`path`, `format`).
#[derive(serde::Deserialize, Default)]
#[serde(default)]
struct ConfigFile {
    experiment: ExperimentConfig,
    data: Option<DataSourceConfig>,
}

fn build_config(args: &ExperimentArgs) -> Result<(ExperimentConfig, Option<DataSourceConfig>), CliError> {
    let (mut cfg, data) = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError {
                code: EXIT_DATA,
                message: format!("{}: {e}", path.display()),
            })?;
            let file: ConfigFile = toml::from_str(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            (file.experiment, file.data)
        }
        None => (ExperimentConfig::default(), None),
    };
    if args.paper_config {
        cfg.paper_config = true;
    }
    if args.grid_search {
        cfg.grid_search = true;
    }
    if let Some(profile) = args.profile {
        cfg.profile = profile.into();
    }
    cfg.seed = resolve_seed(args.seed, cfg.seed)?;
    Ok((cfg, data))
}

/// Resolves the dataset for train/compare: flags first, then the config
/// file's [data] table.
fn load_series_optional(
    input: &OptionalInputArgs,
    data: Option<&DataSourceConfig>,
) -> Result<TimeSeries, CliError> {
    let (path, format) = match (&input.input, data) {
        (Some(path), _) => {
            let format = input.format.map(DataFormat::from).unwrap_or_default();
            (path.clone(), format)
        }
        (None, Some(source)) => {
            let format = input.format.map(DataFormat::from).unwrap_or(source.format);
            (PathBuf::from(&source.path), format)
        }
        (None, None) => {
            return Err(CliError::usage(
                "no input: pass --input or a config file with a [data] table",
            ));
        }
    };
    let file = std::fs::File::open(&path).map_err(|e| CliError {
        code: EXIT_DATA,
        message: format!("{}: {e}", path.display()),
    })?;
    let series = match format {
        DataFormat::CarbonMonitor => data::ingest_carbon_monitor(file)?,
        DataFormat::Tidy => data::ingest_tidy(file)?,
    };
    Ok(series)
}

fn cmd_stats(input: &InputArgs, json: bool) -> Result<(), CliError> {
    let series = load_series(input)?;
    let stats = data::describe(&series)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&stats).expect("stats serialize"));
    } else {
        println!("count               {}", stats.count);
        println!("maximum             {:.4}", stats.maximum);
        println!("minimum             {:.4}", stats.minimum);
        println!("mean                {:.4}", stats.mean);
        println!("median              {:.4}", stats.median);
        println!("range               {:.4}", stats.range);
        println!("skewness            {:.4}", stats.skewness);
        println!("kurtosis            {:.4}", stats.kurtosis);
        println!("standard_deviation  {:.4}", stats.standard_deviation);
        println!("standard_error      {:.4}", stats.standard_error);
        println!("total               {:.4}", stats.total);
    }
    Ok(())
}

fn cmd_prepare(input: &InputArgs, window: usize, out: Option<&Path>) -> Result<(), CliError> {
    let series = load_series(input)?;
    let prepared = data::window_and_split(&series, window, (0.8, 0.1, 0.1))?;
    let split = prepared.split();
    let summary = serde_json::json!({
        "observations": series.len(),
        "first_date": series.first_date().to_string(),
        "last_date": series.last_date().to_string(),
        "window_length": prepared.window_length(),
        "samples": prepared.num_samples(),
        "train_samples": split.train.len(),
        "validation_samples": split.validation.len(),
        "test_samples": split.test.len(),
        "train_min": prepared.normalizer().train_min,
        "train_max": prepared.normalizer().train_max,
    });
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    if let Some(path) = out {
        std::fs::write(path, &text)?;
    }
    println!("{text}");
    Ok(())
}

fn parse_models(text: &str) -> Result<Vec<ModelKind>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            ModelKind::from_label(t)
                .ok_or_else(|| CliError::usage(format!("unknown model {t:?}")))
        })
        .collect()
}

fn cmd_train(
    input: &OptionalInputArgs,
    model: &str,
    experiment: &ExperimentArgs,
    out_dir: &Path,
) -> Result<(), CliError> {
    let kind = ModelKind::from_label(model)
        .ok_or_else(|| CliError::usage(format!("unknown model {model:?}")))?;
    let (mut cfg, data) = build_config(experiment)?;
    cfg.models = vec![kind];

    let series = load_series_optional(input, data.as_ref())?;
    let outcome = run_experiment(&series, &cfg)?;
    let Some(result) = outcome.models.first() else {
        let (model, message) =
            outcome.failures.first().cloned().unwrap_or_default();
        return Err(CliError { code: EXIT_MODEL, message: format!("{model}: {message}") });
    };

    std::fs::create_dir_all(out_dir)?;
    let ckpt_path = out_dir.join(format!("{}.ckpt", kind.label()));
    result.checkpoint.save(&ckpt_path)?;

    println!("trained {} ({})", kind.label(), result.config_summary);
    if let Some(v) = result.validation_mse {
        println!("validation mse (normalized): {v:.6e}");
    }
    for report in &result.reports {
        let m = &report.metrics;
        println!(
            "test {}: mse {:.6e}  rmse {:.6e}  mae {:.6e}  mape {}  r2 {}",
            report.scale,
            m.mse,
            m.rmse,
            m.mae,
            m.mape_percent.map_or("n/a".into(), |v| format!("{v:.4}%")),
            m.r2.map_or("n/a".into(), |v| format!("{v:.4}")),
        );
    }
    println!("checkpoint: {}", ckpt_path.display());
    Ok(())
}

fn cmd_evaluate(checkpoint: &Path, input: &InputArgs, scale: ScaleArg) -> Result<(), CliError> {
    let ckpt = Checkpoint::load(checkpoint)?;
    let series = load_series(input)?;
    let prepared = data::window_and_split(&series, ckpt.envelope.window_length, (0.8, 0.1, 0.1))?;
    let reports = chronocast::harness::evaluate_checkpoint(&ckpt, &prepared)
        .map_err(CliError::from)?;

    for report in &reports {
        let keep = match scale {
            ScaleArg::Both => true,
            ScaleArg::Normalized => report.scale == Scale::Normalized,
            ScaleArg::Physical => report.scale == Scale::Physical,
        };
        if !keep {
            continue;
        }
        let m = &report.metrics;
        println!(
            "{} test {}: mse {:.6e}  rmse {:.6e}  mae {:.6e}  mape {}  r2 {}  n {}",
            report.model_name,
            report.scale,
            m.mse,
            m.rmse,
            m.mae,
            m.mape_percent.map_or("n/a".into(), |v| format!("{v:.4}%")),
            m.r2.map_or("n/a".into(), |v| format!("{v:.4}")),
            m.n,
        );
    }
    Ok(())
}

fn cmd_compare(
    input: &OptionalInputArgs,
    experiment: &ExperimentArgs,
    models: Option<&str>,
    horizon: usize,
    out_dir: &Path,
) -> Result<(), CliError> {
    let (mut cfg, data) = build_config(experiment)?;
    if let Some(list) = models {
        cfg.models = parse_models(list)?;
    }

    let series = load_series_optional(input, data.as_ref())?;
    let outcome = run_experiment(&series, &cfg)?;

    std::fs::create_dir_all(out_dir)?;
    let mut table = outcome.table.clone();
    table.meta.generated_at_unix = Some(
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    );
    std::fs::write(out_dir.join("comparison.json"), table.to_json_pretty())?;
    std::fs::write(out_dir.join("comparison.csv"), table.to_csv())?;
    for model in &outcome.models {
        let name = model.kind.label();
        std::fs::write(
            out_dir.join(format!("trace_{name}.csv")),
            chronocast::harness::trace_to_csv(&model.trace),
        )?;
        model.checkpoint.save(&out_dir.join(format!("{name}.ckpt")))?;
    }

    // human summary: normalized-scale rows
    println!(
        "{:<14} {:>12} {:>12} {:>12} {:>12} {:>9}  protocol",
        "model", "mse", "rmse", "mae", "mape%", "r2"
    );
    for row in table.rows_at(Scale::Normalized) {
        println!(
            "{:<14} {:>12.4e} {:>12.4e} {:>12.4e} {:>12} {:>9}  {}",
            row.model,
            row.mse,
            row.rmse,
            row.mae,
            row.mape_percent.map_or("n/a".into(), |v| format!("{v:.4}")),
            row.r2.map_or("n/a".into(), |v| format!("{v:.4}")),
            row.protocol,
        );
    }
    for (model, message) in &outcome.failures {
        println!("{model:<14} FAILED: {message}");
    }
    println!("best per criterion: mse={} rmse={} mae={} mape={} r2={}",
        table.best_per_criterion.mse,
        table.best_per_criterion.rmse,
        table.best_per_criterion.mae,
        table.best_per_criterion.mape_percent.as_deref().unwrap_or("n/a"),
        table.best_per_criterion.r2.as_deref().unwrap_or("n/a"),
    );
    println!("overall winner: {}", table.overall_winner);

    // multi-month forecast from the winning model's checkpoint
    if horizon > 0 {
        if let Some(winner) =
            outcome.models.iter().find(|m| m.kind.label() == table.overall_winner)
        {
            let forecast = forecast_future(&winner.checkpoint, horizon)?;
            let mut text = String::from("date,predicted\n");
            for (date, value) in forecast.dates.iter().zip(&forecast.values) {
                text.push_str(&format!("{date},{value:.6}\n"));
            }
            std::fs::write(out_dir.join("forecast.csv"), text)?;
            println!(
                "forecast.csv: {} days from {} ({})",
                horizon,
                forecast.dates[0],
                table.overall_winner
            );
        }
    }
    println!("outputs in {}", out_dir.display());
    Ok(())
}

fn cmd_forecast(checkpoint: &Path, horizon: usize, out: &Path) -> Result<(), CliError> {
    if horizon == 0 {
        return Err(CliError::usage("horizon must be at least 1"));
    }
    let ckpt = Checkpoint::load(checkpoint)?;
    let forecast = forecast_future(&ckpt, horizon)?;

    let mut text = String::from("date,predicted\n");
    for (date, value) in forecast.dates.iter().zip(&forecast.values) {
        text.push_str(&format!("{date},{value:.6}\n"));
    }
    std::fs::write(out, text)?;

    println!(
        "{} forecast: {} days, {} .. {}",
        ckpt.model_tag(),
        horizon,
        forecast.dates[0],
        forecast.dates[forecast.dates.len() - 1]
    );
    println!(
        "values: first {:.3}, last {:.3}, min {:.3}, max {:.3}",
        forecast.values[0],
        forecast.values[forecast.values.len() - 1],
        forecast.values.iter().copied().fold(f64::INFINITY, f64::min),
        forecast.values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    println!("written to {}", out.display());
    Ok(())
}
