//! `lbann`: latent budget analysis and LBA-NN from the command line.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use manifest::Run;

#[derive(Debug, Parser, Serialize)]
#[command(name = "lbann", version, about = "Latent budget analysis and its neural-network counterpart")]
struct Cli {
    /// Seed for every random step of the subcommand (default 1).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory receiving all artifacts and `manifest.json`.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Suppress the summary printed on success.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Sample individual records from row profiles and row masses.
    Generate(GenerateArgs),
    /// Fit a latent budget model by EM.
    FitLba(FitLbaArgs),
    /// Train an LBA-NN network.
    FitNn(FitNnArgs),
    /// Grid search over network configurations.
    Tune(TuneArgs),
    /// Score records with a saved model.
    Predict(PredictArgs),
    /// Score records and report the six metrics.
    Evaluate(EvaluateArgs),
    /// Connection Weight importance table of a network.
    Importance(ModelArgs),
    /// K-means on the importance table plus a biplot.
    Cluster(ClusterArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    /// Row-profile CSV; the corner cell names the variables as `explanatory/response`.
    #[arg(long)]
    pub profiles: PathBuf,
    /// Comma-separated row masses (default: equal).
    #[arg(long)]
    pub masses: Option<String>,
    /// Number of records.
    #[arg(long)]
    pub n: usize,
    /// Also write a seeded train/test split with this test fraction.
    #[arg(long)]
    pub test_fraction: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct FitLbaArgs {
    /// Counts CSV (explanatory levels by response levels).
    #[arg(long, conflicts_with = "records", required_unless_present = "records")]
    pub counts: Option<PathBuf>,
    /// Records CSV, one individual per line.
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Response column of `--records`.
    #[arg(long, default_value = "Y")]
    pub response: String,
    /// Number of latent budgets.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    #[arg(long, default_value_t = 5000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct DataArgs {
    /// Records CSV, one individual per line.
    #[arg(long)]
    pub records: PathBuf,
    /// Response column.
    #[arg(long, default_value = "Y")]
    pub response: String,
}

#[derive(Debug, Args, Serialize)]
pub struct FitNnArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Training-config file (`key=value`); flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Hidden neurons (required unless set by `--config`).
    #[arg(long)]
    pub hidden: Option<usize>,
    /// Hidden activation: linear or relu.
    #[arg(long)]
    pub act1: Option<String>,
    /// Output activation: linear, relu or softmax.
    #[arg(long)]
    pub act2: Option<String>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// mse or cross-entropy.
    #[arg(long)]
    pub loss: Option<String>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub val_fraction: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct TuneArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Grid file: `key=v1,v2,...` per line.
    #[arg(long)]
    pub grid: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelArgs {
    /// Model directory written by fit-lba or fit-nn.
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct PredictArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Records CSV with the model's variables.
    #[arg(long)]
    pub records: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub records: PathBuf,
    /// Column heading in the text report (default: LBA or LBA-NN).
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of clusters, at most the number of response levels.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub restarts: u64,
    #[arg(long, default_value_t = 100)]
    pub max_iterations: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let options = serde_json::to_value(&cli).unwrap_or(serde_json::Value::Null);
    let name = match &cli.command {
        Command::Generate(_) => "generate",
        Command::FitLba(_) => "fit-lba",
        Command::FitNn(_) => "fit-nn",
        Command::Tune(_) => "tune",
        Command::Predict(_) => "predict",
        Command::Evaluate(_) => "evaluate",
        Command::Importance(_) => "importance",
        Command::Cluster(_) => "cluster",
    };
    let mut run = Run::new(name, options, cli.out_dir.clone(), cli.quiet);
    let seed = cli.seed;
    let outcome = match &cli.command {
        Command::Generate(a) => commands::generate(&mut run, a, seed),
        Command::FitLba(a) => commands::fit_lba(&mut run, a, seed),
        Command::FitNn(a) => commands::fit_nn(&mut run, a, seed),
        Command::Tune(a) => commands::tune(&mut run, a, seed),
        Command::Predict(a) => commands::predict(&mut run, a),
        Command::Evaluate(a) => commands::evaluate(&mut run, a),
        Command::Importance(a) => commands::importance(&mut run, a),
        Command::Cluster(a) => commands::cluster(&mut run, a, seed),
    };
    if let Err(e) = &outcome {
        eprintln!("lbann {name}: {e}");
    }
    if let Err(e) = run.finish(&outcome) {
        eprintln!("lbann {name}: could not write manifest: {e}");
        if outcome.is_ok() {
            return ExitCode::from(1);
        }
    }
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => ExitCode::from(e.exit_code()),
    }
}
