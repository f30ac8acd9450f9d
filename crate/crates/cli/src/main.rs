//! `strokekit`: run the stroke recognition and scoring pipeline stage by stage.

mod commands;
mod config;
mod svg;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::*;
use config::PipelineConfig;

#[derive(Debug, Parser)]
#[command(name = "strokekit", version, about = "Table-tennis IMU stroke recognition and skill scoring")]
struct Cli {
    /// TOML file of default parameters; flags override it
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cap on worker threads for parallel stages
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a labelled synthetic stream
    Synth(SynthArgs),
    /// Remove outliers, fill gaps and smooth a series
    Preprocess(PreprocessArgs),
    /// Cut windows, tag them from ground truth, split, and train the activation gate
    Segment(SegmentArgs),
    /// Compute the 180 window features
    Extract(ExtractArgs),
    /// Fit PCA on the training windows
    FitPca(FitPcaArgs),
    /// Train a DAGSVM or MLP stroke classifier
    Train(TrainArgs),
    /// Gate and classify every window of a series
    Predict(PredictArgs),
    /// Build standard profiles and score held-out strokes
    Evaluate(EvaluateArgs),
    /// Confusion matrix, precision, recall and F measure of predictions
    Report(ReportArgs),
}

fn run(cli: &Cli, cfg: &PipelineConfig) -> anyhow::Result<serde_json::Value> {
    match &cli.command {
        Command::Synth(a) => synth(a, cfg),
        Command::Preprocess(a) => preprocess(a, cfg),
        Command::Segment(a) => segment(a, cfg),
        Command::Extract(a) => extract(a, cfg),
        Command::FitPca(a) => fit_pca_cmd(a, cfg),
        Command::Train(a) => train(a, cfg),
        Command::Predict(a) => predict(a, cfg),
        Command::Evaluate(a) => evaluate(a, cfg),
        Command::Report(a) => report(a, cfg),
    }
}

const USAGE_ERROR: u8 = 1;
const DATA_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_ERROR),
            };
        }
    };
    let cfg = match &cli.config {
        Some(path) => match PipelineConfig::load(path) {
            Ok(c) => c,
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(USAGE_ERROR);
            }
        },
        None => PipelineConfig::default(),
    };
    if let Some(n) = cli.threads.or(cfg.threads) {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(USAGE_ERROR);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot set up {n} threads: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    }
    match run(&cli, &cfg) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(DATA_ERROR)
        }
    }
}
