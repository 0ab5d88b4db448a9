//! Experiment runner for the credit-score classification pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use credit_cli::config::{parse_averaging, ResampleMethod};
use credit_cli::{commands, CliError};

#[derive(Parser)]
#[command(
    name = "credit",
    version,
    about = "Credit-score classification pipeline: clean, filter, resample, train, stack, evaluate"
)]
struct Cli {
    /// Cap worker threads (default: all cores). Output is independent of it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean a raw CSV: numeric coercion, mean imputation, ordinal encoding.
    Clean {
        /// Label column name (exempt from cleaning).
        #[arg(long)]
        label: String,
        /// Comma-separated class order (default: Poor,Standard,Good).
        #[arg(long)]
        classes: Option<String>,
        /// Write the key=value cleaning report here.
        #[arg(long)]
        report: Option<PathBuf>,
        input: PathBuf,
        output: PathBuf,
    },
    /// Rebalance a cleaned CSV with ros, smote, enn or smoteenn.
    Resample {
        #[arg(long)]
        method: String,
        #[arg(long, default_value_t = 5)]
        smote_k: usize,
        #[arg(long, default_value_t = 3)]
        enn_k: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        label: String,
        #[arg(long)]
        classes: Option<String>,
        /// Write one seed_row,neighbor_row,u line per synthetic row.
        #[arg(long)]
        provenance: Option<PathBuf>,
        input: PathBuf,
        output: PathBuf,
    },
    /// Train the configured models on a CSV and save a model bundle.
    Train {
        /// Ensemble spec file (base.N.* sections plus ensemble.* keys).
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long)]
        label: String,
        #[arg(long)]
        classes: Option<String>,
        #[arg(long)]
        seed: u64,
        /// Bundle output directory.
        #[arg(long)]
        out: PathBuf,
        input: PathBuf,
    },
    /// Score every model of a bundle on a labeled CSV.
    Evaluate {
        #[arg(long)]
        bundle: PathBuf,
        /// macro (default) or weighted.
        #[arg(long, default_value = "macro")]
        average: String,
        /// Write the metrics CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        input: PathBuf,
    },
    /// Predict class probabilities for new rows through a bundle.
    Predict {
        #[arg(long)]
        bundle: PathBuf,
        /// Base model name, or "ensemble" (default).
        #[arg(long)]
        model: Option<String>,
        /// Output CSV (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        input: PathBuf,
    },
    /// Execute the full pipeline described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override filter.z_threshold.
        #[arg(long)]
        z_threshold: Option<f64>,
        /// Override filter.iqr_multiplier.
        #[arg(long)]
        iqr_multiplier: Option<f64>,
        /// Override test_fraction.
        #[arg(long)]
        test_fraction: Option<f64>,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Resample before splitting (reproduces the leaky ordering).
        #[arg(long)]
        resample_before_split: bool,
        /// Override ensemble.meta_features: oof or in_sample.
        #[arg(long)]
        meta_features: Option<String>,
    },
    /// Render a metrics CSV as a comparison table.
    RenderReport {
        /// text, markdown or csv.
        #[arg(long, default_value = "text")]
        format: String,
        input: PathBuf,
    },
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Clean {
            label,
            classes,
            report,
            input,
            output,
        } => commands::clean::run(&label, classes.as_deref(), report.as_deref(), &input, &output),
        Command::Resample {
            method,
            smote_k,
            enn_k,
            seed,
            label,
            classes,
            provenance,
            input,
            output,
        } => commands::resample::run(
            ResampleMethod::parse(&method)?,
            smote_k,
            enn_k,
            seed,
            &label,
            classes.as_deref(),
            provenance.as_deref(),
            &input,
            &output,
        ),
        Command::Train {
            ensemble,
            label,
            classes,
            seed,
            out,
            input,
        } => commands::train::run(&ensemble, &label, classes.as_deref(), seed, &out, &input),
        Command::Evaluate {
            bundle,
            average,
            out,
            input,
        } => commands::evaluate::run(&bundle, parse_averaging(&average)?, out.as_deref(), &input),
        Command::Predict {
            bundle,
            model,
            out,
            input,
        } => commands::predict::run(&bundle, model.as_deref(), out.as_deref(), &input),
        Command::Run {
            config,
            z_threshold,
            iqr_multiplier,
            test_fraction,
            seed,
            resample_before_split,
            meta_features,
        } => commands::run::run(
            &config,
            &commands::run::RunOverrides {
                z_threshold,
                iqr_multiplier,
                test_fraction,
                seed,
                resample_before_split,
                meta_features,
            },
        ),
        Command::RenderReport { format, input } => commands::render::run(&format, &input),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.threads {
        None => dispatch(cli.command),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Internal(format!("cannot build thread pool: {e}")));
            match pool {
                Ok(pool) => pool.install(|| dispatch(cli.command)),
                Err(e) => Err(e),
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
