use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use patent_rent::pipeline::{self, Command, EstimateArgs, SynthArgs, ValueArgs};

/// Estimate patent values from renewal records.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Random seed (required for reproducibility).
    #[arg(long)]
    seed: u64,
    /// Worker threads; results do not depend on this.
    #[arg(long, env = pipeline::THREADS_ENV)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fit the model to a records file.
    Estimate {
        #[arg(long)]
        records: PathBuf,
        /// india, china, us, or a schedule file.
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        ga_config: Option<PathBuf>,
        #[arg(long)]
        bounds: Option<PathBuf>,
        /// Model settings (discount rate, NPV convention, ...).
        #[arg(long)]
        model: Option<PathBuf>,
        /// Polish the best individual by coordinate-wise search.
        #[arg(long)]
        refine: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Simulate per-patent values and write the summary tables.
    Value {
        #[arg(long)]
        records: PathBuf,
        /// estimation.json from a previous `estimate` run.
        #[arg(long)]
        estimation: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
        /// Add uncertainty bands from the elite parameter set.
        #[arg(long)]
        ensemble: bool,
        #[arg(long, default_value_t = 1_000)]
        ensemble_draws: usize,
        #[arg(long, default_value_t = 1e-6)]
        money_factor: f64,
        #[arg(long, default_value = "$M")]
        money_unit: String,
        #[command(flatten)]
        common: Common,
    },
    /// Draw a synthetic records file from known parameters.
    Synth {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        covariate_spec: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Repeat a run recorded in a manifest.
    Rerun {
        #[arg(long)]
        manifest: PathBuf,
        /// Write here instead of the original directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = pipeline::THREADS_ENV)]
        threads: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| match cli.command {
        Cmd::Rerun { manifest, out, threads } => pipeline::rerun(&manifest, out, threads),
        Cmd::Estimate {
            records,
            schedule,
            ga_config,
            bounds,
            model,
            refine,
            common,
        } => pipeline::run(
            &Command::Estimate(EstimateArgs {
                records,
                schedule,
                ga_config,
                bounds,
                model,
                seed: common.seed,
                refine,
                out: common.out,
            }),
            common.threads,
        ),
        Cmd::Value {
            records,
            estimation,
            draws,
            ensemble,
            ensemble_draws,
            money_factor,
            money_unit,
            common,
        } => pipeline::run(
            &Command::Value(ValueArgs {
                records,
                estimation,
                draws,
                ensemble,
                ensemble_draws,
                seed: common.seed,
                money_factor,
                money_unit,
                out: common.out,
            }),
            common.threads,
        ),
        Cmd::Synth {
            params,
            n,
            schedule,
            covariate_spec,
            model,
            common,
        } => pipeline::run(
            &Command::Synth(SynthArgs {
                params,
                n,
                schedule,
                covariate_spec,
                model,
                seed: common.seed,
                out: common.out,
            }),
            common.threads,
        ),
    });
    match outcome {
        Ok(Ok(m)) => {
            eprintln!("wrote {} files to {}", m.outputs.len() + 1, m.command.out_dir().display());
            ExitCode::SUCCESS
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(4),
    }
}
