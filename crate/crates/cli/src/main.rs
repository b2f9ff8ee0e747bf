use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use griffiths_cli::{cone, sweep, verify, CliError, ExperimentConfig, Outputs, SweepParam};

#[derive(Debug, Parser)]
#[command(
    name = "griffiths",
    version,
    about = "Check correlation inequalities on lattice Schrödinger operators"
)]
struct Cli {
    /// Override the inequality and cone tolerances.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// CSV output path (overrides the config).
    #[arg(long, global = true)]
    out_csv: Option<PathBuf>,
    /// JSON summary path (overrides the config).
    #[arg(long, global = true)]
    out_json: Option<PathBuf>,
    /// Suppress the per-report lines on stdout.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the checks listed in a config.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the checks at each value of one parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// One of n, lambda, N, beta.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
    /// Cone-theory suite on random matrices of one size.
    Cone {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let out = Outputs {
        csv: cli.out_csv,
        json: cli.out_json,
        echo: !cli.quiet,
    };
    match cli.command {
        Command::Verify { config } => verify(&ExperimentConfig::load(&config)?, cli.tol, &out),
        Command::Sweep { config, param, values } => {
            let param = SweepParam::parse(&param)?;
            sweep(&ExperimentConfig::load(&config)?, param, &values, cli.tol, &out)
        }
        Command::Cone { size, seed, instances } => cone(size, seed, instances, cli.tol, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("griffiths: at least one check reported a violation");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("griffiths: {e}");
            ExitCode::from(2)
        }
    }
}
