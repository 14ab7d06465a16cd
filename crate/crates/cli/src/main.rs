use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use psiflow_cli::config::{Overrides, RunConfig};
use psiflow_cli::{cmd_integrate, cmd_sweep, cmd_validate_model, cmd_verify, CliError};

/// Solve and check the singular radial equation psi'' + psi'/r + f(psi) = 0.
#[derive(Parser, Debug)]
#[command(name = "psiflow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate with the configured solver; writes traj.csv.
    Integrate(Common),
    /// Run both solvers and every uniqueness check; writes report.txt and trace.csv.
    Verify(Common),
    /// Empirical continuity sweep over initial slopes; writes sweep.csv and sweep.svg.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma separated psi1 values (replaces the [sweep] list).
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Option<Vec<f64>>,
    },
    /// Check the sign and Hölder hypotheses of the model; writes hypothesis.txt.
    ValidateModel(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    r0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    psi1: Option<f64>,
    /// classical, oscillatory or custom.
    #[arg(long)]
    model: Option<String>,
    /// Tolerance for both solvers.
    #[arg(long)]
    tol: Option<f64>,
}

impl Common {
    fn load(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                RunConfig::parse(&text)?
            }
            None => RunConfig::default(),
        };
        cfg.apply(&Overrides {
            out: self.out.clone(),
            r0: self.r0,
            psi1: self.psi1,
            model: self.model.clone(),
            tol: self.tol,
        });
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<psiflow_cli::Report, CliError> {
    match cli.command {
        Command::Integrate(c) => cmd_integrate(&c.load()?),
        Command::Verify(c) => cmd_verify(&c.load()?),
        Command::Sweep { common, values } => cmd_sweep(&common.load()?, values.as_deref()),
        Command::ValidateModel(c) => cmd_validate_model(&c.load()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            print!("{}", report.stdout);
            for p in report.written {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("psiflow: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
