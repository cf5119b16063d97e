use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hjlab::experiments::{self, CliError, Config, Outcome};

#[derive(Parser)]
#[command(
    name = "hjlab",
    version,
    about = "Random rectangle environments and the viscous Hamilton-Jacobi experiments built on them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// `key = value` configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one key, e.g. `--set env.seed=7`; repeatable
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory (same as `output.dir`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Sample an environment and write rectangles, heatmap and metadata
    Env,
    /// Check the supersolution and subsolution residuals on a planted rectangle
    Verify,
    /// Solve the PDE from zero data and report u(T, probe)/T
    Solve,
    /// Solve at alternating planted scales and check the oscillation bounds
    DemoOscillation,
    /// Compare closed-form event probabilities with Monte Carlo frequencies
    Prob,
    /// Check growth, Lipschitz and antisymmetry properties of the Hamiltonian
    Assumptions,
}

fn load(cli: &Cli) -> Result<Config, CliError> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Config::parse(&text)?
        }
        None => Config::default(),
    };
    for o in &cli.overrides {
        config.apply_override(o)?;
    }
    if let Some(out) = &cli.out {
        config.set("output.dir", &out.to_string_lossy())?;
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let config = load(cli)?;
    match cli.command {
        Command::Env => experiments::cmd_env(&config),
        Command::Verify => experiments::cmd_verify(&config),
        Command::Solve => experiments::cmd_solve(&config),
        Command::DemoOscillation => experiments::cmd_demo_oscillation(&config),
        Command::Prob => experiments::cmd_prob(&config),
        Command::Assumptions => experiments::cmd_assumptions(&config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    match &result {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
        }
        Err(e) => eprintln!("hjlab: {e}"),
    }
    ExitCode::from(experiments::exit_code(&result) as u8)
}
