use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use glsf::config::{parse_config, Experiment};
use glsf::run::run;

/// Non-isothermal Ginzburg-Landau superfluidity lab.
#[derive(Debug, Parser)]
#[command(name = "glsf", version)]
struct Cli {
    /// simulate | stationary | split | qcheck | depcheck | oracle
    experiment: String,
    /// Configuration file (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `out` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random initial data; overrides `seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(experiment) = Experiment::parse(&cli.experiment) else {
        let names: Vec<&str> = Experiment::ALL.iter().map(|e| e.name()).collect();
        eprintln!(
            "error: unknown experiment `{}` (expected one of {})",
            cli.experiment,
            names.join(", ")
        );
        return ExitCode::from(2);
    };
    if let Ok(v) = std::env::var("GLSF_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    eprintln!("warning: GLSF_THREADS ignored: {e}");
                }
            }
            _ => {
                eprintln!("error: GLSF_THREADS must be a positive integer, got `{v}`");
                return ExitCode::from(2);
            }
        }
    }
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let mut cfg = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    cfg.experiment = experiment;
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    match run(&cfg) {
        Ok(report) => {
            print!("{}", report.to_text());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
