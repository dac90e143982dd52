use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use waveguide_echo::scenario::{
    default_config, run_scenario, write_outputs, OutputFormat, ScenarioConfig, ScenarioId,
};
use waveguide_echo::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    version,
    about = "Loschmidt echoes of photons in binary waveguide lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in scenario, or a config file.
    Run {
        /// fig1 | fig2a | fig2b | fig3a | fig3b | fig4 | custom
        scenario: String,
        /// JSON config; replaces the scenario's built-in parameters.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Master seed for disorder ensembles.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// csv | json
        #[arg(long)]
        format: Option<String>,
        /// Add a `fidelity_squared` column next to every fidelity column.
        #[arg(long)]
        squared: bool,
    },
    /// List built-in scenarios.
    ListScenarios,
    /// Parse and validate a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config { .. } | Error::Spec(_) | Error::Capacity(_) => EXIT_USAGE,
        Error::Numeric(_) => EXIT_NUMERIC,
        Error::Io(_) => 1,
    }
}

fn load(
    scenario: &str,
    config: Option<&PathBuf>,
    seed: Option<u64>,
) -> Result<ScenarioConfig, Error> {
    let id: ScenarioId = scenario.parse()?;
    let mut cfg = match config {
        Some(path) => {
            let cfg = ScenarioConfig::from_path(path)?;
            if cfg.scenario != id {
                return Err(Error::Config {
                    path: "scenario".into(),
                    message: format!("config is for `{}`, command asked for `{id}`", cfg.scenario),
                });
            }
            cfg
        }
        None => default_config(id).ok_or_else(|| Error::Config {
            path: "--config".into(),
            message: format!("scenario `{id}` has no defaults; pass --config"),
        })?,
    };
    if let (Some(seed), Some(disorder)) = (seed, cfg.lattice.disorder.as_mut()) {
        disorder.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            scenario,
            config,
            seed,
            out,
            format,
            squared,
        } => {
            let mut cfg = load(&scenario, config.as_ref(), seed)?;
            if let Some(f) = format {
                cfg.output.format = f.parse::<OutputFormat>()?;
            }
            if let Some(dir) = out {
                cfg.output.dir = dir.to_string_lossy().into_owned();
            }
            let result = run_scenario(&cfg)?;
            let dir = PathBuf::from(&cfg.output.dir);
            for path in write_outputs(&result, &dir, cfg.output.format, squared)? {
                println!("{}", path.display());
            }
        }
        Command::ListScenarios => {
            for id in ScenarioId::ALL {
                println!("{:<7} {}", id.as_str(), id.description());
            }
        }
        Command::Validate { config } => {
            let cfg = ScenarioConfig::from_path(&config)?;
            println!("ok: {} ({:?})", cfg.scenario, cfg.plan());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
