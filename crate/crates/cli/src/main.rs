use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swimwake::config::{ScenarioConfig, Tolerances};
use swimwake::{export_plotdata, run_scenario, validate, CliError};

#[derive(Parser)]
#[command(name = "swimwake", version, about = "Run locomotion hydrodynamics scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config; outputs go under $SWIMWAKE_OUTPUT_ROOT (default ./runs)
    Run { config: PathBuf },
    /// Run a validation suite: conservation, operators, kelvin, oracles, scaling
    Validate {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a plot-data view (wake-street, probe, fig8, fig9, pet) into a run directory
    Export { run_dir: PathBuf, view: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cmd: Command) -> Result<bool, CliError> {
    match cmd {
        Command::Run { config } => {
            let cfg = ScenarioConfig::load(&config)?;
            let manifest = run_scenario(&cfg)?;
            for c in &manifest.checks {
                let value = c.value.map(|v| format!("{v:.4e}")).unwrap_or_else(|| "-".into());
                println!("{:<5} {:<28} {value:>12}  {}", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail);
            }
            println!("{} files in {}", manifest.files.len(), cfg.output_path().display());
            Ok(manifest.passed())
        }
        Command::Validate { suite, seed } => {
            let report = validate(&suite, seed, &Tolerances::default())?;
            print!("{}", report.render());
            Ok(report.passed())
        }
        Command::Export { run_dir, view } => {
            let path = export_plotdata(&run_dir, &view)?;
            println!("{}", path.display());
            Ok(true)
        }
    }
}
