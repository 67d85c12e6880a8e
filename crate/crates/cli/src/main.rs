use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use nc_arakelov_cli::report::{EXIT_CHECK, EXIT_INPUT, EXIT_PASS};
use nc_arakelov_cli::suites::{selftest, SelftestOptions};
use nc_arakelov_cli::{corpus, run_scenario_text, CliError, RunOptions, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "nc-arakelov", version, about = "Determinant-of-cohomology calculus over R ⊗ P^1_Z")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (or `bundled:<name>` for a shipped scenario).
    Run {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Include wall-clock timings (makes the report nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Run every acceptance suite and the bundled scenarios.
    Selftest {
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
    /// List the bundled scenarios.
    Scenarios,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_scenario(arg: &str) -> Result<String, CliError> {
    if let Some(name) = arg.strip_prefix("bundled:") {
        return corpus::find(name)
            .map(|b| b.text.to_string())
            .ok_or_else(|| CliError::validation(arg, "no bundled scenario with this name"));
    }
    std::fs::read_to_string(arg).map_err(|source| CliError::Io { path: arg.to_string(), source })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Run { scenario, out, format, tolerance, seed, timings } => {
            let opts = RunOptions { tolerance, seed, timings };
            let report = match read_scenario(&scenario).and_then(|text| run_scenario_text(&text, &opts)) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return Ok(EXIT_INPUT);
                }
            };
            let text = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            emit(&text, out.as_ref())?;
            for f in &report.failures {
                eprintln!("check failed: {} {}", f.task, f.message);
            }
            Ok(report.exit_code())
        }
        Command::Selftest { tolerance, seed, format, out, timings } => {
            let rep = selftest(&SelftestOptions { seed, tolerance, include_scenarios: true });
            let text = match format {
                Format::Json if timings => {
                    let mut v = serde_json::to_value(&rep)?;
                    let t: serde_json::Map<String, serde_json::Value> =
                        rep.suites.iter().map(|s| (s.id.to_string(), serde_json::json!(s.seconds))).collect();
                    v["timings_s"] = serde_json::Value::Object(t);
                    serde_json::to_string_pretty(&v)? + "\n"
                }
                Format::Json => rep.to_json(),
                Format::Text => rep.to_text(timings),
            };
            emit(&text, out.as_ref())?;
            Ok(if rep.passed { EXIT_PASS } else { EXIT_CHECK })
        }
        Command::Scenarios => {
            for b in corpus::BUNDLED {
                println!("bundled:{}  (expected exit {})", b.name, b.expected_exit);
            }
            Ok(EXIT_PASS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
