use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sectorial_cli::{
    emit_report, format_table, load_raw, run_batch, verify_suite, CliError, Format, Mutation,
    ScenarioConfig, VerifyOptions,
};

#[derive(Parser)]
#[command(name = "sectorial", version, about = "Sectorial forms, linear relations and their semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios described by JSON configs and write CSV/JSON outputs.
    Run {
        #[arg(required = true)]
        configs: Vec<PathBuf>,
    },
    /// Run the acceptance battery; exits non-zero if any criterion fails.
    Verify {
        /// Only criteria whose id contains this string.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Convergence tolerance for the series and product criteria.
        #[arg(long)]
        tol: Option<f64>,
        /// Inject a known fault (`sector-sign`).
        #[arg(long)]
        mutate: Option<Mutation>,
    },
    /// Render a raw JSON report.
    Report {
        raw: PathBuf,
        #[arg(long, default_value = "csv")]
        format: Format,
    },
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Run { configs } => {
            let configs = configs
                .iter()
                .map(|p| ScenarioConfig::load(p))
                .collect::<Result<Vec<_>, _>>()?;
            for outcome in run_batch(&configs)? {
                for path in &outcome.paths {
                    println!("wrote {}", path.display());
                }
                println!(
                    "{}: {}",
                    outcome.scenario,
                    if outcome.pass { "all checks pass" } else { "some checks FAIL" }
                );
            }
            Ok(true)
        }
        Command::Verify {
            filter,
            seed,
            tol,
            mutate,
        } => {
            let opts = VerifyOptions {
                seed,
                tol,
                mutation: mutate,
            };
            let results = verify_suite(filter.as_deref(), &opts);
            print!("{}", format_table(&results));
            let passed = results.iter().filter(|r| r.pass).count();
            println!("{passed}/{} criteria pass", results.len());
            Ok(!results.is_empty() && passed == results.len())
        }
        Command::Report { raw, format } => {
            print!("{}", emit_report(&load_raw(&raw)?, format));
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
