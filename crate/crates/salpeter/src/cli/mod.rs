//! Command-line interface: `run` executes a scenario config, `figure`
//! regenerates one of the built-in figure datasets, `validate` runs the
//! acceptance suite.
//!
//! Exit codes: 0 on success, 1 when validation fails, 2 on configuration
//! or usage errors.

pub mod config;
pub mod figures;
pub mod output;
pub mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::SalpeterError;
use crate::validate::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION_FAILED: i32 = 1;
pub const EXIT_CONFIG_ERROR: i32 = 2;

#[derive(Parser)]
#[command(name = "salpeter", version, about = "relativistic square-root Hamiltonian laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a config file
    Run {
        /// path to a key=value config file
        config: PathBuf,
    },
    /// Write the dataset behind one of the built-in figures
    Figure {
        /// figure number, 1 through 10
        n: usize,
        /// output path (default figure_<n>.csv)
        #[arg(long)]
        out: Option<PathBuf>,
        /// parameter override, e.g. --param a=2 (repeatable)
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// write JSON instead of CSV
        #[arg(long)]
        json: bool,
    },
    /// Run the self-validation suite
    Validate {
        #[arg(long, value_enum, default_value = "fast")]
        suite: SuiteArg,
        /// emit the report as JSON on stdout
        #[arg(long)]
        json: bool,
    },
}

fn install_thread_cap() {
    if let Ok(v) = std::env::var("SALPETER_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                // ignore the error if a global pool already exists
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring SALPETER_THREADS={v:?} (want a positive integer)"),
        }
    }
}

fn parse_override(s: &str) -> Result<(String, f64), SalpeterError> {
    let (k, v) = s.split_once('=').ok_or_else(|| {
        SalpeterError::InvalidArgument(format!("--param expects key=value, got '{s}'"))
    })?;
    let value: f64 = v.trim().parse().map_err(|_| {
        SalpeterError::InvalidArgument(format!("--param {k}: unparseable number '{v}'"))
    })?;
    Ok((k.trim().to_string(), value))
}

fn cmd_run(config: &PathBuf) -> i32 {
    let text = match std::fs::read_to_string(config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config.display());
            return EXIT_CONFIG_ERROR;
        }
    };
    let origin = config.display().to_string();
    let cfg = match config::parse_config(&text, &origin) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG_ERROR;
        }
    };
    let base = config.parent().unwrap_or_else(|| std::path::Path::new("."));
    match run::execute(&cfg, base) {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for (path, _) in &outcome.tables {
                println!("wrote {}", path.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG_ERROR
        }
    }
}

fn cmd_figure(n: usize, out: Option<PathBuf>, params: &[String], json: bool) -> i32 {
    let overrides: Result<Vec<_>, _> = params.iter().map(|s| parse_override(s)).collect();
    let overrides = match overrides {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG_ERROR;
        }
    };
    let table = match figures::figure_data(n, &overrides) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG_ERROR;
        }
    };
    let ext = if json { "json" } else { "csv" };
    let path = out.unwrap_or_else(|| PathBuf::from(format!("figure_{n}.{ext}")));
    let written = if json {
        output::write_json(&table, &path)
    } else {
        output::write_csv(&table, &path)
    };
    match written {
        Ok(()) => {
            println!("wrote {}", path.display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG_ERROR
        }
    }
}

fn cmd_validate(suite: SuiteArg, json: bool) -> i32 {
    let suite = match suite {
        SuiteArg::Fast => Suite::Fast,
        SuiteArg::Full => Suite::Full,
    };
    let report = run_suite(suite);
    if json {
        let checks: Vec<serde_json::Value> = report
            .checks
            .iter()
            .map(|c| {
                serde_json::json!({
                    "name": c.name,
                    "measured": c.measured,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                    "detail": c.detail,
                })
            })
            .collect();
        let doc = serde_json::json!({
            "suite": match report.suite { Suite::Fast => "fast", Suite::Full => "full" },
            "passed": report.passed(),
            "checks": checks,
        });
        println!("{}", serde_json::to_string_pretty(&doc).expect("json serialization"));
    } else {
        for c in &report.checks {
            let flag = if c.passed { "PASS" } else { "FAIL" };
            println!(
                "{flag} {:<28} measured {:.3e} vs tolerance {:.1e}",
                c.name, c.measured, c.tolerance
            );
            if !c.detail.is_empty() {
                println!("     {}", c.detail);
            }
        }
        let verdict = if report.passed() { "passed" } else { "FAILED" };
        println!(
            "suite {verdict}: {}/{} checks",
            report.checks.iter().filter(|c| c.passed).count(),
            report.checks.len()
        );
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_VALIDATION_FAILED
    }
}

/// Parses `args` (including argv[0]) and runs the selected command,
/// returning the process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version through this path with status 0
            let code = if e.exit_code() == 0 { EXIT_OK } else { EXIT_CONFIG_ERROR };
            let _ = e.print();
            return code;
        }
    };
    install_thread_cap();
    match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Figure { n, out, params, json } => cmd_figure(n, out, &params, json),
        Command::Validate { suite, json } => cmd_validate(suite, json),
    }
}
