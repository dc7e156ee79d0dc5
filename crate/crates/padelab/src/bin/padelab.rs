//! Command-line front end: `run` executes a JSON experiment config and
//! writes `row.csv` + `report.json`; `catalog` lists the built-in series
//! recipes. Exit codes: 0 success, 2 config error, 3 precondition violation,
//! 4 numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use padelab::config::{BackendChoice, ExperimentConfig};
use padelab::runner;

#[derive(Parser)]
#[command(
    name = "padelab",
    version,
    about = "Rational approximation laboratory: row sequences, telescoping \
             diagnostics, and singularity detection from Taylor coefficients"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run an experiment described by a JSON config file.
    Run {
        /// Path to the experiment config (JSON).
        config: PathBuf,
        /// Override the working precision, in decimal digits.
        #[arg(long, value_name = "D")]
        precision: Option<u32>,
        /// Override the arithmetic backend: exact or float.
        #[arg(long, value_name = "exact|float")]
        backend: Option<String>,
        /// Override the output directory.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// List the built-in series catalog and the coefficient file format.
    Catalog,
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Run {
            config,
            precision,
            backend,
            out,
        } => run_cmd(&config, precision, backend.as_deref(), out),
        Cmd::Catalog => {
            print!("{}", catalog_text());
            ExitCode::SUCCESS
        }
    }
}

fn fail(code: i32, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("padelab: {msg}");
    ExitCode::from(code as u8)
}

fn run_cmd(
    config_path: &Path,
    precision: Option<u32>,
    backend: Option<&str>,
    out: Option<PathBuf>,
) -> ExitCode {
    let mut config = match ExperimentConfig::from_path(config_path) {
        Ok(c) => c,
        Err(e) => return fail(2, e),
    };
    let backend = match backend.map(BackendChoice::parse).transpose() {
        Ok(b) => b,
        Err(e) => return fail(2, e),
    };
    config.apply_overrides(
        precision,
        backend,
        out.map(|p| p.display().to_string()),
    );
    let base_dir = config_path.parent().unwrap_or(Path::new("."));
    match runner::run(&config, base_dir) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            println!("wrote {}", outcome.row_csv.display());
            println!("wrote {}", outcome.report_json.display());
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.exit_code(), e),
    }
}

fn catalog_text() -> String {
    // Static, stable-ordered listing so repeated invocations are identical.
    let entries = [
        (
            "rational",
            r#"{"rational": {"terms": [{"c": "1", "a": "2", "s": 1}], "label": "..."}}"#,
            "sum of terms c / (a - z)^s; poles at each a (c, a complex \
             rationals, s >= 1, default 1)",
        ),
        (
            "log_branch",
            r#"{"log_branch": {"a": "2"}}"#,
            "ln(1 - z/a); a branch point at a",
        ),
        (
            "binomial",
            r#"{"binomial": {"a": "2", "alpha": "1/2"}}"#,
            "(1 - z/a)^alpha for non-integer rational alpha; a branch point at a",
        ),
        (
            "entire_exp",
            r#"{"entire_exp": {"c": "1"}}"#,
            "exp(c z); entire, infinite radius",
        ),
        (
            "combine",
            r#"{"combine": {"parts": [{"weight": "1", "series": {...}}, ...]}}"#,
            "weighted sum of other declarations (weights are complex rationals)",
        ),
        (
            "file",
            r#"{"file": {"path": "coeffs.txt"}}"#,
            "Taylor coefficients from a file: one `n re im` triple per line, \
             contiguous from n = 0; `#` starts a comment",
        ),
    ];
    let mut out = String::from("Series declarations accepted in the config's \"series\" list:\n\n");
    for (name, shape, desc) in entries {
        out.push_str(&format!("  {name:<11}{shape}\n             {desc}\n\n"));
    }
    out.push_str(
        "Complex rationals are strings like \"3/2\" or \"-0.25\", or objects \
         {\"re\": ..., \"im\": ...}.\n",
    );
    out
}
