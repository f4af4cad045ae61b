//! Batch command-line interface: parse problem specifications, run exact
//! reductions, verify numerically, and emit machine-readable reports.
//!
//! Subcommands:
//! - `reduce [--in FILE] [--out FILE]`: reduce a spec (or array of specs)
//! - `verify [--digits D] [--tol T] [--in FILE] [--out FILE]`: reduce with
//!   verification forced on
//! - `demo NAME`: run a shipped preset (`zeta2`, `zeta3`, `zeta22`,
//!   `selberg-log`, `ball-rivoal`)
//! - `eval-mzv --index "k1,k2,..." --digits D`: evaluate one multiple zeta
//!   value
//!
//! All I/O is JSON on stdin/stdout unless files are given. The process exits
//! with code 0 iff every requested verification passed.

mod demo;
mod run;
mod spec;

use clap::{Parser, Subcommand};
use std::io::Read;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "zetareduce", version, about = "Reduce simplex iterated integrals and nested sums to multiple zeta values")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce problem specs to exact MZV combinations.
    Reduce {
        /// Input file (defaults to stdin).
        #[arg(long = "in")]
        input: Option<String>,
        /// Output file (defaults to stdout).
        #[arg(long = "out")]
        output: Option<String>,
    },
    /// Reduce with verification forced on.
    Verify {
        #[arg(long = "in")]
        input: Option<String>,
        #[arg(long = "out")]
        output: Option<String>,
        /// Evaluation digits for the exact side.
        #[arg(long, default_value_t = 12)]
        digits: u32,
        /// Absolute tolerance for the comparison.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Run a shipped demo preset.
    Demo {
        /// One of: zeta2, zeta3, zeta22, selberg-log, ball-rivoal.
        name: String,
    },
    /// Evaluate a single multiple zeta value.
    #[command(name = "eval-mzv")]
    EvalMzv {
        /// Comma-separated index, innermost first (last part >= 2).
        #[arg(long)]
        index: String,
        #[arg(long, default_value_t = 12)]
        digits: u32,
    },
}

fn read_input(input: &Option<String>) -> std::io::Result<String> {
    match input {
        Some(path) => std::fs::read_to_string(path),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            Ok(buf)
        }
    }
}

fn write_output(output: &Option<String>, text: &str) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            println!("{}", text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Reduce { input, output } => batch(input, output, None, None),
        Command::Verify {
            input,
            output,
            digits,
            tol,
        } => batch(input, output, Some(digits), tol),
        Command::Demo { name } => demo::run_demo(&name),
        Command::EvalMzv { index, digits } => eval_mzv_cmd(&index, digits),
    }
}

fn batch(
    input: Option<String>,
    output: Option<String>,
    force_digits: Option<u32>,
    tol: Option<f64>,
) -> ExitCode {
    let text = match read_input(&input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("input error: {}", e);
            return ExitCode::from(2);
        }
    };
    let was_array = text.trim_start().starts_with('[');
    let mut specs = match run::parse_batch(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}", e);
            return ExitCode::from(2);
        }
    };
    if let Some(d) = force_digits {
        for s in &mut specs {
            s.verify = true;
            s.digits = d;
            if tol.is_some() {
                s.tol = tol;
            }
        }
    }
    let reports = run::run_all(&specs);
    let all_pass = reports.iter().all(|r| r.passed());
    let out = run::reports_to_json(&reports, was_array);
    let rendered = serde_json::to_string_pretty(&out).expect("serializable");
    if let Err(e) = write_output(&output, &rendered) {
        eprintln!("output error: {}", e);
        return ExitCode::from(2);
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn eval_mzv_cmd(index: &str, digits: u32) -> ExitCode {
    let parts: Result<Vec<u32>, _> = index
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect();
    let parts = match parts {
        Ok(p) => p,
        Err(e) => {
            eprintln!("bad index: {}", e);
            return ExitCode::from(2);
        }
    };
    let idx = match zetareduce::MzvIndex::new(parts) {
        Some(i) => i,
        None => {
            eprintln!("index is not admissible (parts >= 1, last >= 2)");
            return ExitCode::from(2);
        }
    };
    match zetareduce::eval_mzv(&idx, digits) {
        Ok(v) => {
            let out = serde_json::json!({
                "schemaVersion": 1,
                "index": idx.parts(),
                "digits": digits,
                "value": v.value.to_decimal_string(digits),
                "errorBound": format!("{:.3e}", v.error),
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e);
            ExitCode::from(2)
        }
    }
}
