use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use twistkit_core::checks::{exit_code, render_machine, render_text, run_checks, signature, RunOptions, CATALOG};
use twistkit_core::modelfile::{parse_model_file, ModelFile};
use twistkit_core::zoo::make_example;

/// Exact checks for torus twists of Hermitian and hypercomplex models.
#[derive(Parser)]
#[command(name = "twistkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the CHECKS section of a model file.
    Check {
        file: PathBuf,
        /// Comma-separated check names to keep.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Seed for randomized identity checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Show a registry example, or print it as a model file.
    Example {
        name: String,
        #[arg(long)]
        emit_model: bool,
    },
    /// Parse a model file and check d² = 0.
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

const PARSE_ERROR: u8 = 2;

fn load(path: &PathBuf) -> Result<ModelFile, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let text = String::from_utf8(bytes).map_err(|e| format!("{}: not UTF-8 ({e})", path.display()))?;
    parse_model_file(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Check { file, only, format, seed } => {
            let model = load(&file)?;
            if let Some(names) = &only {
                if let Some(bad) = names.iter().find(|n| signature(n).is_none()) {
                    let known: Vec<&str> = CATALOG.iter().map(|s| s.name).collect();
                    return Err(format!("unknown check `{bad}`; known checks: {}", known.join(", ")));
                }
            }
            let reports = run_checks(&model, &RunOptions { seed, only });
            let out = match format {
                Format::Text => render_text(&model.name, seed, &reports),
                Format::Machine => render_machine(&model.name, seed, &reports),
            };
            print!("{out}");
            Ok(exit_code(&reports) as u8)
        }
        Command::Example { name, emit_model } => {
            let ex = make_example(&name).map_err(|e| e.to_string())?;
            if emit_model {
                print!("{ex}");
                Ok(0)
            } else {
                let reports = run_checks(&ex, &RunOptions::default());
                print!("{}", render_text(&ex.name, 0, &reports));
                let all_expected = reports.iter().all(|r| r.as_expected());
                Ok(if all_expected { 0 } else { 1 })
            }
        }
        Command::Validate { file } => {
            let model = load(&file)?;
            let report = model.model.validate();
            if report.passed() {
                println!("ok    {}: d² = 0 on all generators", model.name);
                Ok(0)
            } else {
                for v in &report.violations {
                    println!("FAIL  {} = {}", v.label, v.form.display_with(model.model.coframe()));
                }
                Ok(1)
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(PARSE_ERROR)
        }
    }
}
