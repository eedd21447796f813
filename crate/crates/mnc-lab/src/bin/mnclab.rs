//! Batch experiment driver: runs a configuration (file or preset name),
//! writes the JSON report, and exports CSV tables from existing reports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mnc_lab::config::ExperimentConfig;
use mnc_lab::runner::TaskStatus;
use mnc_lab::{presets, report, runner};

#[derive(Parser)]
#[command(name = "mnclab", version, about = "Measures-of-noncompactness laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration file or a named preset and write the JSON report.
    Run {
        /// Path to a TOML configuration, or a preset name.
        target: String,
        /// Output directory for the report.
        #[arg(long, default_value = "mnclab-out")]
        out: PathBuf,
        /// Replace every seed in the configuration with this value.
        #[arg(long)]
        seed_override: Option<u64>,
        /// Exit with code 2 when any verdict is inconclusive.
        #[arg(long)]
        strict: bool,
    },
    /// List the built-in presets.
    ListPresets,
    /// Export the CSV tables of one task from a report.
    ExportCsv {
        report: PathBuf,
        task: String,
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    match run_cli() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run_cli() -> mnc_lab::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { target, out, seed_override, strict } => {
            let text = match presets::preset_toml(&target) {
                Ok(toml) => toml.to_string(),
                Err(_) => std::fs::read_to_string(&target).map_err(|e| {
                    mnc_lab::Error::Config(format!(
                        "{target:?} is neither a preset name nor a readable file: {e}"
                    ))
                })?,
            };
            let mut config = ExperimentConfig::from_toml(&text)?;
            if let Some(seed) = seed_override {
                config.override_seeds(seed);
            }
            let report_data = runner::run(&config, &text)?;
            for task in &report_data.tasks {
                let status = match task.status {
                    TaskStatus::Ok => "ok",
                    TaskStatus::Inconsistent => "INCONSISTENT",
                    TaskStatus::Error => "ERROR",
                };
                match &task.error {
                    Some(e) => println!("{:<28} {:<20} {status}: {e}", task.name, task.kind),
                    None => println!("{:<28} {:<20} {status}", task.name, task.kind),
                }
            }
            let path = out.join("report.json");
            report::write_report(&report_data, &path)?;
            let s = &report_data.summary;
            println!(
                "{} tasks, {} errors, {} inconsistencies, {} inconclusive -> {}",
                s.tasks,
                s.errors,
                s.inconsistencies,
                s.inconclusive,
                path.display()
            );
            Ok(ExitCode::from(report_data.exit_code(strict) as u8))
        }
        Command::ListPresets => {
            for (name, description) in presets::list_presets() {
                println!("{name:<22} {description}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportCsv { report: report_path, task, dir } => {
            let report_data = report::read_report(&report_path)?;
            let files = report::export_csv(&report_data, &task, &dir)?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
