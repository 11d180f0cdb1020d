mod args;
mod commands;
mod fetch;

use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use ecgforge_core::PipelineConfig;

use args::{Cli, Command};

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    /// Records were skipped or the data failed a consistency check.
    DataProblem,
    /// A `--check` assertion failed.
    CheckFailed,
}

/// Bad flags or configuration; exits with 1 like a parse error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn load_config(cli: &Cli) -> anyhow::Result<PipelineConfig> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path).map_err(|e| UsageError(e.to_string()))?,
        None => PipelineConfig::default(),
    };
    if let Some(dir) = &cli.data_dir {
        cfg.data_dir = dir.clone();
    }
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let cfg = load_config(&cli)?;
    let mut out = std::io::stdout().lock();
    let status = match cli.command {
        Command::Fetch(a) => fetch::run(&cfg, &a, &mut out),
        Command::Qrs(a) => commands::qrs(cfg, &a, &mut out),
        Command::Stats(a) => commands::stats(cfg, &a, &mut out),
        Command::Build(a) => commands::build(cfg, &a, &mut out),
        Command::Export(a) => commands::export(cfg, &a, &mut out),
    }?;
    out.flush().context("writing to stdout")?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::DataProblem) => ExitCode::from(2),
        Ok(Status::CheckFailed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

/// Joins the error chain, skipping causes whose text the previous message
/// already includes.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    let mut last = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !last.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
        last = text;
    }
    out
}
