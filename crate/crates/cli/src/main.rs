//! `pangle`: batch front end for the p-angular distance library.
//!
//! Exit status: 0 on success or a consistent verdict, 2 when a counterexample
//! is found or a check fails, 1 on any error.

mod args;
mod commands;

use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use args::{Cli, Command, Format};
use commands::{Outcome, Status, Table};

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    tool: String,
    version: String,
    command: String,
    config: Command,
    /// Seconds since the Unix epoch; the only field that differs between identical runs.
    timestamp: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Report {
    header: Header,
    body: Value,
}

type AnyError = Box<dyn std::error::Error>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Flagged) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: &Cli) -> Result<Status, AnyError> {
    if let Command::Replay { report } = &cli.command {
        return replay(report);
    }
    let outcome = commands::run(&cli.command)?;
    let default = if matches!(cli.command, Command::Sweep(_)) {
        Format::Csv
    } else {
        Format::Json
    };
    let text = match cli.format.unwrap_or(default) {
        Format::Json => render_json(&cli.command, &outcome)?,
        Format::Csv => {
            let table = outcome
                .table
                .as_ref()
                .ok_or("CSV output is only available for single-table results")?;
            render_csv(table)?
        }
    };
    match &cli.output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(outcome.status)
}

fn render_json(cmd: &Command, outcome: &Outcome) -> Result<String, AnyError> {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let report = Report {
        header: Header {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: cmd.name().into(),
            config: cmd.clone(),
            timestamp,
        },
        body: outcome.body.clone(),
    };
    let mut s = serde_json::to_string_pretty(&report)?;
    s.push('\n');
    Ok(s)
}

fn render_csv(table: &Table) -> Result<String, AnyError> {
    let mut out = Vec::new();
    if let Some(limit) = table.limit {
        writeln!(out, "# limit: {limit}")?;
    }
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(&table.headers)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    drop(w);
    Ok(String::from_utf8(out)?)
}

/// Re-runs the embedded configuration; flags a body that no longer matches.
fn replay(path: &std::path::Path) -> Result<Status, AnyError> {
    let report: Report = serde_json::from_str(&fs::read_to_string(path)?)?;
    let outcome = commands::run(&report.header.config)?;
    let same = outcome.body == report.body;
    eprintln!(
        "{}: body {}",
        report.header.command,
        if same { "reproduced" } else { "differs" }
    );
    Ok(if same { Status::Ok } else { Status::Flagged })
}
