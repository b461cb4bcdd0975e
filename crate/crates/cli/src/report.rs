use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::Format;

/// Errors that stop a command before it produces a report. Exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(e: impl ToString) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    /// An asserted invariant failed or two methods disagreed. Exit code 1.
    Fail,
}

/// Rendered output plus what goes to stderr.
#[derive(Debug, Clone)]
pub struct Report {
    pub body: String,
    pub status: Status,
    pub warnings: Vec<String>,
    pub failures: Vec<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

/// Collects findings while a command runs, then renders them.
pub struct Builder {
    subcommand: &'static str,
    seed: u64,
    config: Value,
    pub warnings: Vec<String>,
    pub failures: Vec<String>,
}

impl Builder {
    pub fn new(subcommand: &'static str, seed: u64, config: impl Serialize) -> Self {
        Self {
            subcommand,
            seed,
            config: serde_json::to_value(config).expect("configs serialize"),
            warnings: Vec::new(),
            failures: Vec::new(),
        }
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }

    /// Asserted check: a false `ok` fails the run.
    pub fn require(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.fail(msg());
        }
    }

    fn status(&self) -> Status {
        if self.failures.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn finish(self, format: Format, result: Value, csv: impl FnOnce() -> Table) -> Report {
        let status = self.status();
        let body = match format {
            Format::Json => {
                let doc = json!({
                    "tool": "derange",
                    "version": env!("CARGO_PKG_VERSION"),
                    "subcommand": self.subcommand,
                    "seed": self.seed,
                    "config": self.config,
                    "status": status,
                    "failures": self.failures,
                    "warnings": self.warnings,
                    "result": result,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("json renders");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = format!(
                    "# derange {} {} seed={}\n",
                    env!("CARGO_PKG_VERSION"),
                    self.subcommand,
                    self.seed
                );
                s.push_str(&csv().render());
                s
            }
        };
        Report {
            body,
            status,
            warnings: self.warnings,
            failures: self.failures,
        }
    }
}

/// Header plus string rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: ToString>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|c| c.to_string()).collect());
    }

    pub fn render(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}
