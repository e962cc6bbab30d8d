use std::fs;
use std::io::{self, Write};
use std::path::Path;

use padic_spectra::Error;
use serde_json::{json, Value};

use crate::config::{Format, OutputArgs};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_HEARING_MISMATCH: i32 = 3;

pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
    pub exit: i32,
}

impl Report {
    pub fn json(json: Value) -> Self {
        Self { json, table: None, exit: 0 }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn precondition(message: impl Into<String>) -> Self {
        Self { code: "precondition", message: message.into(), exit: EXIT_PRECONDITION }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": { "code": self.code, "message": self.message } })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::Precondition(_)
            | Error::HypothesisViolated(_)
            | Error::DisconnectedNerve(_)
            | Error::Parse(_)
            | Error::NotIntegral(_)
            | Error::NotInvertible => EXIT_PRECONDITION,
            Error::NoMatch { .. } | Error::Ambiguous { .. } => EXIT_HEARING_MISMATCH,
            _ => EXIT_FAILURE,
        };
        Self { code: e.code(), message: e.to_string(), exit }
    }
}

fn render(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut bytes = serde_json::to_vec_pretty(&report.json).expect("serializable report");
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => {
            let table = report
                .table
                .as_ref()
                .ok_or_else(|| CliError::precondition("this command has no tabular output; use --format json"))?;
            let mut writer = csv::Writer::from_writer(Vec::new());
            let io_err = |e: csv::Error| CliError { code: "io", message: e.to_string(), exit: EXIT_FAILURE };
            writer.write_record(&table.headers).map_err(io_err)?;
            for row in &table.rows {
                writer.write_record(row).map_err(io_err)?;
            }
            writer.into_inner().map_err(|e| CliError { code: "io", message: e.to_string(), exit: EXIT_FAILURE })
        }
    }
}

pub fn emit(report: &Report, out: &OutputArgs) -> Result<(), CliError> {
    let bytes = render(report, out.format)?;
    let io_err = |path: &Path, e: io::Error| CliError {
        code: "io",
        message: format!("{}: {e}", path.display()),
        exit: EXIT_FAILURE,
    };
    match &out.output {
        Some(path) => fs::write(path, &bytes).map_err(|e| io_err(path, e)),
        None => io::stdout().write_all(&bytes).map_err(|e| io_err(Path::new("<stdout>"), e)),
    }
}
