//! Scenario runner for the jamming secrecy analysis library.

pub mod builtin;
pub mod engine;
pub mod scenario;
pub mod table;

use std::path::Path;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use engine::{run, RunOptions, RunOutput};
pub use scenario::{Diagnostic, Scenario};
pub use table::{Cell, Format, Metadata, ResultTable};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VALIDATION: u8 = 1;
    pub const NUMERICAL: u8 = 2;
    pub const IO: u8 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{} validation error(s)", .0.len())]
    Validation(Vec<Diagnostic>),
    #[error("{} cell(s) failed to evaluate", .0.len())]
    Numerical(Vec<Diagnostic>),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Numerical(_) => exit::NUMERICAL,
            CliError::Io(_) => exit::IO,
        }
    }
}

/// Scenario text together with where it came from.
#[derive(Debug, Clone)]
pub struct Source {
    pub text: String,
}

impl Source {
    /// Resolves a built-in scenario name or reads a file.
    pub fn load(reference: &str) -> Result<Self, CliError> {
        if let Some(b) = builtin::builtin(reference) {
            return Ok(Source { text: b.text.to_string() });
        }
        let path = Path::new(reference);
        std::fs::read_to_string(path)
            .map(|text| Source { text })
            .map_err(|e| CliError::Io(format!("cannot read scenario {reference:?}: {e} (built-ins: fig2, fig3, fig4, fig5)")))
    }

    pub fn sha256(&self) -> String {
        hex::encode(Sha256::digest(self.text.as_bytes()))
    }

    pub fn parse(&self) -> Result<Scenario, CliError> {
        Scenario::parse(&self.text).map_err(CliError::Validation)
    }
}

/// Loads, validates and runs a scenario.
pub fn run_scenario(reference: &str, options: &RunOptions) -> Result<RunOutput, CliError> {
    let source = Source::load(reference)?;
    let scenario = options.apply(&source.parse()?);
    let mut diags = Vec::new();
    if scenario.trials == 0 {
        diags.push(Diagnostic { field: "--trials".into(), message: "must be >= 1".into() });
    }
    if let Some(msg) = options.at.and_then(|x| scenario.sweep.axis.check_value(x)) {
        diags.push(Diagnostic { field: "--at".into(), message: msg });
    }
    if !diags.is_empty() {
        return Err(CliError::Validation(diags));
    }
    Ok(run(&scenario, &source.sha256()))
}

/// Writes `table` to `out`, or to stdout when `out` is `None`.
pub fn emit(table: &ResultTable, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let text = table.to_string(format).map_err(|e| CliError::Io(e.to_string()))?;
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
