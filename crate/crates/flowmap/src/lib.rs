//! File formats, parallel drivers, SVG charts and the command line for
//! `flowmap-core`.

pub mod cli;
pub mod csv;
pub mod json;
pub mod par;
pub mod provenance;
pub mod svg;

pub use cli::run;

/// Failure of a command, split by exit status.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input (exit 1).
    Input(String),
    /// A solver or fit found no answer (exit 2).
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Solver(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Solver(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<flowmap_core::Error> for CliError {
    fn from(e: flowmap_core::Error) -> Self {
        use flowmap_core::Error as E;
        match e {
            E::NoPseudothreshold { .. } | E::NotConverged { .. } | E::Fit(_) => {
                CliError::Solver(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
