//! Library side of the `hochcurve` binary: argument parsing, dispatch and
//! report rendering, kept separate so tests can drive it in-process.

pub mod args;
mod check;
mod commands;
pub mod golden;
pub mod report;

use hochcurve::poly::ParseError;

pub use args::{parse_args, AlgebraSpec, Caps, Command, Format, JobConfig, DEFAULT_SEED};
pub use commands::run;
pub use report::{Report, Table, REPORT_SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// `--help` or `--version` output; not a failure.
    #[error("{0}")]
    Help(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("usage: {flag}: {error}\n{}", error.caret(source_text))]
    Parse { flag: String, source_text: String, error: ParseError },
    #[error("{context}: {source}")]
    Domain {
        context: String,
        #[source]
        source: hochcurve::Error,
    },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub(crate) fn usage(flag: &str, message: impl std::fmt::Display) -> Self {
        CliError::Usage(format!("{flag}: {message}"))
    }

    pub(crate) fn domain(context: impl Into<String>) -> impl FnOnce(hochcurve::Error) -> Self {
        let context = context.into();
        move |source| CliError::Domain { context, source }
    }

    /// 0 for help output, 1 for domain and I/O errors, 2 for usage errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Domain { .. } | CliError::Io(_) => 1,
        }
    }
}
