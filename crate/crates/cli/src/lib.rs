//! Text formats and subcommands of the `bbcert` tool.

pub mod cert_file;
pub mod commands;
pub mod matrix_file;
pub mod text;
pub mod transcript_file;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

pub use cert_file::{Certificate, CertificateFile};
pub use matrix_file::{MatrixBody, MatrixFile};
pub use text::FormatError;
pub use transcript_file::{parse_transcript, transcript_text};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Format(_) => EXIT_PARSE,
            _ => EXIT_USAGE,
        }
    }
}

macro_rules! compute_errors {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Compute(e.to_string())
            }
        })*
    };
}

compute_errors!(
    bbcert::band::BandError,
    bbcert::lowrank::LowRankError,
    bbcert::certify::CertifyError,
    bbcert::blackbox::BlackBoxError,
    bbcert::oracle::OracleError
);

impl From<bbcert::field::FieldError> for CliError {
    fn from(e: bbcert::field::FieldError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match commands::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match commands::execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
