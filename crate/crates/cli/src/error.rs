use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{violations} bound violation(s)")]
    Verification { violations: usize },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Verification { .. } => 2,
            CliError::Numeric(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<lipbound::Error> for CliError {
    fn from(e: lipbound::Error) -> Self {
        use lipbound::Error as E;
        match e {
            E::Evaluation { .. } | E::NonFinite(_) | E::Domain(_) | E::MissingDerivative(_) => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Io(io),
            other => CliError::Usage(format!("csv: {other:?}")),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
