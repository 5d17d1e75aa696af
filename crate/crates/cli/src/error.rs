use nagao_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0} identity violation(s)")]
    Identities(usize),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record file {path}: {detail}")]
    Records { path: String, detail: String },
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Process exit status: 2 for configuration problems, 3 for missing
    /// classification rules in strict mode, 4 for identity violations.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(Error::InvalidFamily(_) | Error::DegenerateFamily(_)) => 2,
            CliError::Core(Error::UnimplementedType(_)) => 3,
            CliError::Core(Error::IdentityViolation { .. }) | CliError::Identities(_) => 4,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
