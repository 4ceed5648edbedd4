use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("scene {path}: {message}")]
    SceneParse { path: String, message: String },
    #[error("{stanza}: {source}")]
    Core {
        stanza: String,
        #[source]
        source: dicrit_core::Error,
    },
    #[error("{stanza}: {source}")]
    Germ {
        stanza: String,
        #[source]
        source: dicrit_germ::error::Error,
    },
    #[error("{0}")]
    Input(String),
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const UNSUPPORTED: i32 = 3;
}

impl CliError {
    pub fn core(stanza: &str, source: dicrit_core::Error) -> Self {
        CliError::Core { stanza: stanza.to_string(), source }
    }

    pub fn germ(stanza: &str, source: dicrit_germ::error::Error) -> Self {
        match source {
            dicrit_germ::error::Error::Core(e) => CliError::core(stanza, e),
            source => CliError::Germ { stanza: stanza.to_string(), source },
        }
    }

    pub fn exit_code(&self) -> i32 {
        use dicrit_germ::error::Error as G;
        match self {
            CliError::Core { source: dicrit_core::Error::PathMismatch { .. }, .. } => exit::VIOLATION,
            CliError::Germ { source: G::OracleMismatch(_), .. } => exit::VIOLATION,
            CliError::Germ {
                source: G::ExtensionDegreeExceeded { .. } | G::Unsupported(_) | G::CandidateUncertified(_),
                ..
            } => exit::UNSUPPORTED,
            _ => exit::INPUT,
        }
    }
}
