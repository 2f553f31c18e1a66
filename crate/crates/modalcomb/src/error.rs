use std::path::PathBuf;

/// Failure of a command, classified by exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{field}: {message}")]
    Config { field: String, message: String },

    #[error("{}: row {row}, column {column}: {message}", path.display())]
    Data {
        path: PathBuf,
        row: usize,
        column: String,
        message: String,
    },

    #[error(transparent)]
    Model(#[from] modalcomb_core::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type AppResult<T> = Result<T, AppError>;

impl AppError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        AppError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "config" => 2,
            "data" => 3,
            "sampler" => 4,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AppError::Config { .. } => "config",
            AppError::Data { .. } => "data",
            AppError::Io { .. } => "io",
            AppError::Model(e) => model_kind(e),
        }
    }
}

fn model_kind(e: &modalcomb_core::Error) -> &'static str {
    use modalcomb_core::Error as E;
    match e {
        E::Config(_) | E::Domain { .. } => "config",
        E::Dimension { .. } | E::NonFinite { .. } | E::AllMissing { .. } | E::Leakage { .. } => "data",
        E::Overflow { .. } | E::Initialization { .. } | E::Sampler { .. } => "sampler",
        E::Fold { source, .. } | E::Replicate { source, .. } => model_kind(source),
    }
}
