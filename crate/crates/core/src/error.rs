use thiserror::Error;

/// Errors raised by the solvency pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A CSV cell could not be turned into a dataset value.
    #[error("row {row}, column `{column}`: {message}")]
    Ingestion {
        /// 1-based data row (the header is row 0).
        row: usize,
        column: String,
        message: String,
    },

    /// Attribute names or class orderings of two artifacts do not line up.
    #[error("schema mismatch: {0}")]
    Schema(String),

    /// Resampling was asked to give weight to a class with no instances.
    #[error("class `{0}` has no instances but was given a positive sampling weight")]
    EmptyClass(String),

    #[error("model error: {0}")]
    Model(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by bad input data or arguments, as opposed to
    /// runtime failures.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_)
                | Error::Ingestion { .. }
                | Error::Schema(_)
                | Error::EmptyClass(_)
                | Error::Csv(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
