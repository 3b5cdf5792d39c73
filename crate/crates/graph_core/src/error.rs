use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
