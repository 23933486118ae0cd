use thiserror::Error;

/// Failures raised by the numerical library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The input carries no usable information (zero vector, empty mixture).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    /// Shapes, qubit counts or labels do not fit together.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// A family parameter lies outside its admissible range.
    #[error("parameter out of range: {0}")]
    Param(String),
    /// A quantity that must be real or bounded is not, within tolerance.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
