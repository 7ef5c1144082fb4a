use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates from its conjugate by {deviation:.3e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("operator is not positive semidefinite: minimum eigenvalue {0:.3e}")]
    NotPositive(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("dimension {total} does not factor as {dim_a} x {dim_b}")]
    Factorization { total: usize, dim_a: usize, dim_b: usize },

    #[error("states do not commute: commutator Frobenius norm {0:.3e}")]
    NotCommuting(f64),

    #[error("degenerate Jordan split: states coincide (trace distance {0:.3e})")]
    DegenerateSplit(f64),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("energy {energy} outside the attainable range [{min}, {max})")]
    EnergyOutOfRange { energy: f64, min: f64, max: f64 },

    #[error("truncation at {levels} levels leaves tail mass {tail_mass:.3e}; a longer spectrum is needed")]
    Truncation { levels: usize, tail_mass: f64 },

    #[error("precondition `{0}` violated")]
    Precondition(String),

    #[error("sample generation failed: {0}")]
    Generation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error at {path}: {cause}")]
    Io { path: String, cause: String },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        name,
        reason: reason.into(),
    }
}
