use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wavelet index {index} invalid: {reason}")]
    InvalidIndex { index: usize, reason: String },

    #[error("point {x} outside the admissible interval {interval}")]
    OutOfDomain { x: f64, interval: &'static str },

    #[error("derivative order {0} not supported (expected 0, 1 or 2)")]
    InvalidOrder(u8),

    #[error("matrix is singular: pivot in column {column} has magnitude {magnitude:e}")]
    SingularMatrix { column: usize, magnitude: f64 },

    #[error("linear system contains a non-finite entry")]
    NonFiniteInput,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{function} evaluated to a non-finite value at x = {x}")]
    NonFiniteEvaluation { x: f64, function: &'static str },

    #[error("iterate value y = {y} at x = {x} rejected by the domain guard")]
    DomainViolation { x: f64, y: f64 },

    #[error("invalid boundary condition: {0}")]
    InvalidBc(String),

    #[error("problem condition violated: {0}")]
    ConditionViolated(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("quasilinearization sweep {iteration}: {source}")]
    Sweep {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("Green's kernel unavailable: {0}")]
    UnavailableKernel(String),

    #[error("quadrature produced a non-finite value at t = {t}")]
    QuadratureNonFinite { t: f64 },

    #[error("unknown benchmark case {0} (expected 1..=8)")]
    UnknownCase(u32),

    #[error("benchmark case {0} has no closed-form solution")]
    NoExactSolution(u32),

    #[error("line {line}, field `{field}`: {message}")]
    Parse { line: usize, field: String, message: String },

    #[error("required key `{0}` missing")]
    MissingKey(String),
}

impl Error {
    /// Strips any [`Error::Sweep`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Sweep { source, .. } => source.root(),
            other => other,
        }
    }
}
