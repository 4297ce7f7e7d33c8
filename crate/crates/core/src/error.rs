use thiserror::Error;

/// Errors surfaced by the library.
///
/// Precondition violations are reported as typed variants rather than panics
/// so that CLI drivers can map them to exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("prime {p} exceeds the loaded eigenvalue range (limit {limit})")]
    MissingCoefficient { p: u64, limit: u64 },

    #[error("prime {p} divides the discriminant of the model; bad reduction data unavailable")]
    BadReductionPrime { p: u64 },

    #[error("truncation budget exceeded: need {needed} coefficients, limit {limit}")]
    TruncationBudget { needed: u64, limit: u64 },

    #[error("quadrature failed to converge: {0}")]
    QuadratureNonConvergence(String),

    #[error("numerical contract violated: {0}")]
    ContractViolation(String),

    #[error("coefficient file malformed: {0}")]
    CoefficientFile(String),

    #[error("invariant record for {0} not found")]
    InvariantNotFound(String),

    #[error("invariant record malformed: field `{field}`: {reason}")]
    InvariantSchema { field: String, reason: String },

    #[error("missing invariants for proxy assembly: {0:?}")]
    MissingInvariants(Vec<&'static str>),

    #[error("remote fetch failed: {0}")]
    RemoteFetch(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
