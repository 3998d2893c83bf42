use thiserror::Error;

/// Which channel invariant a candidate Choi matrix violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CptpProperty {
    HermiticityPreserving,
    CompletelyPositive,
    TracePreserving,
}

impl std::fmt::Display for CptpProperty {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CptpProperty::HermiticityPreserving => "hermiticity preservation",
            CptpProperty::CompletelyPositive => "complete positivity",
            CptpProperty::TracePreserving => "trace preservation",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NonHermitianInput(f64),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix has a negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    #[error("trace {0} is not 1")]
    BadTrace(f64),

    #[error("operator is not an effect: {0}")]
    NotAnEffect(String),

    #[error("invalid probability vector: {0}")]
    BadProbabilityVector(String),

    #[error("renormalising functional gave a non-positive value {0}")]
    NonpositiveScalar(f64),

    #[error("evidence has zero total likelihood")]
    ZeroEvidence,

    #[error("outcome has probability {0:e}, below the rank cutoff")]
    ZeroProbability(f64),

    #[error("first argument is not below the second in the order")]
    NotBelow,

    #[error("support of the target is not contained in the support of the prior")]
    SupportViolation,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid Renyi order alpha = {0}")]
    BadAlpha(f64),

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    #[error("sequence is not increasing at position {0}")]
    NotAChain(usize),

    #[error("sequence has not converged (last step {0:e})")]
    NotConverged(f64),

    #[error("map is not CPTP: {property} fails (slack {slack:e})")]
    NotCptp { property: CptpProperty, slack: f64 },

    #[error("random draw was degenerate: {0}")]
    DegenerateDraw(String),

    #[error("search budget of {0} trials exhausted")]
    SearchBudgetExhausted(usize),

    #[error("the Choi and complete-positivity routes disagree ({0})")]
    RouteMismatch(String),

    #[error("invalid document: {0}")]
    InvalidDocument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
