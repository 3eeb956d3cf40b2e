use thiserror::Error;

use crate::scalars::Field;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("operation needs an exact backend")]
    BackendMismatch,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("polynomial has degree 0 and therefore no roots")]
    ZeroDegree,
    #[error("root iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("field mismatch: object over {expected} received data over {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("empty basis")]
    EmptyBasis,
    #[error("stream exhausted: ambient index bound {max_index} reached")]
    StreamExhausted { max_index: usize },
    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,
    #[error("seed basis is linearly dependent")]
    DependentSeed,
    #[error("seed is not in the zero set: coefficient {coefficient} at {monomial}")]
    SeedNotInZeroSet { monomial: String, coefficient: String },
    #[error("point is not a zero of the polynomial: value {value}")]
    PointNotAZero { value: String },
    #[error("no real zero found: {diagnosis} ({detail})")]
    NoRealZero { diagnosis: String, detail: String },
    #[error("zero search exhausted its budget")]
    BudgetExhausted,
    #[error("complex zero finder called on a real polynomial")]
    RealFieldRejected,
    #[error("vanishing-subspace recursion exceeded depth {depth}")]
    DepthExceeded { depth: usize },
    #[error("internal check failed: {0}")]
    CheckFailed(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("step {step}{}: {source}", context.as_ref().map(|c| format!(" ({c})")).unwrap_or_default())]
    AtStep {
        step: usize,
        context: Option<String>,
        source: Box<Error>,
    },
    #[error("polynomial #{index}: {source}")]
    InPolynomial { index: usize, source: Box<Error> },
}

/// Coarse classification used by the command line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed or precondition-violating input.
    Input,
    /// The engine's pathways cannot produce the requested object.
    Mathematical,
}

impl Error {
    pub fn at_step(self, step: usize, context: Option<String>) -> Error {
        Error::AtStep { step, context, source: Box::new(self) }
    }

    pub fn in_polynomial(self, index: usize) -> Error {
        Error::InPolynomial { index, source: Box::new(self) }
    }

    /// The innermost error, with step and polynomial tags stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStep { source, .. } | Error::InPolynomial { source, .. } => source.root(),
            e => e,
        }
    }

    /// Stable machine-readable name.
    pub fn name(&self) -> &'static str {
        match self.root() {
            Error::BackendMismatch => "BackendMismatch",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::ZeroDegree => "ZeroDegree",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::FieldMismatch { .. } => "FieldMismatch",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::EmptyBasis => "EmptyBasis",
            Error::StreamExhausted { .. } => "StreamExhausted",
            Error::ZeroVector => "ZeroVector",
            Error::DependentSeed => "DependentSeed",
            Error::SeedNotInZeroSet { .. } => "SeedNotInZeroSet",
            Error::PointNotAZero { .. } => "PointNotAZero",
            Error::NoRealZero { .. } => "NoRealZero",
            Error::BudgetExhausted => "BudgetExhausted",
            Error::RealFieldRejected => "RealFieldRejected",
            Error::DepthExceeded { .. } => "DepthExceeded",
            Error::CheckFailed(_) => "CheckFailed",
            Error::InvalidPolynomial(_) => "InvalidPolynomial",
            Error::InvalidInput(_) => "InvalidInput",
            Error::AtStep { .. } | Error::InPolynomial { .. } => unreachable!(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self.root() {
            Error::NoConvergence { .. }
            | Error::StreamExhausted { .. }
            | Error::NoRealZero { .. }
            | Error::BudgetExhausted
            | Error::DepthExceeded { .. }
            | Error::CheckFailed(_) => ErrorClass::Mathematical,
            _ => ErrorClass::Input,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
