use std::fmt;

use thiserror::Error;

/// Errors raised by constructors, combinators and searches.
///
/// Verification failures are not errors; they are reported as [`Violation`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid adjacency c_{u} in Z^{dim}")]
    InvalidAdjacency { dim: usize, u: usize },
    #[error("point {0} is not in the image")]
    PointNotInImage(String),
    #[error("empty interval [{a}, {b}]")]
    EmptyInterval { a: i64, b: i64 },
    #[error("coordinate overflow")]
    Overflow,
    #[error("image mismatch: {0}")]
    ImageMismatch(String),
    #[error("map is not total: {0}")]
    NotTotal(String),
    #[error("not a subimage: {0}")]
    NotSubimage(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: usize },
    #[error("state cap exceeded after {visited} states (cap {cap})")]
    StateCapExceeded { visited: usize, cap: usize },
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("not a wedge: {0}")]
    NotAWedge(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// The first clause a witness or certificate fails, with a location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub clause: String,
    pub detail: String,
}

impl Violation {
    pub fn new(clause: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation { clause: clause.into(), detail: detail.into() }
    }

    /// Prefixes the clause with the name of an enclosing component.
    pub fn within(self, component: impl fmt::Display) -> Self {
        Violation { clause: format!("{component}: {}", self.clause), detail: self.detail }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.clause, self.detail)
    }
}

impl std::error::Error for Violation {}

/// Outcome of a verifier.
pub type Verdict = std::result::Result<(), Violation>;
