use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("resource limit exceeded: {what} is {size}, cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("weight of variable {var} must be positive")]
    NonPositiveWeight { var: String },
    #[error("the relations are not quasi-homogeneous for any positive weights")]
    NotGraded,
    #[error("relation is not monic in `{var}`")]
    NotMonic { var: String },
    #[error("polynomial is not in normal form: {reason}")]
    NotNormalForm { reason: String },
    #[error("degree mismatch: expected {expected}, got {actual}")]
    DegreeMismatch { expected: usize, actual: usize },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a regular sequence: f_{k} is a zero divisor in internal degree {degree}")]
    NotRegularSequence { k: usize, degree: i64 },
    #[error("singularity is not isolated; Harr^2 is infinite-dimensional")]
    NotIsolated,
    #[error("associativity identity fails at order {order}: {detail}")]
    AssociativityFailure { order: usize, detail: String },
}
