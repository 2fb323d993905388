use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("window entries {a} and {b} are congruent mod {n}")]
    ResidueClash { n: usize, a: i64, b: i64 },
    #[error("window displacement sum {sum} is not divisible by n = {n}")]
    SumNotDivisible { n: usize, sum: i64 },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: i64, n: usize },
    #[error("length budget exceeded: {got} > {limit}")]
    LimitExceeded { got: usize, limit: usize },
    #[error("h-coefficient has q-degree {deg} above a(v) = {a}; this signals a bug")]
    DegreeViolation { deg: i64, a: i64 },
    #[error("element is not in the star domain for {{s_{i}, s_{next}}}")]
    NotInStarDomain { i: i64, next: i64 },
    #[error("star operations need rank >= 3, got {0}")]
    RankTooSmall(usize),
    #[error("sequence is not admissible: {0}")]
    NotAdmissible(String),
    #[error("element is not in the canonical intersection for lambda = {0}")]
    NotMember(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("weight class {0} is not weakly decreasing")]
    NotDominant(usize),
    #[error("subset of {{1,..,n-1}} must be nonempty")]
    EmptySubset,
    #[error("group shape mismatch")]
    ShapeMismatch,
    #[error("vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("degree must be nonnegative, got {0}")]
    NegativeDegree(i64),
    #[error("weight sum {0} is nonzero; element is outside the sum-zero subring")]
    NotInSubring(i64),
    #[error("chain oracle did not converge by representative width {0}")]
    NonConvergence(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
