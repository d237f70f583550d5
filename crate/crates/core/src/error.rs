use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not an exact complex number: {0:?}")]
    Scalar(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("unknown pole label {0:?}")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("operands belong to different alphabets")]
    AlphabetMismatch,
    #[error("operands live on different pole sets")]
    PoleSetMismatch,
    #[error("pole set contains the point {0} twice")]
    RepeatedPole(String),
    #[error("pole set is empty")]
    EmptyPoleSet,
    #[error("evaluation at the pole {0}")]
    AtPole(String),
    #[error("differential has a nonzero residue and no rational antiderivative")]
    NotExact,
    #[error("pole set must contain 0 for regularization at 0")]
    MissingZero,
    #[error("word ending in the letter of 1 diverges at 1")]
    DivergentWord,
    #[error("right argument of the kernel map contains the empty word")]
    NotAugmented,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("infeasible loop: {0}")]
    InfeasibleLoop(String),
    #[error("path is not contiguous at segment {0}")]
    BrokenPath(usize),

    #[error("path comes within {distance:e} of a pole (guard {guard:e})")]
    TooCloseToPole { distance: f64, guard: f64 },
    #[error("integrator exhausted {0} steps")]
    StepLimit(usize),
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("point {0} lies outside the expansion disk")]
    OutsideDisk(String),
    #[error("log degree {found} exceeds requested bound {bound}")]
    LogDegree { found: usize, bound: usize },
    #[error("constant matching residual {0:e} above tolerance")]
    MatchingFailed(f64),
}

impl Error {
    /// Process exit status used by the command-line front end:
    /// 1 malformed input, 2 domain error, 3 numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Config(_) => 1,
            Error::TooCloseToPole { .. }
            | Error::StepLimit(_)
            | Error::StepUnderflow(_)
            | Error::MatchingFailed(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
