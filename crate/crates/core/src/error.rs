use thiserror::Error;

/// Errors raised by the word, series and order machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Two distinct elements still had identical expansions at the degree cap.
    #[error("comparison undecided: expansions agree up to degree cap {cap}")]
    UndecidedAtCap { cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("generators belong to different families (first indices {0} and {1})")]
    MismatchedFamily(u32, u32),

    #[error("series is not a unit: constant coefficient is {0}, expected 1")]
    NotUnit(String),

    #[error("map is not trivial on H1 at generator {0}")]
    NotH1Trivial(String),

    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
