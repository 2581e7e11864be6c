use thiserror::Error;

/// Errors produced by the library. Domain violations (bad input, guard
/// overruns) are distinguished from internal consistency failures, which
/// indicate a bug in a construction rather than bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Coxeter type {family}{rank}: {reason}")]
    InvalidType {
        family: char,
        rank: usize,
        reason: String,
    },

    #[error("not a root of {system}: {vector:?}")]
    NotARoot { system: String, vector: Vec<i64> },

    #[error("set is not contained in the ambient set")]
    NotInAmbient,

    #[error("subset is not contained in the superset")]
    NotNested,

    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("({pi1:?}, {pi2:?}) is not an orthogonal pair of simple subsets")]
    NotOrthogonal {
        pi1: Vec<Vec<i64>>,
        pi2: Vec<Vec<i64>>,
    },

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("inadmissible pair at step {step}")]
    InadmissiblePair { step: usize },

    #[error("word contains a letter other than '0'/'1'")]
    BadAlphabet,

    #[error("word {word} is not a trimmed Dyck word for rank {rank}")]
    NotTrimmed { word: String, rank: usize },

    #[error("index {0} is not insertable for this signature")]
    NotInsertable(usize),

    #[error("block already assigned at index {0}")]
    BlockAlreadyAssigned(usize),

    #[error("level bound {given} below required floor {floor}")]
    LevelBoundTooLow { given: u32, floor: u32 },

    #[error("order synthesis stuck at step {step} after {emitted} emissions: no admissible next root")]
    SynthesisStuck { step: usize, emitted: usize },

    #[error("constructed order failed verification: {0}")]
    VerificationFailed(String),

    #[error("unknown suite '{0}'")]
    UnknownSuite(String),

    #[error("{0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
