use thiserror::Error;

/// Errors produced by graph construction, game play, solving and auditing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("graph has an isolated vertex {0}; the game needs an isolate-free graph")]
    IsolatedVertex(usize),

    #[error("vertex {vertex} cannot be played: {reason}")]
    IllegalMove { vertex: usize, reason: String },

    #[error("no legal move: the game is over")]
    NoMove,

    #[error("graph with {n} vertices exceeds {what} cap {cap}")]
    Resource { what: &'static str, n: usize, cap: usize },

    #[error("claim {claim} violated: {detail}")]
    ClaimViolation {
        claim: String,
        detail: String,
        snapshot: String,
    },

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("transcript does not match graph: {0}")]
    Input(String),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
