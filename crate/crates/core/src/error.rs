use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input text (JSON or presentation grammar).
    #[error("syntax error: {0}")]
    Syntax(String),

    /// Input parsed but violates a structural invariant.
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),

    #[error("invalid characteristic map: {0}")]
    InvalidCharMap(String),

    #[error("invalid vertex order: {0}")]
    InvalidOrder(String),

    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("{what} id {id} out of range (have {len})")]
    OutOfRange { what: &'static str, id: usize, len: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search failed: {0}")]
    SearchFailed(String),

    /// A word exceeded the configured length cap.
    #[error("word growth cap exceeded: relator of length {len} > {cap}")]
    WordGrowth { len: usize, cap: usize },

    #[error("assignment cap exceeded: more than {cap} assignments")]
    CapExceeded { cap: u64 },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// An internal cross-check failed; indicates a bug rather than bad input.
    #[error("post-check failed: {0}")]
    PostCheck(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than an internal
    /// consistency failure.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::PostCheck(_) | Error::SearchFailed(_))
    }
}
