use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input exceeds a size guard that keeps exhaustive search honest.
    #[error("{what} limited to {limit}, got {actual}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    /// A graph that must be connected is not.
    #[error("{role} must be connected")]
    Disconnected { role: &'static str },

    /// Component lists must be pairwise non-isomorphic.
    #[error("components must be pairwise non-isomorphic")]
    DuplicateComponents,

    /// An operation required a uniquely decomposable gluing.
    #[error("graph is not uniquely decomposable (s = {s})")]
    NotUniquelyDecomposable { s: u64 },

    /// Inputs outside the supported fragment of the theory.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A malformed argument (bad vertex index, empty set, and so on).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Histogram and distribution disagree on the modulus.
    #[error("modulus mismatch: histogram uses q = {histogram}, distribution uses q = {spec}")]
    ModulusMismatch { histogram: usize, spec: usize },

    /// A bad experiment configuration.
    #[error("invalid experiment config: {0}")]
    Config(String),

    /// Text input that does not parse as a graph.
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    /// An internal cross-check failed; indicates a bug, not bad input.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
