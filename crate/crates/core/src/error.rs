//! Error types shared across the engine.

use thiserror::Error;

/// Errors surfaced by engine operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    /// The rewrite-step budget was exhausted while normalizing a term,
    /// which signals a non-terminating user theory.
    #[error("rewrite-step budget exceeded ({0} steps): the rewrite system does not appear to terminate")]
    RewriteBudget(usize),

    /// A recipe mentions a handle that the frame does not bind.
    #[error("recipe handle {0} is outside the frame domain")]
    HandleOutsideDomain(String),

    /// Two frames were expected to share a domain and do not.
    #[error("frame domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),

    /// A symbolic action's input counter or output index does not match the state.
    #[error("symbolic action index precondition violated: {0}")]
    IndexPrecondition(String),

    /// An independence query was asked about a non-executable action.
    #[error("action {0} is not executable in the given state")]
    NotExecutable(String),

    /// A substitution does not have the domain required of a solution candidate.
    #[error("ill-formed second-order substitution: {0}")]
    IllFormedSolution(String),

    /// The enabled cover of a state is empty where an action set was required.
    #[error("enabled cover is empty")]
    EmptyEnabledCover,

    /// An exploration hit its resource ceiling.
    #[error("exploration budget exceeded ({0})")]
    Budget(String),

    /// Kernel-level misuse (explicit LTS module).
    #[error("{0}")]
    Kernel(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;

/// A parse error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}
