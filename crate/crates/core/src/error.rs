use thiserror::Error;

/// Errors raised by the kernel, the backends and the construction engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain/codomain mismatch: {0}")]
    Mismatch(String),

    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("arrows are not parallel: {0}")]
    NotParallel(String),

    #[error("invalid object: {0}")]
    InvalidObject(String),

    #[error("invalid arrow: {0}")]
    InvalidArrow(String),

    #[error("the {backend} backend does not support {what}")]
    Capability { backend: &'static str, what: String },

    #[error("map does not merge witness pair #{index} of the quotient")]
    WitnessNotMerged { index: usize },

    #[error("cointersection of an empty family of quotients")]
    EmptyFamily,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// A statement that holds by construction failed; this signals a backend bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("size bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("not a morphism of pointed objects: {0}")]
    NotPointed(String),

    #[error("chain did not stabilize: {0}")]
    NotStabilized(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn capability(backend: &'static str, what: impl Into<String>) -> Self {
        Error::Capability {
            backend,
            what: what.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
