use thiserror::Error;

/// Everything that can go wrong across the toolkit.
///
/// Variants split roughly into three bands: malformed input (shape or
/// signature problems detectable before any mathematics runs), search or
/// enumeration limits, and semantic failures where well-formed data turns out
/// not to satisfy the laws a construction depends on.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed backend: {0}")]
    MalformedBackend(String),

    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),

    #[error("arity mismatch for `{symbol}`: expected {expected}, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("element {0} is not in the required kernel")]
    NotInKernel(String),

    #[error("source/target mismatch: {0}")]
    SourceTargetMismatch(String),

    #[error("operation requires a crossed module but target is only precrossed")]
    PrecrossedTarget,

    #[error("homotopies do not meet end to end: {0}")]
    MiddleMismatch(String),

    #[error("internal theorem violation: {0}")]
    InternalTheoremViolation(String),

    #[error("Moore complex is longer than permitted: {0}")]
    MooreTooLong(String),

    #[error("simplicial identities fail: {0}")]
    NotSimplicial(String),

    #[error("map restriction leaves the kernel: {0}")]
    RestrictionEscapesKernel(String),

    #[error("level mismatch: {0}")]
    LevelMismatch(String),

    #[error("algebra kind mismatch: {0}")]
    KindMismatch(String),

    #[error("map is not additive: {0}")]
    NotLinear(String),

    #[error("construction requires characteristic different from two")]
    CharTwo,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
