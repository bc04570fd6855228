use thiserror::Error;

/// Errors produced anywhere in the detection toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("variance must be non-negative, got {0}")]
    NegativeVariance(f64),

    #[error("power must be non-negative, got {0} mW")]
    NegativePower(f64),

    #[error("invalid user count {0}: at least one user is required")]
    InvalidUserCount(usize),

    #[error("invalid deployment: {0}")]
    InvalidDeployment(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("qubit values must be 0 or 1, found {0}")]
    InvalidQubit(u8),

    #[error("({re}, {im}) is not a constellation point")]
    NotAConstellationPoint { re: f64, im: f64 },

    #[error("unknown modulation scheme `{0}` (expected bpsk, qpsk, qam16 or qam64)")]
    UnknownScheme(String),

    #[error("unknown decoder `{0}` (expected bf, sic or qa)")]
    UnknownDecoder(String),

    #[error("no closed-form QUBO builder exists for {0}")]
    NoClosedForm(&'static str),

    #[error("instance too large: {evaluations} candidate evaluations exceed the limit of {limit}")]
    InstanceTooLarge { evaluations: u128, limit: u64 },

    #[error("too many qubits for exhaustive search: {m} > {max}")]
    TooManyQubits { m: usize, max: usize },

    #[error("invalid annealing parameters: {0}")]
    InvalidAnnealParams(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("failed to parse configuration: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
