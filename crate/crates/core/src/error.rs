use thiserror::Error;

/// Errors produced by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precision mismatch: n = {left} vs n = {right}")]
    PrecisionMismatch { left: u32, right: u32 },

    #[error("precision n = {0} is outside the supported range 1..=62")]
    PrecisionOutOfRange(u32),

    #[error("qubit {qubit} out of range for a {count}-qubit register")]
    QubitOutOfRange { qubit: usize, count: usize },

    #[error("qubit {0} was consumed by an earlier entangling operation")]
    QubitConsumed(usize),

    #[error("ensemble probabilities sum to {0}, expected 1")]
    ProbabilitySum(f64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid subsystem {keep} for a {qubits}-qubit state")]
    InvalidSubsystem { keep: usize, qubits: usize },

    #[error(
        "message needs {needed} qubits but the public key has {available}; \
         ask the key owner to increase the length of her public key"
    )]
    MessageTooLong { needed: usize, available: usize },

    #[error("copy cap exhausted for key {key_id}: all {cap} copies issued")]
    CapExhausted { key_id: String, cap: u32 },

    #[error("unknown key id {0}")]
    UnknownKey(String),

    #[error("decryption device deactivated after {0} uses")]
    OracleDeactivated(u32),

    #[error("access denied: caller does not own this register")]
    AccessDenied,

    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
