use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("qubit {0} appears more than once in the target list")]
    DuplicateTarget(usize),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("sampled measurement branch has probability {0:e}")]
    ImprobableBranch(f64),
    #[error("matrix is not a single-qubit Clifford")]
    NotClifford,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported gate: {0}")]
    UnsupportedGate(String),
    #[error("polynomial has {poly} coefficients but {vars} variables were supplied")]
    LengthMismatch { poly: usize, vars: usize },
    #[error("reveal index {index} out of range for {m} variables")]
    RevealOutOfRange { index: usize, m: usize },
    #[error("one-time table {0} was already consumed")]
    TableReuse(u64),
    #[error("one-time tables exhausted: needed {needed}, {available} available")]
    TableShortfall { needed: usize, available: usize },
    #[error("homomorphic scheme failure: {0}")]
    Scheme(String),
    #[error("slot {slot} is scheduled on qubit {expected}, not {got}")]
    SlotMismatch {
        slot: usize,
        expected: usize,
        got: usize,
    },
    #[error("unknown slot {0}")]
    UnknownSlot(usize),
    #[error("{0} slot outcomes have not been incorporated yet")]
    PendingOutcomes(usize),
    #[error("input state is inconsistent with input class {0}")]
    InputClassMismatch(&'static str),
    #[error("unexpected message: expected {expected}, got {got}")]
    UnexpectedMessage { expected: String, got: String },
    #[error("no message waiting for {0}")]
    ChannelEmpty(&'static str),
    #[error("post-selection probability {0:e} is too small")]
    PostselectionTooSmall(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
