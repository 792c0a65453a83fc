use thiserror::Error;

/// Errors raised by machine validation, sequence generation and certificate checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid base {0}: a base must be at least 2")]
    InvalidBase(u64),

    #[error("digit {digit} is not valid in base {base}")]
    InvalidDigit { digit: u64, base: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient data: need {needed} symbols, have {available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("duplicate or empty symbol name {0:?}")]
    BadAlphabet(String),

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("unknown state {0:?}")]
    UnknownState(String),

    #[error("missing transition from state {state:?} on {input:?}")]
    MissingTransition { state: String, input: String },

    #[error("determinism conflict at state {state:?}, top {top:?}: {detail}")]
    DeterminismConflict {
        state: String,
        top: String,
        detail: String,
    },

    #[error("incomplete transition table at state {state:?}, top {top:?}: no move on digit {digit}")]
    Incomplete { state: String, top: String, digit: u32 },

    #[error("epsilon move at state {state:?}, top {top:?} is not decreasing: {detail}")]
    IncreasingEpsilon {
        state: String,
        top: String,
        detail: String,
    },

    #[error("output table has no entry for {0}")]
    MissingOutput(String),

    #[error("letter {0:?} is mapped to the empty word; erasing morphisms are not supported")]
    UnsupportedErasing(String),

    #[error("morphism is not prolongable on {letter:?}: {detail}")]
    NotProlongable { letter: String, detail: String },

    #[error("morphism is not uniform: {0}")]
    NotUniform(String),

    #[error("unsupported machine form: {0}")]
    UnsupportedForm(String),

    #[error("morphism does not have exponential growth")]
    NotExponential,

    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    #[error("power iteration did not converge after {iterations} iterations (gap {gap:e})")]
    NonConvergence { iterations: usize, gap: f64 },

    #[error("{0} is a perfect square; use a rational stream instead")]
    PerfectSquare(u64),

    #[error("alphabets are incompatible: {0}")]
    AlphabetMismatch(String),

    #[error("enumeration needs {required} candidate machines, above the cap of {cap}")]
    CapExceeded { required: u128, cap: u128 },

    #[error("pair is refuted at level {level}, offset {offset}: positions {left} and {right} differ")]
    Refutation {
        level: u32,
        offset: u64,
        left: u64,
        right: u64,
    },

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
