//! Repetition certificates for automatic, morphic and pushdown sequences.
//!
//! Machines (DFAOs, morphic generators, pushdown transducers) produce
//! infinite words; the library finds and checks prefixes of the form
//! `U V^alpha` whose ratio `|U V^alpha| / |U V|` stays above 1, together with
//! the exact digit oracles used to compare them against real numbers.

pub mod certify;
pub mod dfao;
pub mod error;
pub mod machine;
pub mod morphic;
pub mod numbers;
pub mod pda;
pub mod source;
pub mod tag;
pub mod words;

pub use certify::{
    certificate_from_pair, certify_dfao, certify_morphic, certify_pda, verify_certificate, Certificate,
    CertificateKind, VerificationReport,
};
pub use dfao::{validate_dfao, Dfao, DfaoFile, ValidationReport};
pub use error::{Error, Result};
pub use machine::{canonical_hash, Machine, MachineFile};
pub use morphic::{validate_morphic, MorphicFile, MorphicSpec, Morphism};
pub use numbers::{DigitStream, CfExpansion};
pub use pda::{validate_dpao, Dpao, DpaoFile, PairBudget, PairMethod, StackConfig};
pub use source::{SequenceSource, StoredPrefix};
pub use tag::{DilationEstimate, TagMachine};
pub use words::{Alphabet, PeriodCap, Ratio, RepetitionWitness, SequencePrefix, Word};
