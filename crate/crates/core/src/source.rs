//! Deterministic, restartable producers of infinite symbol sequences.

use crate::error::{Error, Result};
use crate::words::{Alphabet, SequencePrefix};

/// A source of an infinite word. Asking for a longer prefix never changes
/// the symbols already produced.
pub trait SequenceSource {
    /// Stable identifier, used to bind certificates to their source.
    fn id(&self) -> String;

    fn alphabet(&self) -> Alphabet;

    /// The integer index carried by position 1 of every prefix.
    fn first_index(&self) -> u64 {
        0
    }

    fn prefix(&self, len: usize) -> Result<SequencePrefix>;
}

/// A finite, already materialized prefix used as a source; asking for more
/// symbols than it holds is an insufficient-data error.
#[derive(Clone, Debug)]
pub struct StoredPrefix(pub SequencePrefix);

impl SequenceSource for StoredPrefix {
    fn id(&self) -> String {
        self.0.source.clone()
    }

    fn alphabet(&self) -> Alphabet {
        self.0.alphabet.clone()
    }

    fn first_index(&self) -> u64 {
        self.0.first_index
    }

    fn prefix(&self, len: usize) -> Result<SequencePrefix> {
        if len > self.0.len() {
            return Err(Error::InsufficientData {
                needed: len,
                available: self.0.len(),
            });
        }
        let mut p = self.0.clone();
        p.data.0.truncate(len);
        Ok(p)
    }
}
