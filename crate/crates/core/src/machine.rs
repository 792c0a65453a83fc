//! Machine files: JSON documents tagged by `"kind"`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dfao::{Dfao, DfaoFile};
use crate::error::Result;
use crate::morphic::{MorphicFile, MorphicSpec};
use crate::pda::{Dpao, DpaoFile};
use crate::source::SequenceSource;
use crate::words::Alphabet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MachineFile {
    Dfao(DfaoFile),
    Morphic(MorphicFile),
    /// Same schema as `morphic`; the machine size is derived.
    Tag(MorphicFile),
    Dpao(DpaoFile),
}

/// A validated machine of any kind.
#[derive(Clone, Debug)]
pub enum Machine {
    Dfao(Dfao),
    Morphic(MorphicSpec),
    Tag(MorphicSpec),
    Dpao(Dpao),
}

impl MachineFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("machine files serialize");
        s.push('\n');
        s
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MachineFile::Dfao(_) => "dfao",
            MachineFile::Morphic(_) => "morphic",
            MachineFile::Tag(_) => "tag",
            MachineFile::Dpao(_) => "dpao",
        }
    }

    pub fn build(&self) -> Result<Machine> {
        Ok(match self {
            MachineFile::Dfao(f) => Machine::Dfao(Dfao::from_file(f)?),
            MachineFile::Morphic(f) => Machine::Morphic(MorphicSpec::from_file(f)?),
            MachineFile::Tag(f) => Machine::Tag(MorphicSpec::from_file(f)?),
            MachineFile::Dpao(f) => Machine::Dpao(Dpao::from_file(f)?),
        })
    }
}

impl Machine {
    pub fn to_file(&self) -> MachineFile {
        match self {
            Machine::Dfao(m) => MachineFile::Dfao(m.to_file()),
            Machine::Morphic(m) => MachineFile::Morphic(m.to_file()),
            Machine::Tag(m) => MachineFile::Tag(m.to_file()),
            Machine::Dpao(m) => MachineFile::Dpao(m.to_file()),
        }
    }

    pub fn as_source(&self) -> &dyn SequenceSource {
        match self {
            Machine::Dfao(m) => m,
            Machine::Morphic(m) | Machine::Tag(m) => m,
            Machine::Dpao(m) => m,
        }
    }
}

/// `sha256:<hex>` of the compact JSON of `value` with `"kind"` added.
/// Object keys are sorted, so the hash does not depend on file layout.
pub fn canonical_hash<T: Serialize>(kind: &str, value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("machine files serialize");
    if let serde_json::Value::Object(map) = &mut v {
        map.insert("kind".into(), serde_json::Value::String(kind.into()));
    }
    let text = serde_json::to_string(&v).expect("json values serialize");
    format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())))
}

/// Sorted, deduplicated symbol names; names that are all integers sort numerically.
pub fn sorted_symbols<I: IntoIterator<Item = String>>(names: I) -> Vec<String> {
    let mut v: Vec<String> = names.into_iter().collect();
    v.sort_by(|a, b| match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => std::cmp::Ordering::Less,
        (Err(_), Ok(_)) => std::cmp::Ordering::Greater,
        _ => a.cmp(b),
    });
    v.dedup();
    v
}

/// Parses a word of symbol names: a JSON string of single-character names or
/// an array of names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SymbolWord {
    Text(String),
    Tokens(Vec<String>),
}

impl SymbolWord {
    pub fn resolve(&self, alphabet: &Alphabet) -> Result<Vec<u32>> {
        match self {
            SymbolWord::Text(s) => s
                .chars()
                .map(|c| alphabet.lookup(c.encode_utf8(&mut [0; 4])))
                .collect(),
            SymbolWord::Tokens(t) => t.iter().map(|n| alphabet.lookup(n)).collect(),
        }
    }

    pub fn write(alphabet: &Alphabet, word: &[u32]) -> Self {
        if alphabet.single_char() {
            SymbolWord::Text(word.iter().map(|&s| alphabet.name(s)).collect())
        } else {
            SymbolWord::Tokens(word.iter().map(|&s| alphabet.name(s).to_string()).collect())
        }
    }
}
