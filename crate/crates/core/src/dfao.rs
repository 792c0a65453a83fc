//! Deterministic finite automata with output reading base-k expansions
//! most-significant digit first.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::{canonical_hash, sorted_symbols};
use crate::source::SequenceSource;
use crate::words::{encode_base_k, Alphabet, SequencePrefix};

/// JSON form of a DFAO (`"kind": "dfao"`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DfaoFile {
    pub k: u32,
    pub states: Vec<String>,
    pub initial: String,
    pub delta: BTreeMap<String, BTreeMap<String, String>>,
    pub output: BTreeMap<String, String>,
}

/// Non-fatal findings from validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfao {
    k: u32,
    states: Alphabet,
    initial: u32,
    /// `delta[q * k + d]`
    delta: Vec<u32>,
    outputs: Alphabet,
    tau: Vec<u32>,
}

impl Dfao {
    /// Builds a machine from raw tables. `delta[q][d]` is the target of state
    /// `q` on digit `d`; `tau[q]` indexes into `outputs`.
    pub fn from_tables(
        k: u32,
        states: Alphabet,
        initial: u32,
        delta: Vec<Vec<u32>>,
        outputs: Alphabet,
        tau: Vec<u32>,
    ) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidBase(k as u64));
        }
        let m = states.len();
        if initial as usize >= m {
            return Err(Error::UnknownState(initial.to_string()));
        }
        if delta.len() != m || tau.len() != m {
            return Err(Error::InvalidArgument("table sizes do not match the state count".into()));
        }
        let mut flat = Vec::with_capacity(m * k as usize);
        for (q, row) in delta.iter().enumerate() {
            for d in 0..k {
                let t = *row.get(d as usize).ok_or_else(|| Error::MissingTransition {
                    state: states.name(q as u32).to_string(),
                    input: d.to_string(),
                })?;
                if t as usize >= m {
                    return Err(Error::UnknownState(t.to_string()));
                }
                flat.push(t);
            }
        }
        if let Some(&bad) = tau.iter().find(|&&o| o as usize >= outputs.len()) {
            return Err(Error::UnknownSymbol(bad.to_string()));
        }
        Ok(Dfao {
            k,
            states,
            initial,
            delta: flat,
            outputs,
            tau,
        })
    }

    pub fn from_file(file: &DfaoFile) -> Result<Self> {
        validate_dfao(file).map(|(m, _)| m)
    }

    pub fn to_file(&self) -> DfaoFile {
        let mut delta = BTreeMap::new();
        let mut output = BTreeMap::new();
        for q in 0..self.num_states() as u32 {
            let row = (0..self.k)
                .map(|d| (d.to_string(), self.state_name(self.step(q, d)).to_string()))
                .collect();
            delta.insert(self.state_name(q).to_string(), row);
            output.insert(
                self.state_name(q).to_string(),
                self.outputs.name(self.tau[q as usize]).to_string(),
            );
        }
        DfaoFile {
            k: self.k,
            states: self.states.symbols().to_vec(),
            initial: self.state_name(self.initial).to_string(),
            delta,
            output,
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &Alphabet {
        &self.states
    }

    pub fn state_name(&self, q: u32) -> &str {
        self.states.name(q)
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn step(&self, q: u32, digit: u32) -> u32 {
        self.delta[(q * self.k + digit) as usize]
    }

    /// Output symbol attached to state `q`.
    pub fn tau(&self, q: u32) -> u32 {
        self.tau[q as usize]
    }

    /// State reached from `q` after reading `word` left to right.
    pub fn run_word(&self, q: u32, word: &[u32]) -> u32 {
        word.iter().fold(q, |s, &d| self.step(s, d))
    }

    /// State reached on `<n>_k`; `n = 0` reads the empty word.
    pub fn state_of(&self, n: u64) -> u32 {
        let digits = encode_base_k(n, self.k).expect("k >= 2 is checked at construction");
        self.run_word(self.initial, &digits)
    }

    /// `tau(delta(q0, <n>_k))`.
    pub fn run(&self, n: u64) -> u32 {
        self.tau(self.state_of(n))
    }

    /// States reached on `0, 1, ..., count - 1`, using
    /// `<n>_k = <n / k>_k (n mod k)` for `n >= 1`.
    pub fn states_prefix(&self, count: usize) -> Vec<u32> {
        let k = self.k as usize;
        let mut out = Vec::with_capacity(count);
        for n in 0..count {
            let q = if n == 0 {
                self.initial
            } else {
                self.step(out[n / k], (n % k) as u32)
            };
            out.push(q);
        }
        out
    }

    /// Positions `1..=count` hold the outputs for `n = 0..count`.
    pub fn prefix(&self, count: usize) -> SequencePrefix {
        let data = self
            .states_prefix(count)
            .into_iter()
            .map(|q| self.tau(q))
            .collect();
        SequencePrefix::new(self.id(), self.outputs.clone(), 0, data)
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial as usize] = true;
        while let Some(q) = queue.pop_front() {
            for d in 0..self.k {
                let t = self.step(q, d);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }
}

impl SequenceSource for Dfao {
    fn id(&self) -> String {
        canonical_hash("dfao", &self.to_file())
    }

    fn alphabet(&self) -> Alphabet {
        self.outputs.clone()
    }

    fn prefix(&self, len: usize) -> Result<SequencePrefix> {
        Ok(Dfao::prefix(self, len))
    }
}

/// Checks totality of the transition table, the initial state and the
/// output table; unreachable states are reported as warnings.
pub fn validate_dfao(file: &DfaoFile) -> Result<(Dfao, ValidationReport)> {
    if file.k < 2 {
        return Err(Error::InvalidBase(file.k as u64));
    }
    let states = Alphabet::new(file.states.iter().cloned())?;
    let initial = states
        .index_of(&file.initial)
        .ok_or_else(|| Error::UnknownState(file.initial.clone()))?;
    for name in file.delta.keys().chain(file.output.keys()) {
        if states.index_of(name).is_none() {
            return Err(Error::UnknownState(name.clone()));
        }
    }
    let mut delta = Vec::with_capacity(states.len());
    for q in states.symbols() {
        let row = file.delta.get(q);
        if let Some(row) = row {
            for digit in row.keys() {
                match digit.parse::<u32>() {
                    Ok(d) if d < file.k && *digit == d.to_string() => {}
                    _ => {
                        return Err(Error::InvalidDigit {
                            digit: digit.parse().unwrap_or(u64::MAX),
                            base: file.k as u64,
                        })
                    }
                }
            }
        }
        let mut targets = Vec::with_capacity(file.k as usize);
        for d in 0..file.k {
            let target = row
                .and_then(|r| r.get(&d.to_string()))
                .ok_or_else(|| Error::MissingTransition {
                    state: q.clone(),
                    input: d.to_string(),
                })?;
            targets.push(
                states
                    .index_of(target)
                    .ok_or_else(|| Error::UnknownState(target.clone()))?,
            );
        }
        delta.push(targets);
    }
    let outputs = Alphabet::new(sorted_symbols(file.output.values().cloned()))?;
    let mut tau = Vec::with_capacity(states.len());
    for q in states.symbols() {
        let o = file
            .output
            .get(q)
            .ok_or_else(|| Error::MissingOutput(format!("state {q:?}")))?;
        tau.push(outputs.lookup(o)?);
    }
    let machine = Dfao::from_tables(file.k, states, initial, delta, outputs, tau)?;
    let mut report = ValidationReport::default();
    for (q, ok) in machine.reachable().into_iter().enumerate() {
        if !ok {
            report
                .warnings
                .push(format!("state {:?} is unreachable", machine.state_name(q as u32)));
        }
    }
    Ok((machine, report))
}

/// Names accepted by [`catalog_dfao`].
pub const CATALOG: &[&str] = &["three-squares", "thue-morse"];

/// Built-in machines: the sum-of-three-squares automaton and Thue–Morse.
pub fn catalog_dfao(name: &str) -> Result<Dfao> {
    match name {
        "three-squares" => Ok(three_squares()),
        "thue-morse" => Ok(thue_morse()),
        other => Err(Error::InvalidArgument(format!("unknown catalog machine {other:?}"))),
    }
}

fn build(k: u32, states: &[&str], initial: &str, edges: &[(&str, u32, &str)], out: &[(&str, &str)]) -> Dfao {
    let mut delta: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    for &(from, d, to) in edges {
        delta
            .entry(from.to_string())
            .or_default()
            .insert(d.to_string(), to.to_string());
    }
    let file = DfaoFile {
        k,
        states: states.iter().map(|s| s.to_string()).collect(),
        initial: initial.to_string(),
        delta,
        output: out.iter().map(|(q, o)| (q.to_string(), o.to_string())).collect(),
    };
    Dfao::from_file(&file).expect("catalog machines are valid")
}

/// Output 1 exactly when `n` is a sum of three squares, i.e. not of the form `4^i (8j + 7)`.
pub fn three_squares() -> Dfao {
    build(
        2,
        &["A", "B", "C", "D", "E", "F"],
        "A",
        &[
            ("A", 0, "A"),
            ("A", 1, "B"),
            ("B", 0, "A"),
            ("B", 1, "C"),
            ("C", 0, "A"),
            ("C", 1, "D"),
            ("D", 0, "E"),
            ("D", 1, "D"),
            ("E", 0, "F"),
            ("E", 1, "B"),
            ("F", 0, "E"),
            ("F", 1, "B"),
        ],
        &[("A", "1"), ("B", "1"), ("C", "1"), ("D", "0"), ("E", "1"), ("F", "0")],
    )
}

/// Parity of the binary digit sum.
pub fn thue_morse() -> Dfao {
    build(
        2,
        &["q0", "q1"],
        "q0",
        &[("q0", 0, "q0"), ("q0", 1, "q1"), ("q1", 0, "q1"), ("q1", 1, "q0")],
        &[("q0", "0"), ("q1", "1")],
    )
}
