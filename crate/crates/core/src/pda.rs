//! Deterministic pushdown automata with output (DPAO).
//!
//! The stack top is the rightmost symbol; an empty stack is the bottom
//! marker `#`. A digit transition at `(q, z)` pops `z` (nothing when the top
//! is `#`) and pushes a word; an epsilon transition pops exactly one symbol
//! and is never defined on `#`. After every digit the epsilon moves are
//! applied until none is enabled.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::dfao::{Dfao, ValidationReport};
use crate::error::{Error, Result};
use crate::machine::{canonical_hash, sorted_symbols, SymbolWord};
use crate::source::SequenceSource;
use crate::words::{encode_base_k, Alphabet, SequencePrefix};

pub const BOTTOM: &str = "#";
pub const EPSILON: &str = "eps";

/// One line of the transition list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionRecord {
    pub state: String,
    pub top: String,
    pub input: String,
    pub to: String,
    pub push: SymbolWord,
}

/// JSON form of a DPAO (`"kind": "dpao"`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DpaoFile {
    pub k: u32,
    pub states: Vec<String>,
    pub initial: String,
    pub stack: Vec<String>,
    pub transitions: Vec<TransitionRecord>,
    pub output: BTreeMap<String, BTreeMap<String, String>>,
}

/// What the machine does at a `(state, top)` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Move {
    Epsilon { to: u32 },
    /// `targets[d] = (to, push)` for each digit `d`.
    Digits(Vec<(u32, Vec<u32>)>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StackConfig {
    pub state: u32,
    /// Stack symbols bottom to top; empty means `#`.
    pub stack: Vec<u32>,
}

impl StackConfig {
    pub fn height(&self) -> usize {
        self.stack.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpao {
    k: u32,
    states: Alphabet,
    initial: u32,
    stack: Alphabet,
    /// `moves[q * (|stack| + 1) + top]`, where top 0 is `#` and `g + 1` is stack symbol `g`.
    moves: Vec<Move>,
    outputs: Alphabet,
    tau: Vec<u32>,
}

/// `pop[q][z]`: states in which the machine can be at the moment stack
/// symbol `z`, on top in state `q`, is first removed, with the least number
/// of digits read before that moment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PopTable {
    entries: Vec<Vec<BTreeMap<u32, u64>>>,
}

impl PopTable {
    pub fn states(&self, q: u32, z: u32) -> impl Iterator<Item = u32> + '_ {
        self.entries[q as usize][z as usize].keys().copied()
    }

    pub fn depths(&self, q: u32, z: u32) -> &BTreeMap<u32, u64> {
        &self.entries[q as usize][z as usize]
    }

    /// True when `z` can never be removed once it is on top in state `q`.
    pub fn is_permanent(&self, q: u32, z: u32) -> bool {
        self.entries[q as usize][z as usize].is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairMethod {
    Exact,
    Protected,
}

impl std::fmt::Display for PairMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PairMethod::Exact => "exact",
            PairMethod::Protected => "protected",
        })
    }
}

/// `n < n_prime` with equivalent configurations `C(n) ~ C(n_prime)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivalentPair {
    pub n: u64,
    pub n_prime: u64,
    pub method: PairMethod,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairBudget {
    pub n_max: u64,
    pub height_cap: usize,
}

impl Default for PairBudget {
    fn default() -> Self {
        PairBudget {
            n_max: 1 << 16,
            height_cap: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distinction {
    /// Reading `word` from the two configurations gives different outputs.
    Distinguished { word: Vec<u32> },
    /// No word of length at most `depth` separates them; this proves nothing.
    IndistinguishableToDepth { depth: usize },
}

impl Dpao {
    fn tops(&self) -> usize {
        self.stack.len() + 1
    }

    fn move_at(&self, q: u32, top: u32) -> &Move {
        &self.moves[q as usize * self.tops() + top as usize]
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn states(&self) -> &Alphabet {
        &self.states
    }

    pub fn stack_alphabet(&self) -> &Alphabet {
        &self.stack
    }

    pub fn outputs(&self) -> &Alphabet {
        &self.outputs
    }

    pub fn initial_config(&self) -> StackConfig {
        let mut c = StackConfig {
            state: self.initial,
            stack: Vec::new(),
        };
        self.close(&mut c, 0);
        c
    }

    fn top_of(c: &StackConfig) -> u32 {
        c.stack.last().map_or(0, |&g| g + 1)
    }

    /// Applies epsilon moves until none is enabled. Returns the state at the
    /// first moment the height dropped below `floor`, if it did.
    fn close(&self, c: &mut StackConfig, floor: usize) -> Option<u32> {
        let mut dropped = None;
        while let Move::Epsilon { to } = self.move_at(c.state, Self::top_of(c)) {
            c.stack.pop();
            c.state = *to;
            if dropped.is_none() && c.stack.len() < floor {
                dropped = Some(c.state);
            }
        }
        dropped
    }

    /// Applies pending epsilon moves to an arbitrary configuration, reporting
    /// the state at the first moment the height went below `floor`.
    pub fn close_tracking(&self, c: &StackConfig, floor: usize) -> (StackConfig, Option<u32>) {
        let mut next = c.clone();
        let dropped = self.close(&mut next, floor);
        (next, dropped)
    }

    /// Reads one digit and closes under epsilon moves; also reports the
    /// state at the first moment the stack height went below `floor`.
    pub fn step_tracking(&self, c: &StackConfig, digit: u32, floor: usize) -> (StackConfig, Option<u32>) {
        let mut next = c.clone();
        let top = Self::top_of(c);
        let mut dropped = None;
        match self.move_at(c.state, top) {
            Move::Digits(targets) => {
                let (to, push) = &targets[digit as usize];
                if top != 0 {
                    next.stack.pop();
                    if push.is_empty() && next.stack.len() < floor {
                        dropped = Some(*to);
                    }
                }
                next.stack.extend_from_slice(push);
                next.state = *to;
            }
            // Only reachable from a configuration that was not closed.
            Move::Epsilon { .. } => {
                dropped = self.close(&mut next, floor);
                let (after, d) = self.step_tracking(&next, digit, floor);
                return (after, dropped.or(d));
            }
        }
        let later = self.close(&mut next, floor);
        (next, dropped.or(later))
    }

    pub fn step_input(&self, c: &StackConfig, digit: u32) -> StackConfig {
        self.step_tracking(c, digit, 0).0
    }

    /// Configuration after reading `word` from the closed initial configuration.
    pub fn config_of_word(&self, word: &[u32]) -> StackConfig {
        word.iter()
            .fold(self.initial_config(), |c, &d| self.step_input(&c, d))
    }

    /// `C(n)`: the configuration reached on `<n>_k`.
    pub fn config_of(&self, n: u64) -> StackConfig {
        let digits = encode_base_k(n, self.k).expect("k >= 2 is checked at construction");
        self.config_of_word(&digits)
    }

    pub fn output_of(&self, c: &StackConfig) -> u32 {
        self.tau[c.state as usize * self.tops() + Self::top_of(c) as usize]
    }

    pub fn output_at(&self, n: u64) -> u32 {
        self.output_of(&self.config_of(n))
    }

    /// Positions `1..=count` hold the outputs for `n = 0..count`.
    pub fn prefix(&self, count: usize) -> SequencePrefix {
        let data = (0..count as u64).map(|n| self.output_at(n)).collect();
        SequencePrefix::new(self.id(), self.outputs.clone(), 0, data)
    }

    /// `|Q| + |Gamma| + L` with `L` the longest pushed word.
    pub fn size(&self) -> usize {
        let longest = self
            .moves
            .iter()
            .filter_map(|m| match m {
                Move::Digits(t) => t.iter().map(|(_, p)| p.len()).max(),
                Move::Epsilon { .. } => None,
            })
            .max()
            .unwrap_or(0);
        self.states.len() + self.stack.len() + longest
    }

    /// Least fixpoint of the pop rules, with minimal digit counts computed
    /// alongside by relaxation.
    pub fn pop_table(&self) -> PopTable {
        let nq = self.states.len();
        let ng = self.stack.len();
        let mut entries: Vec<Vec<BTreeMap<u32, u64>>> = vec![vec![BTreeMap::new(); ng]; nq];
        let improve = |slot: &mut BTreeMap<u32, u64>, p: u32, d: u64| -> bool {
            match slot.get(&p) {
                Some(&old) if old <= d => false,
                _ => {
                    slot.insert(p, d);
                    true
                }
            }
        };
        loop {
            let mut changed = false;
            for q in 0..nq as u32 {
                for z in 0..ng as u32 {
                    let found: Vec<(u32, u64)> = match self.move_at(q, z + 1) {
                        Move::Epsilon { to } => vec![(*to, 0)],
                        Move::Digits(targets) => {
                            let mut out = Vec::new();
                            for (to, push) in targets {
                                // states after popping the pushed word, last symbol first
                                let mut frontier: BTreeMap<u32, u64> = BTreeMap::from([(*to, 1)]);
                                for &x in push.iter().rev() {
                                    let mut next: BTreeMap<u32, u64> = BTreeMap::new();
                                    for (&s, &d) in &frontier {
                                        for (&p, &e) in &entries[s as usize][x as usize] {
                                            improve(&mut next, p, d + e);
                                        }
                                    }
                                    frontier = next;
                                }
                                out.extend(frontier);
                            }
                            out
                        }
                    };
                    for (p, d) in found {
                        changed |= improve(&mut entries[q as usize][z as usize], p, d);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        PopTable { entries }
    }

    /// Scans `n = 1, 2, ...` for the first `n'` whose configuration is
    /// equivalent to that of an earlier `n`, either because the
    /// configurations coincide (height at most `height_cap`) or because
    /// they share the state and a top symbol that can never be removed.
    pub fn find_equivalent_pair(&self, budget: PairBudget) -> Option<EquivalentPair> {
        let pops = self.pop_table();
        let mut exact: HashMap<StackConfig, u64> = HashMap::new();
        let mut protected: HashMap<(u32, u32), u64> = HashMap::new();
        for n in 1..=budget.n_max {
            let c = self.config_of(n);
            let exact_key = (c.height() <= budget.height_cap).then(|| c.clone());
            let protected_key = match c.stack.last() {
                Some(&z) if c.height() >= 2 && pops.is_permanent(c.state, z) => Some((c.state, z)),
                _ => None,
            };
            let by_exact = exact_key.as_ref().and_then(|key| exact.get(key).copied());
            let by_protected = protected_key.and_then(|key| protected.get(&key).copied());
            let found = match (by_exact, by_protected) {
                (Some(a), Some(b)) if b < a => Some((b, PairMethod::Protected)),
                (Some(a), _) => Some((a, PairMethod::Exact)),
                (None, Some(b)) => Some((b, PairMethod::Protected)),
                (None, None) => None,
            };
            if let Some((first, method)) = found {
                return Some(EquivalentPair {
                    n: first,
                    n_prime: n,
                    method,
                });
            }
            if let Some(key) = exact_key {
                exact.insert(key, n);
            }
            if let Some(key) = protected_key {
                protected.insert(key, n);
            }
        }
        None
    }

    /// Breadth-first search over input words of length at most `depth` for
    /// one that separates `C(n)` from `C(n_prime)`.
    pub fn bounded_distinguish(&self, n: u64, n_prime: u64, depth: usize) -> Distinction {
        self.distinguish_configs(self.config_of(n), self.config_of(n_prime), depth)
    }

    pub fn distinguish_configs(&self, left: StackConfig, right: StackConfig, depth: usize) -> Distinction {
        let mut seen: HashSet<(StackConfig, StackConfig)> = HashSet::new();
        let mut queue = VecDeque::from([(left, right, Vec::<u32>::new())]);
        while let Some((a, b, word)) = queue.pop_front() {
            if self.output_of(&a) != self.output_of(&b) {
                return Distinction::Distinguished { word };
            }
            if a == b || word.len() == depth || !seen.insert((a.clone(), b.clone())) {
                continue;
            }
            for d in 0..self.k {
                let mut w = word.clone();
                w.push(d);
                queue.push_back((self.step_input(&a, d), self.step_input(&b, d), w));
            }
        }
        Distinction::IndistinguishableToDepth { depth }
    }

    /// The DFAO as a machine that never touches its stack.
    pub fn from_dfao(m: &Dfao) -> Self {
        let moves = (0..m.num_states() as u32)
            .map(|q| Move::Digits((0..m.k()).map(|d| (m.step(q, d), Vec::new())).collect()))
            .collect();
        Dpao {
            k: m.k(),
            states: m.states().clone(),
            initial: m.initial(),
            stack: Alphabet::default(),
            moves,
            outputs: m.outputs().clone(),
            tau: (0..m.num_states() as u32).map(|q| m.tau(q)).collect(),
        }
    }

    pub fn from_file(file: &DpaoFile) -> Result<Self> {
        validate_dpao(file).map(|(m, _)| m)
    }

    pub fn to_file(&self) -> DpaoFile {
        let top_name = |t: u32| {
            if t == 0 {
                BOTTOM.to_string()
            } else {
                self.stack.name(t - 1).to_string()
            }
        };
        let mut transitions = Vec::new();
        let mut output: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        for q in 0..self.states.len() as u32 {
            let state = self.states.name(q).to_string();
            for t in 0..self.tops() as u32 {
                output.entry(state.clone()).or_default().insert(
                    top_name(t),
                    self.outputs
                        .name(self.tau[q as usize * self.tops() + t as usize])
                        .to_string(),
                );
                match self.move_at(q, t) {
                    Move::Epsilon { to } => transitions.push(TransitionRecord {
                        state: state.clone(),
                        top: top_name(t),
                        input: EPSILON.into(),
                        to: self.states.name(*to).to_string(),
                        push: SymbolWord::Text(String::new()),
                    }),
                    Move::Digits(targets) => {
                        for (d, (to, push)) in targets.iter().enumerate() {
                            transitions.push(TransitionRecord {
                                state: state.clone(),
                                top: top_name(t),
                                input: d.to_string(),
                                to: self.states.name(*to).to_string(),
                                push: SymbolWord::write(&self.stack, push),
                            });
                        }
                    }
                }
            }
        }
        DpaoFile {
            k: self.k,
            states: self.states.symbols().to_vec(),
            initial: self.states.name(self.initial).to_string(),
            stack: self.stack.symbols().to_vec(),
            transitions,
            output,
        }
    }
}

impl SequenceSource for Dpao {
    fn id(&self) -> String {
        canonical_hash("dpao", &self.to_file())
    }

    fn alphabet(&self) -> Alphabet {
        self.outputs.clone()
    }

    fn prefix(&self, len: usize) -> Result<SequencePrefix> {
        Ok(Dpao::prefix(self, len))
    }
}

/// Checks determinism, completeness, the epsilon restrictions and the
/// output table. Unreachable states are reported as warnings.
/// `(to, push)` of one digit move.
type Target = (u32, Vec<u32>);

pub fn validate_dpao(file: &DpaoFile) -> Result<(Dpao, ValidationReport)> {
    if file.k < 2 {
        return Err(Error::InvalidBase(file.k as u64));
    }
    let states = Alphabet::new(file.states.iter().cloned())?;
    if file.stack.iter().any(|s| s == BOTTOM) {
        return Err(Error::BadAlphabet(BOTTOM.into()));
    }
    let stack = Alphabet::new(file.stack.iter().cloned())?;
    let initial = states
        .index_of(&file.initial)
        .ok_or_else(|| Error::UnknownState(file.initial.clone()))?;
    let tops = stack.len() + 1;
    let top_index = |name: &str| -> Result<u32> {
        if name == BOTTOM {
            Ok(0)
        } else {
            stack.lookup(name).map(|g| g + 1)
        }
    };
    let state_index = |name: &str| -> Result<u32> {
        states
            .index_of(name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    };

    // slot -> (epsilon target, digit targets)
    let mut eps: Vec<Option<u32>> = vec![None; states.len() * tops];
    let mut digit: Vec<Vec<Option<Target>>> = vec![vec![None; file.k as usize]; states.len() * tops];
    for t in &file.transitions {
        let q = state_index(&t.state)?;
        let top = top_index(&t.top)?;
        let to = state_index(&t.to)?;
        let push = t.push.resolve(&stack)?;
        let slot = q as usize * tops + top as usize;
        let conflict = |detail: String| Error::DeterminismConflict {
            state: t.state.clone(),
            top: t.top.clone(),
            detail,
        };
        if t.input == EPSILON {
            if top == 0 {
                return Err(Error::IncreasingEpsilon {
                    state: t.state.clone(),
                    top: t.top.clone(),
                    detail: "epsilon moves cannot fire on the bottom marker".into(),
                });
            }
            if !push.is_empty() {
                return Err(Error::IncreasingEpsilon {
                    state: t.state.clone(),
                    top: t.top.clone(),
                    detail: format!("epsilon move pushes {} symbols", push.len()),
                });
            }
            if eps[slot].is_some() {
                return Err(conflict("two epsilon moves".into()));
            }
            if digit[slot].iter().any(Option::is_some) {
                return Err(conflict("both epsilon and digit moves".into()));
            }
            eps[slot] = Some(to);
        } else {
            let d: u32 = t
                .input
                .parse()
                .ok()
                .filter(|&d| d < file.k)
                .ok_or_else(|| Error::UnknownSymbol(t.input.clone()))?;
            if eps[slot].is_some() {
                return Err(conflict("both epsilon and digit moves".into()));
            }
            if digit[slot][d as usize].is_some() {
                return Err(conflict(format!("two moves on digit {d}")));
            }
            digit[slot][d as usize] = Some((to, push));
        }
    }

    let mut moves = Vec::with_capacity(states.len() * tops);
    for slot in 0..states.len() * tops {
        let q = (slot / tops) as u32;
        let top = (slot % tops) as u32;
        let top_name = if top == 0 { BOTTOM } else { stack.name(top - 1) };
        if let Some(to) = eps[slot] {
            moves.push(Move::Epsilon { to });
            continue;
        }
        let mut targets = Vec::with_capacity(file.k as usize);
        for (d, entry) in digit[slot].iter().enumerate() {
            match entry {
                Some(t) => targets.push(t.clone()),
                None => {
                    return Err(Error::Incomplete {
                        state: states.name(q).to_string(),
                        top: top_name.to_string(),
                        digit: d as u32,
                    })
                }
            }
        }
        moves.push(Move::Digits(targets));
    }

    for name in file.output.keys() {
        state_index(name)?;
    }
    let outputs = Alphabet::new(sorted_symbols(
        file.output.values().flat_map(|row| row.values().cloned()),
    ))?;
    let mut tau = Vec::with_capacity(states.len() * tops);
    for q in states.symbols() {
        let row = file
            .output
            .get(q)
            .ok_or_else(|| Error::MissingOutput(format!("state {q:?}")))?;
        for name in row.keys() {
            top_index(name)?;
        }
        for top in 0..tops as u32 {
            let top_name = if top == 0 { BOTTOM } else { stack.name(top - 1) };
            let out = row
                .get(top_name)
                .ok_or_else(|| Error::MissingOutput(format!("state {q:?}, top {top_name:?}")))?;
            tau.push(outputs.lookup(out)?);
        }
    }

    let machine = Dpao {
        k: file.k,
        states,
        initial,
        stack,
        moves,
        outputs,
        tau,
    };
    let mut report = ValidationReport::default();
    let mut reached = vec![false; machine.states.len()];
    for q in reachable_states(&machine) {
        reached[q as usize] = true;
    }
    for (q, ok) in reached.iter().enumerate() {
        if !ok {
            report.warnings.push(format!(
                "state {:?} is unreachable",
                machine.states.name(q as u32)
            ));
        }
    }
    Ok((machine, report))
}

/// States appearing in the transition graph reachable from the initial
/// state, ignoring stack contents (an over-approximation).
fn reachable_states(m: &Dpao) -> Vec<u32> {
    let mut seen = vec![false; m.states.len()];
    let mut queue = VecDeque::from([m.initial]);
    seen[m.initial as usize] = true;
    let mut out = Vec::new();
    while let Some(q) = queue.pop_front() {
        out.push(q);
        for top in 0..m.tops() as u32 {
            let targets: Vec<u32> = match m.move_at(q, top) {
                Move::Epsilon { to } => vec![*to],
                Move::Digits(t) => t.iter().map(|(to, _)| *to).collect(),
            };
            for t in targets {
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
    }
    out
}

fn record(state: &str, top: &str, input: &str, to: &str, push: &str) -> TransitionRecord {
    TransitionRecord {
        state: state.into(),
        top: top.into(),
        input: input.into(),
        to: to.into(),
        push: SymbolWord::Text(push.into()),
    }
}

/// Output 1 exactly when the binary expansion of `n` has digit counts
/// differing by at most one.
pub fn xi2() -> Dpao {
    let transitions = vec![
        record("q0", "#", "1", "q1", ""),
        record("q0", "#", "0", "q-1", ""),
        record("q1", "#", "0", "q0", ""),
        record("q1", "#", "1", "q1", "X"),
        record("q1", "X", "0", "q1", ""),
        record("q1", "X", "1", "q1", "XX"),
        record("q-1", "#", "0", "q-1", "X"),
        record("q-1", "#", "1", "q0", ""),
        record("q-1", "X", "0", "q-1", "XX"),
        record("q-1", "X", "1", "q-1", ""),
        // never reached from q0 with a non-empty stack; present for completeness
        record("q0", "X", "0", "q0", "X"),
        record("q0", "X", "1", "q0", "X"),
    ];
    let output = ["q-1", "q0", "q1"]
        .iter()
        .map(|q| {
            (
                q.to_string(),
                BTreeMap::from([("#".to_string(), "1".to_string()), ("X".to_string(), "0".to_string())]),
            )
        })
        .collect();
    let file = DpaoFile {
        k: 2,
        states: vec!["q-1".into(), "q0".into(), "q1".into()],
        initial: "q0".into(),
        stack: vec!["X".into()],
        transitions,
        output,
    };
    Dpao::from_file(&file).expect("catalog machine is valid")
}

pub const CATALOG: &[&str] = &["xi2"];

pub fn catalog_dpao(name: &str) -> Result<Dpao> {
    match name {
        "xi2" => Ok(xi2()),
        other => Err(Error::InvalidArgument(format!("unknown catalog machine {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn balanced(n: u64) -> bool {
        let ones = n.count_ones() as i64;
        let len = if n == 0 { 0 } else { 64 - n.leading_zeros() as i64 };
        (2 * ones - len).abs() <= 1
    }

    fn cfg(m: &Dpao, state: &str, stack: &str) -> StackConfig {
        StackConfig {
            state: m.states().lookup(state).unwrap(),
            stack: m.stack_alphabet().parse_word(stack).map(|w| w.0).unwrap_or_default(),
        }
    }

    #[test]
    fn xi2_steps() {
        let m = xi2();
        assert_eq!(m.step_input(&cfg(&m, "q0", ""), 1), cfg(&m, "q1", ""));
        assert_eq!(m.step_input(&cfg(&m, "q1", ""), 1), cfg(&m, "q1", "X"));
        assert_eq!(m.step_input(&cfg(&m, "q1", "X"), 0), cfg(&m, "q1", ""));
        assert_eq!(m.config_of(9), cfg(&m, "q0", ""));
        assert_eq!(m.config_of(5), cfg(&m, "q1", ""));
        assert_eq!(m.config_of(0), cfg(&m, "q0", ""));
        assert_eq!(m.config_of(4), cfg(&m, "q-1", ""));
    }

    #[test]
    fn xi2_outputs() {
        let m = xi2();
        assert_eq!(m.prefix(40).render(), "1110111001101000011111101110100000010110");
        assert_eq!(m.output_at(3), 0);
        assert_eq!(m.output_at(0), 1);
        for n in 0..100_000u64 {
            assert_eq!(m.output_at(n) == 1, balanced(n), "n = {n}");
        }
    }

    #[test]
    fn xi2_size_and_roundtrip() {
        let m = xi2();
        assert_eq!(m.size(), 6);
        assert_eq!(Dpao::from_file(&m.to_file()).unwrap(), m);
        let tm = Dpao::from_dfao(&crate::dfao::thue_morse());
        assert_eq!(tm.size(), 2);
        assert_eq!(Dpao::from_file(&tm.to_file()).unwrap(), tm);
    }

    #[test]
    fn validation_errors() {
        let base = xi2().to_file();

        let mut f = base.clone();
        f.transitions.push(record("q1", "X", EPSILON, "q1", ""));
        assert!(matches!(validate_dpao(&f), Err(Error::DeterminismConflict { .. })));

        let mut f = base.clone();
        f.transitions.retain(|t| !(t.state == "q1" && t.top == "X"));
        f.transitions.push(record("q1", "X", EPSILON, "q1", "XX"));
        assert!(matches!(validate_dpao(&f), Err(Error::IncreasingEpsilon { .. })));

        let mut f = base.clone();
        f.transitions.retain(|t| !(t.state == "q0" && t.top == "#"));
        f.transitions.push(record("q0", "#", EPSILON, "q1", ""));
        assert!(matches!(validate_dpao(&f), Err(Error::IncreasingEpsilon { .. })));

        let mut f = base.clone();
        f.transitions.retain(|t| !(t.state == "q1" && t.top == "X" && t.input == "1"));
        assert!(matches!(validate_dpao(&f), Err(Error::Incomplete { .. })));

        let mut f = base.clone();
        f.transitions.push(record("q1", "Y", "0", "q1", ""));
        assert!(matches!(validate_dpao(&f), Err(Error::UnknownSymbol(_))));

        let mut f = base;
        f.output.get_mut("q0").unwrap().remove("X");
        assert!(matches!(validate_dpao(&f), Err(Error::MissingOutput(_))));
    }

    #[test]
    fn xi2_pop_table() {
        let m = xi2();
        let pops = m.pop_table();
        let q1 = m.states().lookup("q1").unwrap();
        let qm = m.states().lookup("q-1").unwrap();
        assert_eq!(pops.states(q1, 0).collect::<Vec<_>>(), vec![q1]);
        assert_eq!(pops.states(qm, 0).collect::<Vec<_>>(), vec![qm]);
        assert_eq!(pops.depths(q1, 0)[&q1], 1);
    }

    #[test]
    fn pusher_is_protected() {
        let file = DpaoFile {
            k: 2,
            states: vec!["p".into()],
            initial: "p".into(),
            stack: vec!["X".into()],
            transitions: vec![
                record("p", "#", "0", "p", "X"),
                record("p", "#", "1", "p", "X"),
                record("p", "X", "0", "p", "XX"),
                record("p", "X", "1", "p", "XX"),
            ],
            output: BTreeMap::from([(
                "p".to_string(),
                BTreeMap::from([("#".to_string(), "0".to_string()), ("X".to_string(), "1".to_string())]),
            )]),
        };
        let m = Dpao::from_file(&file).unwrap();
        let pops = m.pop_table();
        assert!(pops.is_permanent(0, 0));
        let pair = m
            .find_equivalent_pair(PairBudget {
                n_max: 100,
                height_cap: 0,
            })
            .unwrap();
        // C(n) = (p, X^len(n)); heights 1, 2, 2 for n = 1, 2, 3
        assert_eq!((pair.n, pair.n_prime, pair.method), (2, 3, PairMethod::Protected));
        assert_eq!(
            m.bounded_distinguish(pair.n, pair.n_prime, 10),
            Distinction::IndistinguishableToDepth { depth: 10 }
        );
    }

    #[test]
    fn xi2_pairs() {
        let m = xi2();
        let pair = m.find_equivalent_pair(PairBudget::default()).unwrap();
        assert_eq!((pair.n, pair.n_prime, pair.method), (1, 5, PairMethod::Exact));
        assert_eq!(
            m.bounded_distinguish(1, 5, 12),
            Distinction::IndistinguishableToDepth { depth: 12 }
        );
        assert_eq!(m.bounded_distinguish(1, 2, 3), Distinction::Distinguished { word: vec![1] });
        assert_eq!(
            m.bounded_distinguish(7, 7, 4),
            Distinction::IndistinguishableToDepth { depth: 4 }
        );
    }

    #[test]
    fn dfao_recast_pairs() {
        for d in [crate::dfao::thue_morse(), crate::dfao::three_squares()] {
            let m = Dpao::from_dfao(&d);
            let pair = m.find_equivalent_pair(PairBudget::default()).unwrap();
            assert_eq!(pair.method, PairMethod::Exact);
            assert!(pair.n_prime as usize <= d.num_states() + 1);
            for n in 0..2000 {
                assert_eq!(m.output_at(n), d.run(n));
            }
        }
        let tm = Dpao::from_dfao(&crate::dfao::thue_morse());
        let pair = tm.find_equivalent_pair(PairBudget::default()).unwrap();
        assert_eq!((pair.n, pair.n_prime), (1, 2));
    }

    #[test]
    fn closure_is_exhaustive() {
        // X is popped by epsilon in state r; reading 1 in s pushes XX and moves to r
        let file = DpaoFile {
            k: 2,
            states: vec!["r".into(), "s".into()],
            initial: "s".into(),
            stack: vec!["X".into()],
            transitions: vec![
                record("s", "#", "0", "s", "X"),
                record("s", "#", "1", "r", "XX"),
                record("s", "X", "0", "s", "XX"),
                record("s", "X", "1", "r", "X"),
                record("r", "X", EPSILON, "s", ""),
                record("r", "#", "0", "s", ""),
                record("r", "#", "1", "r", ""),
            ],
            output: BTreeMap::from([
                ("r".to_string(), BTreeMap::from([("#".into(), "0".into()), ("X".into(), "1".into())])),
                ("s".to_string(), BTreeMap::from([("#".into(), "1".into()), ("X".into(), "0".into())])),
            ]),
        };
        let m = Dpao::from_file(&file).unwrap();
        let r = m.states().lookup("r").unwrap();
        for n in 0..500 {
            let c = m.config_of(n);
            assert!(!(c.state == r && !c.stack.is_empty()), "pending epsilon move at n = {n}");
        }
        // "1": s,# -> r,XX -> s,X
        assert_eq!(m.config_of(1), cfg(&m, "s", "X"));
    }
}
