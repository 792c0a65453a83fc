//! Exact digit streams of real numbers, continued fractions of square
//! roots, and the imitation index of small automata.
//!
//! Every digit stream here is indexed from 1: position `p` holds the
//! `p`-th fractional digit (or `a_p` for the integer-predicate stream).

use std::collections::HashMap;
use std::path::PathBuf;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::Zero;

use crate::dfao::Dfao;
use crate::error::{Error, Result};
use crate::machine::sorted_symbols;
use crate::source::SequenceSource;
use crate::words::{Alphabet, SequencePrefix};

fn check_base(b: u32) -> Result<()> {
    if b < 2 {
        Err(Error::InvalidBase(b as u64))
    } else {
        Ok(())
    }
}

/// `floor(sqrt(d))` when `d` is a perfect square.
fn exact_sqrt(d: u64) -> Option<u64> {
    let r = d.sqrt();
    (r * r == d).then_some(r)
}

/// First `count` base-`b` digits of `p/q` by long division.
pub fn rational_digits(p: u64, q: u64, b: u32, count: usize) -> Result<SequencePrefix> {
    check_base(b)?;
    if q == 0 || p >= q {
        return Err(Error::InvalidArgument(format!("need 0 <= p < q, got {p}/{q}")));
    }
    let mut rem = p as u128;
    let mut data = Vec::with_capacity(count);
    for _ in 0..count {
        rem *= b as u128;
        data.push((rem / q as u128) as u32);
        rem %= q as u128;
    }
    Ok(SequencePrefix::new(format!("rational:{p}/{q}@{b}"), Alphabet::digits(b), 1, data))
}

/// Integer part and first `count` fractional base-`b` digits of `sqrt(d)`,
/// truncated, from one integer square root of `d * b^(2 count)`.
pub fn surd_digits(d: u64, b: u32, count: usize) -> Result<(BigUint, SequencePrefix)> {
    check_base(b)?;
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need d >= 2, got {d}")));
    }
    if exact_sqrt(d).is_some() {
        return Err(Error::PerfectSquare(d));
    }
    let scale = BigUint::from(b).pow(count as u32);
    let root = (BigUint::from(d) * &scale * &scale).sqrt();
    let integer = &root / &scale;
    let frac = &root % &scale;
    let mut data = if frac.is_zero() { Vec::new() } else { frac.to_radix_be(b) }
        .into_iter()
        .map(u32::from)
        .collect::<Vec<_>>();
    let mut padded = vec![0u32; count - data.len()];
    padded.append(&mut data);
    Ok((
        integer,
        SequencePrefix::new(format!("surd:{d}@{b}"), Alphabet::digits(b), 1, padded),
    ))
}

/// True when the binary expansion of `n` is `1^j 0^j 1^j` for some `j >= 1`.
fn is_block_pattern(n: u64) -> bool {
    let len = 64 - n.leading_zeros();
    if n == 0 || !len.is_multiple_of(3) {
        return false;
    }
    let j = len / 3;
    let ones = (1u64 << j) - 1;
    n == (ones << (2 * j)) | ones
}

/// `2` on `1^j 0^j 1^j`, otherwise the parity of the number of ones.
pub fn xi3_value(n: u64) -> u32 {
    if is_block_pattern(n) {
        2
    } else {
        n.count_ones() % 2
    }
}

/// Positions `1..=count` hold the values for `n = 1..=count`.
pub fn xi3_sequence(count: usize) -> SequencePrefix {
    let data = (1..=count as u64).map(xi3_value).collect();
    SequencePrefix::new("xi3", Alphabet::digits(3), 1, data)
}

/// A continued fraction `[a0; preperiod, (period)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub a0: u64,
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

impl CfExpansion {
    /// Partial quotient `a_i` for `i >= 1`.
    pub fn quotient(&self, i: usize) -> u64 {
        assert!(i >= 1, "partial quotients after a0 start at index 1");
        let j = i - 1;
        if j < self.preperiod.len() {
            self.preperiod[j]
        } else {
            self.period[(j - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Convergents `p_m / q_m` for `m = 0..count`.
    pub fn convergents(&self, count: usize) -> Vec<(BigUint, BigUint)> {
        let (mut p0, mut q0) = (BigUint::from(1u32), BigUint::zero());
        let (mut p1, mut q1) = (BigUint::from(self.a0), BigUint::from(1u32));
        let mut out = Vec::with_capacity(count);
        for m in 0..count {
            if m > 0 {
                let a = BigUint::from(self.quotient(m));
                let p2 = &a * &p1 + &p0;
                let q2 = &a * &q1 + &q0;
                p0 = std::mem::replace(&mut p1, p2);
                q0 = std::mem::replace(&mut q1, q2);
            }
            out.push((p1.clone(), q1.clone()));
        }
        out
    }
}

impl std::fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        write!(f, "[{}; ", self.a0)?;
        if !self.preperiod.is_empty() {
            write!(f, "{}, ", join(&self.preperiod))?;
        }
        write!(f, "({})]", join(&self.period))
    }
}

/// Continued fraction of `sqrt(d)` from the recurrence
/// `m' = c a - m`, `c' = (d - m'^2) / c`, `a' = floor((a0 + m') / c')`,
/// stopped at the first repeated `(m, c)` state.
pub fn cf_quadratic(d: u64) -> Result<CfExpansion> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need d >= 2, got {d}")));
    }
    if exact_sqrt(d).is_some() {
        return Err(Error::PerfectSquare(d));
    }
    let a0 = d.sqrt();
    let (d, a0w) = (d as u128, a0 as u128);
    let (mut m, mut c, mut a) = (0u128, 1u128, a0w);
    let mut seen: HashMap<(u128, u128), usize> = HashMap::new();
    let mut quotients = Vec::new();
    loop {
        m = c * a - m;
        c = (d - m * m) / c;
        a = (a0w + m) / c;
        if let Some(&start) = seen.get(&(m, c)) {
            let period = quotients.split_off(start);
            return Ok(CfExpansion {
                a0,
                preperiod: quotients,
                period,
            });
        }
        seen.insert((m, c), quotients.len());
        quotients.push(a as u64);
    }
}

/// `a_1 a_2 ...` over the alphabet of values that occur.
pub fn cf_as_sequence(cf: &CfExpansion, count: usize) -> SequencePrefix {
    let values = sorted_symbols(cf.preperiod.iter().chain(&cf.period).map(u64::to_string));
    let alphabet = Alphabet::new(values).expect("sorted symbols are distinct");
    let data = (1..=count)
        .map(|i| alphabet.lookup(&cf.quotient(i).to_string()).expect("value occurs"))
        .collect();
    SequencePrefix::new(format!("cf{cf}"), alphabet, 1, data)
}

/// A digit stream named on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DigitStream {
    Rational { p: u64, q: u64, base: u32 },
    Surd { d: u64, base: u32 },
    Xi3,
    File { path: PathBuf, prefix: SequencePrefix },
}

impl DigitStream {
    /// Parses `rational:p/q`, `surd:d`, `xi3` or `file:<path>`.
    pub fn parse(spec: &str, base: u32) -> Result<Self> {
        check_base(base)?;
        let bad = || Error::InvalidArgument(format!("unknown stream {spec:?}"));
        let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
        match kind {
            "rational" => {
                let (p, q) = arg.split_once('/').ok_or_else(bad)?;
                let p = p.trim().parse().map_err(|_| bad())?;
                let q = q.trim().parse().map_err(|_| bad())?;
                if q == 0 || p >= q {
                    return Err(Error::InvalidArgument(format!("need 0 <= p < q, got {arg}")));
                }
                Ok(DigitStream::Rational { p, q, base })
            }
            "surd" => {
                let d = arg.trim().parse().map_err(|_| bad())?;
                if d < 2 {
                    return Err(Error::InvalidArgument(format!("need d >= 2, got {d}")));
                }
                if exact_sqrt(d).is_some() {
                    return Err(Error::PerfectSquare(d));
                }
                Ok(DigitStream::Surd { d, base })
            }
            "xi3" if arg.is_empty() => Ok(DigitStream::Xi3),
            "file" if !arg.is_empty() => {
                let path = PathBuf::from(arg);
                let text = std::fs::read_to_string(&path)?;
                let prefix = SequencePrefix::from_text(format!("file:{arg}"), &text)?;
                Ok(DigitStream::File { path, prefix })
            }
            _ => Err(bad()),
        }
    }
}

impl SequenceSource for DigitStream {
    fn id(&self) -> String {
        match self {
            DigitStream::Rational { p, q, base } => format!("rational:{p}/{q}@{base}"),
            DigitStream::Surd { d, base } => format!("surd:{d}@{base}"),
            DigitStream::Xi3 => "xi3".into(),
            DigitStream::File { prefix, .. } => prefix.source.clone(),
        }
    }

    fn alphabet(&self) -> Alphabet {
        match self {
            DigitStream::Rational { base, .. } | DigitStream::Surd { base, .. } => Alphabet::digits(*base),
            DigitStream::Xi3 => Alphabet::digits(3),
            DigitStream::File { prefix, .. } => prefix.alphabet.clone(),
        }
    }

    fn first_index(&self) -> u64 {
        1
    }

    fn prefix(&self, len: usize) -> Result<SequencePrefix> {
        match self {
            DigitStream::Rational { p, q, base } => rational_digits(*p, *q, *base, len),
            DigitStream::Surd { d, base } => surd_digits(*d, *base, len).map(|(_, f)| f),
            DigitStream::Xi3 => Ok(xi3_sequence(len)),
            DigitStream::File { prefix, .. } => {
                if len > prefix.len() {
                    return Err(Error::InsufficientData {
                        needed: len,
                        available: prefix.len(),
                    });
                }
                let mut p = prefix.clone();
                p.data.0.truncate(len);
                Ok(p)
            }
        }
    }
}

/// Length of the longest common prefix, capped at `max_len`; `censored`
/// when no disagreement was seen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub length: usize,
    pub censored: bool,
}

/// Compares two sources symbol by symbol, matching symbols by name. One
/// alphabet must contain the other.
pub fn longest_agreement(a: &dyn SequenceSource, b: &dyn SequenceSource, max_len: usize) -> Result<Agreement> {
    let (sa, sb) = (a.alphabet(), b.alphabet());
    let within = |x: &Alphabet, y: &Alphabet| x.symbols().iter().all(|s| y.index_of(s).is_some());
    if !within(&sa, &sb) && !within(&sb, &sa) {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            sa.symbols(),
            sb.symbols()
        )));
    }
    let (pa, pb) = (a.prefix(max_len)?, b.prefix(max_len)?);
    let length = (0..max_len)
        .find(|&i| sa.name(pa.data[i]) != sb.name(pb.data[i]))
        .unwrap_or(max_len);
    Ok(Agreement {
        length,
        censored: length == max_len,
    })
}

pub const IMITATION_CAP: u128 = 10_000_000;

/// `sum over s <= max_states of s^(s k) * b^s`, saturating.
pub fn imitation_candidates(k: u32, base: u32, max_states: u32) -> u128 {
    (1..=max_states as u128).fold(0u128, |acc, s| {
        let tables = s.checked_pow(s as u32 * k);
        let outputs = (base as u128).checked_pow(s as u32);
        match (tables, outputs) {
            (Some(t), Some(o)) => acc.saturating_add(t.saturating_mul(o)),
            _ => u128::MAX,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Imitation {
    pub index: usize,
    pub censored: bool,
    pub machine: Dfao,
    pub candidates: u128,
}

/// True when states first appear in the order 0, 1, 2, ... along a
/// breadth-first walk of the table from state 0, and every state appears.
fn is_canonical(delta: &[u32], states: usize, k: usize) -> bool {
    let mut next = 1u32;
    for q in 0..states {
        if q as u32 >= next {
            return false;
        }
        for d in 0..k {
            let t = delta[q * k + d];
            if t > next {
                return false;
            }
            if t == next {
                next += 1;
            }
        }
    }
    next as usize == states
}

/// Longest agreement of some output assignment on the state sequence of
/// `delta` with `target`, and the assignment (unconstrained states get 0).
fn best_outputs(delta: &[u32], states: usize, k: usize, target: &[u32]) -> (usize, Vec<u32>) {
    let mut assigned: Vec<Option<u32>> = vec![None; states];
    let mut trail: Vec<u32> = Vec::with_capacity(target.len());
    for (n, &want) in target.iter().enumerate() {
        let q = if n == 0 {
            0
        } else {
            delta[trail[n / k] as usize * k + n % k]
        };
        match assigned[q as usize] {
            Some(out) if out != want => {
                return (n, assigned.iter().map(|o| o.unwrap_or(0)).collect());
            }
            _ => assigned[q as usize] = Some(want),
        }
        trail.push(q);
    }
    (target.len(), assigned.iter().map(|o| o.unwrap_or(0)).collect())
}

/// Best agreement between an automaton with at most `max_states` states
/// (outputs `0 .. b-1`, `b` the stream's alphabet size) read on
/// `n = 0, 1, ...` and the digits of `alpha`.
pub fn imitation_index(alpha: &dyn SequenceSource, k: u32, max_states: u32, max_len: usize) -> Result<Imitation> {
    check_base(k)?;
    if max_states == 0 {
        return Err(Error::InvalidArgument("at least one state is needed".into()));
    }
    let outputs = alpha.alphabet();
    let base = outputs.len() as u32;
    let candidates = imitation_candidates(k, base, max_states);
    if candidates > IMITATION_CAP {
        return Err(Error::CapExceeded {
            required: candidates,
            cap: IMITATION_CAP,
        });
    }
    let target = alpha.prefix(max_len)?;
    let target = target.symbols();
    let ku = k as usize;
    let mut best: Option<(usize, usize, Vec<u32>, Vec<u32>)> = None;
    'search: for states in 1..=max_states as usize {
        let cells = states * ku;
        let mut delta = vec![0u32; cells];
        loop {
            if is_canonical(&delta, states, ku) {
                let (len, tau) = best_outputs(&delta, states, ku, target);
                if best.as_ref().is_none_or(|b| len > b.0) {
                    best = Some((len, states, delta.clone(), tau));
                    if len == max_len {
                        break 'search;
                    }
                }
            }
            // odometer over tables, last cell fastest
            let mut i = cells;
            loop {
                if i == 0 {
                    continue 'search;
                }
                i -= 1;
                delta[i] += 1;
                if (delta[i] as usize) < states {
                    break;
                }
                delta[i] = 0;
            }
        }
    }
    let (index, states, delta, tau) = best.expect("the one-state machine is always enumerated");
    let names = Alphabet::new((0..states).map(|q| format!("s{q}"))).expect("distinct");
    let table = (0..states).map(|q| delta[q * ku..(q + 1) * ku].to_vec()).collect();
    let machine = Dfao::from_tables(k, names, 0, table, outputs, tau)?;
    Ok(Imitation {
        index,
        censored: index == max_len,
        machine,
        candidates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_examples() {
        assert_eq!(rational_digits(1, 3, 10, 5).unwrap().render(), "33333");
        assert_eq!(rational_digits(1, 7, 10, 6).unwrap().render(), "142857");
        assert_eq!(rational_digits(0, 1, 2, 4).unwrap().render(), "0000");
        assert!(rational_digits(3, 3, 10, 4).is_err());
        assert!(rational_digits(1, 3, 1, 4).is_err());
    }

    #[test]
    fn surd_examples() {
        let (int, frac) = surd_digits(2, 10, 39).unwrap();
        assert_eq!(int, BigUint::from(1u32));
        assert_eq!(frac.render(), "414213562373095048801688724209698078569");
        let (int, frac) = surd_digits(2, 2, 12).unwrap();
        assert_eq!(int, BigUint::from(1u32));
        assert_eq!(frac.render(), "011010100000");
        assert!(matches!(surd_digits(4, 10, 5), Err(Error::PerfectSquare(4))));
    }

    #[test]
    fn surd_truncation_is_stable() {
        for d in [2u64, 3, 5, 7, 10, 99] {
            for b in [2u32, 3, 10] {
                let long = surd_digits(d, b, 60).unwrap().1;
                for i in [1usize, 7, 20, 50] {
                    let short = surd_digits(d, b, i).unwrap().1;
                    assert_eq!(short.symbols(), &long.symbols()[..i]);
                }
            }
        }
    }

    #[test]
    fn xi3_examples() {
        assert_eq!(xi3_sequence(10).render(), "1101201100");
        assert_eq!(xi3_value(5), 2);
        assert_eq!(xi3_value(6), 0);
        assert_eq!(xi3_value(0b110011), 2);
        assert_eq!(xi3_value(0b111000111), 2);
        assert_eq!(xi3_value(0b1100011), 0);
    }

    #[test]
    fn xi3_matches_string_pattern() {
        for n in 1..100_000u64 {
            let s = format!("{n:b}");
            let j = s.len() / 3;
            let pattern = s.len() % 3 == 0 && s == format!("{}{}{}", "1".repeat(j), "0".repeat(j), "1".repeat(j));
            let expect = if pattern { 2 } else { (s.matches('1').count() % 2) as u32 };
            assert_eq!(xi3_value(n), expect, "n = {n}");
        }
    }

    #[test]
    fn continued_fractions() {
        let cf = cf_quadratic(2).unwrap();
        assert_eq!((cf.a0, cf.preperiod.clone(), cf.period.clone()), (1, vec![], vec![2]));
        let cf = cf_quadratic(3).unwrap();
        assert_eq!((cf.a0, cf.period.clone()), (1, vec![1, 2]));
        let cf = cf_quadratic(7).unwrap();
        assert_eq!((cf.a0, cf.period.clone()), (2, vec![1, 1, 1, 4]));
        assert_eq!(cf.to_string(), "[2; (1, 1, 1, 4)]");
        assert!(matches!(cf_quadratic(9), Err(Error::PerfectSquare(9))));
        assert_eq!(cf_as_sequence(&cf_quadratic(2).unwrap(), 6).render(), "222222");
        assert_eq!(cf_as_sequence(&cf, 8).render(), "11141114");
        let golden = CfExpansion {
            a0: 1,
            preperiod: vec![],
            period: vec![1],
        };
        assert_eq!(cf_as_sequence(&golden, 5).render(), "11111");
    }

    #[test]
    fn convergents_approximate() {
        // |sqrt(d) - p/q| < 1/q^2  <=>  (p - 1/q)^2 < d q^2 < (p + 1/q)^2,
        // checked as (p q - 1)^2 < d q^4 < (p q + 1)^2
        for d in [2u64, 3, 5, 7, 13, 19, 43, 94] {
            let cf = cf_quadratic(d).unwrap();
            for (p, q) in cf.convergents(11) {
                let pq = &p * &q;
                let dq4 = BigUint::from(d) * q.pow(4);
                let one = BigUint::from(1u32);
                assert!((&pq - &one).pow(2) < dq4 && dq4 < (&pq + &one).pow(2), "d = {d}");
            }
            // period is minimal: no proper rotation divisor reproduces it
            let len = cf.period.len();
            for shorter in 1..len {
                if len.is_multiple_of(shorter) {
                    assert!(cf.period.chunks(shorter).any(|c| c != &cf.period[..shorter]));
                }
            }
        }
    }

    #[test]
    fn stream_parsing() {
        assert_eq!(DigitStream::parse("rational:1/3", 2).unwrap(), DigitStream::Rational { p: 1, q: 3, base: 2 });
        assert_eq!(DigitStream::parse("surd:2", 10).unwrap(), DigitStream::Surd { d: 2, base: 10 });
        assert_eq!(DigitStream::parse("xi3", 2).unwrap(), DigitStream::Xi3);
        assert!(DigitStream::parse("surd:4", 10).is_err());
        assert!(DigitStream::parse("pi", 10).is_err());
        assert!(DigitStream::parse("rational:3/2", 10).is_err());
        let s = DigitStream::parse("surd:2", 10).unwrap();
        assert_eq!(s.first_index(), 1);
        assert_eq!(s.prefix(5).unwrap().render(), "41421");
    }

    #[test]
    fn agreement() {
        let x = DigitStream::parse("surd:3", 10).unwrap();
        assert_eq!(longest_agreement(&x, &x, 100).unwrap(), Agreement { length: 100, censored: true });
        let a = DigitStream::parse("rational:1/3", 10).unwrap();
        let b = DigitStream::parse("rational:1/3", 2).unwrap();
        let r = longest_agreement(&a, &b, 10).unwrap();
        assert_eq!((r.length, r.censored), (0, false));
        let abc = crate::words::SequencePrefix::from_text("abc", "abcabc").unwrap();
        assert!(matches!(
            longest_agreement(&crate::source::StoredPrefix(abc), &a, 3),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn canonical_enumeration_counts() {
        // canonical 2-state binary tables: state 1 must be first reached from state 0
        let count = |states: usize, k: usize| {
            let cells = states * k;
            let total = states.pow(cells as u32);
            (0..total)
                .filter(|&code| {
                    let mut c = code;
                    let delta: Vec<u32> = (0..cells)
                        .map(|_| {
                            let d = (c % states) as u32;
                            c /= states;
                            d
                        })
                        .collect();
                    is_canonical(&delta, states, k)
                })
                .count()
        };
        assert_eq!(count(1, 2), 1);
        assert_eq!(count(2, 2), 12);
        // initially-connected accessible automata: 1, 12, 216 for binary input
        assert_eq!(count(3, 2), 216);
    }

    #[test]
    fn imitation_examples() {
        let root2 = DigitStream::parse("surd:2", 2).unwrap();
        let r = imitation_index(&root2, 2, 1, 100).unwrap();
        assert_eq!((r.index, r.censored), (1, false));
        let third = DigitStream::parse("rational:1/3", 2).unwrap();
        let r = imitation_index(&third, 2, 2, 64).unwrap();
        assert_eq!((r.index, r.censored), (64, true));
        let prefix = third.prefix(64).unwrap();
        for n in 0..64u64 {
            assert_eq!(r.machine.run(n), prefix.at(n as usize + 1));
        }
        assert!(matches!(
            imitation_index(&root2, 2, 6, 100),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn imitation_agrees_with_brute_force() {
        // every output assignment of every 2-state table, agreement measured directly
        let root2 = DigitStream::parse("surd:2", 2).unwrap();
        let target = root2.prefix(64).unwrap();
        let mut best = 0;
        for code in 0..16u32 {
            let delta: Vec<Vec<u32>> = (0..2).map(|q| (0..2).map(|d| (code >> (q * 2 + d)) & 1).collect()).collect();
            for outs in 0..4u32 {
                let tau = vec![outs & 1, (outs >> 1) & 1];
                let m = Dfao::from_tables(2, Alphabet::new(["x", "y"]).unwrap(), 0, delta.clone(), Alphabet::digits(2), tau)
                    .unwrap();
                let len = (0..64).take_while(|&n| m.run(n) == target.at(n as usize + 1)).count();
                best = best.max(len);
            }
        }
        let r = imitation_index(&root2, 2, 2, 64).unwrap();
        assert_eq!(r.index, best);
    }
}
