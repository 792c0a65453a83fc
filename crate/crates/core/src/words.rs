//! Word primitives: alphabets, base-k numeration, fractional powers,
//! repetition witnesses and factor statistics of finite prefixes.
//!
//! Positions in public contracts are 1-based (`a_1 a_2 ...`); storage is
//! 0-based slices.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::source::SequenceSource;

/// Exact non-negative rational used for ratios and exponents.
pub type Ratio = num_rational::Ratio<u64>;

/// An ordered set of named symbols. Symbol `i` is the `i`-th name.
#[derive(Clone, Debug, Default)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, u32>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Alphabet::default();
        for s in symbols {
            let s = s.into();
            if s.is_empty() || out.index.contains_key(&s) {
                return Err(Error::BadAlphabet(s));
            }
            out.index.insert(s.clone(), out.symbols.len() as u32);
            out.symbols.push(s);
        }
        Ok(out)
    }

    /// The digit alphabet `{"0", ..., "k-1"}`.
    pub fn digits(k: u32) -> Self {
        Alphabet::new((0..k).map(|d| d.to_string())).expect("digit names are distinct")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, sym: u32) -> &str {
        &self.symbols[sym as usize]
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<u32> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    /// True when every symbol name is a single character.
    pub fn single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a word written either as contiguous single-character names
    /// or as whitespace-separated tokens.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let mut out = Vec::new();
        if tokens.len() == 1 && self.index_of(tokens[0]).is_none() {
            for c in tokens[0].chars() {
                out.push(self.lookup(c.encode_utf8(&mut [0; 4]))?);
            }
        } else {
            for t in tokens {
                out.push(self.lookup(t)?);
            }
        }
        Ok(Word(out))
    }

    /// Renders a word; single-character alphabets are written contiguously,
    /// others space-separated.
    pub fn render(&self, word: &[u32]) -> String {
        let sep = if self.single_char() { "" } else { " " };
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// A finite word stored as symbol indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Number of occurrences of `sym`.
    pub fn count(&self, sym: u32) -> usize {
        self.0.iter().filter(|&&s| s == sym).count()
    }
}

impl Deref for Word {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

/// The first `N` symbols of an infinite word.
///
/// `first_index` is the integer index carried by position 1: machine outputs
/// start at `n = 0`, digit expansions of numbers at `n = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequencePrefix {
    pub source: String,
    pub alphabet: Alphabet,
    pub first_index: u64,
    pub data: Word,
}

impl SequencePrefix {
    pub fn new(source: impl Into<String>, alphabet: Alphabet, first_index: u64, data: Vec<u32>) -> Self {
        SequencePrefix {
            source: source.into(),
            alphabet,
            first_index,
            data: Word(data),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Symbol at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> u32 {
        self.data[pos - 1]
    }

    pub fn symbols(&self) -> &[u32] {
        &self.data
    }

    pub fn render(&self) -> String {
        self.alphabet.render(&self.data)
    }

    /// Text dump: contiguous for small single-character alphabets, otherwise
    /// one token per line.
    pub fn to_text(&self) -> String {
        if self.alphabet.single_char() && self.alphabet.len() <= 10 {
            let mut s = self.render();
            s.push('\n');
            s
        } else {
            let mut s = String::new();
            for &sym in self.data.iter() {
                s.push_str(self.alphabet.name(sym));
                s.push('\n');
            }
            s
        }
    }

    /// Reads a text dump. A single token is split into characters; several
    /// tokens are taken one symbol each. The alphabet is the sorted set of
    /// symbols that occur.
    pub fn from_text(source: impl Into<String>, text: &str) -> Result<Self> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let names: Vec<String> = if tokens.len() == 1 {
            tokens[0].chars().map(String::from).collect()
        } else {
            tokens.iter().map(|t| t.to_string()).collect()
        };
        let mut distinct = names.clone();
        distinct.sort();
        distinct.dedup();
        let alphabet = Alphabet::new(distinct)?;
        let data = names
            .iter()
            .map(|n| alphabet.lookup(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(SequencePrefix::new(source, alphabet, 1, data))
    }
}

/// Base-k expansion of `n`, most significant digit first; `0` maps to the empty word.
pub fn encode_base_k(n: u64, k: u32) -> Result<Word> {
    if k < 2 {
        return Err(Error::InvalidBase(k as u64));
    }
    let mut digits = Vec::new();
    let mut m = n;
    while m > 0 {
        digits.push((m % k as u64) as u32);
        m /= k as u64;
    }
    digits.reverse();
    Ok(Word(digits))
}

/// Value of a base-k word; leading zeros are allowed.
pub fn decode_base_k(w: &[u32], k: u32) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidBase(k as u64));
    }
    let mut n: u64 = 0;
    for &d in w {
        if d >= k {
            return Err(Error::InvalidDigit {
                digit: d as u64,
                base: k as u64,
            });
        }
        n = n
            .checked_mul(k as u64)
            .and_then(|x| x.checked_add(d as u64))
            .ok_or_else(|| Error::Overflow("base-k value exceeds u64".into()))?;
    }
    Ok(n)
}

/// `W^x`: `W` repeated `floor(x)` times, then the prefix of `W` of length
/// `ceil(frac(x) * |W|)`.
pub fn fractional_power(w: &[u32], x: Ratio) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::InvalidArgument("fractional power of the empty word".into()));
    }
    if *x.numer() == 0 {
        return Err(Error::InvalidArgument("exponent must be positive".into()));
    }
    let whole = x.to_integer() as usize;
    let frac = x.fract();
    let tail = (frac * Ratio::from_integer(w.len() as u64)).ceil().to_integer() as usize;
    let mut out = Vec::with_capacity(whole * w.len() + tail);
    for _ in 0..whole {
        out.extend_from_slice(w);
    }
    out.extend_from_slice(&w[..tail]);
    Ok(Word(out))
}

/// A factorization `U V^alpha` of the prefix of length `u + ext`:
/// `|U| = u`, `|V| = v`, and positions `u+1 ..= u+ext` have period `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepetitionWitness {
    pub u: u64,
    pub v: u64,
    pub ext: u64,
}

impl RepetitionWitness {
    pub fn new(u: u64, v: u64, ext: u64) -> Result<Self> {
        if v == 0 || ext < v {
            return Err(Error::InvalidArgument(format!(
                "witness needs 1 <= v <= ext (v = {v}, ext = {ext})"
            )));
        }
        Ok(RepetitionWitness { u, v, ext })
    }

    /// `|U V^alpha| / |U V|`.
    pub fn ratio(&self) -> Ratio {
        Ratio::new(self.u + self.ext, self.u + self.v)
    }

    /// The exponent `alpha = ext / v`.
    pub fn alpha(&self) -> Ratio {
        Ratio::new(self.ext, self.v)
    }

    /// Length of the prefix the witness describes.
    pub fn end(&self) -> u64 {
        self.u + self.ext
    }

    /// The same repetition read in a word with `shift` leading symbols removed.
    pub fn shifted(&self, shift: u64) -> Option<Self> {
        (self.u >= shift).then(|| RepetitionWitness {
            u: self.u - shift,
            ..*self
        })
    }
}

impl fmt::Display for RepetitionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u={} v={} ext={} ratio={}", self.u, self.v, self.ext, self.ratio())
    }
}

/// Checks `a[i] = a[i-v]` for every `u+v < i <= u+ext` (1-based).
pub fn verify_repetition(prefix: &[u32], w: &RepetitionWitness) -> Result<bool> {
    if w.v == 0 || w.ext < w.v {
        return Ok(false);
    }
    let end = w.u.saturating_add(w.ext);
    if end > prefix.len() as u64 {
        return Err(Error::InsufficientData {
            needed: end.min(usize::MAX as u64) as usize,
            available: prefix.len(),
        });
    }
    let (u, v, end) = (w.u as usize, w.v as usize, end as usize);
    Ok((u + v..end).all(|i| prefix[i] == prefix[i - v]))
}

/// Upper limit on the period `v` searched by [`best_repetition_at`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PeriodCap {
    /// `v <= floor(ell / 2)`.
    #[default]
    Half,
    /// `v <= ell`.
    Unbounded,
    /// `v <= min(c, ell)`.
    AtMost(usize),
}

impl PeriodCap {
    pub fn limit(&self, ell: usize) -> usize {
        match *self {
            PeriodCap::Half => ell / 2,
            PeriodCap::Unbounded => ell,
            PeriodCap::AtMost(c) => c.min(ell),
        }
    }
}

/// Z-array: `z[i]` is the length of the longest common prefix of `s` and `s[i..]`.
pub(crate) fn z_array(s: &[u32]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0usize, 0usize);
    for i in 1..n {
        if i < r {
            z[i] = (r - i).min(z[i - l]);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// The witness with maximal ratio among factorizations of the length-`ell`
/// prefix with `v` within the cap and at least one repeated symbol
/// (`ext > v`). Ties go to the smallest `v`, then the smallest `u`.
pub fn best_repetition_at(prefix: &[u32], ell: usize, cap: PeriodCap) -> Result<Option<RepetitionWitness>> {
    if ell > prefix.len() {
        return Err(Error::InsufficientData {
            needed: ell,
            available: prefix.len(),
        });
    }
    let vmax = cap.limit(ell);
    if vmax == 0 {
        return Ok(None);
    }
    // For period v, z[v] counts the positions i = ell, ell-1, ... with a[i] = a[i-v].
    let rev: Vec<u32> = prefix[..ell].iter().rev().copied().collect();
    let z = z_array(&rev);
    let mut best: Option<(RepetitionWitness, Ratio)> = None;
    for (v, &run) in z.iter().enumerate().take(vmax + 1).skip(1) {
        if run == 0 {
            continue;
        }
        let u = ell.saturating_sub(run + v);
        let w = RepetitionWitness {
            u: u as u64,
            v: v as u64,
            ext: (ell - u) as u64,
        };
        let r = w.ratio();
        if best.as_ref().is_none_or(|(_, br)| r > *br) {
            best = Some((w, r));
        }
    }
    Ok(best.map(|(w, _)| w))
}

/// One row of a repetition profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileEntry {
    pub ell: usize,
    pub witness: Option<RepetitionWitness>,
    /// Best ratio at `ell`, or 1 when no witness exists.
    pub ratio: Ratio,
    /// Running maximum of `ratio` over the lengths so far.
    pub record: Ratio,
}

/// Best repetition ratios at the requested prefix lengths.
pub fn dio_profile_of(prefix: &[u32], lengths: &[usize], cap: PeriodCap) -> Result<Vec<ProfileEntry>> {
    if lengths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("profile lengths must be increasing".into()));
    }
    let mut record = Ratio::from_integer(1);
    let mut out = Vec::with_capacity(lengths.len());
    for &ell in lengths {
        let witness = best_repetition_at(prefix, ell, cap)?;
        let ratio = witness.map_or(Ratio::from_integer(1), |w| w.ratio());
        record = record.max(ratio);
        out.push(ProfileEntry {
            ell,
            witness,
            ratio,
            record,
        });
    }
    Ok(out)
}

/// [`dio_profile_of`] over a freshly generated prefix of `source`.
pub fn dio_profile(source: &dyn SequenceSource, lengths: &[usize], cap: PeriodCap) -> Result<Vec<ProfileEntry>> {
    let max = lengths.iter().copied().max().unwrap_or(0);
    let prefix = source.prefix(max)?;
    dio_profile_of(prefix.symbols(), lengths, cap)
}

/// Suffix array and LCP array of a finite word; answers factor-complexity
/// and right-special queries for every length.
pub struct FactorIndex<'a> {
    text: &'a [u32],
    sa: Vec<usize>,
    /// `lcp[j]` = longest common prefix of suffixes `sa[j-1]` and `sa[j]`; `lcp[0] = 0`.
    lcp: Vec<usize>,
}

impl<'a> FactorIndex<'a> {
    pub fn new(text: &'a [u32]) -> Self {
        let sa = suffix_array(text);
        let lcp = lcp_array(text, &sa);
        FactorIndex { text, sa, lcp }
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    fn suffix_len(&self, j: usize) -> usize {
        self.text.len() - self.sa[j]
    }

    /// Number of distinct length-`n` blocks.
    pub fn complexity(&self, n: usize) -> usize {
        (0..self.sa.len())
            .filter(|&j| self.suffix_len(j) >= n && self.lcp[j] < n)
            .count()
    }

    /// `table[n]` = number of distinct length-`n` blocks for `0 < n <= max_n`.
    pub fn complexity_table(&self, max_n: usize) -> Vec<usize> {
        let mut diff = vec![0i64; max_n + 2];
        for j in 0..self.sa.len() {
            let lo = self.lcp[j] + 1;
            let hi = self.suffix_len(j).min(max_n);
            if lo <= hi {
                diff[lo] += 1;
                diff[hi + 1] -= 1;
            }
        }
        let mut table = vec![0usize; max_n + 1];
        let mut acc = 0i64;
        for n in 1..=max_n {
            acc += diff[n];
            table[n] = acc as usize;
        }
        table
    }

    /// Number of distinct length-`n` blocks followed by at least two distinct symbols.
    pub fn right_special(&self, n: usize) -> usize {
        let mut count = 0;
        let mut special = false;
        let mut prev_long = false;
        for j in 0..self.sa.len() {
            let len = self.suffix_len(j);
            if len < n {
                continue;
            }
            if j == 0 || self.lcp[j] < n {
                if special {
                    count += 1;
                }
                special = false;
                prev_long = false;
            }
            let long = len > n;
            if long && prev_long && self.lcp[j] == n {
                special = true;
            }
            prev_long = long;
        }
        if special {
            count += 1;
        }
        count
    }
}

/// Suffix array by prefix doubling.
pub(crate) fn suffix_array(text: &[u32]) -> Vec<usize> {
    let n = text.len();
    let mut sa: Vec<usize> = (0..n).collect();
    if n <= 1 {
        return sa;
    }
    let mut rank: Vec<usize> = text.iter().map(|&c| c as usize).collect();
    let mut tmp = vec![0usize; n];
    let mut h = 1;
    loop {
        let key = |i: usize| (rank[i], if i + h < n { rank[i + h] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&i| key(i));
        tmp[sa[0]] = 0;
        for j in 1..n {
            tmp[sa[j]] = tmp[sa[j - 1]] + usize::from(key(sa[j - 1]) != key(sa[j]));
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1]] == n - 1 {
            break;
        }
        h *= 2;
    }
    sa
}

/// Kasai's LCP construction.
pub(crate) fn lcp_array(text: &[u32], sa: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut rank = vec![0usize; n];
    for (j, &i) in sa.iter().enumerate() {
        rank[i] = j;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] > 0 {
            let k = sa[rank[i] - 1];
            while i + h < n && k + h < n && text[i + h] == text[k + h] {
                h += 1;
            }
            lcp[rank[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

/// Number of distinct length-`n` blocks in the prefix.
pub fn factor_complexity(prefix: &[u32], n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidArgument("block length must be positive".into()));
    }
    if n > prefix.len() {
        return Err(Error::InsufficientData {
            needed: n,
            available: prefix.len(),
        });
    }
    Ok(FactorIndex::new(prefix).complexity(n))
}

/// Number of distinct length-`n` blocks `w` with `wc` occurring for two or more symbols `c`.
pub fn right_special_count(prefix: &[u32], n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidArgument("block length must be positive".into()));
    }
    if n + 1 > prefix.len() {
        return Err(Error::InsufficientData {
            needed: n + 1,
            available: prefix.len(),
        });
    }
    Ok(FactorIndex::new(prefix).right_special(n))
}

/// Parses `p/q` (or a bare integer) into a reduced rational.
pub fn parse_ratio(text: &str) -> Result<Ratio> {
    let bad = || Error::InvalidArgument(format!("not a rational: {text:?}"));
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim().parse::<u64>().map_err(|_| bad())?, q.trim().parse::<u64>().map_err(|_| bad())?),
        None => (text.trim().parse::<u64>().map_err(|_| bad())?, 1),
    };
    if q == 0 {
        return Err(bad());
    }
    let g = p.gcd(&q);
    Ok(Ratio::new_raw(p / g, q / g))
}
