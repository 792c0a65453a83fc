//! Morphisms, codings and their fixed points; incidence-matrix growth
//! analysis and the self-similarity witness used by morphic certificates.
//!
//! Growth is decided combinatorially from the strongly connected components
//! of the letter graph (`a_j -> a_i` with multiplicity `|sigma(a_j)|_{a_i}`).
//! An irreducible non-negative integer matrix has Perron root exactly 1 when
//! its component is a single cycle, and a root above 1 as soon as one vertex
//! has two or more edges inside its component. Power iteration is only used
//! to report numeric Perron roots.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dfao::{Dfao, ValidationReport};
use crate::error::{Error, Result};
use crate::machine::{canonical_hash, sorted_symbols, SymbolWord};
use crate::source::SequenceSource;
use crate::words::{Alphabet, SequencePrefix, Word};

/// JSON form of a morphic generator (`"kind": "morphic"` or `"tag"`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphicFile {
    pub internal: Vec<String>,
    pub start: String,
    pub rules: BTreeMap<String, SymbolWord>,
    pub external: Vec<String>,
    pub coding: BTreeMap<String, String>,
}

/// A non-erasing morphism on a fixed alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::InvalidArgument("one image per letter is required".into()));
        }
        for (a, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::UnsupportedErasing(alphabet.name(a as u32).to_string()));
            }
            if let Some(&bad) = img.iter().find(|&&s| s as usize >= alphabet.len()) {
                return Err(Error::UnknownSymbol(bad.to_string()));
            }
        }
        Ok(Morphism { alphabet, images })
    }

    /// Convenience constructor for single-character letters: `&[("a", "acb"), ...]`.
    pub fn from_rules(rules: &[(&str, &str)]) -> Result<Self> {
        let alphabet = Alphabet::new(rules.iter().map(|(a, _)| a.to_string()))?;
        let images = rules
            .iter()
            .map(|(_, img)| alphabet.parse_word(img))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(alphabet, images)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn image(&self, a: u32) -> &[u32] {
        &self.images[a as usize]
    }

    pub fn apply(&self, w: &[u32]) -> Vec<u32> {
        w.iter().flat_map(|&a| self.image(a).iter().copied()).collect()
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    /// `Some(k)` when every image has length `k`.
    pub fn uniform_length(&self) -> Option<usize> {
        let k = self.images.first()?.len();
        self.images.iter().all(|w| w.len() == k).then_some(k)
    }

    pub fn incidence(&self) -> IncidenceMatrix {
        let n = self.size();
        let mut entries = vec![vec![0u64; n]; n];
        for (j, img) in self.images.iter().enumerate() {
            for &i in img.iter() {
                entries[i as usize][j] += 1;
            }
        }
        IncidenceMatrix { entries }
    }

    /// Letter-count vector of `sigma(w)` given the count vector of `w`.
    pub fn image_counts(&self, counts: &[u64]) -> Result<Vec<u64>> {
        let m = self.incidence();
        m.apply(counts)
    }

    /// Strongly connected components of the letter graph.
    pub fn components(&self) -> Components {
        Components::of(&self.incidence())
    }

    /// True iff the spectral radius of the incidence matrix exceeds 1.
    pub fn exponential_growth(&self) -> bool {
        let m = self.incidence();
        let comps = Components::of(&m);
        (0..comps.count()).any(|c| comps.class(&m, c) == ComponentClass::Expanding)
    }

    /// Numeric spectral radius: the largest Perron root over the components,
    /// each bracketed by Collatz–Wielandt bounds to within `tol`.
    pub fn spectral_radius_estimate(&self, tol: f64) -> Result<f64> {
        let m = self.incidence();
        let comps = Components::of(&m);
        let mut best = 0.0f64;
        for c in 0..comps.count() {
            best = best.max(comps.perron_root(&m, c, tol)?);
        }
        Ok(best)
    }

    /// `|sigma^n(a)|` for every letter `a`, for `n = 0..=steps`.
    pub fn length_table(&self, steps: usize) -> Result<Vec<Vec<u64>>> {
        // lengths[n][a] = |sigma^n(a)| = sum over letters b of |sigma^{n-1}(b)| * |sigma(a)|_b
        let mut out = vec![vec![1u64; self.size()]];
        for _ in 0..steps {
            let prev = out.last().expect("non-empty");
            let mut next = Vec::with_capacity(self.size());
            for img in &self.images {
                let mut total: u64 = 0;
                for &b in img.iter() {
                    total = total
                        .checked_add(prev[b as usize])
                        .ok_or_else(|| Error::Overflow("image length exceeds u64".into()))?;
                }
                next.push(total);
            }
            out.push(next);
        }
        Ok(out)
    }
}

/// `entries[i][j] = |sigma(a_j)|_{a_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub entries: Vec<Vec<u64>>,
}

impl IncidenceMatrix {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn column_sum(&self, j: usize) -> u64 {
        self.entries.iter().map(|row| row[j]).sum()
    }

    /// Matrix-vector product with overflow checking.
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter().zip(v).try_fold(0u64, |acc, (&m, &x)| {
                    m.checked_mul(x)
                        .and_then(|p| acc.checked_add(p))
                        .ok_or_else(|| Error::Overflow("letter count exceeds u64".into()))
                })
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentClass {
    /// A single letter without a loop: contributes no growth of its own.
    Transient,
    /// A single cycle: Perron root exactly 1.
    Cycle,
    /// Perron root above 1.
    Expanding,
}

/// Strongly connected components, numbered in reverse topological order
/// (every edge goes from a component to one with a smaller or equal number).
#[derive(Clone, Debug)]
pub struct Components {
    pub of_letter: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl Components {
    /// Tarjan's algorithm on the graph `j -> i` whenever `entries[i][j] > 0`.
    pub fn of(m: &IncidenceMatrix) -> Self {
        let n = m.dim();
        let succ: Vec<Vec<usize>> = (0..n)
            .map(|j| (0..n).filter(|&i| m.entries[i][j] > 0).collect())
            .collect();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut of_letter = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut counter = 0;

        // Iterative DFS: frames hold (vertex, next successor position).
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut frames = vec![(root, 0usize)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
                if *pos < succ[v].len() {
                    let w = succ[v][*pos];
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    frames.pop();
                    if let Some(&(parent, _)) = frames.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            of_letter[w] = members.len();
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        members.push(comp);
                    }
                }
            }
        }
        Components { of_letter, members }
    }

    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn class(&self, m: &IncidenceMatrix, c: usize) -> ComponentClass {
        let comp = &self.members[c];
        let mut any_edge = false;
        for &j in comp {
            let inner: u64 = comp.iter().map(|&i| m.entries[i][j]).sum();
            if inner >= 2 {
                return ComponentClass::Expanding;
            }
            any_edge |= inner == 1;
        }
        if any_edge {
            ComponentClass::Cycle
        } else {
            ComponentClass::Transient
        }
    }

    /// Perron root of the component's submatrix.
    pub fn perron_root(&self, m: &IncidenceMatrix, c: usize, tol: f64) -> Result<f64> {
        match self.class(m, c) {
            ComponentClass::Transient => Ok(0.0),
            ComponentClass::Cycle => Ok(1.0),
            ComponentClass::Expanding => {
                let comp = &self.members[c];
                let sub: Vec<Vec<f64>> = comp
                    .iter()
                    .map(|&i| comp.iter().map(|&j| m.entries[i][j] as f64).collect())
                    .collect();
                perron_power_iteration(&sub, tol)
            }
        }
    }

    /// Components reachable from component `c` (including `c`).
    pub fn successors(&self, m: &IncidenceMatrix, c: usize) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &j in &self.members[c] {
            for i in 0..m.dim() {
                let d = self.of_letter[i];
                if m.entries[i][j] > 0 && d != c && !out.contains(&d) {
                    out.push(d);
                }
            }
        }
        out
    }
}

const POWER_ITERATION_CAP: usize = 200_000;

/// Power iteration on `A + I` (primitive for irreducible `A`), stopped when
/// the Collatz–Wielandt bounds `min (Ax)_i/x_i <= r <= max (Ax)_i/x_i` are
/// within `tol`.
fn perron_power_iteration(a: &[Vec<f64>], tol: f64) -> Result<f64> {
    let n = a.len();
    let mut x = vec![1.0f64; n];
    let mut gap = f64::INFINITY;
    for _ in 0..POWER_ITERATION_CAP {
        let ax: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| a[i][j] * x[j]).sum::<f64>())
            .collect();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let r = ax[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        gap = hi - lo;
        if gap <= tol {
            return Ok((lo + hi) / 2.0);
        }
        let next: Vec<f64> = (0..n).map(|i| ax[i] + x[i]).collect();
        let norm = next.iter().cloned().fold(0.0, f64::max);
        x = next.into_iter().map(|v| v / norm).collect();
    }
    Err(Error::NonConvergence {
        iterations: POWER_ITERATION_CAP,
        gap,
    })
}

/// A morphic generator `phi(sigma^omega(start))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphicSpec {
    sigma: Morphism,
    start: u32,
    external: Alphabet,
    coding: Vec<u32>,
}

impl MorphicSpec {
    pub fn new(sigma: Morphism, start: u32, external: Alphabet, coding: Vec<u32>) -> Result<Self> {
        if start as usize >= sigma.size() {
            return Err(Error::UnknownSymbol(start.to_string()));
        }
        if coding.len() != sigma.size() {
            return Err(Error::MissingOutput("coding must be total on the internal alphabet".into()));
        }
        if let Some(&bad) = coding.iter().find(|&&c| c as usize >= external.len()) {
            return Err(Error::UnknownSymbol(bad.to_string()));
        }
        let img = sigma.image(start);
        let name = sigma.alphabet().name(start).to_string();
        if img[0] != start {
            return Err(Error::NotProlongable {
                letter: name,
                detail: "image does not begin with the start letter".into(),
            });
        }
        if img.len() < 2 {
            return Err(Error::NotProlongable {
                letter: name,
                detail: "image of the start letter has length 1".into(),
            });
        }
        Ok(MorphicSpec {
            sigma,
            start,
            external,
            coding,
        })
    }

    /// Purely morphic word: the coding is the identity on the internal alphabet.
    pub fn pure(sigma: Morphism, start: &str) -> Result<Self> {
        let start = sigma.alphabet().lookup(start)?;
        let external = sigma.alphabet().clone();
        let coding = (0..sigma.size() as u32).collect();
        MorphicSpec::new(sigma, start, external, coding)
    }

    pub fn from_file(file: &MorphicFile) -> Result<Self> {
        validate_morphic(file).map(|(m, _)| m)
    }

    pub fn to_file(&self) -> MorphicFile {
        let a = self.sigma.alphabet();
        MorphicFile {
            internal: a.symbols().to_vec(),
            start: a.name(self.start).to_string(),
            rules: (0..a.len() as u32)
                .map(|l| (a.name(l).to_string(), SymbolWord::write(a, self.sigma.image(l))))
                .collect(),
            external: self.external.symbols().to_vec(),
            coding: (0..a.len() as u32)
                .map(|l| {
                    (
                        a.name(l).to_string(),
                        self.external.name(self.coding[l as usize]).to_string(),
                    )
                })
                .collect(),
        }
    }

    pub fn sigma(&self) -> &Morphism {
        &self.sigma
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn internal(&self) -> &Alphabet {
        self.sigma.alphabet()
    }

    pub fn external(&self) -> &Alphabet {
        &self.external
    }

    pub fn code(&self, letter: u32) -> u32 {
        self.coding[letter as usize]
    }

    /// First `count` letters of `sigma^omega(start)`, produced by appending
    /// `sigma(u_i)` for `i = 1, 2, ...` behind `sigma(start)`.
    pub fn fixed_point(&self, count: usize) -> Vec<u32> {
        let mut w: Vec<u32> = self.sigma.image(self.start).to_vec();
        let mut i = 1;
        while w.len() < count {
            let letter = w[i];
            w.extend_from_slice(self.sigma.image(letter));
            i += 1;
        }
        w.truncate(count);
        w
    }

    /// Same prefix computed by iterating `sigma^n(start)` until it is long enough.
    pub fn fixed_point_by_iteration(&self, count: usize) -> Vec<u32> {
        let mut w = vec![self.start];
        while w.len() < count {
            w = self.sigma.apply(&w);
        }
        w.truncate(count);
        w
    }

    pub fn internal_prefix(&self, count: usize) -> SequencePrefix {
        SequencePrefix::new(
            format!("{}#internal", self.id()),
            self.internal().clone(),
            0,
            self.fixed_point(count),
        )
    }

    /// First `count` symbols of `phi(sigma^omega(start))`.
    pub fn coded_prefix(&self, count: usize) -> SequencePrefix {
        let data = self
            .fixed_point(count)
            .into_iter()
            .map(|l| self.code(l))
            .collect();
        SequencePrefix::new(self.id(), self.external.clone(), 0, data)
    }

    /// Letters occurring in the fixed point (reachable from the start letter).
    pub fn occurring_letters(&self) -> Vec<bool> {
        let mut seen = vec![false; self.sigma.size()];
        let mut stack = vec![self.start];
        seen[self.start as usize] = true;
        while let Some(a) = stack.pop() {
            for &b in self.sigma.image(a) {
                if !seen[b as usize] {
                    seen[b as usize] = true;
                    stack.push(b);
                }
            }
        }
        seen
    }

    pub fn incidence(&self) -> IncidenceMatrix {
        self.sigma.incidence()
    }

    pub fn exponential_growth(&self) -> bool {
        self.sigma.exponential_growth()
    }

    pub fn spectral_radius_estimate(&self, tol: f64) -> Result<f64> {
        self.sigma.spectral_radius_estimate(tol)
    }

    /// Per-letter growth `(theta_b, k_b)` with `|sigma^n(b)| ~ n^k_b theta_b^n`.
    ///
    /// `theta_b` is the largest Perron root over components reachable from
    /// `b`; `k_b + 1` is the largest number of components with root
    /// `theta_b` met along one path of the condensation DAG.
    pub fn growth_report(&self) -> Result<GrowthReport> {
        const TOL: f64 = 1e-9;
        let m = self.incidence();
        let comps = Components::of(&m);
        let nc = comps.count();
        let roots = (0..nc)
            .map(|c| comps.perron_root(&m, c, TOL))
            .collect::<Result<Vec<_>>>()?;
        let succ: Vec<Vec<usize>> = (0..nc).map(|c| comps.successors(&m, c)).collect();
        let same = |x: f64, y: f64| (x - y).abs() <= 1e-6 * x.max(1.0);

        // Successors always carry smaller component numbers, so increasing
        // order is a valid evaluation order.
        let mut theta = vec![0.0f64; nc];
        for c in 0..nc {
            theta[c] = succ[c].iter().map(|&d| theta[d]).fold(roots[c], f64::max);
        }
        let mut degree = vec![0usize; nc];
        for c in 0..nc {
            // chain[d] = most components with root theta[c] on a path starting at d
            let target = theta[c];
            let mut chain = vec![0usize; c + 1];
            for d in 0..=c {
                let own = usize::from(roots[d] > 0.0 && same(roots[d], target));
                let tail = succ[d].iter().map(|&e| chain[e]).max().unwrap_or(0);
                chain[d] = own + tail;
            }
            degree[c] = chain[c].saturating_sub(1);
        }

        let occurring = self.occurring_letters();
        let per_letter: Vec<LetterGrowth> = (0..self.sigma.size())
            .map(|b| {
                let c = comps.of_letter[b];
                LetterGrowth {
                    theta: theta[c],
                    poly_degree: degree[c],
                    exponential: theta[c] > 1.0 + 1e-6,
                }
            })
            .collect();
        let best = per_letter
            .iter()
            .zip(&occurring)
            .filter(|(_, &occ)| occ)
            .map(|(g, _)| (g.theta, g.poly_degree))
            .fold(None::<(f64, usize)>, |acc, (t, k)| match acc {
                None => Some((t, k)),
                Some((bt, bk)) => {
                    if same(t, bt) {
                        Some((bt.max(t), bk.max(k)))
                    } else if t > bt {
                        Some((t, k))
                    } else {
                        Some((bt, bk))
                    }
                }
            })
            .expect("start letter occurs");
        let maximal_growth = (0..self.sigma.size())
            .filter(|&b| occurring[b] && same(per_letter[b].theta, best.0) && per_letter[b].poly_degree == best.1)
            .map(|b| b as u32)
            .collect();
        Ok(GrowthReport {
            per_letter,
            maximal_growth,
            global_exponential: self.exponential_growth(),
        })
    }

    /// Finds `U b V b` as a prefix of the internal fixed point, `b` the first
    /// maximal-growth letter (alphabet order) occurring twice within `scan_len`.
    pub fn witness_seed(&self, scan_len: usize) -> Result<MorphicSeed> {
        if !self.exponential_growth() {
            return Err(Error::NotExponential);
        }
        let report = self.growth_report()?;
        let word = self.fixed_point(scan_len);
        for &b in &report.maximal_growth {
            let mut hits = word.iter().enumerate().filter(|(_, &l)| l == b).map(|(i, _)| i);
            if let (Some(p1), Some(p2)) = (hits.next(), hits.next()) {
                return Ok(MorphicSeed {
                    u: Word(word[..p1].to_vec()),
                    b,
                    v: Word(word[p1 + 1..p2].to_vec()),
                    p1: p1 + 1,
                    p2: p2 + 1,
                });
            }
        }
        Err(Error::BudgetExhausted(format!(
            "no maximal-growth letter occurs twice in the first {scan_len} letters"
        )))
    }

    /// Equivalent DFAO for a k-uniform spec: `delta(q, i)` is the `i`-th
    /// letter of `sigma(q)` and the output is the coding.
    pub fn to_dfao(&self) -> Result<Dfao> {
        let k = self
            .sigma
            .uniform_length()
            .ok_or_else(|| Error::NotUniform("images have different lengths".into()))?;
        let delta = (0..self.sigma.size() as u32)
            .map(|q| self.sigma.image(q).to_vec())
            .collect();
        Dfao::from_tables(
            k as u32,
            self.internal().clone(),
            self.start,
            delta,
            self.external.clone(),
            self.coding.clone(),
        )
    }

    /// Inverse of [`MorphicSpec::to_dfao`]; needs `delta(q0, 0) = q0`.
    pub fn from_dfao(m: &Dfao) -> Result<Self> {
        if m.step(m.initial(), 0) != m.initial() {
            return Err(Error::UnsupportedForm(
                "the initial state must loop on digit 0".into(),
            ));
        }
        let images = (0..m.num_states() as u32)
            .map(|q| Word((0..m.k()).map(|d| m.step(q, d)).collect()))
            .collect();
        let sigma = Morphism::new(m.states().clone(), images)?;
        let coding = (0..m.num_states() as u32).map(|q| m.tau(q)).collect();
        MorphicSpec::new(sigma, m.initial(), m.outputs().clone(), coding)
    }
}

impl SequenceSource for MorphicSpec {
    fn id(&self) -> String {
        canonical_hash("morphic", &self.to_file())
    }

    fn alphabet(&self) -> Alphabet {
        self.external.clone()
    }

    fn prefix(&self, len: usize) -> Result<SequencePrefix> {
        Ok(self.coded_prefix(len))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LetterGrowth {
    pub theta: f64,
    pub poly_degree: usize,
    pub exponential: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub per_letter: Vec<LetterGrowth>,
    pub maximal_growth: Vec<u32>,
    pub global_exponential: bool,
}

/// `U b V b` is a prefix of the internal fixed point; `p1 < p2` are the
/// 1-based positions of the two occurrences of `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphicSeed {
    pub u: Word,
    pub b: u32,
    pub v: Word,
    pub p1: usize,
    pub p2: usize,
}

/// Checks non-erasure and prolongability; letters absent from the fixed
/// point are reported as warnings.
pub fn validate_morphic(file: &MorphicFile) -> Result<(MorphicSpec, ValidationReport)> {
    let internal = Alphabet::new(file.internal.iter().cloned())?;
    let external = Alphabet::new(file.external.iter().cloned())?;
    for name in file.rules.keys().chain(file.coding.keys()) {
        internal.lookup(name)?;
    }
    let mut images = Vec::with_capacity(internal.len());
    for a in internal.symbols() {
        let rule = file
            .rules
            .get(a)
            .ok_or_else(|| Error::MissingTransition {
                state: a.clone(),
                input: "rule".into(),
            })?;
        images.push(Word(rule.resolve(&internal)?));
    }
    let coding = internal
        .symbols()
        .iter()
        .map(|a| {
            let b = file
                .coding
                .get(a)
                .ok_or_else(|| Error::MissingOutput(format!("coding of {a:?}")))?;
            external.lookup(b)
        })
        .collect::<Result<Vec<_>>>()?;
    let start = internal.lookup(&file.start)?;
    let sigma = Morphism::new(internal, images)?;
    let spec = MorphicSpec::new(sigma, start, external, coding)?;
    let mut report = ValidationReport::default();
    for (a, occ) in spec.occurring_letters().into_iter().enumerate() {
        if !occ {
            report.warnings.push(format!(
                "letter {:?} does not occur in the fixed point",
                spec.internal().name(a as u32)
            ));
        }
    }
    Ok((spec, report))
}

fn spec_from(rules: &[(&str, &str)], start: &str, coding: &[(&str, &str)]) -> MorphicSpec {
    let sigma = Morphism::from_rules(rules).expect("catalog rules are valid");
    let external = Alphabet::new(sorted_symbols(coding.iter().map(|(_, b)| b.to_string()))).expect("distinct");
    let codes = rules
        .iter()
        .map(|(a, _)| {
            let b = coding.iter().find(|(x, _)| x == a).expect("coding is total").1;
            external.lookup(b).expect("coded symbol exists")
        })
        .collect();
    let start = sigma.alphabet().lookup(start).expect("start letter exists");
    MorphicSpec::new(sigma, start, external, codes).expect("catalog specs are valid")
}

/// `a -> acb, b -> abc, c -> c`, coded `a, b, c -> 0, 1, 2`.
pub fn xi1() -> MorphicSpec {
    spec_from(
        &[("a", "acb"), ("b", "abc"), ("c", "c")],
        "a",
        &[("a", "0"), ("b", "1"), ("c", "2")],
    )
}

/// `a -> ab, b -> ccb, c -> c`, coded `b -> 1` and `a, c -> 0`: the
/// characteristic word of the squares.
pub fn squares() -> MorphicSpec {
    spec_from(
        &[("a", "ab"), ("b", "ccb"), ("c", "c")],
        "a",
        &[("a", "0"), ("b", "1"), ("c", "0")],
    )
}

/// Thue–Morse as the 2-uniform morphism `q0 -> q0 q1, q1 -> q1 q0`.
pub fn thue_morse() -> MorphicSpec {
    let internal = Alphabet::new(["q0", "q1"]).expect("distinct");
    let sigma = Morphism::new(internal, vec![Word(vec![0, 1]), Word(vec![1, 0])]).expect("valid");
    MorphicSpec::new(sigma, 0, Alphabet::digits(2), vec![0, 1]).expect("valid")
}

/// `a -> ab, b -> a`.
pub fn fibonacci() -> MorphicSpec {
    spec_from(&[("a", "ab"), ("b", "a")], "a", &[("a", "0"), ("b", "1")])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coded(spec: &MorphicSpec, n: usize) -> String {
        spec.coded_prefix(n).render()
    }

    #[test]
    fn validation() {
        assert!(validate_morphic(&xi1().to_file()).is_ok());
        let mut f = xi1().to_file();
        f.rules.insert("a".into(), SymbolWord::Text("a".into()));
        assert!(matches!(validate_morphic(&f), Err(Error::NotProlongable { .. })));
        let mut f = xi1().to_file();
        f.rules.insert("a".into(), SymbolWord::Text("ab".into()));
        f.rules.insert("b".into(), SymbolWord::Text("".into()));
        assert!(matches!(validate_morphic(&f), Err(Error::UnsupportedErasing(_))));
        let mut f = xi1().to_file();
        f.rules.insert("a".into(), SymbolWord::Text("cab".into()));
        assert!(matches!(validate_morphic(&f), Err(Error::NotProlongable { .. })));
    }

    #[test]
    fn unreachable_letter_warning() {
        let mut f = xi1().to_file();
        f.internal.push("d".into());
        f.rules.insert("d".into(), SymbolWord::Text("dd".into()));
        f.coding.insert("d".into(), "0".into());
        let (_, report) = validate_morphic(&f).unwrap();
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn fixed_point_prefixes() {
        assert_eq!(coded(&xi1(), 15), "021201220210122");
        assert_eq!(coded(&thue_morse(), 8), "01101001");
        assert_eq!(coded(&squares(), 10), "0100100001");
        let sq = squares().coded_prefix(2000);
        for n in 0..2000u64 {
            let r = (n as f64).sqrt() as u64;
            let is_sq = n > 0 && (r * r == n || (r + 1) * (r + 1) == n);
            assert_eq!(sq.at(n as usize + 1) == 1, is_sq, "n = {n}");
        }
    }

    #[test]
    fn two_expansion_strategies_agree() {
        for spec in [xi1(), squares(), thue_morse(), fibonacci()] {
            assert_eq!(spec.fixed_point(10_000), spec.fixed_point_by_iteration(10_000));
        }
    }

    #[test]
    fn fixed_point_is_a_fixed_point() {
        for spec in [xi1(), squares(), thue_morse(), fibonacci()] {
            let u = spec.fixed_point(10_000);
            let image = spec.sigma().apply(&u);
            assert_eq!(&image[..10_000], &u[..]);
        }
    }

    #[test]
    fn incidence_examples() {
        let m = xi1().incidence();
        assert_eq!(m.entries, vec![vec![1, 1, 0], vec![1, 1, 0], vec![1, 1, 1]]);
        for j in 0..3 {
            assert_eq!(m.column_sum(j) as usize, xi1().sigma().image(j as u32).len());
        }
        let id = Morphism::from_rules(&[("a", "a")]).unwrap();
        assert_eq!(id.incidence().entries, vec![vec![1]]);
        assert_eq!(thue_morse().incidence().entries, vec![vec![1, 1], vec![1, 1]]);
    }

    #[test]
    fn growth_decisions() {
        assert!(xi1().exponential_growth());
        assert!(!squares().exponential_growth());
        assert!(Morphism::from_rules(&[("a", "aa")]).unwrap().exponential_growth());
        assert!(!Morphism::from_rules(&[("a", "a")]).unwrap().exponential_growth());
        assert!((xi1().spectral_radius_estimate(1e-9).unwrap() - 2.0).abs() <= 1e-9);
        assert!((squares().spectral_radius_estimate(1e-9).unwrap() - 1.0).abs() <= 1e-9);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((fibonacci().spectral_radius_estimate(1e-9).unwrap() - golden).abs() <= 1e-8);
        // periodic irreducible component: a -> bb, b -> a
        let per = Morphism::from_rules(&[("a", "bb"), ("b", "a")]).unwrap();
        assert!((per.spectral_radius_estimate(1e-9).unwrap() - 2f64.sqrt()).abs() <= 1e-8);
    }

    #[test]
    fn growth_reports() {
        let r = xi1().growth_report().unwrap();
        assert_eq!(r.maximal_growth, vec![0, 1]);
        assert_eq!(r.per_letter[2].poly_degree, 0);
        assert!((r.per_letter[2].theta - 1.0).abs() < 1e-12);
        assert!((r.per_letter[0].theta - 2.0).abs() < 1e-9);
        let lengths = xi1().sigma().length_table(20).unwrap();
        for (n, row) in lengths.iter().enumerate() {
            assert_eq!(row[0], (1 << (n + 1)) - 1);
            assert_eq!(row[2], 1);
        }

        let r = squares().growth_report().unwrap();
        assert!(r.maximal_growth.contains(&0));
        assert_eq!(r.per_letter[0].poly_degree, 2);
        assert_eq!(r.per_letter[1].poly_degree, 1);
        assert!(!r.global_exponential);

        let r = thue_morse().growth_report().unwrap();
        assert_eq!(r.maximal_growth, vec![0, 1]);
        for g in &r.per_letter {
            assert!((g.theta - 2.0).abs() < 1e-9);
            assert_eq!(g.poly_degree, 0);
        }
    }

    #[test]
    fn poly_degree_matches_direct_iteration() {
        // chains of cycles and an expanding component fed by a cycle chain
        let cases = [
            Morphism::from_rules(&[("a", "ab"), ("b", "bc"), ("c", "cd"), ("d", "d")]).unwrap(),
            Morphism::from_rules(&[("a", "ab"), ("b", "bb")]).unwrap(),
            Morphism::from_rules(&[("a", "ab"), ("b", "bbc"), ("c", "cc")]).unwrap(),
            Morphism::from_rules(&[("a", "aab"), ("b", "bbc"), ("c", "cc")]).unwrap(),
        ];
        for sigma in cases {
            let spec = MorphicSpec::pure(sigma.clone(), "a").unwrap();
            let report = spec.growth_report().unwrap();
            let lengths = sigma.length_table(50).unwrap();
            for (b, g) in report.per_letter.iter().enumerate() {
                let ratio = lengths[50][b] as f64 / lengths[25][b] as f64;
                // |sigma^n(b)| ~ n^k theta^n, so ratio / theta^25 ~ 2^k
                let poly = ratio / g.theta.powi(25);
                let expect = 2f64.powi(g.poly_degree as i32);
                assert!(poly > expect / 1.6 && poly < expect * 1.6, "{sigma:?} letter {b}: {poly} vs {expect}");
            }
        }
    }

    #[test]
    fn witness_seeds() {
        let s = xi1().witness_seed(64).unwrap();
        assert_eq!((s.b, s.p1, s.p2), (0, 1, 5));
        assert!(s.u.is_empty());
        assert_eq!(xi1().internal().render(&s.v), "cbc");

        let tm = thue_morse();
        let s = tm.witness_seed(64).unwrap();
        assert_eq!((s.b, s.p1, s.p2), (0, 1, 4));
        assert_eq!(tm.internal().render(&s.v), "q1 q1");

        assert!(matches!(squares().witness_seed(64), Err(Error::NotExponential)));
    }

    #[test]
    fn seed_images_stay_prefixes() {
        for spec in [xi1(), thue_morse(), fibonacci()] {
            let seed = spec.witness_seed(256).unwrap();
            let mut u = seed.u.0.clone();
            let mut bv = vec![seed.b];
            bv.extend_from_slice(&seed.v);
            let mut b = vec![seed.b];
            for _ in 0..=8 {
                let mut w = u.clone();
                w.extend_from_slice(&bv);
                w.extend_from_slice(&b);
                let fp = spec.fixed_point(w.len());
                assert_eq!(fp, w);
                u = spec.sigma().apply(&u);
                bv = spec.sigma().apply(&bv);
                b = spec.sigma().apply(&b);
            }
        }
    }

    #[test]
    fn dfao_conversion() {
        let tm = thue_morse();
        let m = tm.to_dfao().unwrap();
        assert_eq!(m.to_file(), crate::dfao::thue_morse().to_file());
        let back = MorphicSpec::from_dfao(&crate::dfao::thue_morse()).unwrap();
        assert_eq!(back, tm);
        let fp = tm.coded_prefix(10_000);
        for n in 0..10_000u64 {
            assert_eq!(m.run(n), fp.at(n as usize + 1));
        }
        assert!(matches!(xi1().to_dfao(), Err(Error::NotUniform(_))));
        let ts = crate::dfao::three_squares();
        let spec = MorphicSpec::from_dfao(&ts).unwrap();
        let fp = spec.coded_prefix(10_000);
        for n in 0..10_000u64 {
            assert_eq!(ts.outputs().name(ts.run(n)), spec.external().name(fp.at(n as usize + 1)));
        }
    }

    #[test]
    fn from_dfao_needs_zero_loop() {
        let mut f = crate::dfao::thue_morse().to_file();
        f.delta.get_mut("q0").unwrap().insert("0".into(), "q1".into());
        let m = Dfao::from_file(&f).unwrap();
        assert!(matches!(MorphicSpec::from_dfao(&m), Err(Error::UnsupportedForm(_))));
    }
}
