#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use repcert::machine::SymbolWord;
use repcert::morphic::{MorphicSpec, Morphism};
use repcert::pda::{Dpao, DpaoFile, StackConfig, TransitionRecord};
use repcert::words::{Alphabet, Word};
use repcert::RepetitionWitness;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A complete binary DPAO with up to 3 states and 2 stack symbols.
pub fn random_dpao(rng: &mut ChaCha8Rng) -> Dpao {
    let nq = rng.gen_range(1..=3);
    let ng = rng.gen_range(1..=2);
    let states: Vec<String> = (0..nq).map(|q| format!("q{q}")).collect();
    let stack: Vec<String> = ["X", "Y"][..ng].iter().map(|s| s.to_string()).collect();
    let tops: Vec<String> = std::iter::once("#".to_string()).chain(stack.iter().cloned()).collect();
    let mut transitions = Vec::new();
    let mut output = BTreeMap::new();
    for q in &states {
        let mut row = BTreeMap::new();
        for top in &tops {
            row.insert(top.clone(), rng.gen_range(0..2).to_string());
            let to = |rng: &mut ChaCha8Rng| states[rng.gen_range(0..nq)].clone();
            if top != "#" && rng.gen_bool(0.25) {
                transitions.push(TransitionRecord {
                    state: q.clone(),
                    top: top.clone(),
                    input: "eps".into(),
                    to: to(rng),
                    push: SymbolWord::Text(String::new()),
                });
                continue;
            }
            for d in 0..2 {
                let len = rng.gen_range(0..=2);
                let push: String = (0..len).map(|_| stack[rng.gen_range(0..ng)].clone()).collect();
                transitions.push(TransitionRecord {
                    state: q.clone(),
                    top: top.clone(),
                    input: d.to_string(),
                    to: to(rng),
                    push: SymbolWord::Text(push),
                });
            }
        }
        output.insert(q.clone(), row);
    }
    let file = DpaoFile {
        k: 2,
        states,
        initial: "q0".into(),
        stack,
        transitions,
        output,
    };
    Dpao::from_file(&file).expect("generated machines are valid")
}

/// States observed at the first moment the bottom-most symbol of `start`
/// is removed, with the fewest digits read, over all inputs of length at
/// most `depth`.
pub fn simulate_pops(m: &Dpao, start: StackConfig, depth: usize) -> BTreeMap<u32, u64> {
    let floor = start.stack.len();
    let mut found = BTreeMap::new();
    let (start, immediate) = m.close_tracking(&start, floor);
    if let Some(p) = immediate {
        found.insert(p, 0);
        return found;
    }
    let mut frontier = vec![start];
    for len in 1..=depth as u64 {
        let mut next = Vec::new();
        for c in &frontier {
            for d in 0..m.k() {
                let (after, dropped) = m.step_tracking(c, d, floor);
                match dropped {
                    Some(p) => {
                        found.entry(p).or_insert(len);
                    }
                    None => next.push(after),
                }
            }
        }
        frontier = next;
    }
    found
}

/// A morphism on 2 to 4 letters with images of length 1 to 3, prolongable on `a`.
pub fn random_morphic(rng: &mut ChaCha8Rng) -> MorphicSpec {
    let size = rng.gen_range(2..=4usize);
    let alphabet = Alphabet::new(["a", "b", "c", "d"][..size].iter().copied()).unwrap();
    let images = (0..size)
        .map(|i| {
            let len = if i == 0 { rng.gen_range(2..=3) } else { rng.gen_range(1..=3) };
            let mut w: Vec<u32> = (0..len).map(|_| rng.gen_range(0..size as u32)).collect();
            if i == 0 {
                w[0] = 0;
            }
            Word(w)
        })
        .collect();
    MorphicSpec::pure(Morphism::new(alphabet, images).unwrap(), "a").unwrap()
}

/// `max over letters |sigma^n(b)|`, by repeated application on exact
/// letter-count vectors.
pub fn max_image_length(sigma: &Morphism, n: usize) -> BigUint {
    let size = sigma.size();
    let mut best = BigUint::from(0u32);
    for b in 0..size {
        let mut counts = vec![BigUint::from(0u32); size];
        counts[b] = BigUint::from(1u32);
        for _ in 0..n {
            let mut next = vec![BigUint::from(0u32); size];
            for (a, c) in counts.iter().enumerate() {
                for &x in sigma.image(a as u32) {
                    next[x as usize] += c;
                }
            }
            counts = next;
        }
        let total: BigUint = counts.iter().sum();
        best = best.max(total);
    }
    best
}

/// Exponential growth read off the lengths: `L(2n) / L(n)` explodes.
pub fn grows_exponentially(sigma: &Morphism) -> bool {
    let short = max_image_length(sigma, 128);
    let long = max_image_length(sigma, 256);
    long > short * BigUint::from(1000u32)
}

/// Every `(u, v)` tried directly: O(ell^3).
pub fn brute_best_repetition(prefix: &[u32], ell: usize, vmax: usize) -> Option<RepetitionWitness> {
    let mut best: Option<RepetitionWitness> = None;
    for v in 1..=vmax.min(ell) {
        for u in 0..ell.saturating_sub(v) {
            let ext = ell - u;
            if ext <= v || !(u + v..ell).all(|i| prefix[i] == prefix[i - v]) {
                continue;
            }
            let w = RepetitionWitness { u: u as u64, v: v as u64, ext: ext as u64 };
            if best.is_none_or(|b| w.ratio() > b.ratio()) {
                best = Some(w);
            }
        }
    }
    best
}
