mod common;

use repcert::certify::{certify_pda, verify_certificate};
use repcert::pda::{Distinction, PairBudget, PairMethod};

const BUDGET: PairBudget = PairBudget {
    n_max: 1 << 10,
    height_cap: 16,
};

#[test]
fn pairs_on_random_machines_agree_on_extensions() {
    let mut rng = common::rng(7);
    let mut found = [0usize; 2];
    for _ in 0..300 {
        let m = common::random_dpao(&mut rng);
        let Some(pair) = m.find_equivalent_pair(BUDGET) else {
            continue;
        };
        assert!(1 <= pair.n && pair.n < pair.n_prime);
        found[(pair.method == PairMethod::Protected) as usize] += 1;
        for level in 0..=8u32 {
            let scale = 2u64.pow(level);
            for j in 0..scale {
                assert_eq!(
                    m.output_at(scale * pair.n + j),
                    m.output_at(scale * pair.n_prime + j),
                    "{:?} level {level} offset {j}",
                    pair
                );
            }
        }
        assert_eq!(
            m.bounded_distinguish(pair.n, pair.n_prime, 10),
            Distinction::IndistinguishableToDepth { depth: 10 }
        );
    }
    assert!(found[0] > 0, "no exact pairs were exercised");
    assert!(found[1] > 0, "no protected pairs were exercised");
}

#[test]
fn certificates_on_random_machines_verify() {
    let mut rng = common::rng(8);
    let mut checked = 0;
    for _ in 0..100 {
        let m = common::random_dpao(&mut rng);
        if let Some(cert) = certify_pda(&m, BUDGET, 6).unwrap() {
            verify_certificate(&m, &cert, 2).unwrap();
            checked += 1;
        }
    }
    assert!(checked > 10);
}

#[test]
fn distinguishing_words_really_distinguish() {
    let mut rng = common::rng(9);
    for _ in 0..100 {
        let m = common::random_dpao(&mut rng);
        for (n, n_prime) in [(1u64, 2u64), (2, 3), (3, 5)] {
            if let Distinction::Distinguished { word } = m.bounded_distinguish(n, n_prime, 6) {
                let extend = |x: u64| word.iter().fold(x, |acc, &d| acc * 2 + d as u64);
                assert_ne!(m.output_at(extend(n)), m.output_at(extend(n_prime)));
            }
        }
    }
}

#[test]
fn protected_pop_sets_are_closed_under_simulation() {
    let mut rng = common::rng(10);
    for _ in 0..100 {
        let m = common::random_dpao(&mut rng);
        let pops = m.pop_table();
        for q in 0..m.states().len() as u32 {
            for z in 0..m.stack_alphabet().len() as u32 {
                if pops.is_permanent(q, z) {
                    let start = repcert::StackConfig { state: q, stack: vec![0, z] };
                    assert!(common::simulate_pops(&m, start, 12).is_empty());
                }
            }
        }
    }
}
