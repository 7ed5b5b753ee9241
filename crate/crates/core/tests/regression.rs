//! Frozen regression values and cross-module properties.
//!
//! The frozen values were cross-checked with an independent networkx script
//! (brute-force subgraph enumeration, exact fractions).

use kklab_core::counting::{count_copies, count_cycles, count_labeled};
use kklab_core::exact::{parse_value, rational, RationalRoot};
use kklab_core::expectation::{expectation_threshold, is_q_sparse, q_min, required_l};
use kklab_core::graph::families::*;
use kklab_core::montecarlo::{sample_gnp, stream};
use kklab_core::search::{exhaustive_sweep, extremal_search, SearchConfig};
use kklab_core::{Graph, Limits};
use num_bigint::BigUint;
use proptest::prelude::*;

fn lim() -> Limits {
    Limits::default()
}

#[test]
fn bowtie_required_l_is_frozen() {
    let q = q_min(&bowtie(), 10, &lim()).unwrap().q_min;
    assert_eq!(q, parse_value("root:3780:6").unwrap());
    let r = required_l(&bowtie(), &complete(3), 10, &q, &lim()).unwrap();
    assert_eq!(r.copies, BigUint::from(2u32));
    // L^6 = 21/20
    assert_eq!(r.value, RationalRoot::new(rational(21, 20), 6));
}

#[test]
fn c4_sweep_at_twelve_is_frozen() {
    let q = q_min(&cycle(4), 12, &lim()).unwrap().q_min;
    assert_eq!(q, parse_value("root:1485:4").unwrap());
    let s = exhaustive_sweep(12, &q, &cycle(4), 5, &lim()).unwrap();
    let best = s.maximizer.unwrap();
    assert_eq!(s.examined, 33);
    assert_eq!(best.graph6, "Cr");
    assert_eq!(best.copies, BigUint::from(1u32));
    assert_eq!(best.score, RationalRoot::one());
}

#[test]
fn annealer_is_reproducible() {
    let q = q_min(&complete(3), 10, &lim()).unwrap().q_min;
    let mut cfg = SearchConfig::new(10, q, complete(3), 3000, 11);
    cfg.host_cap = 6;
    let a = extremal_search(&cfg, &lim()).unwrap();
    let b = extremal_search(&cfg, &lim()).unwrap();
    let key = |r: &kklab_core::search::SearchResult| {
        r.leaderboard.iter().map(|e| (e.graph6.clone(), e.copies.clone(), e.moves)).collect::<Vec<_>>()
    };
    assert_eq!(key(&a), key(&b));
}

#[test]
fn q_min_is_tight() {
    for h in [complete(3), cycle(4), bowtie(), complete_bipartite(2, 3), path(3)] {
        for n in [6, 10, 15] {
            let qm = q_min(&h, n, &lim()).unwrap().q_min;
            assert!(is_q_sparse(&h, n, &qm, &lim()).unwrap().sparse);
            let below = qm.mul_rational(&rational(999, 1000));
            assert!(!is_q_sparse(&h, n, &below, &lim()).unwrap().sparse, "{} n={n}", h.edge_string());
            // E >= 1/2 is a weaker target than E >= 1
            assert!(expectation_threshold(&h, n, &lim()).unwrap().q_min <= qm);
        }
    }
}

fn random_graph(seed: u64, v: usize) -> Graph {
    sample_gnp(v, &parse_value("1/2").unwrap(), &mut stream(seed, 0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn counts_are_isomorphism_invariant(seed in 0u64..1_000_000, v in 2usize..=8, shift in 1usize..8) {
        let g = random_graph(seed, v);
        let perm: Vec<usize> = (0..v).map(|i| (i + shift) % v).collect();
        let h = g.permuted(&perm);
        for j in [complete(3), cycle(4), path(2), star(3)] {
            prop_assert_eq!(count_copies(&g, &j, &lim()).unwrap(), count_copies(&h, &j, &lim()).unwrap());
        }
    }

    #[test]
    fn cycle_counter_matches_generic(seed in 0u64..1_000_000, v in 3usize..=8, k in 3usize..=6) {
        let g = random_graph(seed, v);
        prop_assert_eq!(count_cycles(&g, k, &lim()).unwrap(), count_copies(&g, &cycle(k), &lim()).unwrap());
    }

    #[test]
    fn labeled_is_copies_times_aut(seed in 0u64..1_000_000, v in 2usize..=8) {
        let g = random_graph(seed, v);
        // aut(P2) = 2, aut(K3) = 6
        prop_assert_eq!(count_labeled(&g, &path(2), &lim()).unwrap(), count_copies(&g, &path(2), &lim()).unwrap() * 2u32);
        prop_assert_eq!(count_labeled(&g, &complete(3), &lim()).unwrap(), count_copies(&g, &complete(3), &lim()).unwrap() * 6u32);
    }
}
