mod common;

use std::collections::BTreeSet;

use corrnet::{clique_metrics, clustering_coefficient, maximal_cliques, Error, Limits};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn maximal_cliques_match_brute_force() {
    let mut rng = common::rng(6);
    for _ in 0..100 {
        let n = rng.random_range(2..=12);
        let pairs = common::random_pairs(&mut rng, n, 0.5);
        let fg = common::graph_from_pairs(n, &pairs);
        let got: BTreeSet<Vec<usize>> =
            maximal_cliques(&fg, Limits::default()).unwrap().cliques().iter().cloned().collect();
        assert_eq!(got, common::brute_force_maximal_cliques(n, &pairs));
    }
}

#[test]
fn k_cliques_are_subsets_of_maximal_ones() {
    let mut rng = common::rng(7);
    for _ in 0..40 {
        let n = rng.random_range(3..=10);
        let pairs = common::random_pairs(&mut rng, n, 0.6);
        let fg = common::graph_from_pairs(n, &pairs);
        let set = maximal_cliques(&fg, Limits::default()).unwrap();
        for k in 2..=5 {
            let mut from_maximal = BTreeSet::new();
            for c in set.cliques().iter().filter(|c| c.len() >= k) {
                subsets(c, k, 0, &mut Vec::new(), &mut from_maximal);
            }
            let brute: BTreeSet<Vec<usize>> = common::all_k_cliques(n, &pairs, k).into_iter().collect();
            assert_eq!(from_maximal, brute);
        }
    }
}

fn subsets(c: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
    if cur.len() == k {
        out.insert(cur.clone());
        return;
    }
    for x in start..c.len() {
        cur.push(c[x]);
        subsets(c, k, x + 1, cur, out);
        cur.pop();
    }
}

#[test]
fn clustering_matches_brute_force() {
    let mut rng = common::rng(8);
    for _ in 0..100 {
        let n = rng.random_range(2..=14);
        let p = rng.random_range(0.1..0.9);
        let pairs = common::random_pairs(&mut rng, n, p);
        let fg = common::graph_from_pairs(n, &pairs);
        match common::brute_force_clustering(n, &pairs) {
            Some(c) => {
                let got = clustering_coefficient(&fg).unwrap();
                assert!((got - c).abs() <= 1e-12);
                assert!((0.0..=1.0).contains(&got));
            }
            None => assert!(matches!(clustering_coefficient(&fg), Err(Error::EmptyGraph))),
        }
    }
}

#[test]
fn budget_is_enforced() {
    let n = 30;
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| j != i + 1 || i % 2 == 1).collect();
    let fg = common::graph_from_pairs(n, &pairs);
    assert!(matches!(maximal_cliques(&fg, Limits { max_steps: 50 }), Err(Error::BudgetExceeded { .. })));
    let set = maximal_cliques(&fg, Limits::default()).unwrap();
    // Complete graph minus a perfect matching: 2^15 maximal cliques of size 15.
    assert_eq!(set.len(), 1 << 15);
    let m = clique_metrics(&fg, &set).unwrap();
    assert_eq!(m.max_clique_size, 15);
}

#[test]
fn metrics_refuse_foreign_cliques() {
    let a = common::graph_from_pairs(4, &[(0, 1), (1, 2)]);
    let b = common::graph_from_pairs(4, &[(0, 1), (2, 3)]);
    let set = maximal_cliques(&a, Limits::default()).unwrap();
    assert!(matches!(clique_metrics(&b, &set), Err(Error::FingerprintMismatch)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cliques_are_complete_and_maximal(seed in 0u64..10_000, n in 2usize..16, p in 0.1f64..0.9) {
        let mut rng = common::rng(seed);
        let pairs = common::random_pairs(&mut rng, n, p);
        let a = common::adjacency_matrix(n, &pairs);
        let fg = common::graph_from_pairs(n, &pairs);
        let set = maximal_cliques(&fg, Limits::default()).unwrap();
        for c in set.cliques() {
            for (x, &u) in c.iter().enumerate() {
                for &v in &c[x + 1..] {
                    prop_assert!(a[u][v]);
                }
            }
            prop_assert!((0..n).all(|v| c.contains(&v) || !c.iter().all(|&u| a[u][v])));
        }
        if let Ok(cc) = clustering_coefficient(&fg) {
            prop_assert!((0.0..=1.0).contains(&cc));
        }
    }
}
