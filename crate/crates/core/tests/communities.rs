mod common;

use std::collections::{BTreeMap, BTreeSet};

use corrnet::{
    build_graph, correlation, detect_communities, filter_links, generate_panel, label_purity, log_returns,
    overlap_report, to_distance, Error, HubStock, Limits, MarketSpec, RemovalMode,
};
use rand::Rng;

fn cover_sets(n: usize, pairs: &[(usize, usize)], k: usize) -> BTreeSet<Vec<usize>> {
    let fg = common::graph_from_pairs(n, pairs);
    detect_communities(&fg, k, Limits::default()).unwrap().communities().iter().cloned().collect()
}

fn complete_on(nodes: impl Iterator<Item = usize> + Clone) -> Vec<(usize, usize)> {
    let v: Vec<usize> = nodes.collect();
    v.iter().enumerate().flat_map(|(x, &a)| v[x + 1..].iter().map(move |&b| (a, b))).collect()
}

fn union(parts: &[Vec<(usize, usize)>]) -> Vec<(usize, usize)> {
    parts.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

#[test]
fn two_triangles() {
    // Sharing an edge: one community at k = 3.
    let shared_edge = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)];
    assert_eq!(cover_sets(4, &shared_edge, 3), BTreeSet::from([vec![0, 1, 2, 3]]));
    // Sharing only a node: two communities overlapping in it.
    let shared_node = [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)];
    let fg = common::graph_from_pairs(5, &shared_node);
    let cover = detect_communities(&fg, 3, Limits::default()).unwrap();
    let sets: BTreeSet<Vec<usize>> = cover.communities().iter().cloned().collect();
    assert_eq!(sets, BTreeSet::from([vec![0, 1, 2], vec![2, 3, 4]]));
    let report = overlap_report(&cover);
    assert_eq!(report.multi_members.len(), 1);
    assert!(report.contains("N02"));
}

#[test]
fn matches_explicit_percolation() {
    let mut rng = common::rng(10);
    for case in 0..50 {
        let n = rng.random_range(6..=20);
        let p = rng.random_range(0.2..0.45);
        let pairs = common::random_pairs(&mut rng, n, p);
        for k in [3, 4] {
            assert_eq!(cover_sets(n, &pairs, k), common::explicit_cpm(n, &pairs, k), "case {case} k {k}");
        }
    }
}

#[test]
fn structural_properties() {
    let mut rng = common::rng(11);
    for _ in 0..30 {
        let n = rng.random_range(6..=16);
        let pairs = common::random_pairs(&mut rng, n, 0.45);
        let a = common::adjacency_matrix(n, &pairs);

        // k = 3 covers exactly the nodes lying on a triangle.
        let covered: BTreeSet<usize> = cover_sets(n, &pairs, 3).into_iter().flatten().collect();
        let on_triangle: BTreeSet<usize> = common::all_k_cliques(n, &pairs, 3).into_iter().flatten().collect();
        assert_eq!(covered, on_triangle);

        for k in 3..6 {
            let coarse = cover_sets(n, &pairs, k);
            for c in cover_sets(n, &pairs, k + 1) {
                assert!(coarse.iter().any(|big| c.iter().all(|v| big.contains(v))));
            }
            // Every community is a union of k-cliques of its own nodes.
            for c in &coarse {
                assert!(c.len() >= k);
                let inner: Vec<(usize, usize)> =
                    pairs.iter().copied().filter(|(i, j)| c.contains(i) && c.contains(j)).collect();
                let in_cliques: BTreeSet<usize> = common::all_k_cliques(n, &inner, k).into_iter().flatten().collect();
                assert_eq!(in_cliques, c.iter().copied().collect());
                assert!(c.iter().all(|&u| c.iter().any(|&v| a[u][v])));
            }
        }
    }
}

#[test]
fn overlapping_large_cliques_merge() {
    let pairs = union(&[complete_on(0..14), complete_on(1..15), complete_on(2..16)]);
    assert_eq!(cover_sets(16, &pairs, 14), BTreeSet::from([(0..16).collect::<Vec<_>>()]));
    assert_eq!(cover_sets(16, &pairs, 15).len(), 0);
}

#[test]
fn purity_counts_majority_label() {
    let pairs = union(&[complete_on(0..17), complete_on(1..18), complete_on(2..19)]);
    let fg = common::graph_from_pairs(19, &pairs);
    let cover = detect_communities(&fg, 17, Limits::default()).unwrap();
    assert_eq!(cover.len(), 1);
    let mut labels: BTreeMap<String, String> = common::symbols(19).into_iter().map(|s| (s, "X".into())).collect();
    labels.insert("N07".into(), "Y".into());
    assert_eq!(label_purity(&cover, &labels).unwrap(), vec![18.0 / 19.0]);
    labels.remove("N03");
    assert!(matches!(label_purity(&cover, &labels), Err(Error::MissingLabel(_))));
}

#[test]
fn rejects_small_k_and_handles_empty_graphs() {
    let fg = common::graph_from_pairs(4, &[(0, 1), (1, 2), (0, 2)]);
    assert!(matches!(detect_communities(&fg, 2, Limits::default()), Err(Error::InvalidK(2))));
    assert!(detect_communities(&common::graph_from_pairs(4, &[]), 3, Limits::default()).unwrap().is_empty());
}

#[test]
fn planted_hub_bridges_its_sectors() {
    for seed in 0..10 {
        let spec = MarketSpec {
            n_stocks: 800,
            n_sectors: 200,
            gamma: 1.0,
            hub_stocks: vec![HubStock { symbol: "HUB".into(), sectors: (0, 1) }],
            seed,
            ..Default::default()
        };
        let panel = generate_panel(&spec).unwrap();
        let dist = to_distance(&correlation(&log_returns(&panel, 1).unwrap()).unwrap());
        let fg = filter_links(&build_graph(&dist), RemovalMode::WeakFirst, 0.995).unwrap();
        let cover = detect_communities(&fg, 4, Limits::default()).unwrap();
        let ids = &cover.membership()["HUB"];
        assert!(ids.len() >= 2, "seed {seed}: hub in {ids:?}");
        let labels = spec.labels();
        let mut majorities = BTreeSet::new();
        for &id in ids {
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for s in cover.community_symbols(id) {
                *counts.entry(labels[s].as_str()).or_default() += 1;
            }
            majorities.insert(counts.into_iter().max_by_key(|&(_, c)| c).unwrap().0.to_string());
        }
        assert_eq!(majorities, BTreeSet::from(["SEC00".to_string(), "SEC01".to_string()]), "seed {seed}");
    }
}
