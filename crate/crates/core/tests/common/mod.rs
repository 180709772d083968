//! Test-only generators and brute-force oracles. Nothing here calls into the
//! library algorithms it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use corrnet::{filter_links, Edge, FilteredGraph, MarketGraph, RemovalMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn symbols(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("N{k:02}")).collect()
}

/// G(n, p) edge list.
pub fn random_pairs(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn graph_from_pairs(n: usize, pairs: &[(usize, usize)]) -> FilteredGraph {
    let g = MarketGraph::from_edges(symbols(n), pairs.iter().map(|&(i, j)| Edge { i, j, distance: 1.0 })).unwrap();
    filter_links(&g, RemovalMode::StrongFirst, 0.0).unwrap()
}

pub fn adjacency_matrix(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(i, j) in pairs {
        a[i][j] = true;
        a[j][i] = true;
    }
    a
}

/// Components by breadth-first search, as sorted node sets, nodes of degree
/// zero skipped.
pub fn bfs_components(n: usize, pairs: &[(usize, usize)]) -> BTreeSet<Vec<usize>> {
    let a = adjacency_matrix(n, pairs);
    let mut seen = vec![false; n];
    let mut out = BTreeSet::new();
    for s in 0..n {
        if seen[s] || !a[s].iter().any(|&x| x) {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if a[u][v] && !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.insert(comp);
    }
    out
}

fn is_complete(a: &[Vec<bool>], nodes: &[usize]) -> bool {
    nodes.iter().enumerate().all(|(x, &u)| nodes[x + 1..].iter().all(|&v| a[u][v]))
}

/// Maximal cliques by enumerating all 2^n node subsets (n <= 16).
pub fn brute_force_maximal_cliques(n: usize, pairs: &[(usize, usize)]) -> BTreeSet<Vec<usize>> {
    let a = adjacency_matrix(n, pairs);
    let complete: Vec<bool> = (0u32..1 << n)
        .map(|mask| {
            let nodes: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            is_complete(&a, &nodes)
        })
        .collect();
    let mut out = BTreeSet::new();
    for mask in 1u32..1 << n {
        if mask.count_ones() < 2 || !complete[mask as usize] {
            continue;
        }
        let maximal = (0..n).all(|v| mask >> v & 1 == 1 || !complete[(mask | 1 << v) as usize]);
        if maximal {
            out.insert((0..n).filter(|&v| mask >> v & 1 == 1).collect());
        }
    }
    out
}

/// Every complete subgraph with exactly `k` nodes.
pub fn all_k_cliques(n: usize, pairs: &[(usize, usize)], k: usize) -> Vec<Vec<usize>> {
    let a = adjacency_matrix(n, pairs);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(a: &[Vec<bool>], n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            if cur.iter().all(|&u| a[u][v]) {
                cur.push(v);
                rec(a, n, k, v + 1, cur, out);
                cur.pop();
            }
        }
    }
    rec(&a, n, k, 0, &mut cur, &mut out);
    out
}

/// Explicit k-clique percolation: k-cliques are adjacent when they share
/// k - 1 nodes; communities are unions of connected k-cliques.
pub fn explicit_cpm(n: usize, pairs: &[(usize, usize)], k: usize) -> BTreeSet<Vec<usize>> {
    let cliques = all_k_cliques(n, pairs, k);
    let m = cliques.len();
    let mut label: Vec<usize> = (0..m).collect();
    fn root(label: &mut [usize], mut x: usize) -> usize {
        while label[x] != x {
            x = label[x];
        }
        x
    }
    for a in 0..m {
        for b in a + 1..m {
            let shared = cliques[a].iter().filter(|v| cliques[b].contains(v)).count();
            if shared + 1 >= k {
                let (ra, rb) = (root(&mut label, a), root(&mut label, b));
                if ra != rb {
                    label[rb] = ra;
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
    for c in 0..m {
        let r = root(&mut label, c);
        groups.entry(r).or_default().extend(cliques[c].iter().copied());
    }
    groups.into_values().map(|s| s.into_iter().collect()).collect()
}

/// Mean local clustering over nodes with degree >= 1, counted from the
/// adjacency matrix.
pub fn brute_force_clustering(n: usize, pairs: &[(usize, usize)]) -> Option<f64> {
    let a = adjacency_matrix(n, pairs);
    let mut sum = 0.0;
    let mut count = 0;
    for i in 0..n {
        let nb: Vec<usize> = (0..n).filter(|&j| a[i][j]).collect();
        if nb.is_empty() {
            continue;
        }
        count += 1;
        if nb.len() >= 2 {
            let mut links = 0;
            for x in 0..nb.len() {
                for y in x + 1..nb.len() {
                    if a[nb[x]][nb[y]] {
                        links += 1;
                    }
                }
            }
            sum += links as f64 / (nb.len() * (nb.len() - 1) / 2) as f64;
        }
    }
    (count > 0).then(|| sum / count as f64)
}

/// Sample Pearson correlation with explicit centring (two passes).
pub fn two_pass_correlation(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Minimum total weight over all spanning trees of the complete graph with
/// weights `w[i][j]`, by trying every (n-1)-subset of edges.
pub fn exhaustive_mst_weight(w: &[Vec<f64>]) -> f64 {
    let n = w.len();
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut best = f64::INFINITY;
    let mut pick = Vec::new();
    fn rec(edges: &[(usize, usize)], w: &[Vec<f64>], n: usize, start: usize, pick: &mut Vec<usize>, best: &mut f64) {
        if pick.len() == n - 1 {
            let mut comp: Vec<usize> = (0..n).collect();
            let find = |comp: &mut Vec<usize>, mut x: usize| {
                while comp[x] != x {
                    x = comp[x];
                }
                x
            };
            let mut weights = Vec::with_capacity(n - 1);
            for &e in pick.iter() {
                let (i, j) = edges[e];
                let (ri, rj) = (find(&mut comp, i), find(&mut comp, j));
                if ri == rj {
                    return;
                }
                comp[ri] = rj;
                weights.push(w[i][j]);
            }
            // Ascending summation, the order a greedy builder adds edges in.
            weights.sort_by(f64::total_cmp);
            let total: f64 = weights.iter().sum();
            if total < *best {
                *best = total;
            }
            return;
        }
        for e in start..edges.len() {
            pick.push(e);
            rec(edges, w, n, e + 1, pick, best);
            pick.pop();
        }
    }
    rec(&edges, w, n, 0, &mut pick, &mut best);
    best
}
