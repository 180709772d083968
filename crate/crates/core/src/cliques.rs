//! Clustering coefficient and maximal-clique enumeration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtration::{size_then_lex, FilteredGraph};
use crate::graph::{for_each_bit, local_clustering, BitAdjacency};

/// Resource limits for clique enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of recursive expansion steps.
    pub max_steps: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_steps: 10_000_000 }
    }
}

/// All maximal cliques of a filtered graph, largest first, then
/// lexicographic by node index. Each clique is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSet {
    cliques: Vec<Vec<usize>>,
    fingerprint: u64,
}

impl CliqueSet {
    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Fingerprint of the graph the cliques were enumerated from.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Cliques as symbol lists.
    pub fn to_symbols(&self, symbols: &[String]) -> Vec<Vec<String>> {
        self.cliques.iter().map(|c| c.iter().map(|&v| symbols[v].clone()).collect()).collect()
    }
}

/// `N_cl`, `Max_cl`, their ratios to the connected node count, and `C(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CliqueMetrics {
    pub n_cliques: usize,
    pub max_clique_size: usize,
    pub relative_count: f64,
    pub relative_max: f64,
    pub clustering: f64,
}

/// FNV-1a over the node count and surviving pairs.
pub fn graph_fingerprint(fg: &FilteredGraph) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(fg.symbols().len() as u64);
    for e in fg.edges() {
        feed(e.i as u64);
        feed(e.j as u64);
    }
    h
}

/// Mean local clustering coefficient over connected nodes. A node of degree
/// `k >= 2` scores `links / (k (k - 1) / 2)`; degree-1 nodes score 0.
pub fn clustering_coefficient(fg: &FilteredGraph) -> Result<f64> {
    if fg.edges().is_empty() {
        return Err(Error::EmptyGraph);
    }
    let adj = fg.adjacency();
    let sum: f64 = fg.connected_nodes().iter().map(|&v| local_clustering(adj.degree(v), adj.neighbour_links(v))).sum();
    Ok(sum / fg.n_connected() as f64)
}

struct Enumerator<'a> {
    adj: &'a BitAdjacency,
    limits: Limits,
    steps: u64,
    out: Vec<Vec<usize>>,
}

impl Enumerator<'_> {
    fn intersect(&self, set: &[u64], v: usize) -> Vec<u64> {
        set.iter().zip(self.adj.row(v)).map(|(a, b)| a & b).collect()
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut cand: Vec<u64>, mut excl: Vec<u64>) -> Result<()> {
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(Error::BudgetExceeded { steps: self.steps - 1, cliques_found: self.out.len() });
        }
        let cand_empty = cand.iter().all(|&w| w == 0);
        if cand_empty {
            if excl.iter().all(|&w| w == 0) {
                let mut c = clique.clone();
                c.sort_unstable();
                self.out.push(c);
            }
            return Ok(());
        }

        // Tomita pivot: the vertex of cand ∪ excl with most neighbours in cand.
        let mut pivot = 0;
        let mut best = None;
        for set in [&cand, &excl] {
            for_each_bit(set, |u| {
                let cover: u32 = cand.iter().zip(self.adj.row(u)).map(|(a, b)| (a & b).count_ones()).sum();
                if best.is_none_or(|b| cover > b) {
                    best = Some(cover);
                    pivot = u;
                }
            });
        }
        let branch: Vec<u64> = cand.iter().zip(self.adj.row(pivot)).map(|(a, b)| a & !b).collect();
        let mut todo = Vec::new();
        for_each_bit(&branch, |v| todo.push(v));

        for v in todo {
            clique.push(v);
            let next_cand = self.intersect(&cand, v);
            let next_excl = self.intersect(&excl, v);
            self.expand(clique, next_cand, next_excl)?;
            clique.pop();
            cand[v / 64] &= !(1 << (v % 64));
            excl[v / 64] |= 1 << (v % 64);
        }
        Ok(())
    }
}

/// Degeneracy order of the connected nodes (repeatedly take a node of
/// minimum remaining degree, lowest index on ties).
fn degeneracy_order(adj: &BitAdjacency, nodes: &[usize]) -> Vec<usize> {
    let n = adj.n();
    let mut degree: Vec<usize> = (0..n).map(|v| adj.degree(v)).collect();
    let max_deg = nodes.iter().map(|&v| degree[v]).max().unwrap_or(0);
    let mut buckets: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); max_deg + 1];
    for &v in nodes {
        buckets[degree[v]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(nodes.len());
    let mut lowest = 0;
    while order.len() < nodes.len() {
        while buckets[lowest].is_empty() {
            lowest += 1;
        }
        let v = buckets[lowest].pop_first().expect("non-empty bucket");
        removed[v] = true;
        order.push(v);
        for_each_bit(adj.row(v), |u| {
            if !removed[u] {
                buckets[degree[u]].remove(&u);
                degree[u] -= 1;
                buckets[degree[u]].insert(u);
            }
        });
        lowest = lowest.saturating_sub(1);
    }
    order
}

/// Exact enumeration of every maximal clique (Bron–Kerbosch with Tomita
/// pivoting, outer loop in degeneracy order). Fails with
/// [`Error::BudgetExceeded`] once `limits.max_steps` expansions are used.
pub fn maximal_cliques(fg: &FilteredGraph, limits: Limits) -> Result<CliqueSet> {
    let adj = fg.adjacency();
    let words = adj.words();
    let order = degeneracy_order(&adj, fg.connected_nodes());
    let mut position = vec![usize::MAX; adj.n()];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }

    let mut en = Enumerator { adj: &adj, limits, steps: 0, out: Vec::new() };
    for &v in &order {
        let mut cand = vec![0u64; words];
        let mut excl = vec![0u64; words];
        for_each_bit(adj.row(v), |u| {
            if position[u] > position[v] {
                cand[u / 64] |= 1 << (u % 64);
            } else {
                excl[u / 64] |= 1 << (u % 64);
            }
        });
        en.expand(&mut vec![v], cand, excl)?;
    }
    let mut cliques = en.out;
    cliques.sort_by(|a, b| size_then_lex(a, b));
    Ok(CliqueSet { cliques, fingerprint: graph_fingerprint(fg) })
}

/// Clique counts relative to the number of connected nodes.
pub fn clique_metrics(fg: &FilteredGraph, cliques: &CliqueSet) -> Result<CliqueMetrics> {
    if cliques.fingerprint != graph_fingerprint(fg) {
        return Err(Error::FingerprintMismatch);
    }
    let clustering = clustering_coefficient(fg)?;
    let nodes = fg.n_connected() as f64;
    let max_clique_size = cliques.cliques.iter().map(Vec::len).max().unwrap_or(0);
    Ok(CliqueMetrics {
        n_cliques: cliques.len(),
        max_clique_size,
        relative_count: cliques.len() as f64 / nodes,
        relative_max: max_clique_size as f64 / nodes,
        clustering,
    })
}
