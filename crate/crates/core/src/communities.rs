//! k-clique percolation communities.
//!
//! A community is the union of k-cliques that can be chained through pairs
//! sharing `k - 1` nodes. Instead of listing every k-clique, each maximal
//! clique of size `s >= k` stands for all of its `C(s, k)` k-subsets: two
//! maximal cliques belong to the same community exactly when they share at
//! least `k - 1` nodes (directly or through a chain).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cliques::{maximal_cliques, Limits};
use crate::error::{Error, Result};
use crate::filtration::{size_then_lex, FilteredGraph};
use crate::unionfind::DisjointSet;

/// Possibly overlapping node sets found by k-clique percolation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityCover {
    k: usize,
    symbols: Vec<String>,
    communities: Vec<Vec<usize>>,
    membership: BTreeMap<String, Vec<usize>>,
}

impl CommunityCover {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Communities as ascending node indices, largest first.
    pub fn communities(&self) -> &[Vec<usize>] {
        &self.communities
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    pub fn community_symbols(&self, id: usize) -> Vec<&str> {
        self.communities[id].iter().map(|&v| self.symbols[v].as_str()).collect()
    }

    /// Symbol -> indices of the communities containing it.
    pub fn membership(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.membership
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }
}

/// Runs k-clique percolation on the surviving links.
pub fn detect_communities(fg: &FilteredGraph, k: usize, limits: Limits) -> Result<CommunityCover> {
    if k < 3 {
        return Err(Error::InvalidK(k));
    }
    let cliques: Vec<Vec<usize>> =
        maximal_cliques(fg, limits)?.cliques().iter().filter(|c| c.len() >= k).cloned().collect();

    // Only cliques sharing a node can overlap, so candidates come from a
    // node -> clique index.
    let mut by_node: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (c, members) in cliques.iter().enumerate() {
        for &v in members {
            by_node.entry(v).or_default().push(c);
        }
    }
    let mut ds = DisjointSet::new(cliques.len());
    let mut shared = vec![0usize; cliques.len()];
    for (a, members) in cliques.iter().enumerate() {
        let mut touched = Vec::new();
        for v in members {
            for &b in &by_node[v] {
                if b > a {
                    if shared[b] == 0 {
                        touched.push(b);
                    }
                    shared[b] += 1;
                }
            }
        }
        for b in touched {
            if shared[b] >= k - 1 {
                ds.union(a, b);
            }
            shared[b] = 0;
        }
    }

    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (c, members) in cliques.iter().enumerate() {
        groups.entry(ds.find(c)).or_default().extend(members);
    }
    let mut communities: Vec<Vec<usize>> = groups
        .into_values()
        .map(|mut m| {
            m.sort_unstable();
            m.dedup();
            m
        })
        .collect();
    communities.sort_by(|a, b| size_then_lex(a, b));
    communities.dedup();

    let mut membership: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (id, c) in communities.iter().enumerate() {
        for &v in c {
            membership.entry(fg.symbols()[v].clone()).or_default().push(id);
        }
    }
    Ok(CommunityCover { k, symbols: fg.symbols().to_vec(), communities, membership })
}

/// Symbols that belong to two or more communities.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct OverlapReport {
    /// `(symbol, community ids)`, sorted by symbol.
    pub multi_members: Vec<(String, Vec<usize>)>,
}

impl OverlapReport {
    pub fn contains(&self, symbol: &str) -> bool {
        self.multi_members.iter().any(|(s, _)| s == symbol)
    }
}

pub fn overlap_report(cover: &CommunityCover) -> OverlapReport {
    let multi_members =
        cover.membership.iter().filter(|(_, ids)| ids.len() >= 2).map(|(s, ids)| (s.clone(), ids.clone())).collect();
    OverlapReport { multi_members }
}

/// Share of the most common label within each community.
pub fn label_purity(cover: &CommunityCover, labels: &BTreeMap<String, String>) -> Result<Vec<f64>> {
    cover
        .communities
        .iter()
        .map(|c| {
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for &v in c {
                let symbol = &cover.symbols[v];
                let label = labels.get(symbol).ok_or_else(|| Error::MissingLabel(symbol.clone()))?;
                *counts.entry(label.as_str()).or_default() += 1;
            }
            let top = counts.values().copied().max().unwrap_or(0);
            Ok(top as f64 / c.len() as f64)
        })
        .collect()
}

#[derive(Serialize)]
struct CommunityJson<'a> {
    id: usize,
    symbols: Vec<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    purity: Option<f64>,
}

#[derive(Serialize)]
struct OverlapJson<'a> {
    symbol: &'a str,
    community_ids: &'a [usize],
}

/// `{k, q, communities: [{id, symbols, purity?}], overlaps: [{symbol, community_ids}]}`
pub fn cover_to_json(cover: &CommunityCover, q: f64, purity: Option<&[f64]>) -> serde_json::Value {
    let communities: Vec<CommunityJson> = (0..cover.len())
        .map(|id| CommunityJson { id, symbols: cover.community_symbols(id), purity: purity.map(|p| p[id]) })
        .collect();
    let report = overlap_report(cover);
    let overlaps: Vec<OverlapJson> =
        report.multi_members.iter().map(|(s, ids)| OverlapJson { symbol: s, community_ids: ids }).collect();
    serde_json::json!({
        "k": cover.k,
        "q": q,
        "communities": communities,
        "overlaps": overlaps,
    })
}
