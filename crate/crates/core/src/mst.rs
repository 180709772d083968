//! Minimum spanning tree of a distance matrix.

use crate::error::{Error, Result};
use crate::filtration::{Edge, MarketGraph};
use crate::panel::DistanceMatrix;
use crate::unionfind::DisjointSet;

/// Spanning tree over `nodes`; edge endpoints index into `nodes`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
    pub total_weight: f64,
}

/// Kruskal over every pair of `subset` (or all symbols), scanning pairs in
/// ascending `(d, i, j)` order so ties always resolve the same way.
///
/// The tree is built on the full pairwise distances restricted to the
/// subset, which is complete even when the subset comes from a filtered,
/// disconnected graph.
pub fn minimum_spanning_tree(dist: &DistanceMatrix, subset: Option<&[String]>) -> Result<SpanningTree> {
    let index: Vec<usize> = match subset {
        None => (0..dist.len()).collect(),
        Some(symbols) => {
            let mut idx = symbols
                .iter()
                .map(|s| dist.index_of(s).ok_or_else(|| Error::UnknownSymbol(s.clone())))
                .collect::<Result<Vec<_>>>()?;
            idx.sort_unstable();
            idx.dedup();
            idx
        }
    };
    let n = index.len();
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            pairs.push(Edge { i: a, j: b, distance: dist.get(index[a], index[b]) });
        }
    }
    let nodes = index.iter().map(|&k| dist.symbols()[k].clone()).collect();
    Ok(kruskal(nodes, pairs))
}

/// Spanning tree of a [`MarketGraph`]; with `subset`, only links between
/// subset members are used. Fails if those links do not span the subset.
pub fn spanning_tree_of_graph(graph: &MarketGraph, subset: Option<&[String]>) -> Result<SpanningTree> {
    let keep: Vec<Option<usize>> = match subset {
        None => (0..graph.n_nodes()).map(Some).collect(),
        Some(symbols) => {
            let mut keep = vec![None; graph.n_nodes()];
            for s in symbols {
                let k = graph.symbols().iter().position(|x| x == s).ok_or_else(|| Error::UnknownSymbol(s.clone()))?;
                keep[k] = Some(0);
            }
            for (next, slot) in keep.iter_mut().flatten().enumerate() {
                *slot = next;
            }
            keep
        }
    };
    let nodes: Vec<String> =
        graph.symbols().iter().zip(&keep).filter(|(_, k)| k.is_some()).map(|(s, _)| s.clone()).collect();
    if nodes.len() < 2 {
        return Err(Error::TooFewNodes(nodes.len()));
    }
    let pairs = graph
        .edges()
        .iter()
        .filter_map(|e| Some(Edge { i: keep[e.i]?, j: keep[e.j]?, distance: e.distance }))
        .collect();
    let tree = kruskal(nodes, pairs);
    if tree.edges.len() + 1 != tree.nodes.len() {
        return Err(Error::InvalidEdge { i: 0, j: 0, reason: "graph does not span the requested nodes" });
    }
    Ok(tree)
}

fn kruskal(nodes: Vec<String>, mut pairs: Vec<Edge>) -> SpanningTree {
    pairs.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| (a.i, a.j).cmp(&(b.i, b.j))));
    let mut ds = DisjointSet::new(nodes.len());
    let mut edges = Vec::with_capacity(nodes.len().saturating_sub(1));
    let mut total_weight = 0.0;
    for e in pairs {
        if ds.union(e.i, e.j) {
            total_weight += e.distance;
            edges.push(e);
            if edges.len() + 1 == nodes.len() {
                break;
            }
        }
    }
    SpanningTree { nodes, edges, total_weight }
}
