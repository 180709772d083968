//! Link filtration of the complete market graph.
//!
//! A fraction `q` of the `M` links is removed in one of three orders: weakest
//! correlation (largest distance) first, strongest correlation (smallest
//! distance) first, or a seeded random permutation. Exactly `floor(q * M)`
//! links are removed. Nodes left with degree zero drop out of the network and
//! are excluded from every average.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cliques::{self, CliqueMetrics, Limits};
use crate::error::{Error, Result};
use crate::graph::{local_clustering, BitAdjacency};
use crate::panel::{format_significant, DistanceMatrix};
use crate::unionfind::DisjointSet;

/// PRNG used for random removal orders, recorded in output metadata.
pub const RANDOM_ALGORITHM: &str = "chacha8/rand_chacha-0.9/fisher-yates-rand-0.9";

/// Absolute slack when flooring `q * M`, so that decimal grid values such
/// as `0.29` remove 29 of 100 links despite binary roundoff.
const FLOOR_SLACK: f64 = 1e-9;

/// An undirected weighted link with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
}

/// Weighted graph over a fixed symbol list. Built from a distance matrix it
/// is complete, with all `N(N-1)/2` pairs in `(i, j)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketGraph {
    symbols: Vec<String>,
    edges: Vec<Edge>,
}

impl MarketGraph {
    /// Builds a graph from an arbitrary simple edge list. Endpoints are
    /// normalised to `i < j`; self-loops and repeated pairs are rejected.
    pub fn from_edges(symbols: Vec<String>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let n = symbols.len();
        let mut edges: Vec<Edge> =
            edges.into_iter().map(|e| Edge { i: e.i.min(e.j), j: e.i.max(e.j), distance: e.distance }).collect();
        for e in &edges {
            if e.i == e.j {
                return Err(Error::InvalidEdge { i: e.i, j: e.j, reason: "self-loop" });
            }
            if e.j >= n {
                return Err(Error::InvalidEdge { i: e.i, j: e.j, reason: "endpoint out of range" });
            }
            if !e.distance.is_finite() {
                return Err(Error::InvalidEdge { i: e.i, j: e.j, reason: "non-finite weight" });
            }
        }
        edges.sort_by_key(|e| (e.i, e.j));
        if let Some(w) = edges.windows(2).find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j)) {
            return Err(Error::InvalidEdge { i: w[0].i, j: w[0].j, reason: "duplicate pair" });
        }
        Ok(Self { symbols, edges })
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_nodes(&self) -> usize {
        self.symbols.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
}

/// Materialises every pair of the distance matrix as a link.
pub fn build_graph(dist: &DistanceMatrix) -> MarketGraph {
    let n = dist.len();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            edges.push(Edge { i, j, distance: dist.get(i, j) });
        }
    }
    MarketGraph { symbols: dist.symbols().to_vec(), edges }
}

/// Order in which links are removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RemovalMode {
    /// Largest distance (weakest correlation) first.
    WeakFirst,
    /// Smallest distance (strongest correlation) first.
    StrongFirst,
    /// Seeded uniform permutation.
    Random { seed: u64 },
}

impl RemovalMode {
    pub fn label(&self) -> &'static str {
        match self {
            RemovalMode::WeakFirst => "weak",
            RemovalMode::StrongFirst => "strong",
            RemovalMode::Random { .. } => "random",
        }
    }
}

impl fmt::Display for RemovalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RemovalMode::Random { seed } => write!(f, "random:{seed}"),
            other => f.write_str(other.label()),
        }
    }
}

impl FromStr for RemovalMode {
    type Err = String;

    /// Accepts `weak`, `strong`, `random` (seed 0) and `random:<seed>`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "weak" | "weak-first" => Ok(RemovalMode::WeakFirst),
            "strong" | "strong-first" => Ok(RemovalMode::StrongFirst),
            "random" => Ok(RemovalMode::Random { seed: 0 }),
            other => match other.strip_prefix("random:") {
                Some(seed) => {
                    seed.parse().map(|seed| RemovalMode::Random { seed }).map_err(|e| format!("bad seed: {e}"))
                }
                None => Err(format!("unknown removal mode `{other}` (expected weak, strong or random[:seed])")),
            },
        }
    }
}

/// Number of links removed at fraction `q` out of `m`.
pub fn removal_count(m: usize, q: f64) -> usize {
    ((q * m as f64 + FLOOR_SLACK).floor() as usize).min(m)
}

fn check_fraction(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidFraction(q))
    }
}

/// Edge indices in removal order.
fn removal_permutation(graph: &MarketGraph, mode: RemovalMode) -> Vec<usize> {
    let edges = &graph.edges;
    let mut idx: Vec<usize> = (0..edges.len()).collect();
    let by_pair = |a: &Edge, b: &Edge| (a.i, a.j).cmp(&(b.i, b.j));
    match mode {
        RemovalMode::StrongFirst => idx.sort_by(|&a, &b| {
            let (ea, eb) = (&edges[a], &edges[b]);
            ea.distance.total_cmp(&eb.distance).then_with(|| by_pair(ea, eb))
        }),
        RemovalMode::WeakFirst => idx.sort_by(|&a, &b| {
            let (ea, eb) = (&edges[a], &edges[b]);
            eb.distance.total_cmp(&ea.distance).then_with(|| by_pair(ea, eb))
        }),
        RemovalMode::Random { seed } => {
            idx.sort_by(|&a, &b| by_pair(&edges[a], &edges[b]));
            idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
    }
    idx
}

/// Links in the order they are removed.
pub fn removal_order(graph: &MarketGraph, mode: RemovalMode) -> Vec<Edge> {
    removal_permutation(graph, mode).into_iter().map(|k| graph.edges[k]).collect()
}

/// What is left of a [`MarketGraph`] after removing a fraction `q` of links.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredGraph {
    symbols: Vec<String>,
    edges: Vec<Edge>,
    q: f64,
    mode: RemovalMode,
    connected: Vec<usize>,
}

impl FilteredGraph {
    fn new(symbols: Vec<String>, mut edges: Vec<Edge>, q: f64, mode: RemovalMode) -> Self {
        edges.sort_by_key(|e| (e.i, e.j));
        let mut has_edge = vec![false; symbols.len()];
        for e in &edges {
            has_edge[e.i] = true;
            has_edge[e.j] = true;
        }
        let connected = (0..symbols.len()).filter(|&v| has_edge[v]).collect();
        Self { symbols, edges, q, mode, connected }
    }

    /// Symbols of the parent graph; node indices refer to this list.
    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Surviving links in `(i, j)` order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn mode(&self) -> RemovalMode {
        self.mode
    }

    /// Indices of nodes with at least one surviving link, ascending.
    pub fn connected_nodes(&self) -> &[usize] {
        &self.connected
    }

    pub fn connected_symbols(&self) -> Vec<&str> {
        self.connected.iter().map(|&v| self.symbols[v].as_str()).collect()
    }

    pub fn n_connected(&self) -> usize {
        self.connected.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.symbols.len()];
        for e in &self.edges {
            deg[e.i] += 1;
            deg[e.j] += 1;
        }
        deg
    }

    pub(crate) fn adjacency(&self) -> BitAdjacency {
        BitAdjacency::from_edges(self.symbols.len(), self.edges.iter().map(|e| (e.i, e.j)))
    }
}

/// Removes the first `floor(q * M)` links of [`removal_order`].
pub fn filter_links(graph: &MarketGraph, mode: RemovalMode, q: f64) -> Result<FilteredGraph> {
    check_fraction(q)?;
    let order = removal_permutation(graph, mode);
    let removed = removal_count(order.len(), q);
    let surviving = order[removed..].iter().map(|&k| graph.edges[k]).collect();
    Ok(FilteredGraph::new(graph.symbols.clone(), surviving, q, mode))
}

/// Connected clusters of the surviving network, largest first; equal sizes
/// are ordered by their smallest member symbol. Members are ascending node
/// indices and isolated nodes are not reported.
pub fn components(fg: &FilteredGraph) -> Vec<Vec<usize>> {
    let mut ds = DisjointSet::new(fg.symbols.len());
    for e in &fg.edges {
        ds.union(e.i, e.j);
    }
    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); fg.symbols.len()];
    for &v in &fg.connected {
        let r = ds.find(v);
        by_root[r].push(v);
    }
    let mut clusters: Vec<Vec<usize>> = by_root.into_iter().filter(|c| !c.is_empty()).collect();
    let min_symbol = |c: &Vec<usize>| c.iter().map(|&v| fg.symbols[v].as_str()).min().unwrap_or("");
    clusters.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| min_symbol(a).cmp(min_symbol(b))));
    clusters
}

/// `<k^2> / <k>` over connected nodes.
pub fn kappa(fg: &FilteredGraph) -> Result<f64> {
    if fg.edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let (sum_k, sum_k2) = fg.degrees().iter().fold((0u64, 0u64), |(s1, s2), &k| (s1 + k as u64, s2 + (k * k) as u64));
    Ok(sum_k2 as f64 / sum_k as f64)
}

/// One row of a [`ScanTable`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub mode: RemovalMode,
    pub q: f64,
    pub n_connected: usize,
    /// Node count of the largest cluster.
    pub lcc: usize,
    /// Node count of the second-largest cluster.
    pub slcc: usize,
    /// `None` when no link survives.
    pub kappa: Option<f64>,
    /// `None` when no link survives.
    pub clustering: Option<f64>,
    pub cliques: Option<CliqueMetrics>,
}

/// Per-`(mode, q)` component, percolation and clique metrics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanTable {
    pub records: Vec<ScanRecord>,
}

impl ScanTable {
    pub fn for_mode(&self, mode: RemovalMode) -> impl Iterator<Item = &ScanRecord> {
        self.records.iter().filter(move |r| r.mode == mode)
    }

    /// Writes `mode,q,n_connected,lcc,slcc,kappa,clustering`, followed by
    /// `n_cliques,max_clique,rel_cliques,rel_max` when `with_cliques` is set.
    /// Undefined values are left empty.
    pub fn write_csv<W: Write>(&self, out: W, with_cliques: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["mode", "q", "n_connected", "lcc", "slcc", "kappa", "clustering"];
        if with_cliques {
            header.extend(["n_cliques", "max_clique", "rel_cliques", "rel_max"]);
        }
        w.write_record(&header)?;
        let opt = |x: Option<f64>| x.map_or_else(String::new, |v| format_significant(v, 12));
        for r in &self.records {
            let mut rec = vec![
                r.mode.label().to_string(),
                format_q(r.q),
                r.n_connected.to_string(),
                r.lcc.to_string(),
                r.slcc.to_string(),
                opt(r.kappa),
                opt(r.clustering),
            ];
            if with_cliques {
                match &r.cliques {
                    Some(c) => rec.extend([
                        c.n_cliques.to_string(),
                        c.max_clique_size.to_string(),
                        format_significant(c.relative_count, 12),
                        format_significant(c.relative_max, 12),
                    ]),
                    None => rec.extend(std::iter::repeat_n(String::new(), 4)),
                }
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest decimal form of a grid value.
pub fn format_q(q: f64) -> String {
    let s = format!("{q:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Parses `start:end:step` (end included when reachable) or a comma list.
/// The result must be sorted ascending and lie in `[0, 1]`.
pub fn parse_q_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |msg: &str| Error::InvalidGrid(format!("`{spec}`: {msg}"));
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let grid: Vec<f64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:end:step"));
        }
        let (start, end, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step.is_nan() || step <= 0.0 {
            return Err(bad("step must be positive"));
        }
        if end < start {
            return Err(bad("grid is not sorted ascending"));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize;
        (0..=count).map(|k| round_grid(start + k as f64 * step)).collect()
    } else {
        spec.split(',').map(parse).collect::<Result<_>>()?
    };
    validate_grid(&grid)?;
    Ok(grid)
}

fn round_grid(q: f64) -> f64 {
    (q * 1e12).round() / 1e12
}

pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if let Some(&q) = grid.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(Error::InvalidFraction(q));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidGrid("grid is not sorted ascending".into()));
    }
    Ok(())
}

/// Sweeps `q_grid` for every mode. Links are re-added from the end of the
/// removal order, so each mode costs one pass over the edge list plus a
/// triangle update per added link; every record equals what
/// [`filter_links`] followed by the per-graph metrics would report.
pub fn scan(graph: &MarketGraph, modes: &[RemovalMode], q_grid: &[f64]) -> Result<ScanTable> {
    validate_grid(q_grid)?;
    let per_mode: Vec<Vec<ScanRecord>> = modes.par_iter().map(|&mode| scan_mode(graph, mode, q_grid)).collect();
    Ok(ScanTable { records: per_mode.into_iter().flatten().collect() })
}

/// [`scan`] plus maximal-clique metrics for every grid point with
/// `q >= cliques_from`.
pub fn scan_with_cliques(
    graph: &MarketGraph,
    modes: &[RemovalMode],
    q_grid: &[f64],
    cliques_from: f64,
    limits: Limits,
) -> Result<ScanTable> {
    let mut table = scan(graph, modes, q_grid)?;
    let metrics: Vec<Option<CliqueMetrics>> = table
        .records
        .par_iter()
        .map(|r| {
            if r.q < cliques_from || r.n_connected == 0 {
                return Ok(None);
            }
            let fg = filter_links(graph, r.mode, r.q)?;
            let set = cliques::maximal_cliques(&fg, limits)?;
            cliques::clique_metrics(&fg, &set).map(Some)
        })
        .collect::<Result<_>>()?;
    for (r, m) in table.records.iter_mut().zip(metrics) {
        r.cliques = m;
    }
    Ok(table)
}

struct ScanState {
    adj: BitAdjacency,
    ds: DisjointSet,
    degree: Vec<usize>,
    links: Vec<usize>,
    sum_k: u64,
    sum_k2: u64,
    n_connected: usize,
}

impl ScanState {
    fn new(n: usize) -> Self {
        Self {
            adj: BitAdjacency::new(n),
            ds: DisjointSet::new(n),
            degree: vec![0; n],
            links: vec![0; n],
            sum_k: 0,
            sum_k2: 0,
            n_connected: 0,
        }
    }

    fn add(&mut self, i: usize, j: usize) {
        let links = &mut self.links;
        let mut common = 0;
        self.adj.for_each_common(i, j, |w| {
            links[w] += 1;
            common += 1;
        });
        links[i] += common;
        links[j] += common;
        self.adj.insert(i, j);
        for v in [i, j] {
            let k = self.degree[v] as u64;
            if k == 0 {
                self.n_connected += 1;
            }
            self.sum_k += 1;
            self.sum_k2 += 2 * k + 1;
            self.degree[v] += 1;
        }
        self.ds.union(i, j);
    }

    fn record(&self, mode: RemovalMode, q: f64) -> ScanRecord {
        let (mut lcc, mut slcc) = (0, 0);
        let mut clustering_sum = 0.0;
        for v in 0..self.degree.len() {
            if self.degree[v] == 0 {
                continue;
            }
            clustering_sum += local_clustering(self.degree[v], self.links[v]);
            if self.ds.is_root(v) {
                let s = self.ds.root_size(v);
                if s > lcc {
                    slcc = lcc;
                    lcc = s;
                } else if s > slcc {
                    slcc = s;
                }
            }
        }
        let has_edges = self.sum_k > 0;
        ScanRecord {
            mode,
            q,
            n_connected: self.n_connected,
            lcc,
            slcc,
            kappa: has_edges.then(|| self.sum_k2 as f64 / self.sum_k as f64),
            clustering: has_edges.then(|| clustering_sum / self.n_connected as f64),
            cliques: None,
        }
    }
}

fn scan_mode(graph: &MarketGraph, mode: RemovalMode, q_grid: &[f64]) -> Vec<ScanRecord> {
    let order = removal_permutation(graph, mode);
    let m = order.len();
    let mut state = ScanState::new(graph.n_nodes());
    let mut added = 0;
    let mut records = Vec::with_capacity(q_grid.len());
    for &q in q_grid.iter().rev() {
        let surviving = m - removal_count(m, q);
        while added < surviving {
            let e = graph.edges[order[m - 1 - added]];
            state.add(e.i, e.j);
            added += 1;
        }
        records.push(state.record(mode, q));
    }
    records.reverse();
    records
}

/// Sort helper: descending by size, then by member list.
pub(crate) fn size_then_lex(a: &[usize], b: &[usize]) -> Ordering {
    b.len().cmp(&a.len()).then_with(|| a.cmp(b))
}
