//! Correlation-based market networks.
//!
//! The crate turns a panel of daily closing prices into a fully connected
//! weighted network (distance `d = sqrt(2(1 - rho))` between every pair of
//! symbols) and then studies what survives when a fraction `q` of the links
//! is removed, weakest first, strongest first or at random:
//!
//! * [`panel`] ingests wide CSV price panels and computes log returns,
//!   correlation and distance matrices.
//! * [`filtration`] builds the complete graph, removes links and tracks the
//!   largest clusters and `kappa = <k^2>/<k>` over a grid of `q` values.
//! * [`cliques`] computes the clustering coefficient and enumerates maximal
//!   cliques with a step budget.
//! * [`communities`] runs k-clique percolation on top of the maximal cliques
//!   and reports symbols that sit in several communities.
//! * [`mst`] builds the minimum spanning tree of a distance matrix.
//! * [`dynamics`] splits a panel into windows and measures how many links
//!   persist from one window to the next.
//! * [`synth`] generates seeded factor-model markets with planted sectors.
//!
//! The `corrnet` binary wraps these steps as subcommands (see [`cli`]), and
//! the `examples/` directory has one runnable program per capability.

pub mod cli;
pub mod cliques;
pub mod communities;
pub mod dynamics;
mod error;
pub mod export;
pub mod filtration;
mod graph;
pub mod mst;
pub mod panel;
pub mod synth;
mod unionfind;

pub use cliques::{clique_metrics, clustering_coefficient, maximal_cliques, CliqueMetrics, CliqueSet, Limits};
pub use communities::{detect_communities, label_purity, overlap_report, CommunityCover, OverlapReport};
pub use dynamics::{
    multi_step_similarity, single_step_similarity, window_panel, EdgeSet, SimilarityReport, WindowScheme,
    WindowedNetworkSeries,
};
pub use error::{Error, Result};
pub use filtration::{
    build_graph, components, filter_links, kappa, removal_order, scan, Edge, FilteredGraph, MarketGraph, RemovalMode,
    ScanRecord, ScanTable,
};
pub use mst::{minimum_spanning_tree, SpanningTree};
pub use panel::{
    correlation, load_panel, log_returns, to_distance, CorrelationMatrix, DistanceMatrix, LoadOptions, PricePanel,
    ReturnMatrix,
};
pub use synth::{generate_panel, HubStock, MarketSpec};
