//! Windowed networks and link persistence between windows.
//!
//! Each window gets its own correlation and distance matrix and is filtered
//! at the same `(mode, q)`. Links are compared as unordered symbol pairs;
//! weights play no role. The single-step similarity of window `t` is the
//! share of its links that also exist in window `t - 1`; the multi-step
//! version keeps only links present in every window from `t - tau` to `t`.

use std::collections::BTreeSet;
use std::io::Write;
use std::str::FromStr;

use chrono::Datelike;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filtration::{build_graph, filter_links, format_q, FilteredGraph, RemovalMode};
use crate::panel::{correlation, format_significant, log_returns, to_distance, PricePanel};

/// How a panel is cut into windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowScheme {
    CalendarYear,
    /// Consecutive blocks of this many rows; a trailing partial block is dropped.
    FixedLength(usize),
}

impl FromStr for WindowScheme {
    type Err = String;

    /// `year` or `fixed:<rows>`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "year" | "calendar-year" => Ok(WindowScheme::CalendarYear),
            other => other
                .strip_prefix("fixed:")
                .and_then(|n| n.parse().ok())
                .map(WindowScheme::FixedLength)
                .ok_or_else(|| format!("unknown window scheme `{other}` (expected year or fixed:<rows>)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanelWindow {
    pub label: String,
    pub panel: PricePanel,
}

pub fn window_panel(panel: &PricePanel, scheme: WindowScheme) -> Result<Vec<PanelWindow>> {
    let dates = panel.dates();
    let mut bounds: Vec<(String, usize, usize)> = Vec::new();
    match scheme {
        WindowScheme::CalendarYear => {
            let mut start = 0;
            for t in 1..=dates.len() {
                if t == dates.len() || dates[t].year() != dates[start].year() {
                    bounds.push((dates[start].year().to_string(), start, t));
                    start = t;
                }
            }
        }
        WindowScheme::FixedLength(len) => {
            if len == 0 {
                return Err(Error::WindowTooShort { label: "fixed:0".into(), rows: 0 });
            }
            for k in 0..dates.len() / len {
                let start = k * len;
                bounds.push((dates[start].format("%Y-%m-%d").to_string(), start, start + len));
            }
            if bounds.is_empty() {
                return Err(Error::WindowTooShort { label: format!("fixed:{len}"), rows: dates.len() });
            }
        }
    }
    bounds
        .into_iter()
        .map(|(label, start, end)| {
            if end - start < 3 {
                return Err(Error::WindowTooShort { label, rows: end - start });
            }
            Ok(PanelWindow { label, panel: panel.slice_rows(start, end)? })
        })
        .collect()
}

/// Set of links identified by unordered symbol pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeSet(BTreeSet<(String, String)>);

impl EdgeSet {
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        Self(pairs.into_iter().map(|(a, b)| ordered(a, b)).collect())
    }

    pub fn from_filtered(fg: &FilteredGraph) -> Self {
        let s = fg.symbols();
        Self(fg.edges().iter().map(|e| ordered(&s[e.i], &s[e.j])).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: &str, b: &str) -> bool {
        self.0.contains(&ordered(a, b))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(String, String)> {
        self.0.iter()
    }
}

fn ordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkWindow {
    pub label: String,
    pub edges: EdgeSet,
}

/// Time-ordered filtered networks sharing one `(mode, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedNetworkSeries {
    pub mode: RemovalMode,
    pub q: f64,
    pub windows: Vec<NetworkWindow>,
    /// Union of the symbols of all windows.
    pub universe: BTreeSet<String>,
}

impl WindowedNetworkSeries {
    /// Builds one filtered network per window from its own returns
    /// (lag 1), correlations and distances.
    pub fn build(windows: &[PanelWindow], mode: RemovalMode, q: f64) -> Result<Self> {
        let nets = windows
            .par_iter()
            .map(|w| {
                let returns = log_returns(&w.panel, 1)?;
                let graph = build_graph(&to_distance(&correlation(&returns)?));
                let fg = filter_links(&graph, mode, q)?;
                Ok(NetworkWindow { label: w.label.clone(), edges: EdgeSet::from_filtered(&fg) })
            })
            .collect::<Result<Vec<_>>>()?;
        let universe = windows.iter().flat_map(|w| w.panel.symbols().iter().cloned()).collect();
        Ok(Self { mode, q, windows: nets, universe })
    }

    pub fn from_edge_sets(windows: Vec<NetworkWindow>, mode: RemovalMode, q: f64) -> Self {
        let universe = windows.iter().flat_map(|w| w.edges.iter().flat_map(|(a, b)| [a.clone(), b.clone()])).collect();
        Self { mode, q, windows, universe }
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }
}

/// `|E(t) ∩ E(t-1)| / |E(t)|`.
pub fn single_step_similarity(current: &EdgeSet, previous: &EdgeSet) -> Result<f64> {
    if current.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let common = current.0.intersection(&previous.0).count();
    Ok(common as f64 / current.len() as f64)
}

/// `|E(t) ∩ E(t-1) ∩ ... ∩ E(t-tau)| / |E(t)|` for window index `t`.
pub fn multi_step_similarity(series: &WindowedNetworkSeries, t: usize, tau: usize) -> Result<f64> {
    if tau == 0 || t >= series.windows.len() || tau > t {
        return Err(Error::InsufficientHistory { t, tau, available: t.min(series.windows.len()) });
    }
    let current = &series.windows[t].edges;
    if current.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    let persistent =
        current.iter().filter(|pair| (t - tau..t).all(|s| series.windows[s].edges.0.contains(*pair))).count();
    Ok(persistent as f64 / current.len() as f64)
}

/// Similarities of a whole series.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityReport {
    pub mode: RemovalMode,
    pub q: f64,
    pub labels: Vec<String>,
    pub edge_counts: Vec<usize>,
    /// `single_step[t - 1]` is the similarity of window `t` to `t - 1`.
    pub single_step: Vec<f64>,
    /// `multi_step[t][tau - 1]` for `tau = 1..=min(tau_max, t)`.
    pub multi_step: Vec<Vec<f64>>,
}

impl SimilarityReport {
    pub fn compute(series: &WindowedNetworkSeries, tau_max: usize) -> Result<Self> {
        let n = series.windows.len();
        let mut single_step = Vec::with_capacity(n.saturating_sub(1));
        let mut multi_step = Vec::with_capacity(n);
        for t in 0..n {
            let row =
                (1..=tau_max.min(t)).map(|tau| multi_step_similarity(series, t, tau)).collect::<Result<Vec<_>>>()?;
            if t > 0 {
                single_step.push(single_step_similarity(&series.windows[t].edges, &series.windows[t - 1].edges)?);
            }
            multi_step.push(row);
        }
        Ok(Self {
            mode: series.mode,
            q: series.q,
            labels: series.windows.iter().map(|w| w.label.clone()).collect(),
            edge_counts: series.windows.iter().map(|w| w.edges.len()).collect(),
            single_step,
            multi_step,
        })
    }

    pub fn mean_single_step(&self) -> Option<f64> {
        (!self.single_step.is_empty()).then(|| self.single_step.iter().sum::<f64>() / self.single_step.len() as f64)
    }

    /// Writes `t_label,tau,similarity,mode,q`; the `tau = 0` row of each
    /// window carries its link count `|E(t)|`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t_label", "tau", "similarity", "mode", "q"])?;
        let q = format_q(self.q);
        for (t, label) in self.labels.iter().enumerate() {
            w.write_record([label, "0", &self.edge_counts[t].to_string(), self.mode.label(), &q])?;
            for (k, s) in self.multi_step[t].iter().enumerate() {
                w.write_record([label, &(k + 1).to_string(), &format_significant(*s, 12), self.mode.label(), &q])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
