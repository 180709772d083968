//! The `corrnet` command line.
//!
//! Every command reads a wide price CSV (except `synth`, which writes one)
//! and writes its result to `--out` or standard output. Text outputs start
//! with a `#` metadata line carrying the crate version, a hash of the parsed
//! configuration and the seed; JSON outputs carry the same data in a `meta`
//! object. Diagnostics go to standard error. Exit codes: 0 success, 2 input
//! or usage error, 3 clique budget exceeded.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::cliques::{maximal_cliques, Limits};
use crate::communities::{cover_to_json, detect_communities, label_purity};
use crate::dynamics::{window_panel, SimilarityReport, WindowScheme, WindowedNetworkSeries};
use crate::error::{Error, Result};
use crate::export::{write_edge_list, write_graphml, GraphView};
use crate::filtration::{
    build_graph, filter_links, parse_q_grid, scan, scan_with_cliques, RemovalMode, RANDOM_ALGORITHM,
};
use crate::mst::minimum_spanning_tree;
use crate::panel::{
    correlation, load_labels, load_panel, log_returns, to_distance, write_labels, LoadOptions, PricePanel,
};
use crate::synth::{generate_panel, HubStock, MarketSpec};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "corrnet", version, about = "Correlation-based market network analysis")]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, env = "CORRNET_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic factor-model market (prices CSV + labels CSV).
    Synth(SynthArgs),
    /// Log returns of a price panel.
    Returns(ReturnsArgs),
    /// Correlation or distance matrix.
    Corr(CorrArgs),
    /// Filtered network as edge list (and optionally GraphML).
    Net(NetArgs),
    /// Component, percolation, clustering and clique metrics over a q grid.
    Scan(ScanArgs),
    /// Maximal cliques of a filtered network as JSON.
    Cliques(CliquesArgs),
    /// k-clique percolation communities as JSON.
    Communities(CommunitiesArgs),
    /// Minimum spanning tree as edge list (and optionally GraphML).
    Mst(MstArgs),
    /// Single- and multi-step link similarity between windows.
    Dynamics(DynamicsArgs),
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Wide price CSV: date column then one column per symbol.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Drop rows with missing prices instead of failing.
    #[arg(long)]
    pub drop_incomplete: bool,
    /// Return horizon in rows.
    #[arg(long, default_value_t = 1)]
    pub lag: usize,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output file (standard output when omitted).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FilterArgs {
    /// Removal order: weak, strong, random or random:<seed>.
    #[arg(long, default_value = "weak")]
    pub mode: RemovalMode,
    /// Fraction of links removed.
    #[arg(long, default_value_t = 0.995)]
    pub q: f64,
    /// Seed for `--mode random` without an explicit seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 200)]
    pub n_stocks: usize,
    #[arg(long, default_value_t = 10)]
    pub n_sectors: usize,
    #[arg(long, default_value_t = 500)]
    pub days: usize,
    #[arg(long, default_value_t = 0.25)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.6)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Hub stock as SYMBOL:SECTOR_A:SECTOR_B (repeatable).
    #[arg(long = "hub", value_parser = parse_hub)]
    pub hubs: Vec<HubStock>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Where to write the `symbol,label` CSV.
    #[arg(long)]
    pub labels_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReturnsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CorrArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Emit distances instead of correlations.
    #[arg(long)]
    pub distance: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct NetArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    /// Also write GraphML here.
    #[arg(long)]
    pub graphml: Option<PathBuf>,
    /// `symbol,label` CSV for GraphML sector attributes.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Comma-separated removal modes.
    #[arg(long, value_delimiter = ',', default_value = "weak,strong,random")]
    pub modes: Vec<RemovalMode>,
    /// `start:end:step` (end included when reachable) or a comma list.
    #[arg(long, default_value = "0:0.999:0.001")]
    pub q_grid: String,
    /// Seed for `random` modes without an explicit seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Enumerate maximal cliques for grid points with q at least this value.
    #[arg(long, default_value_t = 0.99)]
    pub cliques_from: f64,
    /// Skip clique metrics entirely.
    #[arg(long)]
    pub no_cliques: bool,
    #[arg(long, default_value_t = Limits::default().max_steps)]
    pub max_steps: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CliquesArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[arg(long, default_value_t = Limits::default().max_steps)]
    pub max_steps: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct CommunitiesArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    /// Clique size of the percolation (at least 3).
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// `symbol,label` CSV; adds a purity value to each community.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long, default_value_t = Limits::default().max_steps)]
    pub max_steps: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MstArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Restrict the tree to the connected nodes of the network filtered
    /// with this mode (requires --subset-q).
    #[arg(long, requires = "subset_q")]
    pub subset_mode: Option<RemovalMode>,
    #[arg(long, requires = "subset_mode")]
    pub subset_q: Option<f64>,
    #[arg(long)]
    pub graphml: Option<PathBuf>,
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DynamicsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub filter: FilterArgs,
    /// `year` or `fixed:<rows>`.
    #[arg(long, default_value = "year")]
    pub windows: WindowScheme,
    /// Largest tau of the multi-step similarity.
    #[arg(long, default_value_t = 3)]
    pub tau_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_hub(s: &str) -> std::result::Result<HubStock, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [symbol, a, b] => Ok(HubStock {
            symbol: symbol.to_string(),
            sectors: (a.parse().map_err(|e| format!("{e}"))?, b.parse().map_err(|e| format!("{e}"))?),
        }),
        _ => Err(format!("expected SYMBOL:SECTOR_A:SECTOR_B, got `{s}`")),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Some(n) = cli.threads {
        // Fails only if the global pool already exists; keep whatever it has.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_INPUT,
            }
        }
    }
}

struct Meta {
    command: &'static str,
    config: String,
    seed: Option<u64>,
}

impl Meta {
    fn new(command: &'static str, cmd: &Command, seed: Option<u64>) -> Self {
        let digest = Sha256::digest(format!("{cmd:?}").as_bytes());
        let config = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        Self { command, config, seed }
    }

    fn line(&self) -> String {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        format!(
            "corrnet {} command={} config={} seed={} rng={}",
            env!("CARGO_PKG_VERSION"),
            self.command,
            self.config,
            seed,
            RANDOM_ALGORITHM
        )
    }

    fn json(&self) -> serde_json::Value {
        serde_json::json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "rng": RANDOM_ALGORITHM,
        })
    }
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => File::create(p)?.write_all(bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

/// `# <meta>` line followed by whatever `body` writes.
fn emit_text(path: Option<&Path>, meta: &Meta, body: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<()> {
    let mut buf = format!("# {}\n", meta.line()).into_bytes();
    body(&mut buf)?;
    emit(path, &buf)
}

fn emit_json(path: Option<&Path>, meta: &Meta, mut value: serde_json::Value) -> Result<()> {
    if let serde_json::Value::Object(map) = &mut value {
        map.insert("meta".into(), meta.json());
    }
    let mut buf = serde_json::to_vec_pretty(&value)?;
    buf.push(b'\n');
    emit(path, &buf)
}

fn read_panel(input: &InputArgs) -> Result<PricePanel> {
    let file = File::open(&input.input)?;
    load_panel(BufReader::new(file), LoadOptions { drop_incomplete_rows: input.drop_incomplete })
}

fn read_labels(path: Option<&PathBuf>) -> Result<Option<BTreeMap<String, String>>> {
    path.map(|p| load_labels(BufReader::new(File::open(p)?))).transpose()
}

fn resolve_mode(mode: RemovalMode, seed: Option<u64>) -> RemovalMode {
    match (mode, seed) {
        (RemovalMode::Random { seed: 0 }, Some(s)) => RemovalMode::Random { seed: s },
        (m, _) => m,
    }
}

fn mode_seed(mode: RemovalMode) -> Option<u64> {
    match mode {
        RemovalMode::Random { seed } => Some(seed),
        _ => None,
    }
}

fn distances(input: &InputArgs) -> Result<crate::panel::DistanceMatrix> {
    let panel = read_panel(input)?;
    Ok(to_distance(&correlation(&log_returns(&panel, input.lag)?)?))
}

fn execute(cmd: &Command) -> Result<()> {
    match cmd {
        Command::Synth(a) => {
            let spec = MarketSpec {
                n_stocks: a.n_stocks,
                n_sectors: a.n_sectors,
                days: a.days,
                beta: a.beta,
                gamma: a.gamma,
                sigma: a.sigma,
                hub_stocks: a.hubs.clone(),
                seed: a.seed,
            };
            let meta = Meta::new("synth", cmd, Some(a.seed));
            let panel = generate_panel(&spec)?;
            emit_text(a.output.out.as_deref(), &meta, |buf| panel.write_csv(buf))?;
            if let Some(path) = &a.labels_out {
                emit_text(Some(path), &meta, |buf| write_labels(&spec.labels(), buf))?;
            }
            Ok(())
        }
        Command::Returns(a) => {
            let returns = log_returns(&read_panel(&a.input)?, a.input.lag)?;
            let meta = Meta::new("returns", cmd, None);
            emit_text(a.output.out.as_deref(), &meta, |buf| returns.write_csv(buf))
        }
        Command::Corr(a) => {
            let corr = correlation(&log_returns(&read_panel(&a.input)?, a.input.lag)?)?;
            let meta = Meta::new("corr", cmd, None);
            if a.distance {
                let dist = to_distance(&corr);
                emit_text(a.output.out.as_deref(), &meta, |buf| dist.write_csv(buf))
            } else {
                emit_text(a.output.out.as_deref(), &meta, |buf| corr.write_csv(buf))
            }
        }
        Command::Net(a) => {
            let mode = resolve_mode(a.filter.mode, a.filter.seed);
            let fg = filter_links(&build_graph(&distances(&a.input)?), mode, a.filter.q)?;
            let labels = read_labels(a.labels.as_ref())?;
            let meta = Meta::new("net", cmd, mode_seed(mode));
            let view = GraphView::from(&fg);
            emit_text(a.output.out.as_deref(), &meta, |buf| write_edge_list(&view, buf))?;
            if let Some(path) = &a.graphml {
                let mut buf = Vec::new();
                write_graphml(&view, labels.as_ref(), Some(&meta.line()), &mut buf)?;
                emit(Some(path), &buf)?;
            }
            Ok(())
        }
        Command::Scan(a) => {
            let grid = parse_q_grid(&a.q_grid)?;
            let modes: Vec<RemovalMode> = a.modes.iter().map(|&m| resolve_mode(m, Some(a.seed))).collect();
            let graph = build_graph(&distances(&a.input)?);
            let with_cliques = !a.no_cliques;
            let table = if with_cliques {
                scan_with_cliques(&graph, &modes, &grid, a.cliques_from, Limits { max_steps: a.max_steps })?
            } else {
                scan(&graph, &modes, &grid)?
            };
            let meta = Meta::new("scan", cmd, Some(a.seed));
            emit_text(a.output.out.as_deref(), &meta, |buf| table.write_csv(buf, with_cliques))
        }
        Command::Cliques(a) => {
            let mode = resolve_mode(a.filter.mode, a.filter.seed);
            let fg = filter_links(&build_graph(&distances(&a.input)?), mode, a.filter.q)?;
            let set = maximal_cliques(&fg, Limits { max_steps: a.max_steps })?;
            let meta = Meta::new("cliques", cmd, mode_seed(mode));
            let value = serde_json::json!({ "cliques": set.to_symbols(fg.symbols()) });
            emit_json(a.output.out.as_deref(), &meta, value)
        }
        Command::Communities(a) => {
            let mode = resolve_mode(a.filter.mode, a.filter.seed);
            if a.k < 3 {
                return Err(Error::InvalidK(a.k));
            }
            let fg = filter_links(&build_graph(&distances(&a.input)?), mode, a.filter.q)?;
            let cover = detect_communities(&fg, a.k, Limits { max_steps: a.max_steps })?;
            let purity = read_labels(a.labels.as_ref())?.map(|l| label_purity(&cover, &l)).transpose()?;
            let meta = Meta::new("communities", cmd, mode_seed(mode));
            emit_json(a.output.out.as_deref(), &meta, cover_to_json(&cover, a.filter.q, purity.as_deref()))
        }
        Command::Mst(a) => {
            let dist = distances(&a.input)?;
            let subset = match (a.subset_mode, a.subset_q) {
                (Some(mode), Some(q)) => {
                    let fg = filter_links(&build_graph(&dist), mode, q)?;
                    Some(fg.connected_symbols().into_iter().map(str::to_string).collect::<Vec<_>>())
                }
                _ => None,
            };
            let tree = minimum_spanning_tree(&dist, subset.as_deref())?;
            let labels = read_labels(a.labels.as_ref())?;
            let meta = Meta::new("mst", cmd, a.subset_mode.and_then(mode_seed));
            let view = GraphView::from(&tree);
            emit_text(a.output.out.as_deref(), &meta, |buf| write_edge_list(&view, buf))?;
            if let Some(path) = &a.graphml {
                let mut buf = Vec::new();
                write_graphml(&view, labels.as_ref(), Some(&meta.line()), &mut buf)?;
                emit(Some(path), &buf)?;
            }
            Ok(())
        }
        Command::Dynamics(a) => {
            let mode = resolve_mode(a.filter.mode, a.filter.seed);
            let windows = window_panel(&read_panel(&a.input)?, a.windows)?;
            if a.tau_max >= windows.len() {
                eprintln!(
                    "warning: tau_max = {} but only {} windows; rows are written for tau <= {}",
                    a.tau_max,
                    windows.len(),
                    windows.len().saturating_sub(1)
                );
            }
            let series = WindowedNetworkSeries::build(&windows, mode, a.filter.q)?;
            let report = SimilarityReport::compute(&series, a.tau_max)?;
            let meta = Meta::new("dynamics", cmd, mode_seed(mode));
            emit_text(a.output.out.as_deref(), &meta, |buf| report.write_csv(buf))
        }
    }
}
