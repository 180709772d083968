//! Maximal cliques and the clustering coefficient of strongly filtered
//! networks.

use corrnet::{
    build_graph, clique_metrics, correlation, filter_links, generate_panel, log_returns, maximal_cliques, to_distance,
    Limits, MarketSpec, RemovalMode,
};

fn main() -> Result<(), corrnet::Error> {
    let panel = generate_panel(&MarketSpec::default().with_seed(3))?;
    let graph = build_graph(&to_distance(&correlation(&log_returns(&panel, 1)?)?));

    for q in [0.99, 0.995, 0.999] {
        for mode in [RemovalMode::WeakFirst, RemovalMode::StrongFirst] {
            let fg = filter_links(&graph, mode, q)?;
            let cliques = maximal_cliques(&fg, Limits::default())?;
            let m = clique_metrics(&fg, &cliques)?;
            println!(
                "q={q:<6} {:>6}: {:>4} nodes, {:>4} maximal cliques, largest {:>2}, C = {:.3}",
                mode.label(),
                fg.n_connected(),
                m.n_cliques,
                m.max_clique_size,
                m.clustering
            );
        }
    }

    let fg = filter_links(&graph, RemovalMode::WeakFirst, 0.995)?;
    let cliques = maximal_cliques(&fg, Limits::default())?;
    println!("\nlargest cliques at q = 0.995 (weak first):");
    for c in cliques.to_symbols(fg.symbols()).iter().take(5) {
        println!("  {}", c.join(" "));
    }
    Ok(())
}
