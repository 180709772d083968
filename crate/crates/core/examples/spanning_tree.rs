//! Minimum spanning tree of the full market and of the nodes that survive
//! a strong filtration.

use corrnet::{
    build_graph, correlation, filter_links, generate_panel, log_returns, minimum_spanning_tree, to_distance,
    MarketSpec, RemovalMode,
};

fn main() -> Result<(), corrnet::Error> {
    let spec = MarketSpec { n_stocks: 40, n_sectors: 4, ..MarketSpec::default().with_seed(2) };
    let panel = generate_panel(&spec)?;
    let dist = to_distance(&correlation(&log_returns(&panel, 1)?)?);

    let tree = minimum_spanning_tree(&dist, None)?;
    let same_sector = tree.edges.iter().filter(|e| tree.nodes[e.i][..3] == tree.nodes[e.j][..3]).count();
    println!(
        "full tree: {} nodes, total distance {:.4}, {same_sector}/{} links inside a sector",
        tree.nodes.len(),
        tree.total_weight,
        tree.edges.len()
    );

    let fg = filter_links(&build_graph(&dist), RemovalMode::WeakFirst, 0.95)?;
    let survivors: Vec<String> = fg.connected_symbols().into_iter().map(String::from).collect();
    let sub = minimum_spanning_tree(&dist, Some(&survivors))?;
    println!("tree over the {} nodes left at q = 0.95:", sub.nodes.len());
    for e in &sub.edges {
        println!("  {} - {}  {:.4}", sub.nodes[e.i], sub.nodes[e.j], e.distance);
    }
    Ok(())
}
