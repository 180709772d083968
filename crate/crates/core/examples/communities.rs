//! k-clique percolation on a market with many small sectors and one stock
//! that belongs to two of them.

use corrnet::{
    build_graph, correlation, detect_communities, filter_links, generate_panel, label_purity, log_returns,
    overlap_report, to_distance, HubStock, Limits, MarketSpec, RemovalMode,
};

fn main() -> Result<(), corrnet::Error> {
    let spec = MarketSpec {
        n_stocks: 800,
        n_sectors: 200,
        gamma: 1.0,
        hub_stocks: vec![HubStock { symbol: "HUB".into(), sectors: (0, 1) }],
        ..MarketSpec::default().with_seed(5)
    };
    let panel = generate_panel(&spec)?;
    let graph = build_graph(&to_distance(&correlation(&log_returns(&panel, 1)?)?));
    let fg = filter_links(&graph, RemovalMode::WeakFirst, 0.995)?;

    let cover = detect_communities(&fg, 4, Limits::default())?;
    let purity = label_purity(&cover, &spec.labels())?;
    let pure = purity.iter().filter(|&&p| p >= 0.8).count();
    println!("{} communities at k = 4, {pure} with purity >= 0.8", cover.len());

    for (symbol, ids) in &overlap_report(&cover).multi_members {
        println!("{symbol} is in {} communities:", ids.len());
        for &id in ids {
            println!("  #{id}: {}", cover.community_symbols(id).join(" "));
        }
    }
    Ok(())
}
