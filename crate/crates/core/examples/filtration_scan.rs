//! Removes links weakest first, strongest first and at random, and prints
//! how the largest clusters and kappa evolve.

use corrnet::filtration::parse_q_grid;
use corrnet::{build_graph, correlation, generate_panel, log_returns, scan, to_distance, MarketSpec, RemovalMode};

fn main() -> Result<(), corrnet::Error> {
    let panel = generate_panel(&MarketSpec::default().with_seed(1))?;
    let graph = build_graph(&to_distance(&correlation(&log_returns(&panel, 1)?)?));
    let grid = parse_q_grid("0:0.999:0.001")?;
    let modes = [RemovalMode::WeakFirst, RemovalMode::StrongFirst, RemovalMode::Random { seed: 7 }];
    let table = scan(&graph, &modes, &grid)?;

    println!("{:>8} {:>6} {:>5} {:>5} {:>8} {:>8}", "mode", "q", "lcc", "slcc", "kappa", "C");
    for r in &table.records {
        let q_milli = (r.q * 1000.0).round() as u32;
        if !q_milli.is_multiple_of(100) && q_milli < 990 {
            continue;
        }
        let show = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3}"));
        println!(
            "{:>8} {:>6.3} {:>5} {:>5} {:>8} {:>8}",
            r.mode.label(),
            r.q,
            r.lcc,
            r.slcc,
            show(r.kappa),
            show(r.clustering)
        );
    }

    for mode in modes {
        let first = table.for_mode(mode).find(|r| r.kappa.is_some_and(|k| k < 2.0));
        match first {
            Some(r) => println!("{mode}: kappa < 2 from q = {:.3}", r.q),
            None => println!("{mode}: kappa stays >= 2 on this grid"),
        }
    }
    Ok(())
}
