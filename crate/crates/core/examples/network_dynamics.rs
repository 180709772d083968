//! Splits a stationary market into four windows and measures how many
//! links persist between them.

use corrnet::{
    generate_panel, window_panel, MarketSpec, RemovalMode, SimilarityReport, WindowScheme, WindowedNetworkSeries,
};

fn main() -> Result<(), corrnet::Error> {
    let panel = generate_panel(&MarketSpec { days: 1000, ..MarketSpec::default().with_seed(4) })?;
    let windows = window_panel(&panel, WindowScheme::FixedLength(250))?;

    for mode in [RemovalMode::WeakFirst, RemovalMode::StrongFirst] {
        let series = WindowedNetworkSeries::build(&windows, mode, 0.995)?;
        let report = SimilarityReport::compute(&series, 3)?;
        println!("{mode}: mean single-step similarity {:.3}", report.mean_single_step().unwrap_or(0.0));
        for (t, row) in report.multi_step.iter().enumerate().skip(1) {
            let cells: Vec<String> = row.iter().map(|s| format!("{s:.3}")).collect();
            println!("  {} |E| = {:>3}  S_tau = [{}]", report.labels[t], report.edge_counts[t], cells.join(", "));
        }
    }
    Ok(())
}
