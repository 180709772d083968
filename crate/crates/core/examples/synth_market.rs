//! Generates a factor-model market and compares the empirical sector
//! correlations with the model values.

use corrnet::{correlation, generate_panel, log_returns, HubStock, MarketSpec};

fn main() -> Result<(), corrnet::Error> {
    let spec = MarketSpec {
        n_stocks: 100,
        n_sectors: 5,
        hub_stocks: vec![HubStock { symbol: "HUB".into(), sectors: (0, 1) }],
        ..MarketSpec::default().with_seed(42)
    };
    let panel = generate_panel(&spec)?;
    let rho = correlation(&log_returns(&panel, 1)?)?;

    let (mut intra, mut inter) = (Vec::new(), Vec::new());
    for i in 0..spec.n_stocks {
        for j in i + 1..spec.n_stocks {
            let target = if spec.sector_of(i) == spec.sector_of(j) { &mut intra } else { &mut inter };
            target.push(rho.get(i, j));
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    println!("{} symbols, {} days", panel.n_symbols(), panel.n_rows());
    println!("intra-sector rho: {:.3} (model {:.3})", mean(&intra), spec.expected_intra_correlation());
    println!("inter-sector rho: {:.3} (model {:.3})", mean(&inter), spec.expected_inter_correlation());

    let hub = panel.n_symbols() - 1;
    for sector in 0..3 {
        let peers: Vec<f64> =
            (0..spec.n_stocks).filter(|&i| spec.sector_of(i) == sector).map(|i| rho.get(hub, i)).collect();
        println!("hub vs SEC{sector:02}: {:.3}", mean(&peers));
    }
    Ok(())
}
