//! Loads a wide price CSV (from a path argument, or a small inline panel),
//! then prints log returns, correlations and distances.
//!
//!     cargo run --example ingest_panel -- prices.csv

use std::error::Error;

use corrnet::{correlation, load_panel, log_returns, to_distance, LoadOptions};

const INLINE: &str = "\
# three stocks, one missing quote
date,AAA,BBB,CCC
2021-01-04,10.0,20.0,30.0
2021-01-05,10.5,20.4,29.1
2021-01-06,10.2,,29.8
2021-01-07,10.9,21.3,28.7
2021-01-08,11.1,21.0,29.5
2021-01-11,10.8,21.8,30.2
";

fn main() -> Result<(), Box<dyn Error>> {
    let options = LoadOptions { drop_incomplete_rows: true };
    let panel = match std::env::args().nth(1) {
        Some(path) => load_panel(std::fs::File::open(path)?, options)?,
        None => load_panel(INLINE.as_bytes(), options)?,
    };
    println!("{} rows x {} symbols", panel.n_rows(), panel.n_symbols());

    let returns = log_returns(&panel, 1)?;
    let rho = correlation(&returns)?;
    let dist = to_distance(&rho);

    let stdout = std::io::stdout();
    println!("\nlog returns");
    returns.write_csv(stdout.lock())?;
    println!("\ncorrelation");
    rho.write_csv(stdout.lock())?;
    println!("\ndistance");
    dist.write_csv(stdout.lock())?;
    Ok(())
}
