//! Load and check an hourly price CSV: coverage, gaps, digest.
//!
//!     cargo run --example load_prices -- prices.csv
//!
//! Without an argument a short synthetic file is written and read back.

use h2heat::market::synthetic::SyntheticSpec;
use h2heat::market::{load_hourly_series, ColumnSchema};
use h2heat::study::series_digest;

fn main() -> h2heat::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => p.into(),
        None => {
            let p = std::env::temp_dir().join("h2heat_example_prices.csv");
            let series = SyntheticSpec { hours: 24 * 14, ..SyntheticSpec::one_year(5) }.generate();
            series.write_csv(std::fs::File::create(&p).map_err(|e| h2heat::Error::io(&p, e))?)?;
            p
        }
    };
    let series = load_hourly_series(&path, &ColumnSchema::default())?;
    let cov = series.coverage();
    println!("{}", path.display());
    println!("  {} rows, {} .. {}, {} gap hours", cov.count, cov.first, cov.last, cov.gap_hours);
    println!("  sha256 {}", series_digest(&series));
    let prices: Vec<f64> = series.records().iter().map(|r| r.spot_price).collect();
    let mean = prices.iter().sum::<f64>() / prices.len() as f64;
    let min = prices.iter().copied().fold(f64::INFINITY, f64::min);
    let max = prices.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("  spot EUR/MWh: mean {mean:.2}, min {min:.2}, max {max:.2}");
    Ok(())
}
