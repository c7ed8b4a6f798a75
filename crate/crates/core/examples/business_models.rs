//! The three business models side by side, with and without heat sales.
//!
//! Runs on seeded synthetic prices and weather unless a price CSV is given:
//!
//!     cargo run --example business_models -- path/to/prices.csv

use h2heat::simulation::Scenario;
use h2heat::{Config, ExperimentConfig, Study};

fn main() -> h2heat::Result<()> {
    let mut config = Config::default();
    let study = match std::env::args().nth(1) {
        Some(path) => {
            config.data.prices = Some(path.into());
            Study::load(config)?
        }
        None => Study::synthetic(config, 1)?,
    };

    println!("{:<10} {:>8} {:>10} {:>8} {:>9} {:>8} {:>6}", "exp", "LCoH", "profit k€", "hours", "H2 t", "CO2 t", "RoI");
    for scenario in Scenario::ALL {
        for heat in [false, true] {
            let exp = ExperimentConfig::new(scenario, heat, 3.5);
            let Ok(out) = study.run(&exp) else {
                println!("{exp}: skipped (needs weather)");
                continue;
            };
            let k = out.kpis;
            println!(
                "{:<10} {:>8} {:>10.1} {:>8.0} {:>9.1} {:>8.1} {:>6}",
                exp.to_string(),
                k.lcoh.map_or("-".into(), |v| format!("{v:.3}")),
                k.avg_yearly_profit_keur,
                k.avg_yearly_operation_hours,
                k.avg_yearly_hydrogen_t,
                k.avg_yearly_co2_t,
                k.roi_years.map_or("-".into(), |v| format!("{v:.1}")),
            );
        }
    }
    Ok(())
}
