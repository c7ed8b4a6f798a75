//! Hydrogen price that minimizes LCoH under flexible dispatch, with and
//! without heat sales.

use h2heat::optimizer::PriceSearchSpec;
use h2heat::{Config, Study};

fn main() -> h2heat::Result<()> {
    let study = Study::synthetic(Config::default(), 1)?;
    for heat in [false, true] {
        let spec = PriceSearchSpec { heat_sale: heat, ..study.config.optimizer };
        let r = study.optimize(&spec)?;
        println!(
            "heat {heat:<5}  price {:.3} EUR/kg  LCoH {:.3} EUR/kg  {:.0} h/yr  {:.1} t/yr{}",
            r.optimal_price,
            r.lcoh_at_optimum,
            r.yearly_hours,
            r.yearly_hydrogen,
            if r.boundary { "  (at bound)" } else { "" }
        );
    }
    Ok(())
}
