//! Wind and PV park sizing: hourly output, yearly energy and LCoE.

use h2heat::renewables::{park_lcoe, ParkSpec, RenewableFinancials};
use h2heat::study::synthetic_years;

fn main() -> h2heat::Result<()> {
    let weather = synthetic_years(3, 1);
    let spec = ParkSpec::default();
    let park = spec.generators()?;
    let (wind, pv) = park.annual_energy(&weather)?;
    let (wf, pf) = (RenewableFinancials::onshore_wind(), RenewableFinancials::utility_pv());

    println!("park {:.1} MW: wind {:.0} MWh/yr, PV {:.0} MWh/yr", park.capacity(), wind, pv);
    println!("wind LCoE {:.2} EUR/MWh", wf.lcoe(spec.wind_capacity, wind)?);
    println!("PV LCoE   {:.2} EUR/MWh", pf.lcoe(spec.pv_capacity, pv)?);
    println!("blended   {:.2} EUR/MWh", park_lcoe(&spec, &wf, &pf, wind, pv)?);

    for rec in weather.records().iter().skip(12).take(6) {
        let (w, p) = park.split_output(rec)?;
        println!("{}  wind {:>5.1} m/s -> {:>5.2} MW  sun {:>6.1} W/m2 -> {:>5.2} MW", rec.timestamp, rec.wind_speed.unwrap_or(0.0), w, rec.irradiance.unwrap_or(0.0), p);
    }
    Ok(())
}
