//! On/off electrolyzer: electricity in, hydrogen, recoverable heat and
//! water demand out. No part-load, ramping or degradation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Plant parameters. Defaults describe the 12 MW alkaline case-study unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ElectrolyzerSpec {
    /// MW electric
    pub capacity: f64,
    /// Fraction of input energy leaving as hydrogen (LHV).
    pub eta_h2: f64,
    /// Fraction of input energy recoverable as heat.
    pub eta_heat: f64,
    /// kWh per kg hydrogen
    pub lhv_h2: f64,
    /// Litres of deionized water per kg hydrogen.
    pub water_per_kg: f64,
    /// Years
    pub lifetime: f64,
    /// EUR
    pub capex_total: f64,
    /// Yearly O&M as a fraction of CapEx.
    pub om_fraction: f64,
    pub heat_exchanger_efficiency: f64,
}

/// CapEx per MW in EUR: 10 million DKK per MW at 7.46 DKK/EUR.
pub const DEFAULT_CAPEX_PER_MW: f64 = 1.34e6;

/// Mean calendar hours per year, leap years included.
pub const HOURS_PER_YEAR: f64 = 8766.0;

impl Default for ElectrolyzerSpec {
    fn default() -> Self {
        Self {
            capacity: 12.0,
            eta_h2: 0.665,
            eta_heat: 0.164,
            lhv_h2: 33.33,
            water_per_kg: 10.0,
            lifetime: 20.0,
            capex_total: 12.0 * DEFAULT_CAPEX_PER_MW,
            om_fraction: 0.03,
            heat_exchanger_efficiency: 1.0,
        }
    }
}

/// Flows for one hour of operation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct FlowRecord {
    /// MWh
    pub electricity_in: f64,
    /// kg
    pub hydrogen_out: f64,
    /// MWh_th
    pub heat_to_grid: f64,
    /// litres
    pub water_in: f64,
}

fn non_negative(value: f64, what: &str) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite and non-negative, got {value}")))
    }
}

impl ElectrolyzerSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("electrolyzer: {m}")));
        if !(self.eta_h2 > 0.0 && self.eta_heat >= 0.0 && self.eta_h2 + self.eta_heat <= 1.0) {
            return bad("need 0 < eta_h2, 0 <= eta_heat, eta_h2 + eta_heat <= 1");
        }
        if !(self.capacity > 0.0 && self.lhv_h2 > 0.0 && self.lifetime > 0.0) {
            return bad("capacity, lhv_h2 and lifetime must be positive");
        }
        if !(0.0..=1.0).contains(&self.heat_exchanger_efficiency) {
            return bad("heat_exchanger_efficiency must lie in [0, 1]");
        }
        if !(self.capex_total >= 0.0 && self.om_fraction >= 0.0 && self.water_per_kg >= 0.0) {
            return bad("capex_total, om_fraction and water_per_kg must be non-negative");
        }
        Ok(())
    }

    /// kg of hydrogen from `electricity` MWh.
    pub fn hydrogen_mass(&self, electricity: f64) -> Result<f64> {
        non_negative(electricity, "electricity")?;
        Ok(electricity * 1000.0 * self.eta_h2 / self.lhv_h2)
    }

    /// MWh_th delivered through the heat exchanger.
    pub fn recoverable_heat(&self, electricity: f64) -> Result<f64> {
        non_negative(electricity, "electricity")?;
        Ok(electricity * self.eta_heat * self.heat_exchanger_efficiency)
    }

    /// Litres of water for `hydrogen` kg.
    pub fn water_demand(&self, hydrogen: f64) -> Result<f64> {
        non_negative(hydrogen, "hydrogen")?;
        Ok(hydrogen * self.water_per_kg)
    }

    /// kg of hydrogen per MWh of electricity.
    pub fn kg_per_mwh(&self) -> f64 {
        1000.0 * self.eta_h2 / self.lhv_h2
    }

    /// CapEx depreciation plus O&M, EUR per year.
    pub fn annual_fixed_cost(&self) -> f64 {
        self.capex_total / self.lifetime + self.om_fraction * self.capex_total
    }

    pub fn hourly_fixed_cost(&self) -> f64 {
        self.annual_fixed_cost() / HOURS_PER_YEAR
    }

    pub fn annual_om_cost(&self) -> f64 {
        self.om_fraction * self.capex_total
    }

    /// One hour at rated power, or idle.
    pub fn run_hour(&self, on: bool, heat_sale: bool) -> FlowRecord {
        if !on {
            return FlowRecord::default();
        }
        let electricity_in = self.capacity;
        let hydrogen_out = electricity_in * self.kg_per_mwh();
        let heat_to_grid = if heat_sale {
            electricity_in * self.eta_heat * self.heat_exchanger_efficiency
        } else {
            0.0
        };
        FlowRecord {
            electricity_in,
            hydrogen_out,
            heat_to_grid,
            water_in: hydrogen_out * self.water_per_kg,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn hydrogen_from_one_rated_hour() {
        let spec = ElectrolyzerSpec::default();
        // 12,000 kWh * 0.665 / 33.33
        assert_relative_eq!(spec.hydrogen_mass(12.0).unwrap(), 239.4239, epsilon = 1e-3);
        assert_eq!(spec.hydrogen_mass(0.0).unwrap(), 0.0);
        assert!(spec.hydrogen_mass(-1.0).is_err());
    }

    #[test]
    fn yearly_mass_matches_reported_production() {
        let spec = ElectrolyzerSpec::default();
        let tons = spec.hydrogen_mass(8709.75 * 12.0).unwrap() / 1000.0;
        assert!((tons - 2085.17).abs() / 2085.17 < 0.005, "{tons}");
    }

    #[test]
    fn heat_and_water() {
        let spec = ElectrolyzerSpec::default();
        assert_relative_eq!(spec.recoverable_heat(12.0).unwrap(), 1.968, epsilon = 1e-12);
        let yearly = spec.recoverable_heat(8709.75 * 12.0).unwrap();
        assert_relative_eq!(yearly, 17_140.788, epsilon = 1e-6);
        let off = ElectrolyzerSpec {
            heat_exchanger_efficiency: 0.0,
            ..Default::default()
        };
        assert_eq!(off.recoverable_heat(12.0).unwrap(), 0.0);
        assert_relative_eq!(spec.water_demand(239.42).unwrap(), 2394.2, epsilon = 1e-9);
        assert_relative_eq!(spec.water_demand(2_085_170.0).unwrap(), 20_851_700.0, epsilon = 1e-6);
        assert!(spec.water_demand(-0.1).is_err());
        assert!(spec.recoverable_heat(-0.1).is_err());
    }

    #[test]
    fn yearly_heat_implies_a_blended_price_between_the_seasons() {
        let spec = ElectrolyzerSpec::default();
        let heat = spec.recoverable_heat(104_517.0).unwrap();
        let blended = 400_500.0 / heat;
        assert!(blended > 20.1 && blended < 26.8, "{blended}");
    }

    #[test]
    fn run_hour_states() {
        let spec = ElectrolyzerSpec::default();
        let on = spec.run_hour(true, true);
        assert_eq!(on.electricity_in, 12.0);
        assert_relative_eq!(on.hydrogen_out, 239.4239, epsilon = 1e-3);
        assert_relative_eq!(on.heat_to_grid, 1.968, epsilon = 1e-12);
        assert_relative_eq!(on.water_in, 2394.239, epsilon = 1e-2);
        assert_eq!(spec.run_hour(false, true), FlowRecord::default());
        let no_heat = spec.run_hour(true, false);
        assert_eq!(no_heat.heat_to_grid, 0.0);
        assert_eq!(no_heat.hydrogen_out, on.hydrogen_out);
    }

    #[test]
    fn conversion_constant() {
        let k = ElectrolyzerSpec::default().kg_per_mwh();
        assert!((k - 19.95).abs() <= 0.01, "{k}");
    }

    #[test]
    fn validation() {
        assert!(ElectrolyzerSpec::default().validate().is_ok());
        let bad = ElectrolyzerSpec {
            eta_heat: 0.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ElectrolyzerSpec {
            heat_exchanger_efficiency: 1.2,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    proptest! {
        #[test]
        fn conversions_are_linear(a in 0.0f64..1e5, b in 0.0f64..1e5) {
            let spec = ElectrolyzerSpec::default();
            let tol = 1e-9 * (1.0 + a + b);
            prop_assert!((spec.hydrogen_mass(a + b).unwrap() - spec.hydrogen_mass(a).unwrap() - spec.hydrogen_mass(b).unwrap()).abs() < tol * 20.0);
            prop_assert!((spec.recoverable_heat(a + b).unwrap() - spec.recoverable_heat(a).unwrap() - spec.recoverable_heat(b).unwrap()).abs() < tol);
            prop_assert!((spec.water_demand(a + b).unwrap() - spec.water_demand(a).unwrap() - spec.water_demand(b).unwrap()).abs() < tol * 10.0);
        }

        #[test]
        fn energy_is_conserved(on in any::<bool>(), heat in any::<bool>(), eff in 0.0f64..=1.0) {
            let spec = ElectrolyzerSpec { heat_exchanger_efficiency: eff, ..Default::default() };
            let f = spec.run_hour(on, heat);
            let h2_mwh = f.hydrogen_out * spec.lhv_h2 / 1000.0;
            prop_assert!(h2_mwh <= f.electricity_in + 1e-12);
            prop_assert!(h2_mwh + f.heat_to_grid <= f.electricity_in + 1e-12);
            prop_assert!(f.heat_to_grid <= spec.eta_heat * f.electricity_in + 1e-12);
        }
    }
}
