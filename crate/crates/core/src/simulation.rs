//! Deterministic hourly engine: replays the input window from the
//! simulation start, asks the strategy for an on/off decision each hour, and
//! books flows and cashflows into a [`Ledger`].

use chrono::{DateTime, Duration, Months, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::dispatch::{DispatchContext, DispatchState, DispatchStrategy, StateMemory};
use crate::economics::{
    aggregate_kpis, hourly_cashflow, ElectricitySource, KpiReport, KpiWindow, Ledger,
    PriceModel, ProfitDefinition,
};
use crate::electrolyzer::ElectrolyzerSpec;
use crate::error::{Error, Result};
use crate::market::{HeatPriceSchedule, HourlySeries};
use crate::renewables::{park_lcoe, Park, ParkSpec, RenewableFinancials};

/// Business model under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Scenario {
    /// Grid electricity, constant production.
    GridConstant,
    /// Grid electricity, production following spot prices.
    GridFlexible,
    /// Onsite wind and PV park only.
    Renewable,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::GridConstant, Scenario::GridFlexible, Scenario::Renewable];

    pub fn number(self) -> u8 {
        match self {
            Scenario::GridConstant => 1,
            Scenario::GridFlexible => 2,
            Scenario::Renewable => 3,
        }
    }

    pub fn uses_grid(self) -> bool {
        !matches!(self, Scenario::Renewable)
    }
}

impl TryFrom<u8> for Scenario {
    type Error = Error;

    fn try_from(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Scenario::GridConstant),
            2 => Ok(Scenario::GridFlexible),
            3 => Ok(Scenario::Renewable),
            other => Err(Error::Config(format!("scenario must be 1, 2 or 3, got {other}"))),
        }
    }
}

impl From<Scenario> for u8 {
    fn from(s: Scenario) -> u8 {
        s.number()
    }
}

/// Run length and stopping rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationSettings {
    #[serde(with = "utc_hour")]
    pub sim_start: DateTime<Utc>,
    /// Years averaged into the KPI report.
    pub kpi_years: usize,
    /// Maximum simulated years.
    pub horizon_years: usize,
    /// Stop once the KPI window is complete and the investment has paid back.
    pub stop_at_roi: bool,
    pub memory: StateMemory,
    pub profit: ProfitDefinition,
}

pub const MAX_HORIZON_YEARS: usize = 27;

impl Default for SimulationSettings {
    fn default() -> Self {
        Self {
            sim_start: Utc.with_ymd_and_hms(2023, 1, 1, 0, 0, 0).unwrap(),
            kpi_years: 4,
            horizon_years: MAX_HORIZON_YEARS,
            stop_at_roi: true,
            memory: StateMemory::Cumulative,
            profit: ProfitDefinition::ExcludesOm,
        }
    }
}

impl SimulationSettings {
    pub fn validate(&self) -> Result<()> {
        if self.kpi_years == 0 || self.horizon_years == 0 || self.horizon_years > MAX_HORIZON_YEARS {
            return Err(Error::Config(format!(
                "need kpi_years >= 1 and 1 <= horizon_years <= {MAX_HORIZON_YEARS}"
            )));
        }
        if !crate::market::is_hour_aligned(self.sim_start) {
            return Err(Error::Config("sim_start must be on the hour".into()));
        }
        Ok(())
    }

    /// Settings that only cover the KPI window.
    pub fn kpi_only(&self) -> Self {
        Self {
            horizon_years: self.kpi_years.min(self.horizon_years),
            stop_at_roi: false,
            ..self.clone()
        }
    }

    fn kpi_window(&self) -> KpiWindow {
        KpiWindow {
            kpi_years: self.kpi_years,
            horizon_years: self.horizon_years,
            profit: self.profit,
        }
    }
}

mod utc_hour {
    use chrono::{DateTime, Utc};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ts: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&ts.format("%Y-%m-%dT%H:%M:%SZ").to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let raw = String::deserialize(d)?;
        let with_time = if raw.len() == 10 { format!("{raw}T00:00Z") } else { raw.clone() };
        crate::market::parse_timestamp(&with_time)
            .ok_or_else(|| serde::de::Error::custom(format!("bad timestamp `{raw}`")))
    }
}

/// Onsite park with its levelized electricity cost.
#[derive(Debug, Clone)]
pub struct ParkEconomics {
    pub park: Park,
    /// EUR/MWh
    pub lcoe: f64,
    /// Mean yearly (wind, PV) output, MWh.
    pub annual_energy: (f64, f64),
}

impl ParkEconomics {
    pub fn from_weather(
        spec: &ParkSpec,
        wind: &RenewableFinancials,
        pv: &RenewableFinancials,
        weather: &HourlySeries,
    ) -> Result<Self> {
        let park = spec.generators()?;
        let annual_energy = park.annual_energy(weather)?;
        let lcoe = park_lcoe(spec, wind, pv, annual_energy.0, annual_energy.1)?;
        Ok(Self {
            park,
            lcoe,
            annual_energy,
        })
    }
}

/// Everything fixed across experiments: the plant, prices and input data.
#[derive(Debug, Clone)]
pub struct Plant<'a> {
    pub spec: ElectrolyzerSpec,
    pub prices: PriceModel,
    pub heat: HeatPriceSchedule,
    /// Spot prices; required by grid scenarios.
    pub market: Option<&'a HourlySeries>,
    /// Weather; required by the renewable scenario.
    pub weather: Option<&'a HourlySeries>,
    pub park: Option<ParkEconomics>,
}

/// Result of one simulation.
#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub ledger: Ledger,
    pub kpis: KpiReport,
}

/// One run's variable inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    pub scenario: Scenario,
    pub heat_sale: bool,
    /// EUR/kg
    pub hydrogen_price: f64,
}

impl Plant<'_> {
    /// Simulates one experiment with the given strategy.
    pub fn simulate(
        &self,
        strategy: &dyn DispatchStrategy,
        run: RunParams,
        settings: &SimulationSettings,
    ) -> Result<SimulationOutcome> {
        settings.validate()?;
        if !(run.hydrogen_price > 0.0) {
            return Err(Error::Config("hydrogen price must be positive".into()));
        }
        let (source, driver) = match run.scenario {
            Scenario::Renewable => {
                let park = self.park.as_ref().ok_or_else(|| {
                    Error::Config("renewable scenario needs park data".into())
                })?;
                let weather = self.weather.ok_or_else(|| {
                    Error::Config("renewable scenario needs a weather series".into())
                })?;
                (ElectricitySource::Park { lcoe: park.lcoe }, weather)
            }
            _ => {
                let market = self.market.ok_or_else(|| {
                    Error::Config("grid scenarios need a spot price series".into())
                })?;
                (ElectricitySource::Grid, market)
            }
        };

        let fixed = self.spec.hourly_fixed_cost();
        let mut state = DispatchState::default();
        let mut ledger = Ledger::default();
        let mut cumulative_profit = 0.0;
        let annual_om = match settings.profit {
            ProfitDefinition::ExcludesOm => 0.0,
            ProfitDefinition::IncludesOm => self.spec.annual_om_cost(),
        };

        for year in 0..settings.horizon_years {
            let year_start = settings.sim_start + Months::new(12 * year as u32);
            let year_end = settings.sim_start + Months::new(12 * (year as u32 + 1));
            let first_row = ledger.rows.len();
            if year > 0 && settings.memory == StateMemory::AnnualReset {
                state = DispatchState::default();
            }
            let mut t = year_start;
            while t < year_end {
                let elapsed = (t - settings.sim_start).num_hours() as usize;
                let record = driver.at_offset(elapsed);
                let park_output = match (&self.park, run.scenario) {
                    (Some(p), Scenario::Renewable) => match record {
                        Some(r) => Some(p.park.park_output(r)?),
                        None => None,
                    },
                    _ => None,
                };
                let ctx = DispatchContext {
                    timestamp: t,
                    spot_price: if run.scenario.uses_grid() {
                        record.map(|r| r.spot_price)
                    } else {
                        None
                    },
                    park_output,
                    heat_price: self.heat.heat_price(t),
                    hydrogen_price: run.hydrogen_price,
                    heat_sale: run.heat_sale,
                };
                let on = strategy.decide(&ctx, &state);
                let flow = self.spec.run_hour(on, run.heat_sale);
                let cf = hourly_cashflow(&flow, &ctx, &self.prices, source);
                state.advance(
                    fixed,
                    cf.electricity_cost + cf.water_cost,
                    cf.heat_revenue,
                    cf.hydrogen_kg,
                );
                cumulative_profit += cf.profit();
                ledger.rows.push(cf);
                t += Duration::hours(1);
            }
            ledger.years.push(first_row..ledger.rows.len());
            cumulative_profit -= annual_om;
            if settings.stop_at_roi
                && year + 1 >= settings.kpi_years
                && cumulative_profit >= self.spec.capex_total
            {
                break;
            }
        }

        let kpis = aggregate_kpis(&ledger, &self.spec, settings.kpi_window());
        Ok(SimulationOutcome { ledger, kpis })
    }
}
