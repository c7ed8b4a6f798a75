//! Hourly cashflows and the KPI set: LCoH, average yearly profit, operating
//! hours, hydrogen and CO₂, and return on investment.

use std::ops::Range;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::dispatch::DispatchContext;
use crate::electrolyzer::{ElectrolyzerSpec, FlowRecord, HOURS_PER_YEAR};
use crate::error::{Error, Result};

/// Where the electrolyzer's electricity comes from, and at what energy price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElectricitySource {
    /// Day-ahead spot price of the hour.
    Grid,
    /// Onsite park at its levelized cost, EUR/MWh.
    Park { lcoe: f64 },
}

/// Per-unit prices and the emission model applied to every hour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PriceModel {
    /// EUR/MWh
    pub grid_tariff: f64,
    /// EUR/litre
    pub water_price: f64,
    /// t CO₂ per MWh of grid electricity.
    pub grid_factor: f64,
    /// Charge the grid tariff on park electricity too.
    pub tariff_on_park: bool,
}

impl Default for PriceModel {
    fn default() -> Self {
        Self {
            grid_tariff: 13.4,
            water_price: 0.0085,
            grid_factor: EmissionModel::default().grid_factor,
            tariff_on_park: true,
        }
    }
}

impl PriceModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.grid_tariff >= 0.0 && self.water_price >= 0.0 && self.grid_factor >= 0.0) {
            return Err(Error::Config(
                "grid_tariff, water_price and grid_factor must be non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn emissions(&self) -> EmissionModel {
        EmissionModel {
            grid_factor: self.grid_factor,
        }
    }
}

/// Grid electricity carbon intensity. Park electricity is zero-emission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionModel {
    /// t CO₂ per MWh
    pub grid_factor: f64,
}

impl Default for EmissionModel {
    /// 13,783.76 t over 8,709.75 h at 12 MW.
    fn default() -> Self {
        Self {
            grid_factor: 0.131881,
        }
    }
}

impl EmissionModel {
    pub fn co2(&self, electricity: f64, source: ElectricitySource) -> f64 {
        match source {
            ElectricitySource::Grid => electricity * self.grid_factor,
            ElectricitySource::Park { .. } => 0.0,
        }
    }
}

/// One ledger row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HourlyCashflow {
    #[serde(serialize_with = "ser_timestamp")]
    pub timestamp: DateTime<Utc>,
    pub on: bool,
    pub electricity_mwh: f64,
    pub hydrogen_kg: f64,
    pub heat_mwh: f64,
    pub electricity_cost: f64,
    pub water_cost: f64,
    pub hydrogen_revenue: f64,
    pub heat_revenue: f64,
    pub co2_t: f64,
}

fn ser_timestamp<S: serde::Serializer>(ts: &DateTime<Utc>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ts.format("%Y-%m-%dT%H:%M:%SZ").to_string())
}

impl HourlyCashflow {
    /// Operating profit of the hour; excludes CapEx and O&M.
    pub fn profit(&self) -> f64 {
        self.hydrogen_revenue + self.heat_revenue - self.electricity_cost - self.water_cost
    }

    /// Electricity and water cost net of heat revenue.
    pub fn net_variable_cost(&self) -> f64 {
        self.electricity_cost + self.water_cost - self.heat_revenue
    }
}

/// Prices the flows of one hour.
pub fn hourly_cashflow(
    flow: &FlowRecord,
    ctx: &DispatchContext,
    prices: &PriceModel,
    source: ElectricitySource,
) -> HourlyCashflow {
    let energy_price = match source {
        ElectricitySource::Grid => ctx.spot_price.unwrap_or(0.0) + prices.grid_tariff,
        ElectricitySource::Park { lcoe } => {
            lcoe + if prices.tariff_on_park {
                prices.grid_tariff
            } else {
                0.0
            }
        }
    };
    let on = flow.electricity_in > 0.0;
    let zero_if_off = |v: f64| if on { v } else { 0.0 };
    HourlyCashflow {
        timestamp: ctx.timestamp,
        on,
        electricity_mwh: flow.electricity_in,
        hydrogen_kg: flow.hydrogen_out,
        heat_mwh: flow.heat_to_grid,
        electricity_cost: zero_if_off(flow.electricity_in * energy_price),
        water_cost: zero_if_off(flow.water_in * prices.water_price),
        hydrogen_revenue: zero_if_off(flow.hydrogen_out * ctx.hydrogen_price),
        heat_revenue: zero_if_off(flow.heat_to_grid * ctx.heat_price),
        co2_t: zero_if_off(prices.emissions().co2(flow.electricity_in, source)),
    }
}

/// Hourly rows of one simulation, split into simulated years.
#[derive(Debug, Clone, Default)]
pub struct Ledger {
    pub rows: Vec<HourlyCashflow>,
    /// Row ranges of consecutive simulated years; the last may be partial.
    pub years: Vec<Range<usize>>,
}

impl Ledger {
    /// Rows covered by the first `n` simulated years.
    pub fn first_years(&self, n: usize) -> &[HourlyCashflow] {
        let end = self.years[..n.min(self.years.len())].last().map_or(0, |r| r.end);
        &self.rows[..end]
    }

    pub fn year(&self, i: usize) -> &[HourlyCashflow] {
        &self.rows[self.years[i].clone()]
    }

    /// Writes one CSV row per hour.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| Error::io("<ledger>", e))?;
        Ok(())
    }
}

/// Whether yearly profit subtracts O&M. CapEx is always excluded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfitDefinition {
    #[default]
    ExcludesOm,
    IncludesOm,
}

/// Levelized cost of hydrogen over `rows`, charging `years` of straight-line
/// CapEx and O&M.
pub fn lcoh(rows: &[HourlyCashflow], spec: &ElectrolyzerSpec, years: f64) -> Result<f64> {
    let kg: f64 = rows.iter().map(|r| r.hydrogen_kg).sum();
    if !(kg > 0.0) {
        return Err(Error::Undefined("no hydrogen produced".into()));
    }
    let variable: f64 = rows.iter().map(HourlyCashflow::net_variable_cost).sum();
    Ok((years * spec.annual_fixed_cost() + variable) / kg)
}

/// Operating profit over `rows`, EUR.
pub fn profit(rows: &[HourlyCashflow]) -> f64 {
    rows.iter().map(HourlyCashflow::profit).sum()
}

/// Years until cumulative profit first covers `capex`, interpolating
/// linearly inside the crossing year. Only the first `horizon` years count.
pub fn roi(yearly_profits: &[f64], capex: f64, horizon: usize) -> Option<f64> {
    let mut cumulative = 0.0;
    if capex <= 0.0 {
        return Some(0.0);
    }
    for (i, &p) in yearly_profits.iter().take(horizon).enumerate() {
        let next = cumulative + p;
        if next >= capex && p > 0.0 {
            return Some(i as f64 + (capex - cumulative) / p);
        }
        cumulative = next;
    }
    None
}

/// KPI row for one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KpiReport {
    /// EUR/kg; `None` when nothing was produced.
    pub lcoh: Option<f64>,
    pub avg_yearly_profit_keur: f64,
    pub avg_yearly_operation_hours: f64,
    /// t
    pub avg_yearly_hydrogen_t: f64,
    /// t
    pub avg_yearly_co2_t: f64,
    /// `None` means no payback within the horizon.
    pub roi_years: Option<f64>,
    /// Length of the averaging window in years.
    pub window_years: f64,
    /// Set when the run ended before the requested KPI window.
    pub partial_window: bool,
}

/// How to summarise a ledger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KpiWindow {
    pub kpi_years: usize,
    pub horizon_years: usize,
    pub profit: ProfitDefinition,
}

/// Yearly operating profits, EUR, one per simulated year.
pub fn yearly_profits(ledger: &Ledger, spec: &ElectrolyzerSpec, definition: ProfitDefinition) -> Vec<f64> {
    (0..ledger.years.len())
        .map(|i| {
            let rows = ledger.year(i);
            let om = match definition {
                ProfitDefinition::ExcludesOm => 0.0,
                ProfitDefinition::IncludesOm => {
                    spec.annual_om_cost() * year_fraction(rows.len())
                }
            };
            profit(rows) - om
        })
        .collect()
}

fn year_fraction(hours: usize) -> f64 {
    if hours >= 8760 {
        1.0
    } else {
        hours as f64 / HOURS_PER_YEAR
    }
}

/// Averages the first `kpi_years` of the ledger and searches RoI over the
/// whole horizon.
pub fn aggregate_kpis(ledger: &Ledger, spec: &ElectrolyzerSpec, window: KpiWindow) -> KpiReport {
    let n_years = window.kpi_years.min(ledger.years.len());
    let rows = ledger.first_years(n_years);
    let window_years: f64 = (0..n_years)
        .map(|i| year_fraction(ledger.years[i].len()))
        .sum();
    let partial_window = n_years < window.kpi_years
        || (0..n_years).any(|i| ledger.years[i].len() < 8760);

    let profits = yearly_profits(ledger, spec, window.profit);
    let per_year = |total: f64| if window_years > 0.0 { total / window_years } else { 0.0 };
    let hours = rows.iter().filter(|r| r.on).count() as f64;
    let kg: f64 = rows.iter().map(|r| r.hydrogen_kg).sum();
    let co2: f64 = rows.iter().map(|r| r.co2_t).sum();

    KpiReport {
        lcoh: lcoh(rows, spec, window_years).ok(),
        avg_yearly_profit_keur: per_year(profits.iter().take(n_years).sum()) / 1000.0,
        avg_yearly_operation_hours: per_year(hours),
        avg_yearly_hydrogen_t: per_year(kg) / 1000.0,
        avg_yearly_co2_t: per_year(co2),
        roi_years: roi(&profits, spec.capex_total, window.horizon_years),
        window_years,
        partial_window,
    }
}
