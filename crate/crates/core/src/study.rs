//! Experiments over loaded data: single runs, the full results matrix and
//! the price search.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::dispatch::{DispatchStrategy, HourCostInputs, StrategyKind};
use crate::error::{Error, Result};
use crate::market::synthetic::SyntheticSpec;
use crate::market::{load_hourly_series, ColumnSchema, HourlySeries};
use crate::optimizer::{minimize_lcoh, PriceSearchSpec, SearchResult};
use crate::report::{MatrixReport, MatrixRow, Provenance};
use crate::simulation::{ParkEconomics, Plant, RunParams, Scenario, SimulationOutcome};

/// One cell of the results matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub heat_sale: bool,
    /// EUR/kg
    pub hydrogen_price: f64,
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario, heat_sale: bool, hydrogen_price: f64) -> Self {
        Self {
            scenario,
            heat_sale,
            hydrogen_price,
        }
    }

    /// `1.1`, `1.2`, ... `3.2`; the second digit is 2 when heat is sold.
    pub fn experiment(&self) -> String {
        format!("{}.{}", self.scenario.number(), if self.heat_sale { 2 } else { 1 })
    }

    pub fn params(&self) -> RunParams {
        RunParams {
            scenario: self.scenario,
            heat_sale: self.heat_sale,
            hydrogen_price: self.hydrogen_price,
        }
    }

    /// The six experiments at each price, price-major.
    pub fn matrix(prices: &[f64]) -> Vec<ExperimentConfig> {
        prices
            .iter()
            .flat_map(|&p| {
                Scenario::ALL.into_iter().flat_map(move |s| {
                    [false, true].map(|heat| ExperimentConfig::new(s, heat, p))
                })
            })
            .collect()
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.experiment(), self.hydrogen_price)
    }
}

/// A configuration bound to its input series.
#[derive(Debug, Clone)]
pub struct Study {
    pub config: Config,
    market: Option<HourlySeries>,
    weather: Option<HourlySeries>,
    park: Option<ParkEconomics>,
}

impl Study {
    /// A price series with weather columns doubles as the weather series
    /// when none is given.
    pub fn new(
        config: Config,
        market: Option<HourlySeries>,
        weather: Option<HourlySeries>,
    ) -> Result<Self> {
        config.validate()?;
        let weather = weather.or_else(|| market.clone().filter(HourlySeries::has_weather));
        let park = match &weather {
            Some(w) if w.has_weather() => Some(ParkEconomics::from_weather(
                &config.park,
                &config.wind,
                &config.pv,
                w,
            )?),
            Some(_) => {
                return Err(Error::Data(
                    "weather series lacks wind speed or irradiance".into(),
                ))
            }
            None => None,
        };
        Ok(Self {
            config,
            market,
            weather,
            park,
        })
    }

    /// Loads the series named in `config.data`.
    pub fn load(config: Config) -> Result<Self> {
        let market = config
            .data
            .prices
            .as_ref()
            .map(|p| load_hourly_series(p, &ColumnSchema::default()))
            .transpose()?;
        let weather = config
            .data
            .weather
            .as_ref()
            .map(|p| load_hourly_series(p, &ColumnSchema::weather()))
            .transpose()?;
        Self::new(config, market, weather)
    }

    /// Four synthetic calendar years from 2015 with weather, for demos.
    pub fn synthetic(config: Config, seed: u64) -> Result<Self> {
        let series = synthetic_years(seed, 4);
        Self::new(config, Some(series), None)
    }

    pub fn market(&self) -> Option<&HourlySeries> {
        self.market.as_ref()
    }

    pub fn weather(&self) -> Option<&HourlySeries> {
        self.weather.as_ref()
    }

    pub fn park(&self) -> Option<&ParkEconomics> {
        self.park.as_ref()
    }

    pub fn plant(&self) -> Plant<'_> {
        Plant {
            spec: self.config.electrolyzer.clone(),
            prices: self.config.prices,
            heat: self.config.heat.clone(),
            market: self.market.as_ref(),
            weather: self.weather.as_ref(),
            park: self.park.clone(),
        }
    }

    pub fn strategy(&self, scenario: Scenario) -> Box<dyn DispatchStrategy> {
        let kind = match scenario {
            Scenario::GridConstant => StrategyKind::Constant,
            Scenario::GridFlexible => self.config.dispatch.flexible,
            Scenario::Renewable => StrategyKind::Renewable,
        };
        kind.build(
            &self.config.electrolyzer,
            HourCostInputs {
                grid_tariff: self.config.prices.grid_tariff,
                water_price: self.config.prices.water_price,
            },
        )
    }

    pub fn run(&self, experiment: &ExperimentConfig) -> Result<SimulationOutcome> {
        if experiment.scenario == Scenario::Renewable && self.park.is_none() {
            return Err(Error::Config(
                "scenario 3 needs weather data (wind speed and irradiance)".into(),
            ));
        }
        if experiment.scenario.uses_grid() && self.market.is_none() {
            return Err(Error::Config("grid scenarios need a spot price series".into()));
        }
        let strategy = self.strategy(experiment.scenario);
        self.plant()
            .simulate(strategy.as_ref(), experiment.params(), &self.config.simulation)
    }

    /// All cells, optionally restricted to one price. Rows keep their
    /// `A1..A24` labels, so a filtered matrix is a subset of the full one.
    pub fn run_matrix(&self, only_price: Option<f64>) -> Result<MatrixReport> {
        let cells: Vec<(usize, ExperimentConfig)> = ExperimentConfig::matrix(&self.config.matrix.prices)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| only_price.is_none_or(|p| (c.hydrogen_price - p).abs() < 1e-9))
            .collect();
        if cells.is_empty() {
            return Err(Error::Config(format!(
                "price {:?} is not in the configured matrix prices",
                only_price
            )));
        }
        let rows = cells
            .par_iter()
            .map(|(i, cell)| {
                let out = self.run(cell).map_err(|e| Error::Cell {
                    label: cell.to_string(),
                    source: Box::new(e),
                })?;
                Ok(MatrixRow {
                    alternative: format!("A{}", i + 1),
                    experiment: cell.experiment(),
                    hydrogen_price: cell.hydrogen_price,
                    kpis: out.kpis,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixReport {
            rows,
            provenance: Some(self.provenance()),
        })
    }

    /// Same as [`Study::run_matrix`] on a dedicated pool of `jobs` threads.
    pub fn run_matrix_with_jobs(&self, only_price: Option<f64>, jobs: usize) -> Result<MatrixReport> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| self.run_matrix(only_price))
    }

    pub fn optimize(&self, search: &PriceSearchSpec) -> Result<SearchResult> {
        if self.market.is_none() {
            return Err(Error::Config("the price search needs a spot price series".into()));
        }
        let strategy = self.strategy(Scenario::GridFlexible);
        minimize_lcoh(search, &self.plant(), strategy.as_ref(), &self.config.simulation)
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            prices_sha256: self.market.as_ref().map(series_digest),
            weather_sha256: self.weather.as_ref().map(series_digest),
            config_sha256: self.config.digest(),
            decisions: self.config.decisions(),
        }
    }
}

/// File digest when loaded from disk, else a digest of the CSV rendering.
pub fn series_digest(series: &HourlySeries) -> String {
    if let Some(d) = series.digest() {
        return d.to_string();
    }
    let mut buf = Vec::new();
    series.write_csv(&mut buf).expect("in-memory write");
    hex::encode(Sha256::digest(&buf))
}

/// `years` calendar years of synthetic prices and weather starting 2015.
pub fn synthetic_years(seed: u64, years: i32) -> HourlySeries {
    use chrono::{TimeZone, Utc};
    let start = Utc.with_ymd_and_hms(2015, 1, 1, 0, 0, 0).unwrap();
    let end = Utc.with_ymd_and_hms(2015 + years, 1, 1, 0, 0, 0).unwrap();
    SyntheticSpec {
        start,
        hours: (end - start).num_hours() as usize,
        seed,
        with_weather: true,
        ..SyntheticSpec::default()
    }
    .generate()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn study() -> Study {
        let mut config = Config::default();
        config.simulation.horizon_years = 4;
        Study::new(config, Some(synthetic_years(3, 1)), None).unwrap()
    }

    #[test]
    fn matrix_order_and_labels() {
        let cells = ExperimentConfig::matrix(&[1.5, 2.0, 2.7, 3.5]);
        assert_eq!(cells.len(), 24);
        assert_eq!(cells[0].to_string(), "1.1 (1.5)");
        assert_eq!(cells[5].to_string(), "3.2 (1.5)");
        assert_eq!(cells[23].to_string(), "3.2 (3.5)");
    }

    #[test]
    fn filtered_matrix_keeps_labels() {
        let r = study().run_matrix(Some(2.7)).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert_eq!(r.rows[0].alternative, "A13");
        assert_eq!(r.rows[5].alternative, "A18");
        assert!(study().run_matrix(Some(9.0)).is_err());
    }

    #[test]
    fn scenario_three_needs_weather() {
        let config = Config::default();
        let prices_only = crate::market::synthetic::SyntheticSpec::one_year(1).generate();
        let s = Study::new(config, Some(prices_only), None).unwrap();
        let err = s.run(&ExperimentConfig::new(Scenario::Renewable, false, 2.0)).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
        let err = s.run_matrix(None).unwrap_err();
        assert!(err.to_string().starts_with("experiment 3.1 (1.5)"), "{err}");
    }

    #[test]
    fn renewable_rows_emit_nothing() {
        let r = study().run_matrix(Some(3.5)).unwrap();
        for row in r.rows.iter().filter(|r| r.experiment.starts_with('3')) {
            assert_eq!(row.kpis.avg_yearly_co2_t, 0.0);
        }
    }
}
