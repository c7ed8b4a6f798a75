//! TOML configuration. Every case-study constant has a default here, so an
//! empty file reproduces the reference plant.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dispatch::StrategyKind;
use crate::economics::PriceModel;
use crate::electrolyzer::ElectrolyzerSpec;
use crate::error::{Error, Result};
use crate::market::HeatPriceSchedule;
use crate::mcdm::RankingConfig;
use crate::optimizer::PriceSearchSpec;
use crate::renewables::{ParkSpec, RenewableFinancials};
use crate::simulation::SimulationSettings;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DataPaths {
    /// Hourly spot prices, optionally with weather columns.
    pub prices: Option<PathBuf>,
    /// Hourly wind speed and irradiance.
    pub weather: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DispatchConfig {
    /// Strategy used by the flexible grid scenario.
    pub flexible: StrategyKind,
}

impl Default for DispatchConfig {
    fn default() -> Self {
        Self {
            flexible: StrategyKind::Flexible,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MatrixConfig {
    /// Hydrogen prices, EUR/kg, in column order of the matrix.
    pub prices: Vec<f64>,
}

impl Default for MatrixConfig {
    fn default() -> Self {
        Self {
            prices: vec![1.5, 2.0, 2.7, 3.5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub data: DataPaths,
    pub electrolyzer: ElectrolyzerSpec,
    pub prices: PriceModel,
    pub heat: HeatPriceSchedule,
    pub park: ParkSpec,
    pub wind: RenewableFinancials,
    pub pv: RenewableFinancials,
    pub dispatch: DispatchConfig,
    pub simulation: SimulationSettings,
    pub matrix: MatrixConfig,
    pub optimizer: PriceSearchSpec,
    pub mcdm: RankingConfig,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            data: DataPaths::default(),
            electrolyzer: ElectrolyzerSpec::default(),
            prices: PriceModel::default(),
            heat: HeatPriceSchedule::default(),
            park: ParkSpec::default(),
            wind: RenewableFinancials::onshore_wind(),
            pv: RenewableFinancials::utility_pv(),
            dispatch: DispatchConfig::default(),
            simulation: SimulationSettings::default(),
            matrix: MatrixConfig::default(),
            optimizer: PriceSearchSpec::default(),
            mcdm: RankingConfig::default(),
        }
    }
}

impl Config {
    /// Parses and validates a config file. Relative data paths resolve
    /// against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut config.data.prices, &mut config.data.weather] {
            if let Some(rel) = p.as_ref().filter(|p| p.is_relative()) {
                *p = Some(base.join(rel));
            }
        }
        Ok(config)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.electrolyzer.validate()?;
        self.prices.validate()?;
        self.heat.validate()?;
        self.park.validate()?;
        self.wind.validate()?;
        self.pv.validate()?;
        self.simulation.validate()?;
        self.optimizer.validate()?;
        if self.matrix.prices.is_empty() || self.matrix.prices.iter().any(|p| !(*p > 0.0)) {
            return Err(Error::Config("matrix prices must be positive".into()));
        }
        Ok(())
    }

    /// SHA-256 of the canonical serialized config, data paths excluded.
    pub fn digest(&self) -> String {
        let mut canonical = self.clone();
        canonical.data = DataPaths::default();
        hex::encode(Sha256::digest(canonical.to_toml().as_bytes()))
    }

    /// Parameter choices that a reader needs to audit results.
    pub fn decisions(&self) -> BTreeMap<String, String> {
        let e = &self.electrolyzer;
        let mut d = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            d.insert(k.to_string(), v);
        };
        put("capex_total_eur", format!("{}", e.capex_total));
        put("capex_per_mw_eur", format!("{}", e.capex_total / e.capacity));
        put("grid_emission_factor_t_per_mwh", format!("{}", self.prices.grid_factor));
        put("grid_tariff_eur_per_mwh", format!("{}", self.prices.grid_tariff));
        put("tariff_on_park_power", format!("{}", self.prices.tariff_on_park));
        put(
            "heat_prices_eur_per_mwh",
            format!(
                "summer {} / winter {} / cap {}",
                self.heat.summer_price, self.heat.winter_price, self.heat.price_cap
            ),
        );
        put("winter_months", format!("{:?}", self.heat.winter_months));
        put("heat_exchanger_efficiency", format!("{}", e.heat_exchanger_efficiency));
        put(
            "park_mw",
            format!("wind {} / pv {}", self.park.wind_capacity, self.park.pv_capacity),
        );
        put("fixed_cost_hours_per_year", "8766".into());
        put("flexible_strategy", self.dispatch.flexible.to_string());
        put("state_memory", format!("{:?}", self.simulation.memory));
        put("profit_definition", format!("{:?}", self.simulation.profit));
        put("kpi_years", self.simulation.kpi_years.to_string());
        put("horizon_years", self.simulation.horizon_years.to_string());
        put("sim_start", self.simulation.sim_start.format("%Y-%m-%d").to_string());
        d
    }
}
