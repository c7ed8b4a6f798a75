//! Hourly market and weather inputs.
//!
//! A [`HourlySeries`] is an immutable, hour-aligned window of historical
//! observations. Missing hours are kept as gaps and surfaced to callers,
//! never filled. Simulations longer than the window replay it in a loop via
//! [`HourlySeries::looped_lookup`].

mod load;
pub mod synthetic;

use chrono::{DateTime, Datelike, Duration, Timelike, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use load::{load_hourly_series, parse_timestamp, read_hourly_series, ColumnSchema};

/// One hour of market and weather observations.
#[derive(Debug, Clone, PartialEq)]
pub struct HourlyRecord {
    pub timestamp: DateTime<Utc>,
    /// EUR/MWh; negative prices are legal.
    pub spot_price: f64,
    /// m/s
    pub wind_speed: Option<f64>,
    /// W/m²
    pub irradiance: Option<f64>,
}

impl HourlyRecord {
    pub fn new(timestamp: DateTime<Utc>, spot_price: f64) -> Self {
        Self {
            timestamp,
            spot_price,
            wind_speed: None,
            irradiance: None,
        }
    }

    pub fn with_weather(mut self, wind_speed: f64, irradiance: f64) -> Self {
        self.wind_speed = Some(wind_speed);
        self.irradiance = Some(irradiance);
        self
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !is_hour_aligned(self.timestamp) {
            return Err(format!("timestamp {} is not on the hour", self.timestamp));
        }
        if !self.spot_price.is_finite() {
            return Err("spot price is not finite".into());
        }
        for (name, value) in [
            ("wind speed", self.wind_speed),
            ("irradiance", self.irradiance),
        ] {
            if let Some(v) = value {
                if !v.is_finite() || v < 0.0 {
                    return Err(format!("{name} {v} must be finite and non-negative"));
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn is_hour_aligned(ts: DateTime<Utc>) -> bool {
    ts.minute() == 0 && ts.second() == 0 && ts.nanosecond() == 0
}

/// First/last timestamp and the number of missing hours in between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Coverage {
    pub first: DateTime<Utc>,
    pub last: DateTime<Utc>,
    pub count: usize,
    pub gap_hours: usize,
}

impl Coverage {
    /// Hours from `first` to `last` inclusive, gaps included.
    pub fn span_hours(&self) -> usize {
        self.count + self.gap_hours
    }
}

/// Validated, strictly increasing hourly observations.
#[derive(Debug, Clone)]
pub struct HourlySeries {
    records: Vec<HourlyRecord>,
    coverage: Coverage,
    /// Dense map from hour offset (since `coverage.first`) to record index.
    slots: Vec<Option<u32>>,
    digest: Option<String>,
}

impl HourlySeries {
    /// Builds a series from records already in time order.
    pub fn from_records(records: Vec<HourlyRecord>) -> Result<Self> {
        let first = records
            .first()
            .ok_or_else(|| Error::Data("hourly series has no records".into()))?
            .timestamp;
        let mut prev: Option<DateTime<Utc>> = None;
        for (i, rec) in records.iter().enumerate() {
            rec.validate()
                .map_err(|m| Error::Data(format!("record {i}: {m}")))?;
            if let Some(p) = prev {
                if rec.timestamp <= p {
                    return Err(Error::Data(format!(
                        "record {i}: timestamp {} does not follow {}",
                        rec.timestamp, p
                    )));
                }
            }
            prev = Some(rec.timestamp);
        }
        let last = records.last().map(|r| r.timestamp).unwrap_or(first);
        let span = ((last - first).num_hours() + 1) as usize;
        let mut slots = vec![None; span];
        for (i, rec) in records.iter().enumerate() {
            let offset = (rec.timestamp - first).num_hours() as usize;
            slots[offset] = Some(i as u32);
        }
        let coverage = Coverage {
            first,
            last,
            count: records.len(),
            gap_hours: span - records.len(),
        };
        Ok(Self {
            records,
            coverage,
            slots,
            digest: None,
        })
    }

    pub(crate) fn with_digest(mut self, digest: String) -> Self {
        self.digest = Some(digest);
        self
    }

    pub fn records(&self) -> &[HourlyRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn coverage(&self) -> Coverage {
        self.coverage
    }

    /// SHA-256 of the source file, when the series was loaded from disk.
    pub fn digest(&self) -> Option<&str> {
        self.digest.as_deref()
    }

    /// Timestamps of the missing hours, in order.
    pub fn gaps(&self) -> Vec<DateTime<Utc>> {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(offset, _)| self.coverage.first + Duration::hours(offset as i64))
            .collect()
    }

    pub fn has_weather(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.wind_speed.is_some() && r.irradiance.is_some())
    }

    /// Record that the simulation replays at `sim_time`.
    ///
    /// The window is mapped onto simulated time starting at `sim_start` and
    /// repeats with a period of [`Coverage::span_hours`]. Returns `Ok(None)`
    /// when the replayed hour is a gap.
    pub fn looped_lookup(
        &self,
        sim_time: DateTime<Utc>,
        sim_start: DateTime<Utc>,
    ) -> Result<Option<&HourlyRecord>> {
        if sim_time < sim_start {
            return Err(Error::Domain(format!(
                "simulation time {sim_time} precedes start {sim_start}"
            )));
        }
        let elapsed = (sim_time - sim_start).num_hours() as usize;
        Ok(self.at_offset(elapsed))
    }

    /// Record at `elapsed` hours into the looped window.
    pub fn at_offset(&self, elapsed: usize) -> Option<&HourlyRecord> {
        let slot = self.slots[elapsed % self.slots.len()];
        slot.map(|i| &self.records[i as usize])
    }

    /// Writes the series in the input CSV layout.
    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let with_weather = self
            .records
            .iter()
            .any(|r| r.wind_speed.is_some() || r.irradiance.is_some());
        let mut w = csv::Writer::from_writer(writer);
        if with_weather {
            w.write_record(["timestamp", "spot_price_eur_mwh", "wind_speed_ms", "irradiance_wm2"])?;
        } else {
            w.write_record(["timestamp", "spot_price_eur_mwh"])?;
        }
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            let ts = r.timestamp.format("%Y-%m-%dT%H:%M:%SZ").to_string();
            if with_weather {
                w.write_record([
                    ts,
                    r.spot_price.to_string(),
                    opt(r.wind_speed),
                    opt(r.irradiance),
                ])?;
            } else {
                w.write_record([ts, r.spot_price.to_string()])?;
            }
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }
}

/// Constant per-MWh transmission charge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TariffSchedule {
    /// EUR/MWh
    pub grid_tariff: f64,
}

impl Default for TariffSchedule {
    fn default() -> Self {
        Self { grid_tariff: 13.4 }
    }
}

impl TariffSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.grid_tariff >= 0.0) {
            return Err(Error::Config(format!(
                "grid tariff {} must be non-negative",
                self.grid_tariff
            )));
        }
        Ok(())
    }
}

/// Seasonal district-heating price with a regulatory cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HeatPriceSchedule {
    /// EUR/MWh_th
    pub summer_price: f64,
    /// EUR/MWh_th
    pub winter_price: f64,
    /// EUR/MWh_th
    pub price_cap: f64,
    /// Calendar months (1-12) billed at the winter price.
    pub winter_months: Vec<u32>,
}

impl Default for HeatPriceSchedule {
    fn default() -> Self {
        Self {
            summer_price: 20.1,
            winter_price: 26.8,
            price_cap: 44.9,
            winter_months: vec![1, 2, 3, 10, 11, 12],
        }
    }
}

impl HeatPriceSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.summer_price >= 0.0 && self.winter_price >= 0.0 && self.price_cap >= 0.0) {
            return Err(Error::Config("heat prices must be non-negative".into()));
        }
        if let Some(m) = self.winter_months.iter().find(|m| !(1..=12).contains(*m)) {
            return Err(Error::Config(format!("winter month {m} is not in 1..=12")));
        }
        Ok(())
    }

    pub fn is_winter(&self, timestamp: DateTime<Utc>) -> bool {
        self.winter_months.contains(&timestamp.month())
    }

    /// Seasonal price for the hour, clipped to the cap.
    pub fn heat_price(&self, timestamp: DateTime<Utc>) -> f64 {
        let seasonal = if self.is_winter(timestamp) {
            self.winter_price
        } else {
            self.summer_price
        };
        seasonal.min(self.price_cap)
    }
}
