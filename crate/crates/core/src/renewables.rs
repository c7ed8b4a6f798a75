//! Onsite wind and PV park: hourly output from weather, and the park's
//! levelized cost of electricity from discounted cash flows.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::electrolyzer::HOURS_PER_YEAR;
use crate::error::{Error, Result};
use crate::market::{HourlyRecord, HourlySeries};

const DEFAULT_CURVE_CSV: &str = include_str!("../data/power_curve_v136.csv");

/// Normalized turbine power curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCurve {
    /// (wind speed m/s, fraction of rated power), speeds strictly increasing.
    points: Vec<(f64, f64)>,
    cut_out_speed: f64,
}

impl PowerCurve {
    pub fn new(points: Vec<(f64, f64)>, cut_out_speed: f64) -> Result<Self> {
        let bad = |m: String| Err(Error::Config(format!("power curve: {m}")));
        if points.is_empty() {
            return bad("no points".into());
        }
        let mut reached_rated = false;
        for (i, &(v, p)) in points.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) || !v.is_finite() || v < 0.0 {
                return bad(format!("point {i} ({v}, {p}) out of range"));
            }
            if i > 0 && v <= points[i - 1].0 {
                return bad(format!("speeds not strictly increasing at point {i}"));
            }
            if reached_rated && p < 1.0 {
                return bad(format!("fraction drops below 1.0 after rated speed at point {i}"));
            }
            reached_rated |= p >= 1.0;
        }
        if cut_out_speed < points[points.len() - 1].0 {
            return bad(format!("cut-out {cut_out_speed} m/s precedes the last curve point"));
        }
        Ok(Self {
            points,
            cut_out_speed,
        })
    }

    /// Reads `wind_speed_ms,power_fraction` rows. The last speed is the cut-out speed.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut points = Vec::new();
        for row in rdr.deserialize::<(f64, f64)>() {
            points.push(row?);
        }
        let cut_out = points.last().map(|p| p.0).unwrap_or(0.0);
        Self::new(points, cut_out)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(file)
    }

    pub fn cut_in_speed(&self) -> f64 {
        self.points[0].0
    }

    pub fn cut_out_speed(&self) -> f64 {
        self.cut_out_speed
    }

    /// Lowest speed at which the curve reaches full output.
    pub fn rated_speed(&self) -> Option<f64> {
        self.points.iter().find(|p| p.1 >= 1.0).map(|p| p.0)
    }

    /// Fraction of rated power at `wind_speed`.
    pub fn fraction(&self, wind_speed: f64) -> f64 {
        if wind_speed < self.cut_in_speed() || wind_speed >= self.cut_out_speed {
            return 0.0;
        }
        let idx = self.points.partition_point(|p| p.0 <= wind_speed);
        if idx >= self.points.len() {
            return self.points[self.points.len() - 1].1;
        }
        let (v0, p0) = self.points[idx - 1];
        let (v1, p1) = self.points[idx];
        p0 + (p1 - p0) * (wind_speed - v0) / (v1 - v0)
    }
}

impl Default for PowerCurve {
    fn default() -> Self {
        Self::from_csv(DEFAULT_CURVE_CSV.as_bytes()).expect("bundled power curve is valid")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindTurbineSpec {
    /// MW
    pub rated_power: f64,
    pub curve: PowerCurve,
}

impl WindTurbineSpec {
    /// MW at `wind_speed` m/s.
    pub fn wind_power(&self, wind_speed: f64) -> f64 {
        self.rated_power * self.curve.fraction(wind_speed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvSpec {
    /// MW
    pub rated_power: f64,
    /// W/m² at which output reaches rated power.
    pub reference_irradiance: f64,
}

impl PvSpec {
    pub fn new(rated_power: f64) -> Self {
        Self {
            rated_power,
            reference_irradiance: 1000.0,
        }
    }

    /// MW at `irradiance` W/m²; linear, no temperature derating.
    pub fn pv_power(&self, irradiance: f64) -> f64 {
        self.rated_power * (irradiance / self.reference_irradiance).clamp(0.0, 1.0)
    }
}

/// Park capacities in MW.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParkSpec {
    pub wind_capacity: f64,
    pub pv_capacity: f64,
    /// Optional power-curve CSV; the bundled curve is used when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_curve: Option<std::path::PathBuf>,
}

impl Default for ParkSpec {
    fn default() -> Self {
        Self {
            wind_capacity: 40.0,
            pv_capacity: 40.0,
            power_curve: None,
        }
    }
}

impl ParkSpec {
    pub fn total(&self) -> f64 {
        self.wind_capacity + self.pv_capacity
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wind_capacity >= 0.0 && self.pv_capacity >= 0.0) {
            return Err(Error::Config("park capacities must be non-negative".into()));
        }
        Ok(())
    }

    /// Resolved generator models for this park.
    pub fn generators(&self) -> Result<Park> {
        let curve = match &self.power_curve {
            Some(p) => PowerCurve::load(p)?,
            None => PowerCurve::default(),
        };
        Ok(Park {
            wind: WindTurbineSpec {
                rated_power: self.wind_capacity,
                curve,
            },
            pv: PvSpec::new(self.pv_capacity),
        })
    }
}

/// Wind and PV generators sized to a [`ParkSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Park {
    pub wind: WindTurbineSpec,
    pub pv: PvSpec,
}

impl Park {
    pub fn capacity(&self) -> f64 {
        self.wind.rated_power + self.pv.rated_power
    }

    /// (wind, PV) energy in MWh for one hour.
    pub fn split_output(&self, record: &HourlyRecord) -> Result<(f64, f64)> {
        match (record.wind_speed, record.irradiance) {
            (Some(w), Some(g)) => Ok((self.wind.wind_power(w), self.pv.pv_power(g))),
            _ => Err(Error::Data(format!(
                "record at {} lacks wind speed or irradiance",
                record.timestamp
            ))),
        }
    }

    /// Park energy in MWh for one hour.
    pub fn park_output(&self, record: &HourlyRecord) -> Result<f64> {
        self.split_output(record).map(|(w, p)| w + p)
    }

    /// Mean yearly (wind, PV) energy in MWh over the series window. Gap hours
    /// count as zero output.
    pub fn annual_energy(&self, series: &HourlySeries) -> Result<(f64, f64)> {
        let (mut wind, mut pv) = (0.0, 0.0);
        for r in series.records() {
            let (w, p) = self.split_output(r)?;
            wind += w;
            pv += p;
        }
        let years = series.coverage().span_hours() as f64 / HOURS_PER_YEAR;
        Ok((wind / years, pv / years))
    }
}

/// Component replacement during the asset life.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Replacement {
    /// EUR/kW
    pub cost_per_kw: f64,
    /// Years between replacements.
    pub interval_years: f64,
}

/// Cost data for one generation technology.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenewableFinancials {
    /// EUR/kW
    pub capex_per_kw: f64,
    /// EUR/kWh
    pub variable_om: f64,
    /// EUR/kW/year
    pub fixed_om: f64,
    /// Fraction per year.
    pub discount_rate: f64,
    /// Years
    pub lifetime: u32,
    #[serde(default)]
    pub replacement: Option<Replacement>,
}

impl RenewableFinancials {
    /// Large on-shore wind turbines.
    pub fn onshore_wind() -> Self {
        Self {
            capex_per_kw: 1126.0,
            variable_om: 0.0015,
            fixed_om: 14.1,
            discount_rate: 0.035,
            lifetime: 27,
            replacement: None,
        }
    }

    /// Utility-scale ground-mounted PV, with inverter replacement.
    pub fn utility_pv() -> Self {
        Self {
            capex_per_kw: 452.4,
            variable_om: 0.0,
            fixed_om: 9.0,
            discount_rate: 0.035,
            lifetime: 35,
            replacement: Some(Replacement {
                cost_per_kw: 20.1,
                interval_years: 12.5,
            }),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.discount_rate >= 0.0) || self.lifetime == 0 {
            return Err(Error::Config(
                "renewable financials need discount_rate >= 0 and lifetime > 0".into(),
            ));
        }
        if let Some(r) = self.replacement {
            if !(r.interval_years > 0.0) {
                return Err(Error::Config("replacement interval must be positive".into()));
            }
        }
        Ok(())
    }

    /// Years (1-based) in which the replacement cost falls: the first whole
    /// year after each elapsed interval, strictly before end of life.
    pub fn replacement_years(&self) -> Vec<u32> {
        let Some(r) = self.replacement else {
            return Vec::new();
        };
        (1..)
            .map(|k| (k as f64 * r.interval_years).floor() as u32 + 1)
            .take_while(|&y| y < self.lifetime)
            .collect()
    }

    /// Discounted lifetime cost over discounted lifetime energy, EUR/MWh.
    ///
    /// `capacity` in MW, `annual_energy` in MWh per year.
    pub fn lcoe(&self, capacity: f64, annual_energy: f64) -> Result<f64> {
        if !(annual_energy > 0.0) {
            return Err(Error::Undefined(format!(
                "LCoE needs positive annual energy, got {annual_energy}"
            )));
        }
        let kw = capacity * 1000.0;
        let replacements = self.replacement_years();
        let mut cost = self.capex_per_kw * kw;
        let mut energy = 0.0;
        let mut discount = 1.0;
        for year in 1..=self.lifetime {
            discount /= 1.0 + self.discount_rate;
            let mut yearly = self.fixed_om * kw + self.variable_om * annual_energy * 1000.0;
            if replacements.contains(&year) {
                yearly += self.replacement.map_or(0.0, |r| r.cost_per_kw * kw);
            }
            cost += yearly * discount;
            energy += annual_energy * discount;
        }
        Ok(cost / energy)
    }
}

/// Energy-weighted LCoE of a wind + PV park, EUR/MWh.
pub fn park_lcoe(
    park: &ParkSpec,
    wind: &RenewableFinancials,
    pv: &RenewableFinancials,
    wind_energy: f64,
    pv_energy: f64,
) -> Result<f64> {
    let mut cost = 0.0;
    let mut energy = 0.0;
    if park.wind_capacity > 0.0 && wind_energy > 0.0 {
        cost += wind.lcoe(park.wind_capacity, wind_energy)? * wind_energy;
        energy += wind_energy;
    }
    if park.pv_capacity > 0.0 && pv_energy > 0.0 {
        cost += pv.lcoe(park.pv_capacity, pv_energy)? * pv_energy;
        energy += pv_energy;
    }
    if energy <= 0.0 {
        return Err(Error::Undefined("renewable park produces no energy".into()));
    }
    Ok(cost / energy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use chrono::{TimeZone, Utc};
    use proptest::prelude::*;

    fn park() -> Park {
        ParkSpec::default().generators().unwrap()
    }

    fn record(wind: f64, irr: f64) -> HourlyRecord {
        HourlyRecord::new(Utc.with_ymd_and_hms(2015, 6, 1, 12, 0, 0).unwrap(), 30.0)
            .with_weather(wind, irr)
    }

    #[test]
    fn bundled_curve_shape() {
        let c = PowerCurve::default();
        assert_eq!(c.cut_in_speed(), 3.0);
        assert_eq!(c.rated_speed(), Some(13.0));
        assert_eq!(c.cut_out_speed(), 25.0);
    }

    #[test]
    fn wind_power_points() {
        let t = WindTurbineSpec {
            rated_power: 4.2,
            curve: PowerCurve::default(),
        };
        assert_eq!(t.wind_power(13.0), 4.2);
        assert_eq!(t.wind_power(20.0), 4.2);
        assert_eq!(t.wind_power(0.0), 0.0);
        assert_eq!(t.wind_power(2.99), 0.0);
        assert_eq!(t.wind_power(25.0), 0.0);
        assert_eq!(t.wind_power(26.0), 0.0);
        assert_relative_eq!(t.wind_power(7.5), 4.2 * 0.485, epsilon = 1e-12);
    }

    #[test]
    fn pv_power_points() {
        let pv = PvSpec::new(40.0);
        assert_eq!(pv.pv_power(1000.0), 40.0);
        assert_eq!(pv.pv_power(0.0), 0.0);
        assert_eq!(pv.pv_power(500.0), 20.0);
        assert_eq!(pv.pv_power(1200.0), 40.0);
    }

    #[test]
    fn park_output_points() {
        let p = park();
        assert_eq!(p.park_output(&record(13.0, 1000.0)).unwrap(), 80.0);
        assert_eq!(p.park_output(&record(0.0, 0.0)).unwrap(), 0.0);
        let avg = p.park_output(&record(3.9, 116.68)).unwrap();
        assert!(avg > 0.0 && avg < 12.0, "{avg}");
        let no_weather = HourlyRecord::new(Utc.with_ymd_and_hms(2015, 1, 1, 0, 0, 0).unwrap(), 1.0);
        assert!(matches!(p.park_output(&no_weather), Err(Error::Data(_))));
    }

    #[test]
    fn curve_validation() {
        assert!(PowerCurve::new(vec![(3.0, 0.1), (2.0, 0.2)], 25.0).is_err());
        assert!(PowerCurve::new(vec![(3.0, 1.1)], 25.0).is_err());
        assert!(PowerCurve::new(vec![(3.0, 1.0), (4.0, 0.5)], 25.0).is_err());
        assert!(PowerCurve::from_csv("wind_speed_ms,power_fraction\n3,0\n13,1\n25,1\n".as_bytes()).is_ok());
    }

    #[test]
    fn inverter_replacement_years() {
        assert_eq!(RenewableFinancials::utility_pv().replacement_years(), vec![13, 26]);
        assert!(RenewableFinancials::onshore_wind().replacement_years().is_empty());
    }

    #[test]
    fn degenerate_lcoe_is_capex_over_lifetime_energy() {
        let f = RenewableFinancials {
            capex_per_kw: 1000.0,
            variable_om: 0.0,
            fixed_om: 0.0,
            discount_rate: 0.0,
            lifetime: 20,
            replacement: None,
        };
        // C = 1e6 EUR for 1 MW, L = 20 y, E = 1000 MWh/y
        assert_relative_eq!(f.lcoe(1.0, 1000.0).unwrap(), 50.0, epsilon = 1e-12);
        assert!(matches!(f.lcoe(1.0, 0.0), Err(Error::Undefined(_))));
    }

    // Frozen from a closed-form annuity spreadsheet: A = Σ (1+r)^-t,
    // LCoE = (capex + fixed·A + var·E·A + Σ repl·(1+r)^-y) / (E·A), per MW.
    #[test]
    fn lcoe_matches_annuity_oracle() {
        let pv = RenewableFinancials::utility_pv().lcoe(1.0, 0.12 * 8760.0).unwrap();
        assert!((pv - 31.081336127358284).abs() / 31.081336127358284 < 1e-3, "{pv}");
        let wind = RenewableFinancials::onshore_wind().lcoe(1.0, 0.35 * 8760.0).unwrap();
        assert!((wind - 27.34534051763135).abs() / 27.34534051763135 < 1e-3, "{wind}");
    }

    #[test]
    fn park_lcoe_is_energy_weighted() {
        let spec = ParkSpec::default();
        let w = RenewableFinancials::onshore_wind();
        let p = RenewableFinancials::utility_pv();
        let lw = w.lcoe(40.0, 90_000.0).unwrap();
        let lp = p.lcoe(40.0, 40_000.0).unwrap();
        let mixed = park_lcoe(&spec, &w, &p, 90_000.0, 40_000.0).unwrap();
        assert_relative_eq!(mixed, (lw * 9.0 + lp * 4.0) / 13.0, epsilon = 1e-9);
        assert!(park_lcoe(&spec, &w, &p, 0.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn output_bounded_and_monotone(w1 in 0.0f64..13.0, w2 in 0.0f64..13.0, g1 in 0.0f64..1000.0, g2 in 0.0f64..1000.0, w_any in 0.0f64..40.0, g_any in 0.0f64..1500.0) {
            let p = park();
            let (lo_w, hi_w) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
            let (lo_g, hi_g) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
            prop_assert!(p.park_output(&record(lo_w, lo_g)).unwrap() <= p.park_output(&record(hi_w, lo_g)).unwrap() + 1e-12);
            prop_assert!(p.park_output(&record(lo_w, lo_g)).unwrap() <= p.park_output(&record(lo_w, hi_g)).unwrap() + 1e-12);
            let out = p.park_output(&record(w_any, g_any)).unwrap();
            prop_assert!((0.0..=p.capacity() + 1e-12).contains(&out));
        }

        #[test]
        fn lcoe_monotone(e1 in 100.0f64..1e5, e2 in 100.0f64..1e5, c1 in 100.0f64..2000.0, c2 in 100.0f64..2000.0) {
            prop_assume!((e1 - e2).abs() > 1e-6 && (c1 - c2).abs() > 1e-6);
            let f = RenewableFinancials::onshore_wind();
            let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
            prop_assert!(f.lcoe(1.0, hi).unwrap() < f.lcoe(1.0, lo).unwrap());
            let (clo, chi) = if c1 < c2 { (c1, c2) } else { (c2, c1) };
            let a = RenewableFinancials { capex_per_kw: clo, ..f };
            let b = RenewableFinancials { capex_per_kw: chi, ..f };
            prop_assert!(a.lcoe(1.0, e1).unwrap() < b.lcoe(1.0, e1).unwrap());
        }
    }
}
