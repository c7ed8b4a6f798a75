//! Seeded synthetic hourly series for demos and property tests.
//!
//! The shapes are loosely Nordic (winter-heavy prices, morning and evening
//! peaks, a 56.6°N solar geometry) but carry no claim of realism. Real runs
//! should load a historical day-ahead CSV instead.

use std::f64::consts::PI;

use chrono::{DateTime, Datelike, Duration, Timelike, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{HourlyRecord, HourlySeries};

#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub start: DateTime<Utc>,
    pub hours: usize,
    pub seed: u64,
    /// EUR/MWh
    pub mean_price: f64,
    /// Peak-to-mean amplitude of the winter/summer swing, EUR/MWh.
    pub seasonal_swing: f64,
    /// Amplitude of the intraday shape, EUR/MWh.
    pub daily_swing: f64,
    /// Stationary standard deviation of the AR(1) noise, EUR/MWh.
    pub noise_sd: f64,
    /// AR(1) coefficient of the noise, in [0, 1).
    pub persistence: f64,
    /// Probability per hour of a price spike.
    pub spike_probability: f64,
    pub with_weather: bool,
    /// m/s
    pub mean_wind: f64,
    pub latitude_deg: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            start: DateTime::parse_from_rfc3339("2015-01-01T00:00:00Z")
                .unwrap()
                .with_timezone(&Utc),
            hours: 8760,
            seed: 7,
            mean_price: 32.0,
            seasonal_swing: 6.0,
            daily_swing: 7.0,
            noise_sd: 9.0,
            persistence: 0.9,
            spike_probability: 0.002,
            with_weather: false,
            mean_wind: 3.9,
            latitude_deg: 56.6,
        }
    }
}

impl SyntheticSpec {
    pub fn one_year(seed: u64) -> Self {
        Self {
            seed,
            ..Default::default()
        }
    }

    /// Generates the series. Same spec, same output.
    pub fn generate(&self) -> HourlySeries {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let unit = Normal::new(0.0, 1.0).expect("unit normal");
        let innovation = self.noise_sd * (1.0 - self.persistence * self.persistence).sqrt();
        let mut noise = 0.0;
        let mut wind_state = 0.0;
        let mut cloud_state = 0.0;

        let records = (0..self.hours)
            .map(|h| {
                let t = self.start + Duration::hours(h as i64);
                let doy = t.ordinal() as f64;
                let hour = t.hour() as f64;

                noise = self.persistence * noise + innovation * unit.sample(&mut rng);
                let seasonal = self.seasonal_swing * (2.0 * PI * (doy - 15.0) / 365.25).cos();
                let daily = self.daily_swing
                    * (0.6 * (-(hour - 8.0).powi(2) / 4.0).exp()
                        + (-(hour - 18.0).powi(2) / 5.0).exp()
                        - 0.45);
                let spike = if rng.random::<f64>() < self.spike_probability {
                    rng.random_range(50.0..250.0)
                } else {
                    0.0
                };
                let price = self.mean_price + seasonal + daily + noise + spike;
                let price = (price * 100.0).round() / 100.0;

                let mut rec = HourlyRecord::new(t, price);
                if self.with_weather {
                    wind_state = 0.95 * wind_state + 0.312 * unit.sample(&mut rng);
                    let wind = self.mean_wind * (0.55 * wind_state - 0.151).exp();
                    cloud_state = 0.9 * cloud_state + 0.436 * unit.sample(&mut rng);
                    let clearness = 1.0 / (1.0 + (-1.2 * cloud_state).exp());
                    let irr = clear_sky(self.latitude_deg, doy, hour) * (0.15 + 0.85 * clearness);
                    rec = rec.with_weather((wind * 100.0).round() / 100.0, irr.round());
                }
                rec
            })
            .collect();
        HourlySeries::from_records(records).expect("synthetic records are valid")
    }
}

/// Clear-sky global horizontal irradiance in W/m².
fn clear_sky(latitude_deg: f64, day_of_year: f64, solar_hour: f64) -> f64 {
    let lat = latitude_deg.to_radians();
    let decl = (23.44f64).to_radians() * (2.0 * PI * (284.0 + day_of_year) / 365.0).sin();
    let hour_angle = (15.0 * (solar_hour + 0.5 - 12.0)).to_radians();
    let sin_elev = lat.sin() * decl.sin() + lat.cos() * decl.cos() * hour_angle.cos();
    if sin_elev <= 0.0 {
        0.0
    } else {
        // Haurwitz
        1098.0 * sin_elev * (-0.057 / sin_elev).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_by_seed() {
        let a = SyntheticSpec::one_year(3).generate();
        let b = SyntheticSpec::one_year(3).generate();
        let c = SyntheticSpec::one_year(4).generate();
        assert_eq!(a.records(), b.records());
        assert_ne!(a.records(), c.records());
        assert_eq!(a.len(), 8760);
    }

    #[test]
    fn weather_is_physical() {
        let s = SyntheticSpec {
            with_weather: true,
            ..Default::default()
        }
        .generate();
        assert!(s.has_weather());
        let n = s.len() as f64;
        let mean_wind: f64 = s.records().iter().map(|r| r.wind_speed.unwrap()).sum::<f64>() / n;
        let mean_irr: f64 = s.records().iter().map(|r| r.irradiance.unwrap()).sum::<f64>() / n;
        assert!(mean_wind > 2.0 && mean_wind < 7.0, "{mean_wind}");
        assert!(mean_irr > 60.0 && mean_irr < 200.0, "{mean_irr}");
        assert!(s.records().iter().all(|r| r.irradiance.unwrap() <= 1100.0));
    }
}
