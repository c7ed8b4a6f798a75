//! Search for the fixed hydrogen price that minimizes LCoH under flexible
//! dispatch.
//!
//! The default search sweeps a coarse grid, then refines around the best
//! grid point with golden-section search. Every candidate is a full
//! simulation, so candidates on the grid are evaluated in parallel.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dispatch::DispatchStrategy;
use crate::error::{Error, Result};
use crate::simulation::{Plant, RunParams, Scenario, SimulationSettings};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    /// Coarse grid then golden-section refinement.
    GridGolden,
    /// Random-restart hill climb on the resolution lattice, for cross-checks.
    HillClimb { restarts: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PriceSearchSpec {
    /// EUR/kg
    pub price_lower: f64,
    /// EUR/kg
    pub price_upper: f64,
    /// EUR/kg
    pub resolution: f64,
    pub heat_sale: bool,
    pub method: SearchMethod,
}

impl Default for PriceSearchSpec {
    fn default() -> Self {
        Self {
            price_lower: 1.0,
            price_upper: 6.0,
            resolution: 0.05,
            heat_sale: false,
            method: SearchMethod::GridGolden,
        }
    }
}

impl PriceSearchSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.price_lower > 0.0 && self.price_lower < self.price_upper) {
            return Err(Error::Config(format!(
                "price bounds must satisfy 0 < lower < upper, got [{}, {}]",
                self.price_lower, self.price_upper
            )));
        }
        if !(self.resolution > 0.0) {
            return Err(Error::Config("resolution must be positive".into()));
        }
        Ok(())
    }

    /// Evenly spaced prices from lower to upper, `resolution` apart; the
    /// last step may be shorter.
    pub fn grid(&self) -> Vec<f64> {
        let steps = ((self.price_upper - self.price_lower) / self.resolution - 1e-9).ceil() as usize;
        (0..=steps)
            .map(|k| (self.price_lower + k as f64 * self.resolution).min(self.price_upper))
            .collect()
    }
}

/// One evaluated candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    /// EUR/kg
    pub price: f64,
    /// EUR/kg; `None` when nothing was produced.
    pub lcoh: Option<f64>,
    pub yearly_hours: f64,
    pub yearly_tons: f64,
}

impl TracePoint {
    fn objective(&self) -> f64 {
        self.lcoh.unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub optimal_price: f64,
    pub lcoh_at_optimum: f64,
    /// t
    pub yearly_hydrogen: f64,
    pub yearly_hours: f64,
    /// Set when the optimum lies on a search bound.
    pub boundary: bool,
    /// Every evaluation, in evaluation order.
    pub trace: Vec<TracePoint>,
}

impl SearchResult {
    pub fn write_trace<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["price", "lcoh", "yearly_hours", "yearly_tons"])?;
        for p in &self.trace {
            w.write_record([
                p.price.to_string(),
                p.lcoh.map(|v| v.to_string()).unwrap_or_default(),
                p.yearly_hours.to_string(),
                p.yearly_tons.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<trace>", e))?;
        Ok(())
    }
}

/// Minimizes `evaluate` over `[price_lower, price_upper]`.
///
/// Plateaus resolve to the lowest price. Prices yielding no production count
/// as infinitely expensive.
pub fn minimize<F>(spec: &PriceSearchSpec, evaluate: F) -> Result<SearchResult>
where
    F: Fn(f64) -> Result<TracePoint> + Sync,
{
    spec.validate()?;
    let trace = match spec.method {
        SearchMethod::GridGolden => grid_golden(spec, &evaluate)?,
        SearchMethod::HillClimb { restarts, seed } => hill_climb(spec, &evaluate, restarts, seed)?,
    };
    let best = best_point(&trace).ok_or(Error::NoFeasiblePrice {
        lower: spec.price_lower,
        upper: spec.price_upper,
    })?;
    let tol = spec.resolution * 1e-6;
    Ok(SearchResult {
        optimal_price: best.price,
        lcoh_at_optimum: best.objective(),
        yearly_hydrogen: best.yearly_tons,
        yearly_hours: best.yearly_hours,
        boundary: best.price <= spec.price_lower + tol || best.price >= spec.price_upper - tol,
        trace,
    })
}

/// Lowest objective; ties go to the lowest price.
fn best_point(trace: &[TracePoint]) -> Option<TracePoint> {
    trace
        .iter()
        .filter(|p| p.objective().is_finite())
        .min_by(|a, b| {
            a.objective()
                .total_cmp(&b.objective())
                .then(a.price.total_cmp(&b.price))
        })
        .copied()
}

fn grid_golden<F>(spec: &PriceSearchSpec, evaluate: &F) -> Result<Vec<TracePoint>>
where
    F: Fn(f64) -> Result<TracePoint> + Sync,
{
    let grid = spec.grid();
    let mut trace = grid
        .par_iter()
        .map(|&p| evaluate(p))
        .collect::<Result<Vec<_>>>()?;
    let Some(best) = best_point(&trace) else {
        return Ok(trace);
    };
    let k = grid.iter().position(|p| *p == best.price).unwrap_or(0);
    let mut a = grid[k.saturating_sub(1)];
    let mut b = grid[(k + 1).min(grid.len() - 1)];
    let tol = spec.resolution / 100.0;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = evaluate(c)?;
    let mut fd = evaluate(d)?;
    trace.extend([fc, fd]);
    while b - a > tol {
        if fc.objective() <= fd.objective() {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = evaluate(c)?;
            trace.push(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = evaluate(d)?;
            trace.push(fd);
        }
    }
    Ok(trace)
}

fn hill_climb<F>(
    spec: &PriceSearchSpec,
    evaluate: &F,
    restarts: usize,
    seed: u64,
) -> Result<Vec<TracePoint>>
where
    F: Fn(f64) -> Result<TracePoint> + Sync,
{
    let grid = spec.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache: Vec<Option<TracePoint>> = vec![None; grid.len()];
    let mut trace = Vec::new();
    let mut eval_at = |k: usize, trace: &mut Vec<TracePoint>| -> Result<f64> {
        if let Some(p) = cache[k] {
            return Ok(p.objective());
        }
        let p = evaluate(grid[k])?;
        cache[k] = Some(p);
        trace.push(p);
        Ok(p.objective())
    };
    for _ in 0..restarts.max(1) {
        let mut k = rng.random_range(0..grid.len());
        let mut f = eval_at(k, &mut trace)?;
        loop {
            let mut moved = false;
            for n in [k.checked_sub(1), Some(k + 1).filter(|n| *n < grid.len())]
                .into_iter()
                .flatten()
            {
                let fnb = eval_at(n, &mut trace)?;
                if fnb < f || (fnb == f && n < k) {
                    k = n;
                    f = fnb;
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
    }
    Ok(trace)
}

/// Runs the search against full flexible-dispatch simulations over the KPI
/// window.
pub fn minimize_lcoh(
    spec: &PriceSearchSpec,
    plant: &Plant<'_>,
    strategy: &dyn DispatchStrategy,
    settings: &SimulationSettings,
) -> Result<SearchResult> {
    let settings = settings.kpi_only();
    minimize(spec, |price| {
        let out = plant.simulate(
            strategy,
            RunParams {
                scenario: Scenario::GridFlexible,
                heat_sale: spec.heat_sale,
                hydrogen_price: price,
            },
            &settings,
        )?;
        Ok(TracePoint {
            price,
            lcoh: out.kpis.lcoh,
            yearly_hours: out.kpis.avg_yearly_operation_hours,
            yearly_tons: out.kpis.avg_yearly_hydrogen_t,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn point(price: f64, lcoh: Option<f64>) -> Result<TracePoint> {
        Ok(TracePoint {
            price,
            lcoh,
            yearly_hours: 0.0,
            yearly_tons: 0.0,
        })
    }

    #[test]
    fn grid_covers_bounds() {
        let g = PriceSearchSpec::default().grid();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 1.0);
        assert_eq!(*g.last().unwrap(), 6.0);
        let spec = PriceSearchSpec { price_lower: 1.0, price_upper: 1.12, resolution: 0.05, ..Default::default() };
        assert_eq!(spec.grid().last(), Some(&1.12));
    }

    #[test]
    fn smooth_minimum_is_refined() {
        let r = minimize(&PriceSearchSpec::default(), |p| point(p, Some((p - 3.3217).powi(2) + 2.8))).unwrap();
        assert!((r.optimal_price - 3.3217).abs() < 0.001, "{}", r.optimal_price);
        assert!(!r.boundary);
        assert!(r.trace.iter().all(|t| t.lcoh.unwrap() >= r.lcoh_at_optimum));
    }

    #[test]
    fn plateau_takes_lowest_price() {
        let r = minimize(&PriceSearchSpec::default(), |p| point(p, Some(if p < 2.0 { 5.0 } else { 3.0 }))).unwrap();
        assert!((r.optimal_price - 2.0).abs() < 1e-12, "{}", r.optimal_price);
    }

    #[test]
    fn boundary_and_infeasible() {
        let spec = PriceSearchSpec { price_lower: 5.9, price_upper: 6.0, ..Default::default() };
        let r = minimize(&spec, |p| point(p, Some(10.0 - p))).unwrap();
        assert!(r.boundary);
        assert_eq!(r.optimal_price, 6.0);
        let err = minimize(&spec, |p| point(p, None)).unwrap_err();
        assert!(matches!(err, Error::NoFeasiblePrice { .. }));
    }

    #[test]
    fn bad_spec() {
        let spec = PriceSearchSpec { price_lower: 3.0, price_upper: 2.0, ..Default::default() };
        assert!(minimize(&spec, |p| point(p, Some(p))).is_err());
    }

    #[test]
    fn hill_climb_finds_unimodal_minimum() {
        let spec = PriceSearchSpec { method: SearchMethod::HillClimb { restarts: 3, seed: 7 }, ..Default::default() };
        let r = minimize(&spec, |p| point(p, Some((p - 4.0).abs()))).unwrap();
        assert!((r.optimal_price - 4.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn unimodal_matches_brute_force(center in 1.0f64..6.0, scale in 0.1f64..10.0) {
            let f = |p: f64| scale * (p - center).abs() + 1.0;
            let spec = PriceSearchSpec::default();
            let r = minimize(&spec, |p| point(p, Some(f(p)))).unwrap();
            prop_assert!((r.optimal_price - center).abs() <= spec.resolution);
        }
    }
}
