//! Hour-by-hour on/off decisions for the three business models.
//!
//! Strategies are pure given a [`DispatchContext`] and the running
//! [`DispatchState`]; the simulation engine owns the state and advances it
//! after every hour.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::electrolyzer::ElectrolyzerSpec;
use crate::error::Error;

/// Everything a strategy may look at for one hour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispatchContext {
    pub timestamp: DateTime<Utc>,
    /// EUR/MWh; `None` on gap hours.
    pub spot_price: Option<f64>,
    /// MWh available from the onsite park this hour.
    pub park_output: Option<f64>,
    /// EUR/MWh_th
    pub heat_price: f64,
    /// EUR/kg
    pub hydrogen_price: f64,
    pub heat_sale: bool,
}

/// Cumulative operating totals since the start of the run (or of the
/// current year, under [`StateMemory::AnnualReset`]).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DispatchState {
    /// EUR, accrued every elapsed hour whether or not the plant ran.
    pub cumulative_fixed_cost: f64,
    /// EUR, electricity plus water.
    pub cumulative_variable_cost: f64,
    /// EUR
    pub cumulative_heat_revenue: f64,
    /// kg
    pub cumulative_hydrogen: f64,
    pub elapsed_hours: u64,
}

impl DispatchState {
    /// Closes one hour.
    pub fn advance(&mut self, fixed: f64, variable: f64, heat_revenue: f64, hydrogen: f64) {
        self.cumulative_fixed_cost += fixed;
        self.cumulative_variable_cost += variable;
        self.cumulative_heat_revenue += heat_revenue;
        self.cumulative_hydrogen += hydrogen;
        self.elapsed_hours += 1;
    }
}

/// Whether the flexible strategy's running average spans the whole run or
/// restarts every simulated year.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateMemory {
    #[default]
    Cumulative,
    AnnualReset,
}

/// Per-unit prices the flexible strategy needs to cost an hour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HourCostInputs {
    /// EUR/MWh
    pub grid_tariff: f64,
    /// EUR/litre
    pub water_price: f64,
}

/// A dispatch rule.
pub trait DispatchStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    fn decide(&self, ctx: &DispatchContext, state: &DispatchState) -> bool;
}

/// Runs whenever the hour has price data.
#[derive(Debug, Clone, Copy, Default)]
pub struct Constant;

impl DispatchStrategy for Constant {
    fn name(&self) -> &'static str {
        "constant"
    }

    fn decide(&self, ctx: &DispatchContext, _state: &DispatchState) -> bool {
        ctx.spot_price.is_some()
    }
}

/// Runs an hour when the projected running-average cost per kg, including
/// that hour, stays at or below the hydrogen price. Idle hours keep
/// accruing fixed cost, so a long idle stretch tightens the threshold.
#[derive(Debug, Clone)]
pub struct Flexible {
    pub spec: ElectrolyzerSpec,
    pub costs: HourCostInputs,
}

impl Flexible {
    /// Projected average cost per kg if this hour runs. `None` on gap hours.
    pub fn projected_cost(&self, ctx: &DispatchContext, state: &DispatchState) -> Option<f64> {
        let spot = ctx.spot_price?;
        let flow = self.spec.run_hour(true, ctx.heat_sale);
        let f = self.spec.hourly_fixed_cost();
        let v = flow.electricity_in * (spot + self.costs.grid_tariff)
            + flow.water_in * self.costs.water_price;
        let r = flow.heat_to_grid * ctx.heat_price;
        let m = flow.hydrogen_out;
        Some(
            (state.cumulative_fixed_cost + f + state.cumulative_variable_cost + v
                - state.cumulative_heat_revenue
                - r)
                / (state.cumulative_hydrogen + m),
        )
    }
}

impl DispatchStrategy for Flexible {
    fn name(&self) -> &'static str {
        "flexible"
    }

    fn decide(&self, ctx: &DispatchContext, state: &DispatchState) -> bool {
        self.projected_cost(ctx, state)
            .is_some_and(|c| c <= ctx.hydrogen_price)
    }
}

/// Runs only when the park alone covers rated power for the whole hour.
#[derive(Debug, Clone)]
pub struct Renewable {
    pub capacity: f64,
}

impl DispatchStrategy for Renewable {
    fn name(&self) -> &'static str {
        "renewable"
    }

    fn decide(&self, ctx: &DispatchContext, _state: &DispatchState) -> bool {
        ctx.park_output.is_some_and(|p| p >= self.capacity)
    }
}

/// Runs when this hour's own cost per kg (fixed share included) is at or
/// below the hydrogen price. Memoryless alternative to [`Flexible`].
#[derive(Debug, Clone)]
pub struct MarginalCost {
    pub inner: Flexible,
}

impl DispatchStrategy for MarginalCost {
    fn name(&self) -> &'static str {
        "marginal"
    }

    fn decide(&self, ctx: &DispatchContext, _state: &DispatchState) -> bool {
        self.inner
            .projected_cost(ctx, &DispatchState::default())
            .is_some_and(|c| c <= ctx.hydrogen_price)
    }
}

/// Strategy names accepted in configuration files and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Constant,
    Flexible,
    Renewable,
    Marginal,
}

impl StrategyKind {
    pub fn build(
        self,
        spec: &ElectrolyzerSpec,
        costs: HourCostInputs,
    ) -> Box<dyn DispatchStrategy> {
        let flexible = || Flexible {
            spec: spec.clone(),
            costs,
        };
        match self {
            StrategyKind::Constant => Box::new(Constant),
            StrategyKind::Flexible => Box::new(flexible()),
            StrategyKind::Renewable => Box::new(Renewable {
                capacity: spec.capacity,
            }),
            StrategyKind::Marginal => Box::new(MarginalCost { inner: flexible() }),
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyKind::Constant => "constant",
            StrategyKind::Flexible => "flexible",
            StrategyKind::Renewable => "renewable",
            StrategyKind::Marginal => "marginal",
        })
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "constant" => Ok(StrategyKind::Constant),
            "flexible" => Ok(StrategyKind::Flexible),
            "renewable" => Ok(StrategyKind::Renewable),
            "marginal" => Ok(StrategyKind::Marginal),
            other => Err(Error::Config(format!("unknown dispatch strategy `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;
    use proptest::prelude::*;

    fn ctx(spot: Option<f64>, h2: f64) -> DispatchContext {
        DispatchContext {
            timestamp: Utc.with_ymd_and_hms(2023, 1, 1, 0, 0, 0).unwrap(),
            spot_price: spot,
            park_output: None,
            heat_price: 26.8,
            hydrogen_price: h2,
            heat_sale: false,
        }
    }

    fn flexible() -> Flexible {
        Flexible {
            spec: ElectrolyzerSpec::default(),
            costs: HourCostInputs {
                grid_tariff: 13.4,
                water_price: 0.0085,
            },
        }
    }

    #[test]
    fn constant_ignores_price() {
        let s = DispatchState::default();
        assert!(Constant.decide(&ctx(Some(300.0), 1.5), &s));
        assert!(Constant.decide(&ctx(Some(-10.0), 1.5), &s));
        assert!(!Constant.decide(&ctx(None, 1.5), &s));
    }

    #[test]
    fn flexible_fresh_state() {
        let f = flexible();
        let s = DispatchState::default();
        // (146.75 + 12·18.4 + 20.35) / 239.42 ≈ 1.62 EUR/kg
        let c = f.projected_cost(&ctx(Some(5.0), 2.7), &s).unwrap();
        assert!((c - 1.6200).abs() < 1e-3, "{c}");
        assert!(f.decide(&ctx(Some(5.0), 2.7), &s));
        // v/m alone is ≈ 25.8 EUR/kg
        assert!(!f.decide(&ctx(Some(500.0), 1.5), &s));
        assert!(!f.decide(&ctx(None, 100.0), &s));
    }

    #[test]
    fn idle_time_lowers_the_acceptable_spot_price() {
        let f = flexible();
        let mut busy = DispatchState::default();
        busy.advance(146.75 * 100.0, 50_000.0, 0.0, 23_942.0);
        let idle = DispatchState {
            cumulative_fixed_cost: busy.cumulative_fixed_cost + 146.75 * 500.0,
            elapsed_hours: 600,
            ..busy
        };
        let max_spot = |state: &DispatchState| {
            let (mut lo, mut hi) = (-1000.0, 1000.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if f.decide(&ctx(Some(mid), 2.7), state) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        assert!(max_spot(&idle) < max_spot(&busy));
    }

    #[test]
    fn heat_sale_loosens_flexible() {
        let f = flexible();
        let s = DispatchState::default();
        let mut with_heat = ctx(Some(100.0), 2.7);
        with_heat.heat_sale = true;
        let a = f.projected_cost(&ctx(Some(100.0), 2.7), &s).unwrap();
        let b = f.projected_cost(&with_heat, &s).unwrap();
        assert!((a - b - 1.968 * 26.8 / 239.4239).abs() < 1e-6);
    }

    #[test]
    fn renewable_threshold() {
        let r = Renewable { capacity: 12.0 };
        let s = DispatchState::default();
        let mut c = ctx(Some(30.0), 2.0);
        for (park, on) in [(80.0, true), (12.0, true), (11.9, false), (0.0, false)] {
            c.park_output = Some(park);
            assert_eq!(r.decide(&c, &s), on, "{park}");
        }
        c.park_output = None;
        assert!(!r.decide(&c, &s));
    }

    #[test]
    fn strategy_names_roundtrip() {
        for k in [StrategyKind::Constant, StrategyKind::Flexible, StrategyKind::Renewable, StrategyKind::Marginal] {
            assert_eq!(k.to_string().parse::<StrategyKind>().unwrap(), k);
        }
        assert!("greedy".parse::<StrategyKind>().is_err());
    }

    proptest! {
        #[test]
        fn flexible_monotone_in_hydrogen_price(spot in -100.0f64..300.0, p1 in 0.5f64..6.0, p2 in 0.5f64..6.0, fixed in 0.0f64..1e6, kg in 0.0f64..1e6) {
            let f = flexible();
            let s = DispatchState { cumulative_fixed_cost: fixed, cumulative_hydrogen: kg, cumulative_variable_cost: kg * 1.5, ..Default::default() };
            let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
            if f.decide(&ctx(Some(spot), lo), &s) {
                prop_assert!(f.decide(&ctx(Some(spot), hi), &s));
            }
        }
    }
}
