//! Hourly techno-economic simulation of an alkaline electrolyzer that sells
//! hydrogen and recovers its waste heat into a district-heating network.
//!
//! The usual entry point is [`study::Study`], which binds a [`config::Config`]
//! to price and weather series and runs single experiments, the full results
//! matrix or the LCoH-minimizing price search. [`report`] turns a results
//! matrix into multi-criteria rankings.

pub mod config;
pub mod dispatch;
pub mod economics;
pub mod electrolyzer;
pub mod error;
pub mod market;
pub mod mcdm;
pub mod optimizer;
pub mod renewables;
pub mod report;
pub mod simulation;
pub mod study;

pub use config::Config;
pub use error::{Error, Result};
pub use study::{ExperimentConfig, Study};
