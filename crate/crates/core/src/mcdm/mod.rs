//! Multi-criteria ranking of experiment alternatives.
//!
//! Weights come from [`equal_weights`] or Shannon [`entropy_weights`]; ranks
//! from [`topsis`], [`vikor`] and [`promethee2`], combined by
//! [`average_ranking`].

mod matrix;
mod methods;
mod weights;

pub use matrix::{DecisionMatrix, Direction};
pub use methods::{
    promethee2, topsis, vikor, PreferenceFunction, PrometheeResult, TopsisNormalization,
    TopsisResult, VikorResult,
};
pub use weights::{entropy_weights, equal_weights, WeightVector};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two scores closer than this (relative) are ties.
const TIE_TOLERANCE: f64 = 1e-9;

/// Ranks with 1 for the largest score; tied scores share the mean position.
pub fn rank_descending(scores: &[f64]) -> Vec<f64> {
    let negated: Vec<f64> = scores.iter().map(|s| -s).collect();
    rank_ascending(&negated)
}

/// Ranks with 1 for the smallest score; tied scores share the mean position.
pub fn rank_ascending(scores: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    let mut ranks = vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && close(scores[order[j]], scores[order[i]]) {
            j += 1;
        }
        let mean = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = mean;
        }
        i = j;
    }
    ranks
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * (1e-3 + a.abs().max(b.abs()))
}

/// Mean rank per alternative across methods.
pub fn average_ranking(method_ranks: &[&[f64]]) -> Result<Vec<f64>> {
    let Some(first) = method_ranks.first() else {
        return Err(Error::Matrix("no rankings to average".into()));
    };
    if method_ranks.iter().any(|r| r.len() != first.len()) {
        return Err(Error::Matrix(
            "rankings cover different alternative sets".into(),
        ));
    }
    let k = method_ranks.len() as f64;
    Ok((0..first.len())
        .map(|i| method_ranks.iter().map(|r| r[i]).sum::<f64>() / k)
        .collect())
}

/// Method settings for a full ranking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RankingConfig {
    pub vikor_v: f64,
    pub topsis: TopsisNormalization,
    pub promethee: PreferenceFunction,
}

impl Default for RankingConfig {
    fn default() -> Self {
        Self {
            vikor_v: 0.5,
            topsis: TopsisNormalization::MinMax,
            promethee: PreferenceFunction::Usual,
        }
    }
}

/// Per-method ranks and their average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingResult {
    pub vikor: Vec<f64>,
    pub topsis: Vec<f64>,
    pub promethee: Vec<f64>,
    pub average: Vec<f64>,
}

impl RankingResult {
    /// Index of the alternative with the best (lowest) average rank; ties go
    /// to the lower index.
    pub fn best(&self) -> usize {
        let mut best = 0;
        for (i, r) in self.average.iter().enumerate() {
            if *r < self.average[best] {
                best = i;
            }
        }
        best
    }
}

/// Runs VIKOR, TOPSIS and PROMETHEE II and averages their ranks.
pub fn rank_all(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
    config: &RankingConfig,
) -> Result<RankingResult> {
    let v = vikor(matrix, weights, config.vikor_v)?;
    let t = topsis(matrix, weights, config.topsis)?;
    let p = promethee2(matrix, weights, config.promethee)?;
    let average = average_ranking(&[&v.ranks, &t.ranks, &p.ranks])?;
    Ok(RankingResult {
        vikor: v.ranks,
        topsis: t.ranks,
        promethee: p.ranks,
        average,
    })
}
