use serde::{Deserialize, Serialize};

use super::{rank_ascending, rank_descending, DecisionMatrix, Direction, WeightVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopsisNormalization {
    /// `(x - min) / (max - min)`, flipped for cost criteria.
    MinMax,
    /// `x / ||column||`.
    Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopsisResult {
    pub closeness: Vec<f64>,
    pub ranks: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VikorResult {
    pub s: Vec<f64>,
    pub r: Vec<f64>,
    pub q: Vec<f64>,
    pub ranks: Vec<f64>,
}

/// PROMETHEE preference over a direction-signed difference `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreferenceFunction {
    /// 1 when `d > 0`.
    Usual,
    /// `min(1, d / p)`; `p` defaults to the criterion's range.
    VShape { threshold: Option<f64> },
}

impl PreferenceFunction {
    fn eval(self, d: f64, range: f64) -> f64 {
        if d <= 0.0 {
            return 0.0;
        }
        match self {
            PreferenceFunction::Usual => 1.0,
            PreferenceFunction::VShape { threshold } => {
                let p = threshold.unwrap_or(range);
                if p > 0.0 {
                    (d / p).min(1.0)
                } else {
                    1.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrometheeResult {
    pub positive: Vec<f64>,
    pub negative: Vec<f64>,
    pub net: Vec<f64>,
    pub ranks: Vec<f64>,
}

fn check_weights(matrix: &DecisionMatrix, weights: &WeightVector) -> Result<()> {
    if weights.len() != matrix.n_criteria() {
        return Err(Error::Matrix(format!(
            "{} weights for {} criteria",
            weights.len(),
            matrix.n_criteria()
        )));
    }
    Ok(())
}

fn column_bounds(matrix: &DecisionMatrix, j: usize) -> (f64, f64) {
    matrix
        .rows()
        .iter()
        .map(|r| r[j])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

pub fn topsis(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
    normalization: TopsisNormalization,
) -> Result<TopsisResult> {
    check_weights(matrix, weights)?;
    let n = matrix.n_alternatives();
    let m = matrix.n_criteria();
    let w = weights.as_slice();
    let mut weighted = vec![vec![0.0; m]; n];
    let mut ideal = vec![0.0; m];
    let mut anti = vec![0.0; m];
    for j in 0..m {
        let dir = matrix.directions()[j];
        match normalization {
            TopsisNormalization::MinMax => {
                let (lo, hi) = column_bounds(matrix, j);
                for i in 0..n {
                    let x = matrix.value(i, j);
                    let unit = if hi > lo {
                        match dir {
                            Direction::Benefit => (x - lo) / (hi - lo),
                            Direction::Cost => (hi - x) / (hi - lo),
                        }
                    } else {
                        1.0
                    };
                    weighted[i][j] = w[j] * unit;
                }
                ideal[j] = (0..n).map(|i| weighted[i][j]).fold(f64::NEG_INFINITY, f64::max);
                anti[j] = (0..n).map(|i| weighted[i][j]).fold(f64::INFINITY, f64::min);
            }
            TopsisNormalization::Vector => {
                let norm = matrix.rows().iter().map(|r| r[j] * r[j]).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(Error::Normalization(matrix.criteria()[j].clone()));
                }
                for i in 0..n {
                    weighted[i][j] = w[j] * matrix.value(i, j) / norm;
                }
                let hi = (0..n).map(|i| weighted[i][j]).fold(f64::NEG_INFINITY, f64::max);
                let lo = (0..n).map(|i| weighted[i][j]).fold(f64::INFINITY, f64::min);
                (ideal[j], anti[j]) = match dir {
                    Direction::Benefit => (hi, lo),
                    Direction::Cost => (lo, hi),
                };
            }
        }
    }
    let closeness: Vec<f64> = weighted
        .iter()
        .map(|row| {
            let dp = distance(row, &ideal);
            let dm = distance(row, &anti);
            if dp + dm > 0.0 {
                dm / (dp + dm)
            } else {
                0.5
            }
        })
        .collect();
    let ranks = rank_descending(&closeness);
    Ok(TopsisResult { closeness, ranks })
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// VIKOR compromise ranking; `v` weighs group utility against individual
/// regret. Lower `Q` ranks first.
pub fn vikor(matrix: &DecisionMatrix, weights: &WeightVector, v: f64) -> Result<VikorResult> {
    check_weights(matrix, weights)?;
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Matrix(format!("VIKOR v = {v} outside [0, 1]")));
    }
    let n = matrix.n_alternatives();
    let m = matrix.n_criteria();
    let w = weights.as_slice();
    let mut s = vec![0.0; n];
    let mut r = vec![0.0; n];
    for j in 0..m {
        let (lo, hi) = column_bounds(matrix, j);
        if hi <= lo {
            continue;
        }
        let (best, worst) = match matrix.directions()[j] {
            Direction::Benefit => (hi, lo),
            Direction::Cost => (lo, hi),
        };
        for i in 0..n {
            let d = w[j] * ((best - matrix.value(i, j)) / (best - worst));
            s[i] += d;
            r[i] = f64::max(r[i], d);
        }
    }
    let scaled = |xs: &[f64]| -> Vec<f64> {
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        xs.iter()
            .map(|x| {
                if hi - lo > 1e-12 * hi.abs().max(lo.abs()) {
                    (x - lo) / (hi - lo)
                } else {
                    0.0
                }
            })
            .collect()
    };
    let (ss, rs) = (scaled(&s), scaled(&r));
    let q: Vec<f64> = ss.iter().zip(&rs).map(|(a, b)| v * a + (1.0 - v) * b).collect();
    let ranks = rank_ascending(&q);
    Ok(VikorResult { s, r, q, ranks })
}

/// PROMETHEE II net outranking flows. Higher net flow ranks first.
pub fn promethee2(
    matrix: &DecisionMatrix,
    weights: &WeightVector,
    preference: PreferenceFunction,
) -> Result<PrometheeResult> {
    check_weights(matrix, weights)?;
    let n = matrix.n_alternatives();
    let m = matrix.n_criteria();
    let w = weights.as_slice();
    let ranges: Vec<f64> = (0..m)
        .map(|j| {
            let (lo, hi) = column_bounds(matrix, j);
            hi - lo
        })
        .collect();
    let mut pi = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            pi[a][b] = (0..m)
                .map(|j| {
                    let sign = matrix.directions()[j].sign();
                    let d = sign * (matrix.value(a, j) - matrix.value(b, j));
                    w[j] * preference.eval(d, ranges[j])
                })
                .sum();
        }
    }
    let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
    let positive: Vec<f64> = (0..n).map(|a| pi[a].iter().sum::<f64>() / denom).collect();
    let negative: Vec<f64> = (0..n).map(|a| pi.iter().map(|row| row[a]).sum::<f64>() / denom).collect();
    let net: Vec<f64> = positive.iter().zip(&negative).map(|(p, q)| p - q).collect();
    let ranks = rank_descending(&net);
    Ok(PrometheeResult {
        positive,
        negative,
        net,
        ranks,
    })
}
