use serde::Serialize;

use super::DecisionMatrix;
use crate::error::{Error, Result};

/// Non-negative criterion weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::Matrix("weights must be finite and non-negative".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Matrix(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self(weights))
    }

    /// Scales arbitrary non-negative importances to sum to one.
    pub fn normalized(raw: Vec<f64>) -> Result<Self> {
        let sum: f64 = raw.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::Matrix("weights must have a positive sum".into()));
        }
        Self::new(raw.into_iter().map(|w| w / sum).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn equal_weights(n_criteria: usize) -> WeightVector {
    WeightVector(vec![1.0 / n_criteria as f64; n_criteria])
}

/// Shannon-entropy weights.
///
/// Each raw column is divided by its sum to give shares `p`; the normalized
/// entropy is `-Σ p ln p / ln n` and the weight is proportional to one minus
/// it. A column with any share `p <= 0` (zeros, or mixed signs) is maximally
/// informative: its entropy is taken as 0.
pub fn entropy_weights(matrix: &DecisionMatrix) -> Result<WeightVector> {
    let n = matrix.n_alternatives();
    if n < 2 {
        return Err(Error::Matrix(
            "entropy weights need at least two alternatives".into(),
        ));
    }
    let ln_n = (n as f64).ln();
    let mut divergence = Vec::with_capacity(matrix.n_criteria());
    for j in 0..matrix.n_criteria() {
        let col = matrix.column(j);
        let first = col[0];
        if col.iter().all(|v| *v == first) {
            return Err(Error::DegenerateEntropy(matrix.criteria()[j].clone()));
        }
        let sum: f64 = col.iter().sum();
        let shares: Vec<f64> = col.iter().map(|v| v / sum).collect();
        let entropy = if shares.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
            0.0
        } else {
            -shares.iter().map(|p| p * p.ln()).sum::<f64>() / ln_n
        };
        divergence.push((1.0 - entropy).max(0.0));
    }
    WeightVector::normalized(divergence)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcdm::Direction::*;

    #[test]
    fn equal_is_exact() {
        assert_eq!(equal_weights(5).as_slice(), &[0.2; 5]);
    }

    #[test]
    fn more_spread_gets_more_weight() {
        let m = DecisionMatrix::from_rows(vec![vec![1.0, 10.0], vec![100.0, 10.1]], vec![Benefit, Benefit]).unwrap();
        let w = entropy_weights(&m).unwrap();
        assert!(w.as_slice()[0] > w.as_slice()[1]);
        assert!((w.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        let m = DecisionMatrix::from_rows(vec![vec![1.0, 2.0], vec![1.0, 3.0]], vec![Benefit, Cost]).unwrap();
        match entropy_weights(&m) {
            Err(Error::DegenerateEntropy(c)) => assert_eq!(c, "C1"),
            other => panic!("{other:?}"),
        }
        let single = DecisionMatrix::from_rows(vec![vec![1.0, 2.0]], vec![Benefit, Cost]).unwrap();
        assert!(entropy_weights(&single).is_err());
    }

    #[test]
    fn non_positive_share_is_maximally_informative() {
        let m = DecisionMatrix::from_rows(
            vec![vec![0.0, -1.0, 1.0], vec![2.0, 3.0, 2.0], vec![3.0, 4.0, 3.0]],
            vec![Cost, Benefit, Benefit],
        )
        .unwrap();
        let w = entropy_weights(&m).unwrap();
        assert_eq!(w.as_slice()[0], w.as_slice()[1]);
        assert!(w.as_slice()[0] > w.as_slice()[2]);
    }

    #[test]
    fn weight_vector_checks() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![1.5, -0.5]).is_err());
        assert!(WeightVector::normalized(vec![0.0, 0.0]).is_err());
    }
}
