use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether larger values of a criterion are better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Benefit,
    Cost,
}

impl Direction {
    /// +1 for benefit, -1 for cost.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Benefit => 1.0,
            Direction::Cost => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Benefit => Direction::Cost,
            Direction::Cost => Direction::Benefit,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Benefit => "benefit",
            Direction::Cost => "cost",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "benefit" | "max" => Ok(Direction::Benefit),
            "cost" | "min" => Ok(Direction::Cost),
            other => Err(Error::Matrix(format!("unknown direction `{other}`"))),
        }
    }
}

/// Alternatives × criteria, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    alternatives: Vec<String>,
    criteria: Vec<String>,
    values: Vec<Vec<f64>>,
    directions: Vec<Direction>,
}

impl DecisionMatrix {
    pub fn new(
        alternatives: Vec<String>,
        criteria: Vec<String>,
        values: Vec<Vec<f64>>,
        directions: Vec<Direction>,
    ) -> Result<Self> {
        if alternatives.is_empty() || criteria.is_empty() {
            return Err(Error::Matrix("need at least one alternative and one criterion".into()));
        }
        if values.len() != alternatives.len() {
            return Err(Error::Matrix(format!(
                "{} rows for {} alternatives",
                values.len(),
                alternatives.len()
            )));
        }
        if directions.len() != criteria.len() {
            return Err(Error::Matrix(format!(
                "{} directions for {} criteria",
                directions.len(),
                criteria.len()
            )));
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != criteria.len() {
                return Err(Error::Matrix(format!(
                    "row `{}` has {} values, expected {}",
                    alternatives[i],
                    row.len(),
                    criteria.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(Error::Matrix(format!(
                    "row `{}` holds non-finite value {v}",
                    alternatives[i]
                )));
            }
        }
        Ok(Self {
            alternatives,
            criteria,
            values,
            directions,
        })
    }

    /// Matrix with generated labels `A1..An` and `C1..Cm`.
    pub fn from_rows(values: Vec<Vec<f64>>, directions: Vec<Direction>) -> Result<Self> {
        let alternatives = (1..=values.len()).map(|i| format!("A{i}")).collect();
        let criteria = (1..=directions.len()).map(|j| format!("C{j}")).collect();
        Self::new(alternatives, criteria, values, directions)
    }

    pub fn n_alternatives(&self) -> usize {
        self.alternatives.len()
    }

    pub fn n_criteria(&self) -> usize {
        self.criteria.len()
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[String] {
        &self.criteria
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, alternative: usize, criterion: usize) -> f64 {
        self.values[alternative][criterion]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|r| r[j]).collect()
    }

    /// Copy with column `j` multiplied by `factor`.
    pub fn scaled_column(&self, j: usize, factor: f64) -> Self {
        let mut m = self.clone();
        for row in &mut m.values {
            row[j] *= factor;
        }
        m
    }

    /// Copy with column `j` negated and its direction flipped.
    pub fn flipped_column(&self, j: usize) -> Self {
        let mut m = self.clone();
        for row in &mut m.values {
            row[j] = -row[j];
        }
        m.directions[j] = m.directions[j].flipped();
        m
    }

    /// Reads the decision-matrix CSV: a header `alternative,<criteria..>`,
    /// a `direction,<benefit|cost..>` line, then one row per alternative.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let criteria: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut records = rdr.records();
        let dir_row = records
            .next()
            .ok_or_else(|| Error::Matrix("missing direction line".into()))??;
        if dir_row.get(0) != Some("direction") {
            return Err(Error::Matrix(
                "second line must start with `direction`".into(),
            ));
        }
        let directions = dir_row
            .iter()
            .skip(1)
            .map(str::parse)
            .collect::<Result<Vec<Direction>>>()?;
        let mut alternatives = Vec::new();
        let mut values = Vec::new();
        for rec in records {
            let rec = rec?;
            alternatives.push(rec.get(0).unwrap_or_default().to_string());
            let row = rec
                .iter()
                .skip(1)
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::Matrix(format!("bad number `{v}`")))
                })
                .collect::<Result<Vec<f64>>>()?;
            values.push(row);
        }
        Self::new(alternatives, criteria, values, directions)
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["alternative".to_string()];
        header.extend(self.criteria.iter().cloned());
        w.write_record(&header)?;
        let mut dirs = vec!["direction".to_string()];
        dirs.extend(self.directions.iter().map(|d| d.to_string()));
        w.write_record(&dirs)?;
        for (a, row) in self.alternatives.iter().zip(&self.values) {
            let mut rec = vec![a.clone()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("<decision matrix>", e))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        use Direction::*;
        assert!(DecisionMatrix::from_rows(vec![vec![1.0, 2.0]], vec![Benefit, Cost]).is_ok());
        assert!(DecisionMatrix::from_rows(vec![vec![1.0]], vec![Benefit, Cost]).is_err());
        assert!(DecisionMatrix::from_rows(vec![vec![f64::NAN, 1.0]], vec![Benefit, Cost]).is_err());
        assert!(DecisionMatrix::from_rows(vec![], vec![Benefit]).is_err());
    }

    #[test]
    fn csv_roundtrip() {
        let text = "alternative,price,profit\ndirection,cost,benefit\nA1,1.5,-10\nA2,2,20.5\n";
        let m = DecisionMatrix::from_csv(text.as_bytes()).unwrap();
        assert_eq!(m.directions(), &[Direction::Cost, Direction::Benefit]);
        assert_eq!(m.value(0, 1), -10.0);
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        assert_eq!(DecisionMatrix::from_csv(buf.as_slice()).unwrap(), m);
        assert!(DecisionMatrix::from_csv("alternative,a\nA1,1\n".as_bytes()).is_err());
    }
}
