//! Report files: the KPI matrix, its provenance block, and MCDM outputs.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::economics::KpiReport;
use crate::error::{Error, Result};
use crate::mcdm::{
    entropy_weights, equal_weights, rank_all, DecisionMatrix, Direction, RankingConfig,
    RankingResult, WeightVector,
};

/// Where a report's numbers came from.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub prices_sha256: Option<String>,
    pub weather_sha256: Option<String>,
    pub config_sha256: String,
    pub decisions: BTreeMap<String, String>,
}

impl Provenance {
    fn write_comment<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let none = || "none".to_string();
        writeln!(w, "# prices_sha256: {}", self.prices_sha256.clone().unwrap_or_else(none))?;
        writeln!(w, "# weather_sha256: {}", self.weather_sha256.clone().unwrap_or_else(none))?;
        writeln!(w, "# config_sha256: {}", self.config_sha256)?;
        for (k, v) in &self.decisions {
            writeln!(w, "# {k}: {v}")?;
        }
        Ok(())
    }
}

/// One experiment's KPIs, labelled as in the results matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixRow {
    /// `A1`..`A24`
    pub alternative: String,
    /// `1.1`..`3.2`
    pub experiment: String,
    /// EUR/kg
    pub hydrogen_price: f64,
    pub kpis: KpiReport,
}

impl MatrixRow {
    /// `1.1 (2.7)` style label.
    pub fn label(&self) -> String {
        format!("{} ({})", self.experiment, self.hydrogen_price)
    }
}

const KPI_HEADER: [&str; 11] = [
    "alternative",
    "experiment",
    "hydrogen_price",
    "lcoh_eur_kg",
    "avg_yearly_profit_keur",
    "avg_yearly_operation_hours",
    "avg_yearly_hydrogen_t",
    "avg_yearly_co2_t",
    "roi_years",
    "window_years",
    "partial_window",
];

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MatrixReport {
    pub rows: Vec<MatrixRow>,
    pub provenance: Option<Provenance>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl MatrixReport {
    /// CSV with the provenance block as leading `#` comment lines.
    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        if let Some(p) = &self.provenance {
            p.write_comment(&mut writer)
                .map_err(|e| Error::io("<kpi matrix>", e))?;
        }
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(KPI_HEADER)?;
        for r in &self.rows {
            let k = &r.kpis;
            w.write_record([
                r.alternative.clone(),
                r.experiment.clone(),
                r.hydrogen_price.to_string(),
                opt(k.lcoh),
                k.avg_yearly_profit_keur.to_string(),
                k.avg_yearly_operation_hours.to_string(),
                k.avg_yearly_hydrogen_t.to_string(),
                k.avg_yearly_co2_t.to_string(),
                opt(k.roi_years),
                k.window_years.to_string(),
                k.partial_window.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<kpi matrix>", e))?;
        Ok(())
    }

    /// Reads a KPI matrix CSV. Comment lines are skipped; the provenance
    /// block is not restored. `window_years` and `partial_window` may be
    /// absent.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let col = |name: &str| -> Result<usize> {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingColumn(name.to_string()))
        };
        let required: Vec<usize> = KPI_HEADER[..9].iter().map(|h| col(h)).collect::<Result<_>>()?;
        let window_col = col("window_years").ok();
        let partial_col = col("partial_window").ok();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let line = rec.position().map(|p| p.line()).unwrap_or(0);
            let text = |i: usize| rec.get(i).unwrap_or("").to_string();
            let num = |i: usize| -> Result<f64> {
                let raw = rec.get(i).unwrap_or("");
                raw.parse::<f64>()
                    .map_err(|_| Error::Data(format!("KPI matrix line {line}: bad number `{raw}`")))
            };
            let maybe = |i: usize| -> Result<Option<f64>> {
                if rec.get(i).unwrap_or("").is_empty() {
                    Ok(None)
                } else {
                    num(i).map(Some)
                }
            };
            rows.push(MatrixRow {
                alternative: text(required[0]),
                experiment: text(required[1]),
                hydrogen_price: num(required[2])?,
                kpis: KpiReport {
                    lcoh: maybe(required[3])?,
                    avg_yearly_profit_keur: num(required[4])?,
                    avg_yearly_operation_hours: num(required[5])?,
                    avg_yearly_hydrogen_t: num(required[6])?,
                    avg_yearly_co2_t: num(required[7])?,
                    roi_years: maybe(required[8])?,
                    window_years: match window_col {
                        Some(i) => num(i)?,
                        None => 0.0,
                    },
                    partial_window: partial_col
                        .map(|i| rec.get(i) == Some("true"))
                        .unwrap_or(false),
                },
            });
        }
        Ok(Self {
            rows,
            provenance: None,
        })
    }

    /// Splits off rows whose LCoH is undefined; returns the kept report and
    /// the dropped labels.
    pub fn without_undefined_lcoh(&self) -> (Self, Vec<String>) {
        let (kept, dropped): (Vec<_>, Vec<_>) =
            self.rows.iter().cloned().partition(|r| r.kpis.lcoh.is_some());
        (
            Self {
                rows: kept,
                provenance: self.provenance.clone(),
            },
            dropped.iter().map(MatrixRow::label).collect(),
        )
    }

    /// Five-criterion decision matrix: price, LCoH, profit, hydrogen, CO₂.
    pub fn decision_matrix(&self) -> Result<DecisionMatrix> {
        let values = self
            .rows
            .iter()
            .map(|r| {
                let lcoh = r.kpis.lcoh.ok_or_else(|| {
                    Error::Data(format!("{}: LCoH undefined (no production)", r.alternative))
                })?;
                Ok(vec![
                    r.hydrogen_price,
                    lcoh,
                    r.kpis.avg_yearly_profit_keur,
                    r.kpis.avg_yearly_hydrogen_t,
                    r.kpis.avg_yearly_co2_t,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        DecisionMatrix::new(
            self.rows.iter().map(|r| r.alternative.clone()).collect(),
            CRITERIA.iter().map(|c| c.to_string()).collect(),
            values,
            DIRECTIONS.to_vec(),
        )
    }
}

pub const CRITERIA: [&str; 5] = [
    "hydrogen_price",
    "lcoh",
    "avg_yearly_profit",
    "avg_yearly_hydrogen",
    "avg_yearly_co2",
];

pub const DIRECTIONS: [Direction; 5] = [
    Direction::Cost,
    Direction::Cost,
    Direction::Benefit,
    Direction::Benefit,
    Direction::Cost,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    Equal,
    Entropy,
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Weighting::Equal => "equal",
            Weighting::Entropy => "entropy",
        })
    }
}

impl FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equal" => Ok(Weighting::Equal),
            "entropy" => Ok(Weighting::Entropy),
            other => Err(Error::Config(format!("unknown weighting `{other}`"))),
        }
    }
}

/// Weights and rankings for one weighting scheme.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McdmReport {
    pub weighting: Weighting,
    pub criteria: Vec<String>,
    pub equal: WeightVector,
    /// `None` when some criterion is constant.
    pub entropy: Option<WeightVector>,
    pub alternatives: Vec<String>,
    pub labels: Vec<String>,
    pub ranking: RankingResult,
}

impl McdmReport {
    pub fn used_weights(&self) -> &WeightVector {
        match self.weighting {
            Weighting::Equal => &self.equal,
            Weighting::Entropy => self.entropy.as_ref().expect("entropy weights present"),
        }
    }

    /// `criterion,direction,equal_weight,entropy_weight`
    pub fn write_weights_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["criterion", "direction", "equal_weight", "entropy_weight"])?;
        for (j, c) in self.criteria.iter().enumerate() {
            w.write_record([
                c.clone(),
                DIRECTIONS[j].to_string(),
                self.equal.as_slice()[j].to_string(),
                opt(self.entropy.as_ref().map(|e| e.as_slice()[j])),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<weights>", e))?;
        Ok(())
    }

    /// `alternative,experiment,vikor_rank,topsis_rank,promethee_rank,average_rank`
    pub fn write_ranks_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record([
            "alternative",
            "experiment",
            "vikor_rank",
            "topsis_rank",
            "promethee_rank",
            "average_rank",
        ])?;
        let r = &self.ranking;
        for i in 0..self.alternatives.len() {
            w.write_record([
                self.alternatives[i].clone(),
                self.labels[i].clone(),
                r.vikor[i].to_string(),
                r.topsis[i].to_string(),
                r.promethee[i].to_string(),
                format!("{:.4}", r.average[i]),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<ranks>", e))?;
        Ok(())
    }

    /// Alternative with the best average rank.
    pub fn winner(&self) -> &str {
        &self.alternatives[self.ranking.best()]
    }
}

/// Weights the five KPI criteria and ranks every alternative.
pub fn evaluate_mcdm(
    report: &MatrixReport,
    weighting: Weighting,
    config: &RankingConfig,
) -> Result<McdmReport> {
    let matrix = report.decision_matrix()?;
    let entropy = entropy_weights(&matrix);
    let (entropy, weights) = match weighting {
        Weighting::Entropy => {
            let w = entropy?;
            (Some(w.clone()), w)
        }
        Weighting::Equal => (entropy.ok(), equal_weights(matrix.n_criteria())),
    };
    let ranking = rank_all(&matrix, &weights, config)?;
    Ok(McdmReport {
        weighting,
        criteria: matrix.criteria().to_vec(),
        equal: equal_weights(matrix.n_criteria()),
        entropy,
        alternatives: matrix.alternatives().to_vec(),
        labels: report.rows.iter().map(MatrixRow::label).collect(),
        ranking,
    })
}
