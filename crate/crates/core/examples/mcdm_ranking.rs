//! Ranks a KPI matrix with VIKOR, TOPSIS and PROMETHEE II under equal and
//! entropy weights. Reads a matrix CSV if given, else the bundled one.

use std::fs::File;

use h2heat::mcdm::RankingConfig;
use h2heat::report::{evaluate_mcdm, MatrixReport, Weighting};

fn main() -> h2heat::Result<()> {
    let report = match std::env::args().nth(1) {
        Some(p) => MatrixReport::from_csv(File::open(&p).map_err(|e| h2heat::Error::io(&p, e))?)?,
        None => MatrixReport::from_csv(&include_bytes!("../data/kpi_matrix_golden.csv")[..])?,
    };
    let (report, skipped) = report.without_undefined_lcoh();
    if !skipped.is_empty() {
        eprintln!("no production, left out: {}", skipped.join(", "));
    }

    for weighting in [Weighting::Equal, Weighting::Entropy] {
        let r = evaluate_mcdm(&report, weighting, &RankingConfig::default())?;
        let w: Vec<String> = r.used_weights().as_slice().iter().map(|x| format!("{x:.4}")).collect();
        println!("{weighting} weights [{}]", w.join(", "));
        let mut order: Vec<usize> = (0..r.alternatives.len()).collect();
        order.sort_by(|&a, &b| r.ranking.average[a].total_cmp(&r.ranking.average[b]).then(a.cmp(&b)));
        for &i in order.iter().take(5) {
            println!(
                "  {:<4} {:<12} vikor {:>4} topsis {:>4} promethee {:>4}  avg {:.2}",
                r.alternatives[i],
                r.labels[i],
                r.ranking.vikor[i],
                r.ranking.topsis[i],
                r.ranking.promethee[i],
                r.ranking.average[i]
            );
        }
    }
    Ok(())
}
