use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn h2heat(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_h2heat"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn ok(o: &Output) -> String {
    assert!(
        o.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn run_writes_ledger_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = h2heat(
        &["run", "--synthetic", "1", "--scenario", "1", "--heat", "--h2-price", "2.7"],
        dir.path(),
    );
    ok(&o);
    let ledger = fs::read_to_string(dir.path().join("ledger_1.2_2.7.csv")).unwrap();
    assert!(ledger.lines().count() > 8760);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["experiment"], "1.2");
    assert!(summary["kpis"]["lcoh"].as_f64().unwrap() > 0.0);
    assert!(summary["provenance"]["config_sha256"].is_string());
}

#[test]
fn matrix_then_mcdm() {
    let dir = tempfile::tempdir().unwrap();
    ok(&h2heat(&["matrix", "--synthetic", "2", "--jobs", "2"], dir.path()));
    let matrix = dir.path().join("kpi_matrix.csv");
    let text = fs::read_to_string(&matrix).unwrap();
    assert!(text.starts_with("# "), "provenance header first");
    assert_eq!(text.lines().filter(|l| l.starts_with('A')).count(), 24);

    // Synthetic prices leave some flexible cells idle; their LCoH is undefined.
    let strict = h2heat(&["mcdm", matrix.to_str().unwrap()], dir.path());
    assert_eq!(strict.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("LCoH undefined"));

    let o = h2heat(&["mcdm", matrix.to_str().unwrap(), "--skip-undefined"], dir.path());
    let stdout = ok(&o);
    assert!(stdout.contains("best alternative"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped"));
    let ranks = fs::read_to_string(dir.path().join("ranks.csv")).unwrap();
    let ranked = ranks.lines().count() - 1;
    assert!((6..24).contains(&ranked), "{ranked}");
    let weights = fs::read_to_string(dir.path().join("weights.csv")).unwrap();
    assert!(weights.starts_with("criterion,direction,equal_weight,entropy_weight"));
}

#[test]
fn matrix_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    ok(&h2heat(&["matrix", "--synthetic", "4", "--h2-price", "3.5", "--jobs", "1"], a.path()));
    ok(&h2heat(&["matrix", "--synthetic", "4", "--h2-price", "3.5"], b.path()));
    assert_eq!(
        fs::read(a.path().join("kpi_matrix.csv")).unwrap(),
        fs::read(b.path().join("kpi_matrix.csv")).unwrap()
    );
}

#[test]
fn optimize_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(&h2heat(
        &["optimize", "--synthetic", "3", "--heat", "--resolution", "0.1"],
        dir.path(),
    ));
    assert!(stdout.starts_with("optimal price"));
    let trace = fs::read_to_string(dir.path().join("opt_trace.csv")).unwrap();
    assert!(trace.starts_with("price,lcoh,yearly_hours,yearly_tons"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    let p = summary["optimal_price"].as_f64().unwrap();
    assert!((1.0..=6.0).contains(&p));
}

#[test]
fn validate_data_reports_coverage() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("prices.csv");
    fs::write(
        &csv,
        "timestamp,spot_price_eur_mwh\n2015-01-01T00:00:00Z,20.5\n2015-01-01T01:00:00Z,18.0\n2015-01-01T03:00:00Z,17.25\n",
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_h2heat"))
        .args(["validate-data", "--prices"])
        .arg(&csv)
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&ok(&o)).unwrap();
    assert_eq!(v[0]["rows"], 3);
    assert_eq!(v[0]["gap_hours"], 1);
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown scenario.
    let o = h2heat(&["run", "--synthetic", "1", "--scenario", "4", "--h2-price", "2"], dir.path());
    assert!(!o.status.success());
    // Missing price file.
    let o = h2heat(
        &["run", "--prices", "/nonexistent.csv", "--scenario", "1", "--h2-price", "2"],
        dir.path(),
    );
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    // Bad flag.
    let o = h2heat(&["matrix", "--bogus"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}
