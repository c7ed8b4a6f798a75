//! All 24 experiments (3 scenarios x heat on/off x 4 hydrogen prices) as a CSV
//! on stdout, provenance header included.

use h2heat::{Config, Study};

fn main() -> h2heat::Result<()> {
    let study = Study::synthetic(Config::default(), 7)?;
    let report = study.run_matrix(None)?;
    report.write_csv(std::io::stdout().lock())
}
