use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use h2heat::market::{load_hourly_series, ColumnSchema};
use h2heat::report::{evaluate_mcdm, MatrixReport, Weighting};
use h2heat::simulation::Scenario;
use h2heat::study::series_digest;
use h2heat::{Config, Error, ExperimentConfig, Result, Study};

#[derive(Parser)]
#[command(name = "h2heat", version, about = "Electrolyzer hydrogen and excess-heat simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// TOML configuration; defaults reproduce the 12 MW reference plant.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Hourly spot price CSV (may also carry weather columns).
    #[arg(long)]
    prices: Option<PathBuf>,
    /// Hourly weather CSV for the renewable scenario.
    #[arg(long)]
    weather: Option<PathBuf>,
    /// Use seeded synthetic prices and weather instead of CSV files.
    #[arg(long, value_name = "SEED", conflicts_with_all = ["prices", "weather"])]
    synthetic: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one experiment and write its hourly ledger.
    Run {
        #[command(flatten)]
        common: Common,
        /// 1 grid/constant, 2 grid/flexible, 3 renewable park.
        #[arg(long)]
        scenario: u8,
        /// Sell recovered heat to district heating.
        #[arg(long)]
        heat: bool,
        /// Hydrogen sale price, EUR/kg.
        #[arg(long = "h2-price")]
        h2_price: f64,
    },
    /// Run every experiment at every configured hydrogen price.
    Matrix {
        #[command(flatten)]
        common: Common,
        /// Restrict to one hydrogen price.
        #[arg(long = "h2-price")]
        h2_price: Option<f64>,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Weight and rank the alternatives of a KPI matrix.
    Mcdm {
        /// KPI matrix CSV as written by `matrix`.
        matrix: PathBuf,
        #[arg(long, default_value = "entropy")]
        weighting: Weighting,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Drop alternatives that never produce (undefined LCoH) instead of failing.
        #[arg(long)]
        skip_undefined: bool,
    },
    /// Search the hydrogen price that minimizes LCoH under flexible dispatch.
    Optimize {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        heat: bool,
        #[arg(long)]
        lower: Option<f64>,
        #[arg(long)]
        upper: Option<f64>,
        #[arg(long)]
        resolution: Option<f64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check input CSVs and report coverage and gaps.
    ValidateData {
        #[arg(long)]
        prices: Option<PathBuf>,
        #[arg(long)]
        weather: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

fn study(common: &Common) -> Result<Study> {
    let mut config = load_config(common.config.as_deref())?;
    if let Some(seed) = common.synthetic {
        return Study::synthetic(config, seed);
    }
    if common.prices.is_some() {
        config.data.prices = common.prices.clone();
    }
    if common.weather.is_some() {
        config.data.weather = common.weather.clone();
    }
    Study::load(config)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn write_summary(dir: &Path, value: serde_json::Value) -> Result<()> {
    let mut w = create(dir, "summary.json")?;
    serde_json::to_writer_pretty(&mut w, &value)?;
    Ok(())
}

fn pool(jobs: Option<usize>) -> Result<()> {
    if let Some(n) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Run {
            common,
            scenario,
            heat,
            h2_price,
        } => {
            let scenario = Scenario::try_from(scenario)?;
            let s = study(&common)?;
            let exp = ExperimentConfig::new(scenario, heat, h2_price);
            let out = s.run(&exp)?;
            let name = format!("ledger_{}_{}.csv", exp.experiment(), h2_price);
            out.ledger.write_csv(create(&common.out, &name)?)?;
            write_summary(
                &common.out,
                json!({
                    "experiment": exp.experiment(),
                    "hydrogen_price": h2_price,
                    "kpis": out.kpis,
                    "ledger": name,
                    "provenance": s.provenance(),
                }),
            )?;
            println!("{}", serde_json::to_string_pretty(&out.kpis)?);
        }
        Command::Matrix {
            common,
            h2_price,
            jobs,
        } => {
            pool(jobs)?;
            let s = study(&common)?;
            let report = s.run_matrix(h2_price)?;
            report.write_csv(create(&common.out, "kpi_matrix.csv")?)?;
            write_summary(
                &common.out,
                json!({ "rows": report.rows, "provenance": report.provenance }),
            )?;
            println!("{} experiments -> {}", report.rows.len(), common.out.join("kpi_matrix.csv").display());
        }
        Command::Mcdm {
            matrix,
            weighting,
            config,
            out,
            skip_undefined,
        } => {
            let config = load_config(config.as_deref())?;
            let file = File::open(&matrix).map_err(|e| Error::io(&matrix, e))?;
            let mut report = MatrixReport::from_csv(file)?;
            if skip_undefined {
                let (kept, dropped) = report.without_undefined_lcoh();
                if !dropped.is_empty() {
                    eprintln!("skipped (no production): {}", dropped.join(", "));
                }
                report = kept;
            }
            let result = evaluate_mcdm(&report, weighting, &config.mcdm)?;
            result.write_weights_csv(create(&out, "weights.csv")?)?;
            result.write_ranks_csv(create(&out, "ranks.csv")?)?;
            write_summary(&out, json!({ "mcdm": result, "winner": result.winner() }))?;
            println!("best alternative ({weighting} weights): {}", result.winner());
        }
        Command::Optimize {
            common,
            heat,
            lower,
            upper,
            resolution,
            jobs,
        } => {
            pool(jobs)?;
            let s = study(&common)?;
            let mut spec = s.config.optimizer;
            spec.heat_sale = heat;
            spec.price_lower = lower.unwrap_or(spec.price_lower);
            spec.price_upper = upper.unwrap_or(spec.price_upper);
            spec.resolution = resolution.unwrap_or(spec.resolution);
            let result = s.optimize(&spec)?;
            result.write_trace(create(&common.out, "opt_trace.csv")?)?;
            write_summary(
                &common.out,
                json!({
                    "search": spec,
                    "optimal_price": result.optimal_price,
                    "lcoh_at_optimum": result.lcoh_at_optimum,
                    "yearly_hydrogen_t": result.yearly_hydrogen,
                    "yearly_hours": result.yearly_hours,
                    "boundary_optimum": result.boundary,
                    "evaluations": result.trace.len(),
                    "provenance": s.provenance(),
                }),
            )?;
            println!(
                "optimal price {:.3} EUR/kg, LCoH {:.3} EUR/kg{}",
                result.optimal_price,
                result.lcoh_at_optimum,
                if result.boundary { " (at search bound)" } else { "" }
            );
        }
        Command::ValidateData { prices, weather } => {
            if prices.is_none() && weather.is_none() {
                return Err(Error::Config("give --prices and/or --weather".into()));
            }
            let mut files = Vec::new();
            for (path, schema) in [
                (prices, ColumnSchema::default()),
                (weather, ColumnSchema::weather()),
            ] {
                let Some(path) = path else { continue };
                let series = load_hourly_series(&path, &schema)?;
                let cov = series.coverage();
                files.push(json!({
                    "path": path,
                    "sha256": series_digest(&series),
                    "first": cov.first,
                    "last": cov.last,
                    "rows": cov.count,
                    "gap_hours": cov.gap_hours,
                    "has_weather": series.has_weather(),
                }));
            }
            println!("{}", serde_json::to_string_pretty(&files)?);
        }
    }
    Ok(())
}
