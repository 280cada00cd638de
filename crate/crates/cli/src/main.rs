use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use e2e_cli::config::{load_config, ModelName, ScanConfig};
use e2e_cli::validate::{run_suites, Formulas, ValidateOptions};
use e2e_cli::{output, report, scan, simulate, CliError};

#[derive(Parser)]
#[command(name = "e2e-spin", version, about = "Spin entanglement in electron-impact ionization of hydrogen")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON configuration; every field has a default.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
    /// Overrides the configured model (pwba or c3).
    #[arg(long)]
    model: Option<ModelName>,
    /// Overrides the Monte Carlo master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Report every observable at one pair of angles.
    Point {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        theta_a: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta_b: f64,
    },
    /// Sweep the (thetaA, thetaB) grid and write CSV and PGM files.
    Scan {
        #[command(flatten)]
        common: Common,
    },
    /// Simulate a finite-statistics CHSH measurement at one point.
    BellSim {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        theta_a: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta_b: f64,
        /// Coincidences per detector setting.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Run all cross-check suites.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Random cases per suite.
        #[arg(long, default_value_t = 10_000)]
        cases: usize,
        /// Skip the Monte Carlo free-limit suite.
        #[arg(long)]
        no_mc: bool,
    },
}

fn load(common: &Common) -> Result<ScanConfig, CliError> {
    let mut cfg = match &common.config {
        Some(p) => load_config(p)?,
        None => ScanConfig::default(),
    };
    if let Some(m) = common.model {
        cfg.model = m;
    }
    if let Some(s) = common.seed {
        cfg.mc.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn pool(workers: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = workers {
        if n == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("workers: {e}")))?;
    }
    Ok(())
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Point { common, theta_a, theta_b } => {
            pool(common.workers)?;
            let cfg = load(&common)?;
            print_json(&report::point_report(&cfg, theta_a, theta_b)?);
        }
        Command::Scan { common } => {
            let cfg = load(&common)?;
            let result = scan::run_scan(&cfg, common.workers)?;
            let files = output::write_all(&result, &common.output_dir, &cfg.output.csv, &cfg.output.pgm_prefix)?;
            let measurable = result.records.iter().filter(|r| r.measurable).count();
            eprintln!(
                "{} points ({} measurable), max TDCS {:e} a.u.",
                result.records.len(),
                measurable,
                result.max_tdcs()
            );
            for f in files {
                println!("{}", f.display());
            }
        }
        Command::BellSim { common, theta_a, theta_b, samples } => {
            pool(common.workers)?;
            let cfg = load(&common)?;
            print_json(&simulate::bell_sim(&cfg, theta_a, theta_b, samples, cfg.mc.seed)?);
        }
        Command::Validate { common, cases, no_mc } => {
            pool(common.workers)?;
            let cfg = load(&common)?;
            let opts = ValidateOptions { cases, seed: cfg.mc.seed, monte_carlo: !no_mc, ..Default::default() };
            let results = run_suites(&Formulas::default(), &opts);
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                return Err(CliError::Validation(format!("{failed} of {} suites failed", results.len())));
            }
            println!("all {} suites passed", results.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
