use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use levelzero::config::{parse_suites, ConfigError, RunConfig};
use levelzero::suite::{run_suite, Status, SuiteError};

/// Run the verification suites and write `report.json` and `residuals.csv`.
#[derive(Parser, Debug)]
#[command(name = "levelzero", version)]
struct Cli {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated suites: exact, analytic, qkz, kz, trace or all.
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for the report files.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Tolerance for the configured-instance checks.
    #[arg(long)]
    tol: Option<f64>,
}

fn build_config(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = &cli.suite {
        cfg.suites = parse_suites(s)?;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(j) = cli.jobs {
        cfg.set("jobs", &j.to_string())?;
    }
    if let Some(t) = cli.tol {
        cfg.set("tol", &t.to_string())?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(SuiteError::Config(e)) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for c in &report.checks {
        let status = match c.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        };
        let residual = c.residual.map(|r| format!("{r:.2e}")).unwrap_or_else(|| "-".into());
        println!("{status:4}  {:<36} {residual:>9} (tol {:.0e})  {:.1}s", c.id, c.tolerance, c.seconds);
        if c.status == Status::Fail {
            if let Some(n) = &c.note {
                println!("      {n}");
            }
        }
    }
    let s = &report.summary;
    println!("{} checks: {} pass, {} fail, {} skip", s.total, s.pass, s.fail, s.skip);
    if let Err(e) = report.emit(&cfg.out) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    println!("wrote {}", cfg.out.display());
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
