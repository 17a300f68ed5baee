//! `kothe`: runs experiment configs and writes `report.json` and `summary.csv`.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report is
//! still written), 2 for unreadable or invalid configs.

mod config;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ConfigError;

#[derive(Parser)]
#[command(name = "kothe", version, about = "Weighted factorization experiments on finite measure spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Power-space norm identities.
    Norm(Common),
    /// Convexity and concavity constant estimates.
    Constants(Common),
    /// Weight certificate, verification and factorization.
    Weight(Common),
    /// Pietsch weights for an operator on ℓ∞^N.
    Pietsch(Common),
    /// Positive functionals dominating a bilinear form.
    Minimax(Common),
    /// Weight certificate for a lifted block operator.
    VvWeight(Common),
    /// Re-check a stored weight certificate.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: `output_dir` from the config, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `solver.seed`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    quiet: bool,
}

impl Command {
    fn parts(&self) -> (&'static str, &Common) {
        match self {
            Command::Norm(c) => ("norm-table", c),
            Command::Constants(c) => ("constants", c),
            Command::Weight(c) => ("weight", c),
            Command::Pietsch(c) => ("pietsch", c),
            Command::Minimax(c) => ("minimax", c),
            Command::VvWeight(c) => ("vv-weight", c),
            Command::Verify(c) => ("verify", c),
        }
    }
}

fn output_dir(common: &Common, configured: Option<&Path>) -> PathBuf {
    if let Some(out) = &common.out {
        return out.clone();
    }
    match configured {
        Some(dir) if dir.is_absolute() => dir.to_path_buf(),
        Some(dir) => common.config.parent().unwrap_or(Path::new(".")).join(dir),
        None => PathBuf::from("out"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (expected, common) = cli.command.parts();
    let prepared = config::load(&common.config).and_then(|mut cfg| {
        let found = cfg.task.name();
        if found != expected {
            return Err(ConfigError::TaskMismatch { path: common.config.clone(), expected, found });
        }
        if let Some(seed) = common.seed {
            cfg.solver.seed = seed;
        }
        config::validate(&cfg, &common.config)?;
        Ok(cfg)
    });
    let cfg = match prepared {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let report = run::run(&cfg);
    let dir = output_dir(common, cfg.output_dir.as_deref());
    let written = std::fs::create_dir_all(&dir)
        .and_then(|()| std::fs::write(dir.join("report.json"), run::report_json(&report)))
        .and_then(|()| {
            let csv = run::summary_csv(&report.summary).map_err(std::io::Error::other)?;
            std::fs::write(dir.join("summary.csv"), csv)
        });
    if let Err(e) = written {
        eprintln!("error: cannot write to {}: {e}", dir.display());
        return ExitCode::from(2);
    }

    if !common.quiet {
        for (entry, row) in report.results.iter().zip(&report.summary) {
            println!("{:<6} {:<40} value {:<24} residual {:e}", entry.status, entry.label, row.value, row.residual);
        }
        println!("{} → {}", if report.passed { "passed" } else { "FAILED" }, dir.display());
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
