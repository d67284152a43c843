use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use wfem::config::RunOptions;
use wfem_core::benchmark::{preflight, run_convergence_study, study};

#[derive(Parser)]
#[command(name = "wfem", version, about = "Weighted finite elements for Navier-Stokes flow past a reentrant corner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convergence study on one benchmark corner.
    Run {
        /// TOML file with the same keys as the flags.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        opts: RunOptions,
    },
    /// Property checks of the exact solutions and the assembled blocks.
    Verify,
    /// Mesh and MatrixMarket blocks of a single level.
    Dump {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Mesh step.
        #[arg(long)]
        h: f64,
        #[command(flatten)]
        opts: RunOptions,
    },
}

fn merged(config: Option<PathBuf>, opts: RunOptions) -> Result<RunOptions> {
    Ok(match config {
        Some(p) => opts.over(RunOptions::load(&p)?),
        None => opts,
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, opts } => {
            let opts = merged(config, opts)?;
            let cfg = opts.study()?;
            let report = run_convergence_study(&cfg, |c| {
                eprintln!(
                    "h={:.4e} dofs={}+{} error={} {}",
                    c.h,
                    c.velocity_dofs,
                    c.pressure_dofs,
                    c.error.map_or("-".into(), |e| format!("{e:.4e}")),
                    c.failure.as_deref().unwrap_or("")
                )
            })?;
            wfem::io::write_study(&opts.out_dir(), &report)?;
            print!("{}", study::render_markdown(&report));
            Ok(report.cells.iter().all(|c| c.failure.is_none()))
        }
        Command::Verify => {
            let checks = preflight()?;
            let mut ok = true;
            for c in &checks {
                ok &= c.passed();
                println!("{} {:<40} {:.3e} (< {:.0e})", if c.passed() { "PASS" } else { "FAIL" }, c.name, c.value, c.tolerance);
            }
            Ok(ok)
        }
        Command::Dump { config, h, opts } => {
            let opts = merged(config, opts)?;
            let dir = opts.out_dir();
            wfem::dump_level(&opts.study()?, h, &dir)?;
            println!("wrote {}", dir.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
