use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use rfr_core::analysis::amplitude_spectrum;
use rfr_core::config::{parse_config, parse_kv, parse_override, Command, RunConfig};
use rfr_core::output::{write_outputs, Outcome};
use rfr_core::sweep::{default_workers, ic_map, run_sweep};
use rfr_core::{simulate, Error};

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    /// Stroboscopic series of one run (series.csv).
    Simulate,
    /// Bifurcation diagram over tau_r or da (bifurcation.csv, classes.csv).
    Bifurcate,
    /// Amplitude spectrum of one run, or per axis value with `sweep=true`.
    Spectrum,
    /// Entropy diagram over tau_r or da (entropy.csv).
    Entropy,
    /// Orbit class over a grid of initial conditions (icmap.csv).
    Icmap,
    /// Poincare section of one run (poincare.csv).
    Poincare,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Simulate => Command::Simulate,
            Cmd::Bifurcate => Command::Bifurcate,
            Cmd::Spectrum => Command::Spectrum,
            Cmd::Entropy => Command::Entropy,
            Cmd::Icmap => Command::Icmap,
            Cmd::Poincare => Command::Poincare,
        }
    }
}

/// Reverse-flow tubular reactor: simulation and dynamics diagnostics.
///
/// Settings come from an optional `key = value` file and `--set KEY=VALUE`
/// flags, flags taking precedence. The worker count for sweeps is read from
/// RFR_WORKERS (default: available parallelism).
#[derive(Debug, Parser)]
#[command(name = "rfr", version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,

    /// Configuration file with `key = value` lines.
    #[arg(short, long)]
    config: Option<PathBuf>,

    /// Override a configuration key; repeatable.
    #[arg(short, long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Shorthand for `--set output_dir=DIR`.
    #[arg(short, long)]
    output_dir: Option<PathBuf>,

    /// Shorthand for `--set emit_plots=true`.
    #[arg(long)]
    plots: bool,
}

fn load_config(cli: &Cli) -> Result<RunConfig, Error> {
    let file = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
                key: "config".into(),
                reason: format!("cannot read {}: {e}", path.display()),
            })?;
            parse_kv(&text)?
        }
        None => Vec::new(),
    };
    let mut flags = cli
        .set
        .iter()
        .map(|s| parse_override(s))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(dir) = &cli.output_dir {
        flags.push(("output_dir".into(), dir.display().to_string()));
    }
    if cli.plots {
        flags.push(("emit_plots".into(), "true".into()));
    }
    parse_config(cli.command.into(), &file, &flags)
}

fn run(cfg: &RunConfig) -> Result<Outcome, Error> {
    let workers = default_workers();
    let single = || simulate(cfg.ic.0, cfg.ic.1, &cfg.model, &cfg.grid, &cfg.schedule);
    Ok(match cfg.command {
        Command::Simulate => Outcome::Series(single()?),
        Command::Poincare => Outcome::Poincare(single()?),
        Command::Spectrum => match &cfg.sweep {
            Some(spec) => Outcome::SpectrumSweep(run_sweep(spec, workers)?),
            None => {
                let series = single()?;
                let spectrum = amplitude_spectrum(&series.alpha_out)?;
                Outcome::Spectrum { series, spectrum }
            }
        },
        Command::Bifurcate => Outcome::Bifurcation(run_sweep(cfg.sweep.as_ref().expect("sweep spec"), workers)?),
        Command::Entropy => Outcome::Entropy(run_sweep(cfg.sweep.as_ref().expect("sweep spec"), workers)?),
        Command::Icmap => Outcome::IcMap(ic_map(cfg.icmap.as_ref().expect("icmap spec"), workers)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e @ Error::Config { .. }) | Err(e @ Error::InvalidParam { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("numerical failure: {e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };
    let failed = match &outcome {
        Outcome::Bifurcation(r) | Outcome::Entropy(r) | Outcome::SpectrumSweep(r) => r.failed().count(),
        Outcome::IcMap(r) => r.rows.iter().filter(|row| row.outcome.is_err()).count(),
        _ => 0,
    };
    if failed > 0 {
        eprintln!("warning: {failed} point(s) failed numerically and are marked `failed`");
    }
    match write_outputs(&outcome, &cfg) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error writing outputs: {e}");
            ExitCode::from(EXIT_IO)
        }
    }
}
