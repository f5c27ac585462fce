//! Command line definition and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sentiment_core::{Sign, SimConfig, StopRule, TimeStep};

use crate::commands::{self, format_report};
use crate::io::ConfigOverrides;
use crate::Result;

/// Exit status when a simulation stops at `max_iters` without converging.
pub const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sentiment",
    version,
    about = "Nonlocal reaction-diffusion model of sentiment polarization"
)]
pub struct Cli {
    /// Worker threads (defaults to one per core). Never changes any output.
    #[arg(long, global = true, value_parser = positive_usize)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a symmetric lognormal interaction kernel.
    GenKernel {
        #[command(flatten)]
        config: ConfigArgs,
        /// Kernel seed (same as --seed-kernel).
        #[arg(long)]
        seed: Option<u64>,
        /// CSV output; the PGM rendering is written alongside.
        #[arg(long, default_value = "kernel.csv")]
        out: PathBuf,
    },
    /// Sample a uniform initial sentiment grid.
    GenInit {
        #[command(flatten)]
        config: ConfigArgs,
        /// Grid seed (same as --seed-init).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "init.csv")]
        out: PathBuf,
    },
    /// Integrate to equilibrium and write snapshots, maps, and a manifest.
    Simulate {
        /// Kernel CSV; generated from the seeds when omitted.
        #[arg(long)]
        kernel: Option<PathBuf>,
        /// Initial grid CSV; generated from the seeds when omitted.
        #[arg(long)]
        init: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// End state without interaction (sign of each entry).
    Baseline {
        #[arg(long)]
        init: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// sign(final) − sign(initial) per pixel.
    Diffmap {
        #[arg(long)]
        initial: PathBuf,
        #[arg(long = "final")]
        final_grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print sums, flip counts, and the polarity class.
    Report {
        #[arg(long)]
        initial: PathBuf,
        #[arg(long = "final")]
        final_grid: PathBuf,
    },
    /// Find the single initial sign flip that moves the equilibrium most.
    Sensitivity {
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[arg(long)]
        init: Option<PathBuf>,
        #[command(flatten)]
        config: ConfigArgs,
        /// Deviation table CSV.
        #[arg(long, default_value = "sensitivity.csv")]
        out: PathBuf,
    },
}

/// Config file plus per-key overrides.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// `key = value` config file; flags take precedence over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = positive_usize)]
    pub n: Option<usize>,
    #[arg(long)]
    pub extra: Option<usize>,
    #[arg(long, value_parser = finite_f64)]
    pub mu: Option<f64>,
    #[arg(long, value_parser = positive_f64, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    /// Time step, or `auto`.
    #[arg(long, value_parser = parse_from_str::<TimeStep>)]
    pub dt: Option<TimeStep>,
    #[arg(long, value_parser = positive_f64)]
    pub eps: Option<f64>,
    #[arg(long, value_parser = positive_usize)]
    pub max_iters: Option<usize>,
    /// `diffusive` or `paper_literal`.
    #[arg(long, value_parser = parse_from_str::<Sign>)]
    pub sign: Option<Sign>,
    #[arg(long)]
    pub snapshot_every: Option<usize>,
    #[arg(long)]
    pub seed_kernel: Option<u64>,
    #[arg(long)]
    pub seed_init: Option<u64>,
    #[arg(long)]
    pub symmetrize_offsets: bool,
    /// `rate` (change per unit time) or `update` (change per iteration).
    #[arg(long, value_parser = parse_from_str::<StopRule>)]
    pub convergence: Option<StopRule>,
}

impl ConfigArgs {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            n: self.n,
            extra: self.extra,
            mu: self.mu,
            sigma: self.sigma,
            dt: self.dt,
            eps: self.eps,
            max_iters: self.max_iters,
            sign: self.sign,
            snapshot_every: self.snapshot_every,
            seed_kernel: self.seed_kernel,
            seed_init: self.seed_init,
            symmetrize_offsets: self.symmetrize_offsets.then_some(true),
            convergence: self.convergence,
        }
    }

    pub fn resolve(&self) -> Result<SimConfig> {
        commands::resolve_config(self.config.as_deref(), &self.overrides())
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn finite_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, got {s:?}")),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match finite_f64(s) {
        Ok(v) if v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn parse_from_str<T>(s: &str) -> Result<T, String>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| e.to_string())
}

fn print_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

/// Runs one subcommand, returning the process exit status.
pub fn run(command: &Command) -> Result<u8> {
    match command {
        Command::GenKernel { config, seed, out } => {
            let mut cfg = config.resolve()?;
            if let Some(seed) = seed {
                cfg.seed_kernel = *seed;
            }
            print_written(&commands::cmd_gen_kernel(&cfg, out)?);
        }
        Command::GenInit { config, seed, out } => {
            let mut cfg = config.resolve()?;
            if let Some(seed) = seed {
                cfg.seed_init = *seed;
            }
            print_written(&commands::cmd_gen_init(&cfg, out)?);
        }
        Command::Simulate {
            kernel,
            init,
            config,
            out,
        } => {
            let cfg = config.resolve()?;
            let outcome = commands::cmd_simulate(kernel.as_deref(), init.as_deref(), &cfg, out)?;
            let m = &outcome.manifest;
            println!("{}", m.summary());
            println!("converged = {} (dt = {})", m.converged, m.dt);
            println!("classification = {}", m.classification);
            println!("outputs in {}", outcome.out_dir.display());
            if !m.converged {
                eprintln!("no convergence within max_iters = {}", m.config.max_iters);
                return Ok(EXIT_NOT_CONVERGED);
            }
        }
        Command::Baseline { init, out } => print_written(&commands::cmd_baseline(init, out)?),
        Command::Diffmap {
            initial,
            final_grid,
            out,
        } => {
            let report = commands::cmd_diffmap(initial, final_grid, out)?;
            print!("{}", format_report(&report));
        }
        Command::Report { initial, final_grid } => {
            print!("{}", format_report(&commands::cmd_report(initial, final_grid)?));
        }
        Command::Sensitivity {
            kernel,
            init,
            config,
            out,
        } => {
            let cfg = config.resolve()?;
            let scan = commands::cmd_sensitivity(kernel.as_deref(), init.as_deref(), &cfg, out)?;
            match scan.argmax() {
                Some(((row, col), dev)) => println!("argmax = ({row}, {col})\ndeviation = {dev}"),
                None => println!("argmax = none (every perturbed run failed)"),
            }
            println!("wrote {}", out.display());
        }
    }
    Ok(0)
}
