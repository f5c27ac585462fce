//! The pipeline behind each subcommand, callable without going through
//! argument parsing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sentiment_core::dynamics::run_to_equilibrium_with;
use sentiment_core::{
    baseline_no_interaction, difference_map, gen_initial_grid, gen_kernel, kernel_offsets, make_rng, polarity_report,
    DiffGrid, ExtendedKernel, PolarityReport, SensitivityScan, SentimentGrid, SimConfig,
};

use crate::io::{self, parse_config, pgm_sibling, ConfigOverrides, PixelMapping};
use crate::manifest::RunManifest;
use crate::parallel::{par_sensitivity_scan, Rayon};
use crate::{Error, Result};

/// Defaults, then the config file (if any), then explicit overrides.
pub fn resolve_config(path: Option<&Path>, overrides: &ConfigOverrides) -> Result<SimConfig> {
    let mut cfg = match path {
        Some(p) => parse_config(p)?,
        None => SimConfig::default(),
    };
    overrides.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

fn write_pair(csv: &Path, width: usize, values: &[f64], mapping: PixelMapping) -> Result<Vec<PathBuf>> {
    let pgm = pgm_sibling(csv);
    io::write_csv(csv, width, values)?;
    io::write_pgm(&pgm, width, values, mapping)?;
    Ok(vec![csv.to_path_buf(), pgm])
}

fn diff_values(diff: &DiffGrid) -> Vec<f64> {
    diff.values().iter().map(|&d| f64::from(d)).collect()
}

pub fn generate_kernel(cfg: &SimConfig) -> Result<ExtendedKernel> {
    Ok(gen_kernel(
        cfg.n,
        cfg.extra(),
        cfg.mu,
        cfg.sigma,
        &mut make_rng(cfg.seed_kernel),
    )?)
}

pub fn generate_init(cfg: &SimConfig) -> Result<SentimentGrid> {
    Ok(gen_initial_grid(cfg.n, &mut make_rng(cfg.seed_init))?)
}

/// Writes the kernel as CSV at `out` plus its PGM rendering alongside.
pub fn cmd_gen_kernel(cfg: &SimConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let kernel = generate_kernel(cfg)?;
    write_pair(out, kernel.t(), kernel.values(), PixelMapping::Kernel)
}

pub fn cmd_gen_init(cfg: &SimConfig, out: &Path) -> Result<Vec<PathBuf>> {
    let grid = generate_init(cfg)?;
    write_pair(out, grid.n(), grid.values(), PixelMapping::Sentiment)
}

/// Reads (or generates, when no path is given) the initial grid and kernel.
/// The returned config has `n` and `extra` set to match the inputs.
pub fn load_inputs(
    kernel: Option<&Path>,
    init: Option<&Path>,
    cfg: &SimConfig,
) -> Result<(SimConfig, ExtendedKernel, SentimentGrid)> {
    let mut cfg = cfg.clone();
    let grid = match init {
        Some(p) => io::read_grid(p)?,
        None => generate_init(&cfg)?,
    };
    cfg.n = grid.n();
    let kernel = match kernel {
        Some(p) => io::read_kernel(p, cfg.n)?,
        None => generate_kernel(&cfg)?,
    };
    cfg.extra = Some(kernel.t() - kernel.n());
    Ok((cfg, kernel, grid))
}

/// Outcome of a simulation; the manifest has already been written.
#[derive(Debug, Clone)]
pub struct SimulateOutcome {
    pub manifest: RunManifest,
    pub out_dir: PathBuf,
}

fn snapshot_name(iteration: usize) -> String {
    format!("phi{iteration:05}.csv")
}

pub fn cmd_simulate(
    kernel: Option<&Path>,
    init: Option<&Path>,
    cfg: &SimConfig,
    out_dir: &Path,
) -> Result<SimulateOutcome> {
    let (cfg, kernel, grid0) = load_inputs(kernel, init, cfg)?;
    let w = kernel_offsets(&kernel, cfg.symmetrize_offsets);
    let run = run_to_equilibrium_with(&Rayon, &grid0, &w, &cfg)?;

    std::fs::create_dir_all(out_dir).map_err(Error::io(out_dir))?;
    let mut files = Vec::new();
    let n = grid0.n();
    let mut emit = |name: &str, width: usize, values: &[f64], mapping: PixelMapping| -> Result<()> {
        files.extend(write_pair(&out_dir.join(name), width, values, mapping)?);
        Ok(())
    };
    emit("kernel.csv", kernel.t(), kernel.values(), PixelMapping::Kernel)?;
    emit(&snapshot_name(0), n, grid0.values(), PixelMapping::Sentiment)?;
    for (k, snap) in &run.snapshots {
        emit(&snapshot_name(*k), n, snap.values(), PixelMapping::Sentiment)?;
    }
    emit("final.csv", n, run.final_grid.values(), PixelMapping::Sentiment)?;
    let baseline = baseline_no_interaction(&grid0);
    emit("baseline.csv", n, baseline.values(), PixelMapping::Sentiment)?;
    let diff = difference_map(&grid0, &run.final_grid)?;
    emit("diff.csv", n, &diff_values(&diff), PixelMapping::DiffMap)?;

    let report = polarity_report(&grid0, &run.final_grid)?;
    let manifest = RunManifest {
        config: cfg,
        dt: run.dt,
        iterations: run.iterations,
        converged: run.converged,
        last_change: run.last_change,
        initial_sum: run.initial_sum,
        final_sum: run.final_sum,
        classification: report.classification,
        files: files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect(),
    };
    let path = out_dir.join("manifest.txt");
    std::fs::write(&path, manifest.render()).map_err(Error::io(&path))?;
    Ok(SimulateOutcome {
        manifest,
        out_dir: out_dir.to_path_buf(),
    })
}

pub fn cmd_baseline(init: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    let grid = io::read_grid(init)?;
    let baseline = baseline_no_interaction(&grid);
    write_pair(out, grid.n(), baseline.values(), PixelMapping::Sentiment)
}

pub fn cmd_diffmap(initial: &Path, final_path: &Path, out: &Path) -> Result<PolarityReport> {
    let a = io::read_grid(initial)?;
    let b = io::read_grid(final_path)?;
    let diff = difference_map(&a, &b)?;
    write_pair(out, diff.n(), &diff_values(&diff), PixelMapping::DiffMap)?;
    Ok(polarity_report(&a, &b)?)
}

pub fn cmd_report(initial: &Path, final_path: &Path) -> Result<PolarityReport> {
    let a = io::read_grid(initial)?;
    let b = io::read_grid(final_path)?;
    Ok(polarity_report(&a, &b)?)
}

pub fn format_report(r: &PolarityReport) -> String {
    let mut out = String::new();
    writeln!(out, "initial_sum = {}", r.initial_sum).unwrap();
    writeln!(out, "final_sum = {}", r.final_sum).unwrap();
    writeln!(out, "count_pos_flip = {}", r.count_pos_flip).unwrap();
    writeln!(out, "count_neg_flip = {}", r.count_neg_flip).unwrap();
    writeln!(out, "count_unchanged = {}", r.count_unchanged).unwrap();
    writeln!(out, "classification = {}", r.classification).unwrap();
    out
}

/// Runs the single-flip scan and writes the deviation table as CSV at `out`
/// (unavailable entries as `NA`).
pub fn cmd_sensitivity(
    kernel: Option<&Path>,
    init: Option<&Path>,
    cfg: &SimConfig,
    out: &Path,
) -> Result<SensitivityScan> {
    let (cfg, kernel, grid0) = load_inputs(kernel, init, cfg)?;
    let w = kernel_offsets(&kernel, cfg.symmetrize_offsets);
    let scan = par_sensitivity_scan(&grid0, &w, &cfg)?;
    let mut text = String::new();
    for row in scan.table().chunks_exact(scan.n()) {
        let cells: Vec<String> = row
            .iter()
            .map(|d| d.map_or_else(|| "NA".to_string(), |v| format!("{v}")))
            .collect();
        text.push_str(&cells.join(","));
        text.push('\n');
    }
    std::fs::write(out, text).map_err(Error::io(out))?;
    Ok(scan)
}
