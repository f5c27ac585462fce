//! Difference maps, polarity summaries, energy, and the single-flip
//! sensitivity scan.

use alloc::vec::Vec;
use core::fmt;

use crate::config::SimConfig;
use crate::dynamics::{potential, run_to_equilibrium};
use crate::grid::SentimentGrid;
use crate::kernel::OffsetWeights;
use crate::{Error, Result};

/// `+1`, `-1`, or `0` for an exact zero (either sign of zero).
#[inline]
pub fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Per-pixel `sign(final) − sign(initial)`, each entry in `{-2, …, 2}`.
///
/// `±2` marks a pixel that switched wells; `±1` only appears when one side
/// was exactly zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffGrid {
    n: usize,
    values: Vec<i8>,
}

impl DiffGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.values[row * self.n + col]
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i8]> {
        self.values.chunks_exact(self.n)
    }

    pub fn count(&self, value: i8) -> usize {
        self.values.iter().filter(|&&v| v == value).count()
    }
}

fn same_side(a: &SentimentGrid, b: &SentimentGrid) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

pub fn difference_map(initial: &SentimentGrid, final_grid: &SentimentGrid) -> Result<DiffGrid> {
    same_side(initial, final_grid)?;
    let values = initial
        .values()
        .iter()
        .zip(final_grid.values())
        .map(|(&a, &b)| sign_of(b) - sign_of(a))
        .collect();
    Ok(DiffGrid { n: initial.n(), values })
}

/// Entrywise sum in row-major order.
pub fn sentiment_sum(grid: &SentimentGrid) -> f64 {
    grid.values().iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    DominantPositive,
    DominantNegative,
    Mixed,
    Unchanged,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::DominantPositive => "dominant_positive",
            Polarity::DominantNegative => "dominant_negative",
            Polarity::Mixed => "mixed",
            Polarity::Unchanged => "unchanged",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolarityReport {
    pub initial_sum: f64,
    pub final_sum: f64,
    /// Pixels that moved from negative to positive (`diff = +2`).
    pub count_pos_flip: usize,
    pub count_neg_flip: usize,
    pub count_unchanged: usize,
    pub classification: Polarity,
}

/// Mixed polarity needs more than `1 / MIXED_FRACTION_DENOM` of the pixels
/// flipping in each direction.
const MIXED_FRACTION_DENOM: usize = 20;

pub fn polarity_report(initial: &SentimentGrid, final_grid: &SentimentGrid) -> Result<PolarityReport> {
    let diff = difference_map(initial, final_grid)?;
    let total = diff.n() * diff.n();
    let pos = diff.count(2);
    let neg = diff.count(-2);
    let initial_sum = sentiment_sum(initial);
    let final_sum = sentiment_sum(final_grid);
    let classification = if pos == 0 && neg == 0 {
        Polarity::Unchanged
    } else if pos * MIXED_FRACTION_DENOM > total && neg * MIXED_FRACTION_DENOM > total {
        Polarity::Mixed
    } else if final_sum > initial_sum {
        Polarity::DominantPositive
    } else {
        Polarity::DominantNegative
    };
    Ok(PolarityReport {
        initial_sum,
        final_sum,
        count_pos_flip: pos,
        count_neg_flip: neg,
        count_unchanged: diff.count(0),
        classification,
    })
}

/// Nonlocal double-well energy
///
/// ```text
/// E(p) = Σ_i ¼ Σ_{x,y} w(x − y)·(p[i][y] − p[i][x])² + Σ_{i,x} F(p[i][x])
/// ```
///
/// For symmetric `w` the diffusive dynamics is a gradient flow of `E`.
pub fn energy(grid: &SentimentGrid, w: &OffsetWeights) -> Result<f64> {
    if grid.n() != w.n() {
        return Err(Error::DimensionMismatch {
            left: grid.n(),
            right: w.n(),
        });
    }
    let n = grid.n() as isize;
    let mut interaction = 0.0;
    for row in grid.rows() {
        let mut row_sum = 0.0;
        for x in 0..n {
            for y in 0..n {
                let d = row[y as usize] - row[x as usize];
                row_sum += w.get(x - y) * d * d;
            }
        }
        interaction += 0.25 * row_sum;
    }
    let well: f64 = grid.values().iter().map(|&p| potential(p)).sum();
    Ok(interaction + well)
}

/// Sum of absolute entrywise differences.
pub fn l1_distance(a: &SentimentGrid, b: &SentimentGrid) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).sum()
}

/// Result of flipping each initial pixel in turn and re-running to
/// equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityScan {
    n: usize,
    deviations: Vec<Option<f64>>,
    argmax: Option<((usize, usize), f64)>,
}

impl SensitivityScan {
    /// Assembles a scan from a row-major table; `None` marks perturbed runs
    /// that diverged or did not converge.
    pub fn from_table(n: usize, deviations: Vec<Option<f64>>) -> Result<Self> {
        if deviations.len() != n * n {
            return Err(Error::BadShape {
                expected: n * n,
                found: deviations.len(),
            });
        }
        let mut argmax: Option<((usize, usize), f64)> = None;
        for (k, dev) in deviations.iter().enumerate() {
            if let Some(d) = *dev {
                if argmax.is_none_or(|(_, best)| d > best) {
                    argmax = Some(((k / n, k % n), d));
                }
            }
        }
        Ok(Self { n, deviations, argmax })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Pixel with the largest deviation and that deviation. Ties go to the
    /// smallest row, then the smallest column.
    pub fn argmax(&self) -> Option<((usize, usize), f64)> {
        self.argmax
    }

    pub fn deviation(&self, row: usize, col: usize) -> Option<f64> {
        self.deviations[row * self.n + col]
    }

    pub fn table(&self) -> &[Option<f64>] {
        &self.deviations
    }
}

/// Equilibrium from `grid0`; fails if the run does not converge.
pub fn reference_equilibrium(grid0: &SentimentGrid, w: &OffsetWeights, cfg: &SimConfig) -> Result<SentimentGrid> {
    let run = run_to_equilibrium(grid0, w, &no_snapshots(cfg))?;
    if !run.converged {
        return Err(Error::InvalidConfig("reference run did not converge"));
    }
    Ok(run.final_grid)
}

/// L1 distance between `reference` and the equilibrium reached after negating
/// initial pixel `(row, col)`. `None` if that run diverges or stalls.
pub fn flip_deviation(
    grid0: &SentimentGrid,
    w: &OffsetWeights,
    cfg: &SimConfig,
    reference: &SentimentGrid,
    row: usize,
    col: usize,
) -> Option<f64> {
    let flipped = grid0.with_entry(row, col, -grid0.get(row, col)).ok()?;
    match run_to_equilibrium(&flipped, w, &no_snapshots(cfg)) {
        Ok(run) if run.converged => Some(l1_distance(&run.final_grid, reference)),
        _ => None,
    }
}

fn no_snapshots(cfg: &SimConfig) -> SimConfig {
    SimConfig {
        snapshot_every: 0,
        ..cfg.clone()
    }
}

/// Brute-force search for the single initial sign flip that moves the
/// equilibrium furthest (in L1) from the unperturbed one.
pub fn sensitivity_scan(grid0: &SentimentGrid, w: &OffsetWeights, cfg: &SimConfig) -> Result<SensitivityScan> {
    let reference = reference_equilibrium(grid0, w, cfg)?;
    let n = grid0.n();
    let table = (0..n * n)
        .map(|k| flip_deviation(grid0, w, cfg, &reference, k / n, k % n))
        .collect();
    SensitivityScan::from_table(n, table)
}
