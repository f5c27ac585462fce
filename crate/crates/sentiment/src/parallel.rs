//! Rayon-backed executors. Every row and every perturbed run is computed by
//! the same sequential code as in `sentiment-core`, so output does not depend
//! on the thread count.

use rayon::prelude::*;
use sentiment_core::analysis::{flip_deviation, reference_equilibrium};
use sentiment_core::dynamics::RowExecutor;
use sentiment_core::{OffsetWeights, SensitivityScan, SentimentGrid, SimConfig};

/// Grids narrower than this are stepped on the calling thread; the per-step
/// work is too small to pay for a fork-join.
pub const PARALLEL_MIN_ROWS: usize = 48;

#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl RowExecutor for Rayon {
    fn map_rows(&self, n: usize, input: &[f64], out: &mut [f64], f: &(dyn Fn(&[f64], &mut [f64]) + Sync)) {
        if n < PARALLEL_MIN_ROWS {
            for (row, o) in input.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
                f(row, o);
            }
        } else {
            input
                .par_chunks_exact(n)
                .zip(out.par_chunks_exact_mut(n))
                .for_each(|(row, o)| f(row, o));
        }
    }
}

/// [`sentiment_core::sensitivity_scan`] with the perturbed runs spread over
/// the rayon pool.
pub fn par_sensitivity_scan(
    grid0: &SentimentGrid,
    w: &OffsetWeights,
    cfg: &SimConfig,
) -> sentiment_core::Result<SensitivityScan> {
    let reference = reference_equilibrium(grid0, w, cfg)?;
    let n = grid0.n();
    let table = (0..n * n)
        .into_par_iter()
        .map(|k| flip_deviation(grid0, w, cfg, &reference, k / n, k % n))
        .collect();
    SensitivityScan::from_table(n, table)
}
