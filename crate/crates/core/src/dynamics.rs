//! Reaction, nonlocal operator, and explicit time stepping.

use alloc::vec::Vec;

use crate::config::{Sign, SimConfig, StopRule, TimeStep};
use crate::grid::{max_abs_diff, SentimentGrid};
use crate::kernel::OffsetWeights;
use crate::{Error, Result};

/// Iterates with an entry beyond this magnitude are treated as diverged.
pub const DIVERGENCE_BOUND: f64 = 10.0;

/// Derivative of the double-well potential, `p³ − p`.
#[inline]
pub fn reaction(p: f64) -> f64 {
    p * p * p - p
}

/// Double-well potential `¼(p² − 1)²`, zero at `p = ±1`.
#[inline]
pub fn potential(p: f64) -> f64 {
    let a = p * p - 1.0;
    0.25 * a * a
}

/// `out[x] = Σ_y w(x − y)·(row[y] − row[x])`, with `y` ascending.
#[inline]
pub fn nonlocal_row(row: &[f64], w: &OffsetWeights, out: &mut [f64]) {
    let n = row.len();
    let w = w.as_slice();
    for (x, o) in out.iter_mut().enumerate() {
        let px = row[x];
        // w(x - y) lives at index x - y + n - 1
        let window = &w[x..x + n];
        let mut acc = 0.0;
        for (y, &py) in row.iter().enumerate() {
            acc += window[n - 1 - y] * (py - px);
        }
        *o = acc;
    }
}

/// Applies the nonlocal operator to every row of `grid`. Output is row-major.
pub fn nonlocal_term(grid: &SentimentGrid, w: &OffsetWeights) -> Result<Vec<f64>> {
    check_dims(grid, w)?;
    let n = grid.n();
    let mut out = alloc::vec![0.0; n * n];
    for (row, o) in grid.rows().zip(out.chunks_exact_mut(n)) {
        nonlocal_row(row, w, o);
    }
    Ok(out)
}

/// Time step `0.9 / (S + 2)` where `S = Σ_d w(d)`.
///
/// `S` bounds every row sum of the operator and 2 bounds `|f'(p)|` on
/// `[-1, 1]`, so with this step each update is a contraction that keeps
/// iterates inside `[-1, 1]`.
pub fn stable_dt(w: &OffsetWeights) -> f64 {
    0.9 / (w.total() + 2.0)
}

/// One forward Euler update of a single row.
#[inline]
pub fn euler_row(row: &[f64], w: &OffsetWeights, dt: f64, sign: Sign, out: &mut [f64]) {
    nonlocal_row(row, w, out);
    let s = sign.factor();
    for (o, &p) in out.iter_mut().zip(row) {
        *o = p + dt * (s * *o - reaction(p));
    }
}

/// Strategy for applying a per-row kernel across a row-major grid.
///
/// Implementations may process rows in any order or concurrently, but each
/// row must be produced by exactly one call of `f`, so results do not depend
/// on the executor.
pub trait RowExecutor: Sync {
    fn map_rows(&self, n: usize, input: &[f64], out: &mut [f64], f: &(dyn Fn(&[f64], &mut [f64]) + Sync));
}

/// Processes rows in order on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl RowExecutor for Sequential {
    fn map_rows(&self, n: usize, input: &[f64], out: &mut [f64], f: &(dyn Fn(&[f64], &mut [f64]) + Sync)) {
        for (row, o) in input.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
            f(row, o);
        }
    }
}

fn check_dims(grid: &SentimentGrid, w: &OffsetWeights) -> Result<()> {
    if grid.n() != w.n() {
        return Err(Error::DimensionMismatch {
            left: grid.n(),
            right: w.n(),
        });
    }
    Ok(())
}

fn check_dt(dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidConfig("dt must be positive"));
    }
    Ok(())
}

fn step_into<E: RowExecutor + ?Sized>(
    exec: &E,
    current: &[f64],
    next: &mut [f64],
    w: &OffsetWeights,
    dt: f64,
    sign: Sign,
    iteration: usize,
) -> Result<()> {
    let n = w.n();
    exec.map_rows(n, current, next, &|row, out| euler_row(row, w, dt, sign, out));
    match next.iter().position(|v| !v.is_finite() || v.abs() > DIVERGENCE_BOUND) {
        Some(k) => Err(Error::Diverged {
            iteration,
            row: k / n,
            col: k % n,
            value: next[k],
        }),
        None => Ok(()),
    }
}

/// `p + dt·(σ·L(p) − f(p))`, entrywise.
pub fn euler_step(grid: &SentimentGrid, w: &OffsetWeights, dt: f64, sign: Sign) -> Result<SentimentGrid> {
    euler_step_with(&Sequential, grid, w, dt, sign)
}

pub fn euler_step_with<E: RowExecutor + ?Sized>(
    exec: &E,
    grid: &SentimentGrid,
    w: &OffsetWeights,
    dt: f64,
    sign: Sign,
) -> Result<SentimentGrid> {
    check_dims(grid, w)?;
    check_dt(dt)?;
    let n = grid.n();
    let mut next = alloc::vec![0.0; n * n];
    step_into(exec, grid.values(), &mut next, w, dt, sign, 1)?;
    Ok(SentimentGrid::from_raw(n, next))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub final_grid: SentimentGrid,
    pub iterations: usize,
    pub converged: bool,
    /// Resolved time step.
    pub dt: f64,
    /// `max |P(k) − P(k−1)|` of the last step taken.
    pub last_change: f64,
    /// `(iteration, grid)` pairs, strictly increasing; always ends with the
    /// final state.
    pub snapshots: Vec<(usize, SentimentGrid)>,
    pub initial_sum: f64,
    pub final_sum: f64,
}

pub fn resolve_dt(cfg: &SimConfig, w: &OffsetWeights) -> f64 {
    match cfg.dt {
        TimeStep::Auto => stable_dt(w),
        TimeStep::Fixed(dt) => dt,
    }
}

/// Iterates [`euler_step`] until the change between consecutive iterates,
/// measured per `cfg.stop_rule`, drops below `cfg.eps`, or `cfg.max_iters`
/// steps have been taken.
///
/// Running out of iterations is reported through `converged = false`;
/// divergence is an error.
pub fn run_to_equilibrium(grid0: &SentimentGrid, w: &OffsetWeights, cfg: &SimConfig) -> Result<RunResult> {
    run_to_equilibrium_with(&Sequential, grid0, w, cfg)
}

pub fn run_to_equilibrium_with<E: RowExecutor + ?Sized>(
    exec: &E,
    grid0: &SentimentGrid,
    w: &OffsetWeights,
    cfg: &SimConfig,
) -> Result<RunResult> {
    cfg.validate()?;
    check_dims(grid0, w)?;
    let dt = resolve_dt(cfg, w);
    check_dt(dt)?;
    let n = grid0.n();
    let threshold = match cfg.stop_rule {
        StopRule::Rate => cfg.eps * dt,
        StopRule::Update => cfg.eps,
    };

    let mut current = grid0.values().to_vec();
    let mut next = alloc::vec![0.0; n * n];
    let mut snapshots = Vec::new();
    let mut converged = false;
    let mut last_change = 0.0;
    let mut iterations = 0;

    for k in 1..=cfg.max_iters {
        step_into(exec, &current, &mut next, w, dt, cfg.sign, k)?;
        last_change = max_abs_diff(&current, &next);
        core::mem::swap(&mut current, &mut next);
        iterations = k;
        if cfg.snapshot_every > 0 && k % cfg.snapshot_every == 0 {
            snapshots.push((k, SentimentGrid::from_raw(n, current.clone())));
        }
        if last_change < threshold {
            converged = true;
            break;
        }
    }

    let final_grid = SentimentGrid::from_raw(n, current);
    if snapshots.last().map(|(k, _)| *k) != Some(iterations) {
        snapshots.push((iterations, final_grid.clone()));
    }
    Ok(RunResult {
        initial_sum: crate::analysis::sentiment_sum(grid0),
        final_sum: crate::analysis::sentiment_sum(&final_grid),
        final_grid,
        iterations,
        converged,
        dt,
        last_change,
        snapshots,
    })
}

/// Long-time limit of `dp/dt = p − p³` from each entry: `+1`, `−1`, or `0`.
pub fn baseline_no_interaction(grid0: &SentimentGrid) -> SentimentGrid {
    let values = grid0
        .values()
        .iter()
        .map(|&v| f64::from(crate::analysis::sign_of(v)))
        .collect();
    SentimentGrid::from_raw(grid0.n(), values)
}
