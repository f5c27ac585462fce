//! Nonlocal bistable reaction-diffusion engine for modeling sentiment change.
//!
//! A population's answers to a questionnaire live on an `n × n` [`SentimentGrid`]
//! (rows are individuals, columns are questions). Each row evolves under
//!
//! ```text
//! dp/dt = σ · Σ_y W(x − y) (p(y) − p(x)) − (p³ − p)
//! ```
//!
//! where `W` is an effective offset kernel reduced from a random, symmetric,
//! lognormal [`ExtendedKernel`] and `p³ − p` is the derivative of the double-well
//! potential `¼(p² − 1)²`. Integration is explicit (forward Euler) until the
//! change between iterates falls below a tolerance.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line and
//! thread-parallel executors live in the companion `sentiment-sim` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod config;
pub mod dynamics;
mod error;
pub mod grid;
pub mod kernel;
pub mod rng;

pub use analysis::{
    difference_map, energy, polarity_report, sensitivity_scan, sentiment_sum, sign_of, DiffGrid, Polarity,
    PolarityReport, SensitivityScan,
};
pub use config::{Sign, SimConfig, StopRule, TimeStep};
pub use dynamics::{
    baseline_no_interaction, euler_step, nonlocal_term, potential, reaction, run_to_equilibrium, stable_dt,
    RowExecutor, RunResult, Sequential,
};
pub use error::Error;
pub use grid::{gen_initial_grid, SentimentGrid};
pub use kernel::{gen_kernel, kernel_offsets, ExtendedKernel, OffsetWeights};
pub use rng::{make_rng, RngStream};

pub type Result<T, E = Error> = core::result::Result<T, E>;
