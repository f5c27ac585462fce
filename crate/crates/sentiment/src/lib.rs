//! File formats, thread-parallel executors, and the command pipeline for
//! `sentiment-core`.

pub mod cli;
pub mod commands;
mod error;
pub mod io;
pub mod manifest;
pub mod parallel;

pub use error::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;
