//! Plain-text run report written next to a simulation's outputs.

use std::fmt::Write as _;

use sentiment_core::{Polarity, SimConfig};

use crate::io::render_config;

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub config: SimConfig,
    pub dt: f64,
    pub iterations: usize,
    pub converged: bool,
    pub last_change: f64,
    pub initial_sum: f64,
    pub final_sum: f64,
    pub classification: Polarity,
    /// Output files, relative to the run directory.
    pub files: Vec<String>,
}

impl RunManifest {
    /// The first block is a valid config file reproducing the run.
    pub fn render(&self) -> String {
        let mut out = String::from("# resolved configuration\n");
        out.push_str(&render_config(&self.config));
        out.push_str("\n# run\n");
        let mut kv = |k: &str, v: &dyn std::fmt::Display| writeln!(out, "{k} = {v}").unwrap();
        kv("dt_resolved", &self.dt);
        kv("iterations", &self.iterations);
        kv("converged", &self.converged);
        kv("last_change", &self.last_change);
        kv("initial_sum", &self.initial_sum);
        kv("final_sum", &self.final_sum);
        kv("classification", &self.classification);
        kv("summary", &self.summary());
        kv("files", &self.files.join(", "));
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "sum of initial sentiment {:.3} vs. sum of final sentiment {:.3} after {} iterations",
            self.initial_sum, self.final_sum, self.iterations
        )
    }
}
