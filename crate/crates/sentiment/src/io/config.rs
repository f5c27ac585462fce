//! `key = value` run configuration files.
//!
//! `#` starts a comment, blank lines are ignored, and every key may appear at
//! most once. Keys left out keep their [`SimConfig::default`] values.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use sentiment_core::{Sign, SimConfig, StopRule, TimeStep};

use crate::{Error, Result};

pub const KEYS: &[&str] = &[
    "n",
    "extra",
    "mu",
    "sigma",
    "dt",
    "eps",
    "max_iters",
    "sign",
    "snapshot_every",
    "seed_kernel",
    "seed_init",
    "symmetrize_offsets",
    "convergence",
];

/// Per-key values that take precedence over a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub n: Option<usize>,
    pub extra: Option<usize>,
    pub mu: Option<f64>,
    pub sigma: Option<f64>,
    pub dt: Option<TimeStep>,
    pub eps: Option<f64>,
    pub max_iters: Option<usize>,
    pub sign: Option<Sign>,
    pub snapshot_every: Option<usize>,
    pub seed_kernel: Option<u64>,
    pub seed_init: Option<u64>,
    pub symmetrize_offsets: Option<bool>,
    pub convergence: Option<StopRule>,
}

impl ConfigOverrides {
    pub fn apply(&self, cfg: &mut SimConfig) {
        macro_rules! set {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { cfg.$target = v.into(); })*
            };
        }
        set!(
            n => n, mu => mu, sigma => sigma, dt => dt, eps => eps, max_iters => max_iters,
            sign => sign, snapshot_every => snapshot_every, seed_kernel => seed_kernel,
            seed_init => seed_init, symmetrize_offsets => symmetrize_offsets, convergence => stop_rule,
        );
        if let Some(extra) = self.extra {
            cfg.extra = Some(extra);
        }
    }
}

pub fn parse_config(path: &Path) -> Result<SimConfig> {
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    parse_config_str(&text, &path.display().to_string())
}

/// Parses config text; `origin` names the source in error messages.
pub fn parse_config_str(text: &str, origin: &str) -> Result<SimConfig> {
    let mut cfg = SimConfig::default();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| Error::Syntax {
                origin: origin.into(),
                line,
            })?;
        if !KEYS.contains(&key) {
            return Err(Error::UnknownKey {
                origin: origin.into(),
                line,
                key: key.into(),
            });
        }
        if !seen.insert(key) {
            return Err(Error::DuplicateKey {
                origin: origin.into(),
                line,
                key: key.into(),
            });
        }
        let bad = || Error::BadValue {
            origin: origin.into(),
            line,
            key: key.into(),
            value: value.into(),
        };
        match key {
            "n" => cfg.n = positive(value).ok_or_else(bad)?,
            "extra" => cfg.extra = Some(value.parse().map_err(|_| bad())?),
            "mu" => cfg.mu = finite(value).ok_or_else(bad)?,
            "sigma" => cfg.sigma = finite(value).filter(|s| *s > 0.0).ok_or_else(bad)?,
            "dt" => cfg.dt = parse(value).ok_or_else(bad)?,
            "eps" => cfg.eps = finite(value).filter(|e| *e > 0.0).ok_or_else(bad)?,
            "max_iters" => cfg.max_iters = positive(value).ok_or_else(bad)?,
            "sign" => cfg.sign = parse(value).ok_or_else(bad)?,
            "snapshot_every" => cfg.snapshot_every = parse(value).ok_or_else(bad)?,
            "seed_kernel" => cfg.seed_kernel = parse(value).ok_or_else(bad)?,
            "seed_init" => cfg.seed_init = parse(value).ok_or_else(bad)?,
            "symmetrize_offsets" => cfg.symmetrize_offsets = parse(value).ok_or_else(bad)?,
            "convergence" => cfg.stop_rule = parse(value).ok_or_else(bad)?,
            _ => unreachable!("key list and match arms disagree"),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse<T: FromStr>(s: &str) -> Option<T> {
    s.parse().ok()
}

fn finite(s: &str) -> Option<f64> {
    parse::<f64>(s).filter(|v| v.is_finite())
}

fn positive(s: &str) -> Option<usize> {
    parse::<usize>(s).filter(|v| *v > 0)
}

/// Renders every key in the file format, with `extra` resolved.
pub fn render_config(cfg: &SimConfig) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: &dyn std::fmt::Display| writeln!(out, "{k} = {v}").unwrap();
    line("n", &cfg.n);
    line("extra", &cfg.extra());
    line("mu", &cfg.mu);
    line("sigma", &cfg.sigma);
    line("dt", &cfg.dt);
    line("eps", &cfg.eps);
    line("max_iters", &cfg.max_iters);
    line("sign", &cfg.sign);
    line("snapshot_every", &cfg.snapshot_every);
    line("seed_kernel", &cfg.seed_kernel);
    line("seed_init", &cfg.seed_init);
    line("symmetrize_offsets", &cfg.symmetrize_offsets);
    line("convergence", &cfg.stop_rule);
    out
}
