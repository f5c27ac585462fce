//! Run parameters.

use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// Sign in front of the nonlocal term in the rate `σ·L(p) − f(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sign {
    /// `σ = +1`: the kernel smooths differences (standard diffusion).
    #[default]
    Diffusive,
    /// `σ = −1`: the opposite sign, which sharpens differences instead.
    PaperLiteral,
}

impl Sign {
    #[inline]
    pub fn factor(self) -> f64 {
        match self {
            Sign::Diffusive => 1.0,
            Sign::PaperLiteral => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Diffusive => "diffusive",
            Sign::PaperLiteral => "paper_literal",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diffusive" => Ok(Sign::Diffusive),
            "paper_literal" => Ok(Sign::PaperLiteral),
            _ => Err(Error::InvalidConfig("sign must be diffusive or paper_literal")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TimeStep {
    /// Resolve to [`stable_dt`](crate::stable_dt) of the offset weights.
    #[default]
    Auto,
    Fixed(f64),
}

impl fmt::Display for TimeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeStep::Auto => f.write_str("auto"),
            TimeStep::Fixed(dt) => write!(f, "{dt}"),
        }
    }
}

impl FromStr for TimeStep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(TimeStep::Auto);
        }
        match s.parse::<f64>() {
            Ok(dt) if dt > 0.0 && dt.is_finite() => Ok(TimeStep::Fixed(dt)),
            _ => Err(Error::InvalidConfig("dt must be auto or a positive number")),
        }
    }
}

/// How the change between the last two iterates is compared with `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StopRule {
    /// `max |P(k+1) − P(k)| / dt < eps`: the change per unit time.
    #[default]
    Rate,
    /// `max |P(k+1) − P(k)| < eps`: the raw change per iteration.
    Update,
}

impl fmt::Display for StopRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopRule::Rate => "rate",
            StopRule::Update => "update",
        })
    }
}

impl FromStr for StopRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rate" => Ok(StopRule::Rate),
            "update" => Ok(StopRule::Update),
            _ => Err(Error::InvalidConfig("convergence must be rate or update")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub dt: TimeStep,
    pub eps: f64,
    pub max_iters: usize,
    pub sign: Sign,
    pub stop_rule: StopRule,
    /// Record a snapshot every this many iterations; 0 disables.
    pub snapshot_every: usize,
    pub mu: f64,
    pub sigma: f64,
    pub n: usize,
    /// Individuals outside the survey. `None` means `n - 1`.
    pub extra: Option<usize>,
    pub seed_kernel: u64,
    pub seed_init: u64,
    pub symmetrize_offsets: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: TimeStep::Auto,
            eps: 0.001,
            max_iters: 100_000,
            sign: Sign::Diffusive,
            stop_rule: StopRule::Rate,
            snapshot_every: 475,
            mu: 1.0,
            sigma: 1.7,
            n: 16,
            extra: None,
            seed_kernel: 1,
            seed_init: 2,
            symmetrize_offsets: false,
        }
    }
}

impl SimConfig {
    pub fn extra(&self) -> usize {
        self.extra.unwrap_or(self.n.saturating_sub(1))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(Error::InvalidConfig("eps must be positive"));
        }
        if let TimeStep::Fixed(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::InvalidConfig("dt must be positive"));
            }
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1"));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1"));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidConfig("mu must be finite"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidConfig("sigma must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = SimConfig::default();
        assert_eq!(c.n, 16);
        assert_eq!(c.extra(), 15);
        assert_eq!(c.eps, 0.001);
        assert_eq!((c.mu, c.sigma), (1.0, 1.7));
        assert_eq!(c.sign, Sign::Diffusive);
        assert_eq!(c.snapshot_every, 475);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn validation() {
        let bad = [
            SimConfig {
                eps: 0.0,
                ..Default::default()
            },
            SimConfig {
                dt: TimeStep::Fixed(-0.1),
                ..Default::default()
            },
            SimConfig {
                max_iters: 0,
                ..Default::default()
            },
            SimConfig {
                sigma: -1.0,
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn enum_round_trips() {
        for s in [Sign::Diffusive, Sign::PaperLiteral] {
            assert_eq!(alloc::format!("{s}").parse::<Sign>(), Ok(s));
        }
        for r in [StopRule::Rate, StopRule::Update] {
            assert_eq!(alloc::format!("{r}").parse::<StopRule>(), Ok(r));
        }
        assert_eq!("auto".parse::<TimeStep>(), Ok(TimeStep::Auto));
        assert_eq!("0.25".parse::<TimeStep>(), Ok(TimeStep::Fixed(0.25)));
        assert!("0".parse::<TimeStep>().is_err());
    }
}
