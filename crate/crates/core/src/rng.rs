//! Deterministic random streams.
//!
//! [`RngStream`] wraps xoshiro256++ seeded through SplitMix64 (the
//! `seed_from_u64` expansion of `rand_xoshiro`). Uniform variates use the top
//! 53 bits of each output word, so they lie on the grid `k · 2⁻⁵³` in `[0, 1)`.
//! Standard normals use the Marsaglia polar method, caching the second variate
//! of each accepted pair.
//!
//! Equal seeds give equal sequences on every platform this crate builds on.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

const UNIT: f64 = 1.0 / (1u64 << 53) as f64;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: Xoshiro256PlusPlus,
    spare_normal: Option<f64>,
}

pub fn make_rng(seed: u64) -> RngStream {
    RngStream {
        seed,
        inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        spare_normal: None,
    }
}

impl RngStream {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * UNIT
    }

    /// Uniform on `[lo, hi)`.
    #[inline]
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal variate (Marsaglia polar method).
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let scale = libm::sqrt(-2.0 * libm::log(s) / s);
                self.spare_normal = Some(v * scale);
                return u * scale;
            }
        }
    }

    /// `exp(mu + sigma · Z)` with `Z` standard normal.
    #[inline]
    pub fn lognormal(&mut self, mu: f64, sigma: f64) -> f64 {
        libm::exp(mu + sigma * self.normal())
    }
}
