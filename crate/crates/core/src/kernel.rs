//! Extended interaction kernels and their reduction to offset weights.
//!
//! The extended kernel is a `t × t` symmetric array of interaction intensities
//! between all individuals, surveyed or not, with zero self-interaction. The
//! `n` surveyed individuals occupy the diagonal block starting at
//! `block_start`. The dynamics only ever needs the aggregate weight per column
//! offset, so the kernel is reduced once to [`OffsetWeights`]:
//!
//! ```text
//! w(d) = Σ_{m=0}^{n-1} K[(a_m + d) mod t][a_m],   a_m = block_start + m
//! ```
//!
//! Each surveyed column is read relative to its own diagonal entry, so
//! `w(0) = 0`, and offsets running past the edge of the array wrap around.

use alloc::vec::Vec;

use crate::rng::RngStream;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedKernel {
    n: usize,
    t: usize,
    block_start: usize,
    values: Vec<f64>,
}

/// Samples a `(n + extra)`-sided kernel.
///
/// Strictly-upper-triangular entries are drawn in row-major order as
/// `exp(mu + sigma · Z)` and mirrored; the diagonal is zero. The surveyed
/// block is centered at `floor(extra / 2)`.
pub fn gen_kernel(n: usize, extra: usize, mu: f64, sigma: f64, rng: &mut RngStream) -> Result<ExtendedKernel> {
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    if !mu.is_finite() {
        return Err(Error::InvalidConfig("mu must be finite"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidConfig("sigma must be positive and finite"));
    }
    let t = n + extra;
    let mut values = alloc::vec![0.0; t * t];
    for a in 0..t {
        for b in a + 1..t {
            let v = rng.lognormal(mu, sigma);
            values[a * t + b] = v;
            values[b * t + a] = v;
        }
    }
    Ok(ExtendedKernel {
        n,
        t,
        block_start: extra / 2,
        values,
    })
}

impl ExtendedKernel {
    /// Wraps a row-major `t × t` array, centering the surveyed block.
    ///
    /// Accepts any finite, nonnegative, exactly symmetric array with a zero
    /// diagonal. Zero off-diagonal weights are allowed here (they switch
    /// interactions off); generated kernels are always strictly positive.
    pub fn from_values(n: usize, t: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || t == 0 {
            return Err(Error::EmptyGrid);
        }
        if t < n {
            return Err(Error::BlockOutOfRange { n, t, block_start: 0 });
        }
        Self::with_block_start(n, t, (t - n) / 2, values)
    }

    pub fn with_block_start(n: usize, t: usize, block_start: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || t == 0 {
            return Err(Error::EmptyGrid);
        }
        if values.len() != t * t {
            return Err(Error::BadShape {
                expected: t * t,
                found: values.len(),
            });
        }
        if block_start + n > t {
            return Err(Error::BlockOutOfRange { n, t, block_start });
        }
        validate(t, &values)?;
        Ok(Self {
            n,
            t,
            block_start,
            values,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn block_start(&self) -> usize {
        self.block_start
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.t + b]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.t)
    }
}

/// Checks the kernel invariants, reporting the first offending entry in
/// row-major order.
fn validate(t: usize, values: &[f64]) -> Result<()> {
    for a in 0..t {
        for b in 0..t {
            let v = values[a * t + b];
            if !v.is_finite() {
                return Err(Error::NonFinite { row: a, col: b });
            }
            if v < 0.0 {
                return Err(Error::NegativeWeight { row: a, col: b });
            }
            if a == b && v != 0.0 {
                return Err(Error::NonzeroDiagonal { index: a });
            }
            if b > a && v.to_bits() != values[b * t + a].to_bits() {
                return Err(Error::Asymmetric { a, b });
            }
        }
    }
    Ok(())
}

/// Effective kernel weights `w(d)` for offsets `d ∈ [-(n-1), n-1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetWeights {
    n: usize,
    w: Vec<f64>,
}

impl OffsetWeights {
    /// All-zero weights: the no-interaction limit.
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            w: alloc::vec![0.0; 2 * n.max(1) - 1],
        }
    }

    /// `values[k]` is `w(k - (n - 1))`.
    pub fn from_values(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        if values.len() != 2 * n - 1 {
            return Err(Error::BadShape {
                expected: 2 * n - 1,
                found: values.len(),
            });
        }
        for (k, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: 0, col: k });
            }
            if v < 0.0 {
                return Err(Error::NegativeWeight { row: 0, col: k });
            }
        }
        if values[n - 1] != 0.0 {
            return Err(Error::InvalidConfig("offset weight w(0) must be zero"));
        }
        Ok(Self { n, w: values })
    }

    /// Builds weights from a function of the offset; `w(0)` is forced to zero.
    pub fn from_fn(n: usize, f: impl Fn(isize) -> f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        let r = n as isize - 1;
        let values = (-r..=r).map(|d| if d == 0 { 0.0 } else { f(d) }).collect();
        Self::from_values(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weight at offset `d`. Panics if `|d| >= n`.
    #[inline]
    pub fn get(&self, d: isize) -> f64 {
        self.w[(d + self.n as isize - 1) as usize]
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    /// `S = Σ_d w(d)`, summed from the most negative offset up.
    pub fn total(&self) -> f64 {
        self.w.iter().sum()
    }

    /// `(w(d) + w(-d)) / 2`.
    pub fn symmetrized(&self) -> Self {
        let len = self.w.len();
        let w = (0..len).map(|k| (self.w[k] + self.w[len - 1 - k]) / 2.0).collect();
        Self { n: self.n, w }
    }
}

pub fn kernel_offsets(kernel: &ExtendedKernel, symmetrize: bool) -> OffsetWeights {
    let n = kernel.n;
    let t = kernel.t as isize;
    let r = n as isize - 1;
    let w = (-r..=r)
        .map(|d| {
            (0..n).fold(0.0, |acc, m| {
                let anchor = (kernel.block_start + m) as isize;
                let row = (anchor + d).rem_euclid(t) as usize;
                acc + kernel.get(row, anchor as usize)
            })
        })
        .collect();
    let weights = OffsetWeights { n, w };
    if symmetrize {
        weights.symmetrized()
    } else {
        weights
    }
}
