//! Square sentiment grids.

use alloc::vec::Vec;

use crate::rng::RngStream;
use crate::{Error, Result};

/// An `n × n` array of sentiment values, stored row-major.
///
/// Rows are individuals, columns are questions. Every entry is finite;
/// freshly generated grids additionally lie in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SentimentGrid {
    n: usize,
    values: Vec<f64>,
}

impl SentimentGrid {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGrid);
        }
        if values.len() != n * n {
            return Err(Error::BadShape {
                expected: n * n,
                found: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: k / n, col: k % n });
        }
        Ok(Self { n, values })
    }

    pub fn filled(n: usize, value: f64) -> Result<Self> {
        Self::new(n, alloc::vec![value; n * n])
    }

    /// Builds a grid from nested rows; all rows must have length `rows.len()`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut values = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::BadShape {
                    expected: n,
                    found: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(n, values)
    }

    pub(crate) fn from_raw(n: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), n * n);
        Self { n, values }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n + col]
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.n..(row + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n)
    }

    /// Row-major view of all entries.
    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Returns a copy with entry `(row, col)` replaced.
    pub fn with_entry(&self, row: usize, col: usize, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite { row, col });
        }
        let mut values = self.values.clone();
        values[row * self.n + col] = value;
        Ok(Self { n: self.n, values })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.n, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(max_abs_diff(&self.values, &other.values))
    }
}

/// Draws an `n × n` grid of independent uniforms on `[-1, 1)`, row-major.
pub fn gen_initial_grid(n: usize, rng: &mut RngStream) -> Result<SentimentGrid> {
    if n == 0 {
        return Err(Error::EmptyGrid);
    }
    let values = (0..n * n).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
    Ok(SentimentGrid::from_raw(n, values))
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| {
        let d = (x - y).abs();
        if d > m {
            d
        } else {
            m
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::make_rng;

    #[test]
    fn rejects_empty_and_bad_shape() {
        assert_eq!(SentimentGrid::new(0, Vec::new()), Err(Error::EmptyGrid));
        assert_eq!(
            SentimentGrid::new(2, alloc::vec![0.0; 3]),
            Err(Error::BadShape { expected: 4, found: 3 })
        );
    }

    #[test]
    fn rejects_non_finite() {
        let err = SentimentGrid::new(2, alloc::vec![0.0, 0.0, f64::NAN, 0.0]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 1, col: 0 });
    }

    #[test]
    fn initial_grid_range_and_determinism() {
        let a = gen_initial_grid(16, &mut make_rng(5)).unwrap();
        let b = gen_initial_grid(16, &mut make_rng(5)).unwrap();
        assert_eq!(a, b);
        assert!(a.values().iter().all(|v| (-1.0..=1.0).contains(v)));
        assert_eq!(gen_initial_grid(0, &mut make_rng(5)), Err(Error::EmptyGrid));
    }

    #[test]
    fn initial_grid_mean_near_zero() {
        // 256 uniforms on [-1,1]: sd of the mean is 0.036, so 0.2 is > 5 sigma
        let g = gen_initial_grid(16, &mut make_rng(1)).unwrap();
        let mean = g.values().iter().sum::<f64>() / 256.0;
        assert!(mean.abs() < 0.2, "mean {mean}");
    }

    #[test]
    fn initial_grid_fills_row_major() {
        let mut r = make_rng(77);
        let expected: Vec<f64> = (0..9).map(|_| r.uniform_in(-1.0, 1.0)).collect();
        let g = gen_initial_grid(3, &mut make_rng(77)).unwrap();
        assert_eq!(g.values(), &expected[..]);
    }

    #[test]
    fn from_rows_is_row_major() {
        let g = SentimentGrid::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap();
        assert_eq!(g.row(1), &[3.0, 4.0]);
        assert_eq!(g.get(0, 1), 2.0);
        assert!(SentimentGrid::from_rows(&[alloc::vec![1.0], alloc::vec![2.0, 3.0]]).is_err());
    }
}
