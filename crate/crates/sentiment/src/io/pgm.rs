use std::fmt::Write as _;
use std::path::Path;

use crate::{Error, Result};

/// Grayscale conventions: black is `+1` (agree), white is `-1` (disagree).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelMapping {
    /// `v ∈ [-1, 1]` → `round((1 − v)/2 · 255)`, clamped.
    Sentiment,
    /// `v ≥ 0` → `round((1 − v/max)·255)`; zero is white.
    Kernel,
    /// `d ∈ {-2, …, 2}` → `round((2 − d)/4 · 255)`.
    DiffMap,
}

impl PixelMapping {
    fn gray(self, v: f64, vmax: f64) -> u8 {
        let g = match self {
            PixelMapping::Sentiment => (1.0 - v) / 2.0 * 255.0,
            PixelMapping::Kernel if vmax > 0.0 => (1.0 - v / vmax) * 255.0,
            PixelMapping::Kernel => 255.0,
            PixelMapping::DiffMap => (2.0 - v) / 4.0 * 255.0,
        };
        // f64::round rounds half away from zero
        g.round().clamp(0.0, 255.0) as u8
    }
}

/// Renders a row-major `width`-wide array as a plain (P2) PGM.
pub fn encode_pgm(width: usize, values: &[f64], mapping: PixelMapping) -> Result<String> {
    if width == 0 || values.is_empty() || !values.len().is_multiple_of(width) {
        return Err(Error::BadRaster);
    }
    if let Some(k) = values.iter().position(|v| v.is_nan()) {
        return Err(Error::NanPixel {
            row: k / width,
            col: k % width,
        });
    }
    let height = values.len() / width;
    let vmax = values.iter().copied().fold(0.0, f64::max);
    let mut out = format!("P2\n{width} {height}\n255\n");
    for row in values.chunks_exact(width) {
        for (k, &v) in row.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            write!(out, "{}", mapping.gray(v, vmax)).unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_pgm(path: &Path, width: usize, values: &[f64], mapping: PixelMapping) -> Result<()> {
    let body = encode_pgm(width, values, mapping)?;
    std::fs::write(path, body).map_err(Error::io(path))
}
