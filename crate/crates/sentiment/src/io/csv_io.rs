use std::path::Path;

use sentiment_core::{ExtendedKernel, SentimentGrid};

use crate::{Error, Result};

/// A rectangular row-major array as read from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
}

/// Writes one array row per line. Numbers use the shortest decimal form that
/// parses back to the same bits.
pub fn write_csv(path: &Path, width: usize, values: &[f64]) -> Result<()> {
    if width == 0 || values.is_empty() || !values.len().is_multiple_of(width) {
        return Err(Error::BadRaster);
    }
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: path.into(),
            source,
        })?;
    for row in values.chunks_exact(width) {
        w.write_record(row.iter().map(|v| format!("{v}")))
            .map_err(|source| Error::Csv {
                path: path.into(),
                source,
            })?;
    }
    w.flush().map_err(Error::io(path))
}

pub fn read_csv(path: &Path) -> Result<Matrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| Error::Csv {
            path: path.into(),
            source,
        })?;
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|source| Error::Csv {
            path: path.into(),
            source,
        })?;
        let expected = *cols.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRows {
                path: path.into(),
                row: rows,
                expected,
                found: record.len(),
            });
        }
        for (col, cell) in record.iter().enumerate() {
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(Error::NotNumeric {
                        path: path.into(),
                        row: rows,
                        col,
                        cell: cell.to_string(),
                    })
                }
            }
        }
        rows += 1;
    }
    match cols {
        Some(cols) if cols > 0 => Ok(Matrix { rows, cols, values }),
        _ => Err(Error::EmptyFile { path: path.into() }),
    }
}

fn read_square(path: &Path) -> Result<Matrix> {
    let m = read_csv(path)?;
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            path: path.into(),
            rows: m.rows,
            cols: m.cols,
        });
    }
    Ok(m)
}

pub fn read_grid(path: &Path) -> Result<SentimentGrid> {
    let m = read_square(path)?;
    Ok(SentimentGrid::new(m.rows, m.values)?)
}

/// Reads a `t × t` kernel whose surveyed block has side `n`.
pub fn read_kernel(path: &Path, n: usize) -> Result<ExtendedKernel> {
    let m = read_square(path)?;
    if m.rows < n {
        return Err(Error::KernelTooSmall { t: m.rows, n });
    }
    Ok(ExtendedKernel::from_values(n, m.rows, m.values)?)
}
