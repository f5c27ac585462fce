//! Plain-text file formats: PGM images, CSV arrays, and run configuration.

mod config;
mod csv_io;
mod pgm;

pub use self::config::{parse_config, parse_config_str, render_config, ConfigOverrides};
pub use self::csv_io::{read_csv, read_grid, read_kernel, write_csv, Matrix};
pub use self::pgm::{encode_pgm, write_pgm, PixelMapping};

use std::path::{Path, PathBuf};

/// `path` with its extension replaced by `pgm`.
pub fn pgm_sibling(path: &Path) -> PathBuf {
    path.with_extension("pgm")
}
