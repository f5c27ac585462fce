use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] sentiment_core::Error),

    #[error("{}: empty file", path.display())]
    EmptyFile { path: PathBuf },

    #[error("{}: ragged rows: row {row} has {found} cells, expected {expected}", path.display())]
    RaggedRows {
        path: PathBuf,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("{}: row {row}, column {col}: {cell:?} is not a finite decimal number", path.display())]
    NotNumeric {
        path: PathBuf,
        row: usize,
        col: usize,
        cell: String,
    },

    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },

    #[error("{}: expected a square array, found {rows}x{cols}", path.display())]
    NotSquare { path: PathBuf, rows: usize, cols: usize },

    #[error("{origin}:{line}: expected `key = value`")]
    Syntax { origin: String, line: usize },

    #[error("{origin}:{line}: unknown key `{key}`")]
    UnknownKey { origin: String, line: usize, key: String },

    #[error("{origin}:{line}: duplicate key `{key}`")]
    DuplicateKey { origin: String, line: usize, key: String },

    #[error("{origin}:{line}: invalid value {value:?} for `{key}`")]
    BadValue {
        origin: String,
        line: usize,
        key: String,
        value: String,
    },

    #[error("cannot render an empty or ragged array")]
    BadRaster,

    #[error("NaN at ({row}, {col}) cannot be rendered")]
    NanPixel { row: usize, col: usize },

    #[error("kernel side {t} is smaller than the grid side {n}")]
    KernelTooSmall { t: usize, n: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| Error::Io { path, source }
    }
}
