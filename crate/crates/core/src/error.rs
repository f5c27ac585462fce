use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A grid or kernel side of zero was requested.
    EmptyGrid,
    /// Value array length does not match the declared shape.
    BadShape {
        expected: usize,
        found: usize,
    },
    /// Two operands disagree on the grid side.
    DimensionMismatch {
        left: usize,
        right: usize,
    },
    NonFinite {
        row: usize,
        col: usize,
    },
    /// Kernel entries `(a, b)` and `(b, a)` differ.
    Asymmetric {
        a: usize,
        b: usize,
    },
    NonzeroDiagonal {
        index: usize,
    },
    NegativeWeight {
        row: usize,
        col: usize,
    },
    /// Surveyed block does not fit in the extended kernel.
    BlockOutOfRange {
        n: usize,
        t: usize,
        block_start: usize,
    },
    InvalidConfig(&'static str),
    /// An iterate left the `|p| <= 10` band or became non-finite.
    Diverged {
        iteration: usize,
        row: usize,
        col: usize,
        value: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyGrid => write!(f, "grid side must be at least 1"),
            Error::BadShape { expected, found } => {
                write!(f, "expected {expected} values, found {found}")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "grid sides differ: {left} vs {right}")
            }
            Error::NonFinite { row, col } => write!(f, "non-finite value at ({row}, {col})"),
            Error::Asymmetric { a, b } => {
                write!(f, "kernel is not symmetric: entry ({a}, {b}) differs from ({b}, {a})")
            }
            Error::NonzeroDiagonal { index } => {
                write!(f, "kernel diagonal entry ({index}, {index}) is not zero")
            }
            Error::NegativeWeight { row, col } => {
                write!(f, "negative interaction weight at ({row}, {col})")
            }
            Error::BlockOutOfRange { n, t, block_start } => write!(
                f,
                "surveyed block of side {n} at {block_start} does not fit in a {t}x{t} kernel"
            ),
            Error::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
            Error::Diverged {
                iteration,
                row,
                col,
                value,
            } => write!(
                f,
                "iterate diverged at iteration {iteration}: entry ({row}, {col}) = {value}; \
                 try a smaller time step"
            ),
        }
    }
}

impl core::error::Error for Error {}
