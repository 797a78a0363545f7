use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("axis needs at least 2 coordinates, got {0}")]
    AxisTooShort(usize),
    #[error("axis coordinates must be finite and strictly increasing (violated at position {0})")]
    AxisNotIncreasing(usize),
    #[error("elevation matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("non-finite elevation at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("grid of {m}x{n} nodes is too small for blocks of degree ({r}, {s})")]
    GridTooSmall {
        m: usize,
        n: usize,
        r: usize,
        s: usize,
    },
    #[error("polynomial degrees must be at least 1, got ({r}, {s})")]
    InvalidDegree { r: usize, s: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("singular local system (pivot {pivot:e} in column {column})")]
    SingularSystem { column: usize, pivot: f64 },
    #[error("Shepard exponent must be positive and finite, got {0}")]
    InvalidExponent(f64),
    #[error("query point coincides with grid node {node}")]
    NodeCoincidence { node: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("decimation leaves fewer than 2 nodes along an axis ({cols}x{rows})")]
    EmptyResult { cols: usize, rows: usize },
    #[error("raster has nodata inside the interpolation hull (row {row}, column {col})")]
    NodataPresent { row: usize, col: usize },
    #[error("cell size must be positive and finite, got {0}")]
    InvalidCellSize(f64),
    #[error("raster geometries differ: {0}")]
    GridMismatch(String),
    #[error("no contour levels given")]
    EmptyLevels,
    #[error("no comparable cells (all nodata)")]
    NoData,
    #[error("grid size {size} is incompatible with degrees ({r}, {s})")]
    IncompatibleSize { size: usize, r: usize, s: usize },
    #[error("grid sizes must be strictly increasing")]
    SizesNotIncreasing,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
