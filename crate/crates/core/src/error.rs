use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("threshold alpha must lie strictly between 0 and 255, got {alpha}")]
    AlphaOutOfRange { alpha: u8 },
    #[error("unsupported color type {0}, frames must be 8-bit RGB or RGBA")]
    UnsupportedColorType(String),
    #[error("scan contains no lit pixels")]
    EmptyScan,
    #[error("invalid calibration: {0}")]
    InvalidCalibration(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("expected {expected} frames, got {actual}")]
    FrameCountMismatch { expected: usize, actual: usize },
    #[error("cloud has {points} points, need more than {k_neighbors} for denoising")]
    TooFewPoints { points: usize, k_neighbors: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot merge clouds with units {left:?} and {right:?}")]
    UnitMismatch { left: String, right: String },
    #[error("point {index} has a non-finite coordinate")]
    NonFinitePoint { index: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("laser position {laser_x} lies outside the scene x range [0, {max_x}]")]
    LaserOutOfScene { laser_x: f64, max_x: f64 },
    #[error("laser line falls at column {column} on row {row}, outside frame width {width}")]
    LineOutOfFrame { row: u32, column: i64, width: u32 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;
