use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} matrix must be square, got {rows}×{cols}")]
    NotSquare {
        what: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("not a projector at this tolerance: {detail}")]
    NotProjector { detail: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("R-matrix is not involutive: ‖S² − 1‖ = {residual:.3e} exceeds {tol:.1e}")]
    NotInvolutive { residual: f64, tol: f64 },
    #[error("matrix is not unitary: ‖Q†Q − 1‖ = {residual:.3e} exceeds {tol:.1e}")]
    NotUnitary { residual: f64, tol: f64 },
    #[error("precondition failed: {what} (residual {residual:.3e})")]
    Precondition { what: String, residual: f64 },
    #[error("brute-force enumeration of S_{n} refused (cap is n ≤ {cap})")]
    EnumerationCap { n: usize, cap: usize },
    #[error("dense dimension {dim} exceeds the cap of {cap}")]
    SizeCap { dim: usize, cap: usize },
    #[error("word of length {len} exceeds the cap of {cap} letters")]
    WordTooLong { len: usize, cap: usize },
    #[error("label {label} out of range (< {bound})")]
    LabelOutOfRange { label: usize, bound: usize },
    #[error("evaluation point {point} is within {distance:.3e} of a pole")]
    NearPole { point: String, distance: f64 },
    #[error("rank mismatch at level {level}: {detail}")]
    RankMismatch { level: usize, detail: String },
    #[error("invalid spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
