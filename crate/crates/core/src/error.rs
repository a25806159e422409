use thiserror::Error;

/// Errors produced by the library. Each variant carries enough context to be
/// reported verbatim by the command-line driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}-D input, got {got}-D")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid similarity: {0}")]
    InvalidMap(String),

    #[error("invalid iterated function system: {0}")]
    InvalidIfs(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sample budget exceeded: more than {cap} points needed at resolution {delta:e}")]
    SampleBudget { cap: usize, delta: f64 },

    #[error("cylinders overlap at depth {depth}: [{left_start}, {left_end}] and [{right_start}, {right_end}]")]
    OverlappingCylinders {
        depth: usize,
        left_start: f64,
        left_end: f64,
        right_start: f64,
        right_end: f64,
    },

    #[error("degenerate disk arrangement after perturbation: {0}")]
    Degenerate(String),

    #[error("accuracy guard violated: eps {eps:e} < 10 * resolution {resolution:e}")]
    AccuracyGuard { eps: f64, resolution: f64 },

    #[error("insufficient scale range: {0}")]
    InsufficientScaleRange(String),

    #[error("grid memory cap exceeded: {cells} cells requested, cap is {cap}")]
    GridCap { cells: usize, cap: usize },

    #[error("sample resolution {spacing:e} too coarse to certify contacts at tolerance {tol:e}")]
    ResolutionTooCoarse { spacing: f64, tol: f64 },

    #[error("empty window: no sample point inside the window")]
    EmptyWindow,

    #[error("invalid catalog parameters: {0}")]
    Catalog(String),

    #[error("negative curvature value {value} at eps {eps:e} in {quantity}")]
    NegativeValue {
        quantity: &'static str,
        eps: f64,
        value: f64,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Process exit codes of the command-line driver, by error category.
pub mod exit {
    pub const OK: i32 = 0;
    /// Bad command line (reported by the argument parser).
    pub const USAGE: i32 = 2;
    pub const IO: i32 = 3;
    pub const PARSE: i32 = 4;
    /// Inputs that parse but violate a precondition.
    pub const INVALID: i32 = 5;
    /// Requested accuracy not reachable within resolution or memory limits.
    pub const RESOLUTION: i32 = 6;
    /// Numerical failure: degenerate arrangement, overlapping cylinders,
    /// unusable data.
    pub const NUMERICAL: i32 = 7;
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => exit::IO,
            Error::Parse(_) | Error::Json(_) => exit::PARSE,
            Error::DimensionMismatch { .. }
            | Error::InvalidMap(_)
            | Error::InvalidIfs(_)
            | Error::InvalidArgument(_)
            | Error::Catalog(_)
            | Error::EmptyWindow => exit::INVALID,
            Error::SampleBudget { .. }
            | Error::AccuracyGuard { .. }
            | Error::GridCap { .. }
            | Error::ResolutionTooCoarse { .. } => exit::RESOLUTION,
            Error::OverlappingCylinders { .. }
            | Error::Degenerate(_)
            | Error::InsufficientScaleRange(_)
            | Error::NegativeValue { .. } => exit::NUMERICAL,
        }
    }
}
