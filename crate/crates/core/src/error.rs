use thiserror::Error;

/// Text that failed to parse as an exact number, with the byte offset of the
/// offending character.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} at position {position}: {message}")]
pub struct ParseError {
    pub input: String,
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("series depth exhausted: coefficient of z^{requested} is beyond the guaranteed order {order}")]
    DepthExhausted { requested: i64, order: i64 },

    #[error("invalid residue {residue}: its cube is not c0 = {c0}")]
    InvalidResidue { residue: String, c0: String },

    #[error("zero pivot while solving for u_{index}")]
    ZeroPivot { index: i64 },

    #[error("pivot mismatch at u_{index}: recurrence gives {found}, indicial polynomial gives {expected}")]
    PivotMismatch { index: i64, found: String, expected: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported subequation degree {0} (expected 1, 2 or 3)")]
    UnsupportedDegree(usize),

    #[error("leading balance of the subequation is not a simple pole: {0}")]
    NonSimpleBalance(String),

    #[error("no root of {0} could be found")]
    NoRoot(String),

    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("point {re}{im:+}i lies outside the series disk of radius {radius}")]
    OutOfRadius { re: f64, im: f64, radius: f64 },

    #[error("point is too close to a singularity")]
    NearSingularity,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
