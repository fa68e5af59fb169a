use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("moment system is infeasible: the exact nullspace is trivial")]
    Infeasible,
    #[error("every kernel vector annihilates the forbidden moment q^{0}")]
    ForbiddenMomentUnavoidable(i64),
    #[error("q entries must be distinct and nonzero (index {0})")]
    BadNodes(usize),
    #[error("too many constraints: {constraints} exponents for n = {n}")]
    TooManyConstraints { constraints: usize, n: usize },
    #[error("zero entry in scale vector at index {0}")]
    ZeroScale(usize),
    #[error("radius {0} outside (0, 1/2]")]
    RadiusOutOfRange(f64),
    #[error("pole of the scale family at index {0}: q_j * alpha = -1")]
    Pole(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("direction vectors are parallel")]
    Parallel,
    #[error("grid point {0:?} lies inside the singular margin")]
    InsideMargin(Vec<f64>),
    #[error("non-power-of-two spacing {0}")]
    NotPowerOfTwo(u64),
    #[error("symbol is unbounded on the integration box (sup {0})")]
    Unbounded(f64),
    #[error("empty M grid")]
    EmptyGrid,
    #[error("k = {k} is below k0 = {k0}")]
    BelowK0 { k: i64, k0: i64 },
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("need at least 3 points for a log fit, got {0}")]
    TooFewPoints(usize),
    #[error("empty anchor set")]
    EmptyAnchors,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
