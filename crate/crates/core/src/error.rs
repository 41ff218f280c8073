use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("matrix is not Hermitian: entry ({row}, {col}) differs from its mirror by {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("non-finite value at {0}")]
    NonFinite(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("entry ({row}, {col}) lies outside bandwidth {bandwidth}")]
    OutsideBand { row: usize, col: usize, bandwidth: usize },

    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate dispersion: {0}")]
    DegenerateDispersion(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("singular transformation at x = {x}: relative determinant {ratio:e}")]
    SingularFrame { x: f64, ratio: f64 },

    #[error("model parameters violate `{0}`")]
    ModelWindow(String),
}
