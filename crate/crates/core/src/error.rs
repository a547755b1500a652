use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate Jacobi parameters: {0}")]
    DegenerateParams(String),
    #[error("quadrature under-resolved: {nodes} nodes for a degree {degree} polynomial")]
    QuadratureUnderResolved { nodes: usize, degree: usize },
    #[error("power iteration did not converge after {iters} iterations (residual {residual:.3e})")]
    NoConvergence { iters: usize, residual: f64 },
    #[error("matrix has zero Frobenius norm")]
    ZeroMatrix,
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("test set has zero Huber mass")]
    DegenerateTestSet,
    #[error("starting point is outside the constraint set (relative slack {slack:.3e})")]
    InfeasibleStart { slack: f64 },
    #[error("Jacobi bound undefined for beta = 0")]
    BetaZero,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("duplicate rating for user {user}, item {item}")]
    DuplicateRating { user: u64, item: u64 },
    #[error("config error: {0}")]
    Config(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("only {remaining} positive suboptimality values in window")]
    NonpositiveGap { remaining: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the `jfw` binary: 1 config, 2 solver, 3 dataset.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) => 1,
            Error::Parse { .. }
            | Error::EmptyDataset
            | Error::DuplicateRating { .. }
            | Error::DegenerateTestSet
            | Error::Io(_) => 3,
            _ => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_category() {
        assert_eq!(Error::Config("x".into()).exit_code(), 1);
        assert_eq!(Error::InvalidArgument("x".into()).exit_code(), 1);
        assert_eq!(Error::NoConvergence { iters: 1, residual: 1.0 }.exit_code(), 2);
        assert_eq!(Error::InfeasibleStart { slack: 0.1 }.exit_code(), 2);
        assert_eq!(Error::Parse { line: 3, msg: "bad".into() }.exit_code(), 3);
        assert_eq!(Error::DuplicateRating { user: 1, item: 2 }.exit_code(), 3);
        assert_eq!(Error::Io(std::io::Error::other("gone")).exit_code(), 3);
    }
}
