use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed strand prefix `{0}`, expected `n=<k>;`")]
    Prefix(String),
    #[error("invalid token `{0}`, expected a nonzero integer")]
    Token(String),
    #[error("generator index out of range: `{token}` for n = {n}")]
    OutOfRange { token: String, n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComputeError {
    #[error("diagram has {crossings} crossings, above the cap of {cap}")]
    SizeCap { crossings: usize, cap: usize },
    #[error("orientation does not match the diagram: {0}")]
    Orientation(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("diagrams are not related by the requested move: {0}")]
    Mismatch(String),
    #[error("canonical cycle is a boundary")]
    Boundary,
    #[error("profile certification did not converge near t = {0}")]
    Refinement(String),
}
