use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("operands live in different Lie algebras")]
    AlgebraMismatch,
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("expansion depth exhausted: {0}")]
    Depth(String),
    #[error("logarithmic term hits a pole at exponent {0}")]
    LogPole(f64),
    #[error("log power above one in an expansion")]
    LogPower,
    #[error("canonical trace undefined for integer order {0}")]
    IntegerOrder(f64),
    #[error("weight orders differ: {0} vs {1}")]
    OrderMismatch(f64, f64),
    #[error("non-positive weight eigenvalue at mode {0}")]
    NonPositiveWeight(i64),
    #[error("unsupported operand: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}
