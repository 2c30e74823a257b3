use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation at a pole t = {0}")]
    Pole(String),
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("cannot combine unit {0} with unit {1}")]
    UnitMismatch(String, String),
    #[error("not exact: {0}")]
    NotExact(String),
    #[error("parse error: {0}")]
    Parse(String),
}
