use thiserror::Error;
use xmop_darboux::DarbouxError;
use xmop_diffops::DiffOpError;
use xmop_exact::AlgebraError;
use xmop_kernels::KernelError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("parameter {0} is required")]
    MissingParameter(&'static str),
    #[error("unknown example id {0}")]
    UnknownExample(u8),
    #[error("index {0} is not a member of the family")]
    MissingIndex(usize),
    #[error("polynomial of degree {0} is not in the span of the family")]
    NotInSpan(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    DiffOp(#[from] DiffOpError),
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
}
