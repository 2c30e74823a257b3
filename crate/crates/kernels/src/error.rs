use thiserror::Error;
use xmop_exact::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("kernels differ: {0} vs {1}")]
    KernelMismatch(String, String),
    #[error("unsupported kernel family: {0}")]
    UnsupportedKernel(String),
    #[error("density is rational, not polynomial; use a numeric inner product")]
    RationalDensity,
    #[error("sample point {0} is a pole of the density")]
    SamplePole(String),
    #[error("value at the base point is singular")]
    SingularBase,
}
