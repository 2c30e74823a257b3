use thiserror::Error;
use xmop_diffops::DiffOpError;
use xmop_exact::AlgebraError;
use xmop_kernels::KernelError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DarbouxError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    DiffOp(#[from] DiffOpError),
    #[error("seed derivative is singular")]
    SingularDerivative,
    #[error("U is singular")]
    SingularU,
    #[error("leading coefficient A1 is singular")]
    SingularA1,
    #[error("expected an operator of order {expected}, got {got}")]
    Order { expected: usize, got: usize },
    #[error("seed is not in the kernel of the operator")]
    NotInKernel,
    #[error("A1 is not polynomial")]
    NotPolynomial,
    #[error("det A1 vanishes in the support: {0}")]
    ZeroInSupport(String),
    #[error("transformed weight is not integrable at {0}")]
    NotIntegrable(String),
    #[error("point-mass compatibility fails: {0}")]
    Incompatible(String),
    #[error("point-mass matrix is not positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("negative point-mass scale")]
    NegativeZeta,
    #[error("operator is no longer symmetric after the extension: {0}")]
    SymmetryLost(String),
    #[error("singular Gram block at index {0}")]
    GramSingular(usize),
    #[error("index {n}: expected degree {n}, got {got:?}")]
    DegreeMismatch { n: usize, got: Option<usize> },
    #[error("index {0}: singular leading coefficient")]
    SingularLeading(usize),
    #[error("index {0}: not an eigenfunction of the transformed operator")]
    NotEigen(usize),
    #[error("weights with point masses cannot be conjugated")]
    PointMassConjugation,
}
