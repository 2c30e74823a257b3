use thiserror::Error;
use xmop_darboux::DarbouxError;
use xmop_diffops::DiffOpError;
use xmop_exact::AlgebraError;
use xmop_families::FamilyError;
use xmop_kernels::KernelError;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    DiffOp(#[from] DiffOpError),
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("quadrature needs a classical kernel, got {0}")]
    UnsupportedKernel(String),
    #[error("integrand has a pole on the support: denominator {0}")]
    PoleOnSupport(String),
    #[error("polynomial with index {0} is needed but missing")]
    MissingIndex(usize),
    #[error("conjugation system is inconsistent: {0}")]
    Inconsistent(String),
    #[error("interpolation in the free parameters did not verify: {0}")]
    Interpolation(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
}
