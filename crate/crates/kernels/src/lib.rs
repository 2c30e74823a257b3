//! Scalar kernels exp(e(t)) * prod |t-c|^gamma, quasi-rational matrix functions,
//! weight specifications with exact moments, and structural probes.

pub mod error;
pub mod kernel;
pub mod probes;
pub mod quasi;
pub mod weight;

pub use error::KernelError;
pub use kernel::Kernel;
pub use probes::{decay_check, ldlt, positivity_check, reducibility_probe, Positivity, Reducibility};
pub use quasi::QuasiRatMat;
pub use weight::{Endpoint, KernelFamily, PointMass, Support, WeightSpec};

/// log-derivative of a kernel; free-function form of [`Kernel::log_derivative`].
pub fn log_derivative(k: &Kernel) -> xmop_exact::RatFn {
    k.log_derivative()
}
