//! Quasi-Darboux transformations: annihilators built from a seed, factorization
//! D = B o A - Psi, the swapped operator, exceptional weights, point-mass extensions
//! and block Gram-Schmidt.

pub mod error;
pub mod factor;
pub mod gs;
pub mod result;
pub mod weight;

pub use error::DarbouxError;
pub use factor::{
    build_annihilator, invariance_check, factorize, kernel_factorization_check, transform, Factorization,
    psi_from_eigenvalue, InvarianceCheck, KernelFactorization,
};
pub use gs::{gram_schmidt, minors_gcd};
pub use result::TransformResult;
pub use weight::{conjugated_weight, delta_extension, exceptional_weight, formal_conjugated_weight};
