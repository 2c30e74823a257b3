//! Numeric cross-checks (Gauss quadrature in double-double), recurrence discovery,
//! conjugation solving, reports and the `xmop` command line.

pub mod artifact;
pub mod checks;
pub mod cli;
pub mod conj;
pub mod dd;
pub mod error;
pub mod export;
pub mod numeric;
pub mod quad;
pub mod recur;
pub mod report;
pub mod tau;

pub use error::VerifyError;
pub use numeric::{numeric_gram, numeric_inner_product, NumMat};
pub use report::{Check, Report, Status};
pub use quad::{gauss_quadrature, gauss_rule, QuadratureRule};
