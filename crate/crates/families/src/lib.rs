//! Classical matrix families (Hermite, Laguerre and Gegenbauer type) and the
//! exceptional families built from them by quasi-Darboux transformations.

pub mod closed_forms;
pub mod error;
pub mod examples;
pub mod family;
mod mk;
pub mod par;
pub mod scalar;

pub use error::FamilyError;
pub use family::{gegenbauer_admissible, hermite_gamma, hermite_norm, ClassicalFamily, FamilyKind, Seed};
pub use par::Exec;
pub use scalar::{scalar_classical, scalar_table, ScalarKind};
