//! Exact arithmetic over Q: polynomials, rational functions in canonical form,
//! square matrices over either, transcendental-unit values and Sturm root counting.

pub mod error;
pub mod mat;
pub mod poly;
pub mod ratfn;
pub mod ring;
pub mod scalar;
pub mod sturm;
pub mod value;

pub use error::AlgebraError;
pub use mat::{Mat, PolyMat, QMat, RatMat};
pub use poly::Poly;
pub use ratfn::RatFn;
pub use ring::{ExactDiv, Field, Ring};
pub use scalar::{binomial, factorial, fmt_q, parse_q, q, qi, to_f64, Q};
pub use sturm::Bound;
pub use value::{ExactValue, Unit, ValueMat};

/// Convenience: rational function from integer coefficient lists.
pub fn rf(num: &[i64], den: &[i64]) -> RatFn {
    RatFn::new(Poly::from_ints(num), Poly::from_ints(den)).expect("nonzero denominator")
}

/// Convenience: polynomial from rational coefficients (ascending).
pub fn poly(c: &[Q]) -> Poly {
    Poly::from_coeffs(c.to_vec())
}
