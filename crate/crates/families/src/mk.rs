//! Small constructors used by the closed forms.

use num_traits::Zero;
use xmop_exact::{Mat, Poly, RatFn, Q};

pub fn c(x: Q) -> Poly {
    Poly::constant(x)
}

pub fn t() -> Poly {
    Poly::t()
}

/// c0 + c1 t + c2 t^2 + ...
pub fn pl(cs: &[Q]) -> Poly {
    Poly::from_coeffs(cs.to_vec())
}

pub fn rc(x: Q) -> RatFn {
    RatFn::constant(x)
}

pub fn rp(p: Poly) -> RatFn {
    RatFn::from_poly(p)
}

pub fn m2<T>(a: T, b: T, c: T, d: T) -> Mat<T> {
    Mat::from_rows(vec![vec![a, b], vec![c, d]]).expect("2x2")
}

pub fn zp() -> Poly {
    Poly::zero()
}
