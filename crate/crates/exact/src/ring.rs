use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Q;

/// Commutative ring with exact equality. Blanket-implemented.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Division that is only called when the quotient is known to be exact
/// (fraction-free elimination).
pub trait ExactDiv: Ring {
    fn div_exact(&self, other: &Self) -> Self;
}

pub trait Field: ExactDiv {
    fn inv(&self) -> Option<Self>;
}

impl ExactDiv for Q {
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
}

impl Field for Q {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}
