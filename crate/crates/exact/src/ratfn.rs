use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::poly::{owned_ops, Poly};
use crate::ring::{ExactDiv, Field};
use crate::scalar::{fmt_q, Q};

/// Rational function num/den in canonical form: den monic, gcd(num, den) = 1,
/// and the zero function is 0/1. Structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatFn", into = "RawRatFn")]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

#[derive(Serialize, Deserialize)]
struct RawRatFn {
    num: Poly,
    den: Poly,
}

impl TryFrom<RawRatFn> for RatFn {
    type Error = AlgebraError;
    fn try_from(r: RawRatFn) -> Result<Self, AlgebraError> {
        RatFn::new(r.num, r.den)
    }
}

impl From<RatFn> for RawRatFn {
    fn from(r: RatFn) -> Self {
        RawRatFn { num: r.num, den: r.den }
    }
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canon(num, den))
    }

    fn canon(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        let l = d.lc();
        if !l.is_one() {
            let inv = l.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFn { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::one() }
    }

    pub fn constant(x: Q) -> Self {
        Self::from_poly(Poly::constant(x))
    }

    pub fn t() -> Self {
        Self::from_poly(Poly::t())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn to_poly(&self) -> Option<Poly> {
        self.is_poly().then(|| self.num.clone())
    }

    pub fn is_constant(&self) -> bool {
        self.is_poly() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<Q> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn eval(&self, x: &Q) -> Result<Q, AlgebraError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(AlgebraError::Pole(fmt_q(x)));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn derive(&self) -> Self {
        if self.is_poly() {
            return Self::from_poly(self.num.derive());
        }
        // (n/d)' = (n'd - nd')/d^2, reduced via g = gcd(d, d') to keep sizes small
        let dd = self.den.derive();
        let g = self.den.gcd(&dd);
        let d1 = self.den.div_exact(&g);
        let num = &(&self.num.derive() * &d1) - &(&self.num * &dd.div_exact(&g));
        Self::canon(num, &d1 * &self.den)
    }

    pub fn scale(&self, x: &Q) -> Self {
        if x.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(x), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::canon(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, k: usize) -> Self {
        RatFn { num: self.num.pow(k), den: self.den.pow(k) }
    }

    /// Degree at infinity: deg num - deg den (None for zero).
    pub fn degree(&self) -> Option<i64> {
        self.num
            .degree()
            .map(|d| d as i64 - self.den.degree().unwrap_or(0) as i64)
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

impl From<Q> for RatFn {
    fn from(x: Q) -> Self {
        RatFn::constant(x)
    }
}

impl Zero for RatFn {
    fn zero() -> Self {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFn {
    fn one() -> Self {
        RatFn { num: Poly::one(), den: Poly::one() }
    }
}

impl<'a> Add<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn add(self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFn::canon(&self.num + &o.num, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let a = self.den.div_exact(&g);
        let b = o.den.div_exact(&g);
        let num = &(&self.num * &b) + &(&o.num * &a);
        RatFn::canon(num, &a * &o.den)
    }
}

impl<'a> Sub<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn sub(self, o: &RatFn) -> RatFn {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn mul(self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero();
        }
        if self.is_poly() && o.is_poly() {
            return RatFn::from_poly(&self.num * &o.num);
        }
        // cross cancellation keeps the result canonical without a full gcd
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let n = &self.num.div_exact(&g1) * &o.num.div_exact(&g2);
        let d = &self.den.div_exact(&g2) * &o.den.div_exact(&g1);
        let l = d.lc();
        if l.is_one() {
            RatFn { num: n, den: d }
        } else {
            let inv = l.recip();
            RatFn { num: n.scale(&inv), den: d.scale(&inv) }
        }
    }
}

impl<'a> Div<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn div(self, o: &RatFn) -> RatFn {
        self * &o.inv().expect("division by zero rational function")
    }
}

impl Div for RatFn {
    type Output = RatFn;
    fn div(self, o: RatFn) -> RatFn {
        &self / &o
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

owned_ops!(RatFn);

impl ExactDiv for RatFn {
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
}

impl Field for RatFn {
    fn inv(&self) -> Option<Self> {
        RatFn::inv(self).ok()
    }
}
