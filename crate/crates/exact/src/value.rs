use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::mat::QMat;
use crate::scalar::{fmt_q, q, qi, Q};

/// Opaque transcendental unit. Arguments are kept in canonical ranges so that
/// equal values have equal units: Gamma(x) with x in (0,1), BetaHalf(x) = B(1/2, x)
/// with x in (0,1].
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Unit {
    One,
    SqrtPi,
    Gamma(Q),
    BetaHalf(Q),
}

impl std::str::FromStr for Unit {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, AlgebraError> {
        let arg = |pre: &str| s.strip_prefix(pre).and_then(|r| r.strip_suffix(')'));
        match s {
            "1" => Ok(Unit::One),
            "sqrt(pi)" => Ok(Unit::SqrtPi),
            _ => {
                if let Some(a) = arg("Gamma(") {
                    Ok(Unit::Gamma(crate::scalar::parse_q(a)?))
                } else if let Some(a) = arg("B(1/2, ") {
                    Ok(Unit::BetaHalf(crate::scalar::parse_q(a)?))
                } else {
                    Err(AlgebraError::Parse(format!("unknown unit {s:?}")))
                }
            }
        }
    }
}

impl Serialize for Unit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Unit {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unit::One => f.write_str("1"),
            Unit::SqrtPi => f.write_str("sqrt(pi)"),
            Unit::Gamma(x) => write!(f, "Gamma({})", fmt_q(x)),
            Unit::BetaHalf(x) => write!(f, "B(1/2, {})", fmt_q(x)),
        }
    }
}

impl fmt::Debug for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rational multiple of a unit.
#[derive(Clone, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    #[serde(with = "crate::scalar::serde_q")]
    pub coeff: Q,
    pub unit: Unit,
}

impl PartialEq for ExactValue {
    fn eq(&self, o: &Self) -> bool {
        if self.coeff.is_zero() || o.coeff.is_zero() {
            return self.coeff.is_zero() && o.coeff.is_zero();
        }
        self.coeff == o.coeff && self.unit == o.unit
    }
}

impl ExactValue {
    pub fn new(coeff: Q, unit: Unit) -> Self {
        ExactValue { coeff, unit }
    }

    pub fn rational(x: Q) -> Self {
        ExactValue { coeff: x, unit: Unit::One }
    }

    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn sqrt_pi() -> Self {
        ExactValue { coeff: Q::one(), unit: Unit::SqrtPi }
    }

    /// Gamma(x) for x > 0 or x a negative non-integer.
    pub fn gamma(x: &Q) -> Result<Self, AlgebraError> {
        if x.is_integer() && !x.is_positive() {
            return Err(AlgebraError::Pole(fmt_q(x)));
        }
        let mut x = x.clone();
        let mut c = Q::one();
        while x > Q::one() {
            x -= Q::one();
            c *= &x;
        }
        while !x.is_positive() {
            c /= &x;
            x += Q::one();
        }
        let unit = if x.is_one() {
            Unit::One
        } else if x == q(1, 2) {
            Unit::SqrtPi
        } else {
            Unit::Gamma(x)
        };
        Ok(ExactValue { coeff: c, unit })
    }

    /// B(1/2, x) = Gamma(1/2)Gamma(x)/Gamma(x+1/2) for x > 0.
    pub fn beta_half(x: &Q) -> Result<Self, AlgebraError> {
        if !x.is_positive() {
            return Err(AlgebraError::NotExact(format!("B(1/2, {}) with nonpositive argument", fmt_q(x))));
        }
        let half = q(1, 2);
        let mut x = x.clone();
        let mut c = Q::one();
        // B(1/2, x) = B(1/2, x-1) (x-1)/(x-1/2)
        while x > Q::one() {
            c = c * (&x - Q::one()) / (&x - &half);
            x -= Q::one();
        }
        if x.is_one() {
            return Ok(ExactValue { coeff: c * qi(2), unit: Unit::One });
        }
        Ok(ExactValue { coeff: c, unit: Unit::BetaHalf(x) })
    }

    pub fn scale(&self, x: &Q) -> Self {
        ExactValue { coeff: &self.coeff * x, unit: self.unit.clone() }
    }

    pub fn add(&self, o: &Self) -> Result<Self, AlgebraError> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if self.unit != o.unit {
            return Err(AlgebraError::UnitMismatch(self.unit.to_string(), o.unit.to_string()));
        }
        Ok(ExactValue { coeff: &self.coeff + &o.coeff, unit: self.unit.clone() })
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.unit {
            Unit::One => f.write_str(&fmt_q(&self.coeff)),
            _ if self.coeff.is_zero() => f.write_str("0"),
            _ => write!(f, "{}*{}", fmt_q(&self.coeff), self.unit),
        }
    }
}

impl fmt::Debug for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Matrix of exact values sharing one unit: coeffs * unit.
#[derive(Clone, Eq, Serialize, Deserialize)]
pub struct ValueMat {
    #[serde(with = "crate::mat::serde_qmat")]
    pub coeffs: QMat,
    pub unit: Unit,
}

impl PartialEq for ValueMat {
    fn eq(&self, o: &Self) -> bool {
        if self.coeffs.is_zero() || o.coeffs.is_zero() {
            return self.coeffs.is_zero() && o.coeffs.is_zero() && self.coeffs.size() == o.coeffs.size();
        }
        self.coeffs == o.coeffs && self.unit == o.unit
    }
}

impl ValueMat {
    pub fn new(coeffs: QMat, unit: Unit) -> Self {
        ValueMat { coeffs, unit }
    }

    pub fn zeros(n: usize) -> Self {
        ValueMat { coeffs: QMat::zeros(n), unit: Unit::One }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn get(&self, i: usize, j: usize) -> ExactValue {
        ExactValue::new(self.coeffs[(i, j)].clone(), self.unit.clone())
    }

    pub fn add(&self, o: &Self) -> Result<Self, AlgebraError> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if self.unit != o.unit {
            return Err(AlgebraError::UnitMismatch(self.unit.to_string(), o.unit.to_string()));
        }
        Ok(ValueMat { coeffs: &self.coeffs + &o.coeffs, unit: self.unit.clone() })
    }

    pub fn scale(&self, x: &Q) -> Self {
        ValueMat { coeffs: self.coeffs.map(|c| c * x), unit: self.unit.clone() }
    }

    pub fn lmul(&self, a: &QMat) -> Self {
        ValueMat { coeffs: a * &self.coeffs, unit: self.unit.clone() }
    }

    pub fn rmul(&self, a: &QMat) -> Self {
        ValueMat { coeffs: &self.coeffs * a, unit: self.unit.clone() }
    }

    pub fn transpose(&self) -> Self {
        ValueMat { coeffs: self.coeffs.transpose(), unit: self.unit.clone() }
    }
}

impl fmt::Display for ValueMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit == Unit::One {
            write!(f, "{}", self.coeffs)
        } else {
            write!(f, "{} * {}", self.unit, self.coeffs)
        }
    }
}

impl fmt::Debug for ValueMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_canonical() {
        assert_eq!(ExactValue::gamma(&qi(1)).unwrap(), ExactValue::rational(qi(1)));
        assert_eq!(ExactValue::gamma(&qi(5)).unwrap(), ExactValue::rational(qi(24)));
        assert_eq!(ExactValue::gamma(&q(3, 2)).unwrap(), ExactValue::sqrt_pi().scale(&q(1, 2)));
        assert_eq!(ExactValue::gamma(&q(-1, 2)).unwrap(), ExactValue::sqrt_pi().scale(&qi(-2)));
        let g = ExactValue::gamma(&q(7, 3)).unwrap();
        assert_eq!(g, ExactValue::new(q(4, 9), Unit::Gamma(q(1, 3))));
        assert!(ExactValue::gamma(&qi(0)).is_err());
    }

    #[test]
    fn beta_canonical() {
        // B(1/2, 1) = 2, B(1/2, 2) = 4/3, B(1/2, 3/2) = pi/2 kept as B(1/2,1/2)/2
        assert_eq!(ExactValue::beta_half(&qi(1)).unwrap(), ExactValue::rational(qi(2)));
        assert_eq!(ExactValue::beta_half(&qi(2)).unwrap(), ExactValue::rational(q(4, 3)));
        assert_eq!(
            ExactValue::beta_half(&q(3, 2)).unwrap(),
            ExactValue::new(q(1, 2), Unit::BetaHalf(q(1, 2)))
        );
    }

    #[test]
    fn unit_text_round_trip() {
        for u in [Unit::One, Unit::SqrtPi, Unit::Gamma(q(1, 3)), Unit::BetaHalf(q(1, 2))] {
            assert_eq!(u.to_string().parse::<Unit>().unwrap(), u);
        }
    }

    #[test]
    fn unit_mismatch() {
        let a = ExactValue::sqrt_pi();
        let b = ExactValue::rational(qi(1));
        assert!(a.add(&b).is_err());
        assert_eq!(a.add(&ExactValue::zero()).unwrap(), a);
    }
}
