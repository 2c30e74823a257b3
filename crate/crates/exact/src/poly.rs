use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::ring::ExactDiv;
use crate::scalar::{fmt_q, qi, Q};

/// Univariate polynomial over Q, coefficients in ascending degree.
/// The coefficient vector never ends in a zero; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly {
    #[serde(with = "crate::scalar::serde_q_vec")]
    c: Vec<Q>,
}

impl Poly {
    pub fn from_coeffs(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| qi(x)).collect())
    }

    pub fn constant(x: Q) -> Self {
        Self::from_coeffs(vec![x])
    }

    /// The indeterminate t.
    pub fn t() -> Self {
        Self::monomial(Q::one(), 1)
    }

    pub fn monomial(x: Q, k: usize) -> Self {
        if x.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); k + 1];
        c[k] = x;
        Poly { c }
    }

    /// t - r
    pub fn linear_root(r: &Q) -> Self {
        Poly { c: vec![-r.clone(), Q::one()] }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    /// Coefficient of t^k (zero past the degree).
    pub fn coeff(&self, k: usize) -> Q {
        self.c.get(k).cloned().unwrap_or_else(Q::zero)
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Lowest power of t dividing the polynomial (None for zero).
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derive(&self) -> Self {
        Self::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * qi(k as i64))
                .collect(),
        )
    }

    pub fn derive_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derive())
    }

    /// Antiderivative with zero constant term.
    pub fn integrate(&self) -> Self {
        let mut c = vec![Q::zero()];
        c.extend(
            self.c
                .iter()
                .enumerate()
                .map(|(k, x)| x / qi(k as i64 + 1)),
        );
        Self::from_coeffs(c)
    }

    pub fn scale(&self, x: &Q) -> Self {
        if x.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|c| c * x).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lc();
        if l.is_one() {
            return self.clone();
        }
        self.scale(&l.recip())
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly), AlgebraError> {
        let dd = d.degree().ok_or(AlgebraError::DivisionByZero)?;
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let inv = d.lc().recip();
        let mut r = self.c.clone();
        let mut qv = vec![Q::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let f = &r[k + dd] * &inv;
            if f.is_zero() {
                continue;
            }
            for (i, dc) in d.c.iter().enumerate() {
                r[k + i] -= &f * dc;
            }
            qv[k] = f;
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(qv), Self::from_coeffs(r)))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a
    }

    /// Polynomial in s = t - c, i.e. p(s + c).
    pub fn shift(&self, c: &Q) -> Poly {
        let mut acc = Poly::zero();
        let lin = Poly { c: vec![c.clone(), Q::one()] };
        for x in self.c.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(x.clone());
        }
        acc
    }

    /// Multiplicity of c as a root.
    pub fn root_multiplicity(&self, c: &Q) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        self.shift(c).valuation().unwrap_or(0)
    }

    pub fn pow(&self, k: usize) -> Poly {
        (0..k).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Sign of p(t) as t -> +inf (or -inf).
    pub fn sign_at_infinity(&self, positive: bool) -> i32 {
        match self.degree() {
            None => 0,
            Some(d) => {
                let s = if self.lc().is_positive() { 1 } else { -1 };
                if positive || d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&fmt_q(&a));
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&a), mono));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("t"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl From<Q> for Poly {
    fn from(x: Q) -> Self {
        Poly::constant(x)
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly { c: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly { c: vec![Q::one()] }
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (x, y) in c.iter_mut().zip(short.c.iter()) {
            *x += y;
        }
        Poly::from_coeffs(c)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = self.c.clone();
        c.resize(n, Q::zero());
        for (x, y) in c.iter_mut().zip(o.c.iter()) {
            *x -= y;
        }
        Poly::from_coeffs(c)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.c.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Poly::from_coeffs(c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { c: self.c.iter().map(|x| -x).collect() }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
        impl AddAssign<&$t> for $t {
            fn add_assign(&mut self, o: &$t) {
                *self = &*self + o;
            }
        }
        impl SubAssign<&$t> for $t {
            fn sub_assign(&mut self, o: &$t) {
                *self = &*self - o;
            }
        }
    };
}
pub(crate) use owned_ops;

owned_ops!(Poly);

impl ExactDiv for Poly {
    fn div_exact(&self, other: &Self) -> Self {
        let (q, r) = self.divrem(other).expect("exact division by zero polynomial");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}
