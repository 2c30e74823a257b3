use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use xmop_exact::{AlgebraError, Poly, PolyMat, QMat, RatFn, RatMat, Q};

use crate::error::KernelError;
use crate::kernel::Kernel;

/// kernel(t) * body(t) with a rational matrix body.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiRatMat {
    pub kernel: Kernel,
    pub body: RatMat,
}

impl QuasiRatMat {
    pub fn new(kernel: Kernel, body: RatMat) -> Self {
        QuasiRatMat { kernel, body }
    }

    pub fn rational(body: RatMat) -> Self {
        QuasiRatMat { kernel: Kernel::trivial(), body }
    }

    pub fn poly(body: &PolyMat) -> Self {
        Self::rational(body.to_rat())
    }

    pub fn constant(c: &QMat) -> Self {
        Self::rational(c.to_rat())
    }

    pub fn size(&self) -> usize {
        self.body.size()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    /// Derivative; the kernel is unchanged and the body becomes logDeriv*body + body'.
    pub fn derive(&self) -> Self {
        let ld = self.kernel.log_derivative();
        let body = if ld.is_zero() {
            self.body.derive()
        } else {
            &self.body.map(|r| r * &ld) + &self.body.derive()
        };
        QuasiRatMat { kernel: self.kernel.clone(), body }
    }

    pub fn derive_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |f, _| f.derive())
    }

    pub fn mul(&self, o: &Self) -> Self {
        QuasiRatMat { kernel: self.kernel.mul(&o.kernel), body: &self.body * &o.body }
    }

    /// Right multiplication by a rational matrix.
    pub fn rmul(&self, m: &RatMat) -> Self {
        QuasiRatMat { kernel: self.kernel.clone(), body: &self.body * m }
    }

    /// Left multiplication by a rational matrix.
    pub fn lmul(&self, m: &RatMat) -> Self {
        QuasiRatMat { kernel: self.kernel.clone(), body: m * &self.body }
    }

    pub fn scale(&self, r: &RatFn) -> Self {
        QuasiRatMat { kernel: self.kernel.clone(), body: self.body.map(|x| x * r) }
    }

    /// Sum of two functions with identical kernels. Zero summands adopt the other kernel.
    pub fn add(&self, o: &Self) -> Result<Self, KernelError> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if self.kernel != o.kernel {
            return Err(KernelError::KernelMismatch(self.kernel.to_string(), o.kernel.to_string()));
        }
        Ok(QuasiRatMat { kernel: self.kernel.clone(), body: &self.body + &o.body })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, KernelError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        QuasiRatMat { kernel: self.kernel.clone(), body: -&self.body }
    }

    pub fn transpose(&self) -> Self {
        QuasiRatMat { kernel: self.kernel.clone(), body: self.body.transpose() }
    }

    pub fn inverse(&self) -> Result<Self, KernelError> {
        Ok(QuasiRatMat { kernel: self.kernel.recip(), body: self.body.inverse()? })
    }

    /// Minimal order of the body at c: min over nonzero entries of
    /// (multiplicity of c in num) - (multiplicity of c in den). None for zero.
    pub fn body_valuation(&self, c: &Q) -> Option<i64> {
        self.body
            .entries()
            .iter()
            .filter(|r| !r.is_zero())
            .map(|r| r.num().root_multiplicity(c) as i64 - r.den().root_multiplicity(c) as i64)
            .min()
    }

    /// Move an integer power m of the body into the kernel at center c:
    /// kernel * |t-c|^m and body / (s(t-c))^m, where s = +1 when the support lies
    /// to the right of c and -1 when it lies to the left.
    pub fn shift_power(&self, c: &Q, m: i64, side: i32) -> Self {
        if m == 0 {
            return self.clone();
        }
        let lin = if side >= 0 {
            Poly::linear_root(c)
        } else {
            -&Poly::linear_root(c)
        };
        let f = RatFn::from_poly(lin.pow(m.unsigned_abs() as usize));
        let f = if m > 0 { f.inv().expect("nonzero") } else { f };
        QuasiRatMat {
            kernel: self.kernel.with_factor(c.clone(), Q::from_integer(m.into())),
            body: self.body.map(|r| r * &f),
        }
    }

    /// Absorb the body's full valuation at c into the kernel.
    pub fn absorb_valuation(&self, c: &Q, side: i32) -> Self {
        match self.body_valuation(c) {
            Some(v) => self.shift_power(c, v, side),
            None => self.clone(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.kernel.is_trivial()
    }

    /// Body evaluated at a rational point (the kernel is not evaluated).
    pub fn body_at(&self, x: &Q) -> Result<QMat, AlgebraError> {
        self.body.eval(x)
    }
}

impl fmt::Display for QuasiRatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kernel.is_trivial() {
            write!(f, "{}", self.body)
        } else {
            write!(f, "{} * {}", self.kernel, self.body)
        }
    }
}

impl fmt::Debug for QuasiRatMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuasiRatMat({self})")
    }
}
