use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use xmop_exact::{fmt_q, parse_q, q, qi, Bound, ExactValue, PolyMat, QMat, RatMat, Unit, ValueMat, Q};

use crate::error::KernelError;
use crate::kernel::Kernel;
use crate::quasi::QuasiRatMat;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Endpoint {
    NegInf,
    PosInf,
    At(Q),
}

impl Endpoint {
    pub fn to_bound(&self) -> Bound {
        match self {
            Endpoint::NegInf => Bound::NegInf,
            Endpoint::PosInf => Bound::PosInf,
            Endpoint::At(x) => Bound::At(x.clone()),
        }
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Endpoint::At(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::NegInf => f.write_str("-inf"),
            Endpoint::PosInf => f.write_str("+inf"),
            Endpoint::At(x) => f.write_str(&fmt_q(x)),
        }
    }
}

impl fmt::Debug for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.as_str() {
            "-inf" => Ok(Endpoint::NegInf),
            "+inf" | "inf" => Ok(Endpoint::PosInf),
            _ => parse_q(&s).map(Endpoint::At).map_err(serde::de::Error::custom),
        }
    }
}

/// Support interval [lo, hi] (open at infinite ends).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Support {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl Support {
    pub fn real_line() -> Self {
        Support { lo: Endpoint::NegInf, hi: Endpoint::PosInf }
    }

    pub fn half_line() -> Self {
        Support { lo: Endpoint::At(Q::zero()), hi: Endpoint::PosInf }
    }

    pub fn unit_interval() -> Self {
        Support { lo: Endpoint::At(qi(-1)), hi: Endpoint::At(qi(1)) }
    }

    /// Strictly inside the support.
    pub fn contains_open(&self, x: &Q) -> bool {
        let above = match &self.lo {
            Endpoint::At(l) => x > l,
            Endpoint::NegInf => true,
            Endpoint::PosInf => false,
        };
        let below = match &self.hi {
            Endpoint::At(h) => x < h,
            Endpoint::PosInf => true,
            Endpoint::NegInf => false,
        };
        above && below
    }

    /// Side of the support relative to a finite center: +1 if the support lies to the right.
    pub fn side_of(&self, c: &Q) -> i32 {
        match &self.lo {
            Endpoint::At(l) if c <= l => 1,
            _ => -1,
        }
    }

    /// Finite endpoints with the side the support lies on.
    pub fn finite_ends(&self) -> Vec<(Q, i32)> {
        let mut v = Vec::new();
        if let Endpoint::At(l) = &self.lo {
            v.push((l.clone(), 1));
        }
        if let Endpoint::At(h) = &self.hi {
            v.push((h.clone(), -1));
        }
        v
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PointMass {
    #[serde(with = "xmop_exact::scalar::serde_q")]
    pub at: Q,
    #[serde(with = "xmop_exact::scalar::serde_q")]
    pub zeta: Q,
    #[serde(with = "xmop_exact::mat::serde_qmat")]
    pub mass: QMat,
}

/// Matrix weight: kernel(t) * density(t) dt on the support, plus point masses zeta*M*delta_t0.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WeightSpec {
    pub support: Support,
    pub kernel: Kernel,
    pub density: RatMat,
    #[serde(default)]
    pub point_masses: Vec<PointMass>,
    /// Divide the absolutely continuous part by the kernel's base unit (sqrt(pi),
    /// Gamma(alpha+1), ...), so that its moments are rational multiples of 1.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalized: bool,
}

/// The three closed-form scalar kernels with exact moments.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum KernelFamily {
    /// exp(-t^2) on R
    Gaussian,
    /// exp(-t) t^alpha on [0, inf)
    Laguerre(Q),
    /// (1-t^2)^lambda on [-1, 1]
    Jacobi(Q),
}

impl KernelFamily {
    pub fn classify(support: &Support, kernel: &Kernel) -> Result<Self, KernelError> {
        let unsupported = || KernelError::UnsupportedKernel(format!("{kernel} on [{}, {}]", support.lo, support.hi));
        let e = kernel.exp_arg();
        let fs = kernel.factors();
        match (&support.lo, &support.hi) {
            (Endpoint::NegInf, Endpoint::PosInf) => {
                if *e == xmop_exact::Poly::from_ints(&[0, 0, -1]) && fs.is_empty() {
                    Ok(KernelFamily::Gaussian)
                } else {
                    Err(unsupported())
                }
            }
            (Endpoint::At(l), Endpoint::PosInf) if l.is_zero() => {
                let ok_exp = *e == xmop_exact::Poly::from_ints(&[0, -1]);
                match fs {
                    [] if ok_exp => Ok(KernelFamily::Laguerre(Q::zero())),
                    [(c, g)] if ok_exp && c.is_zero() && *g > qi(-1) => Ok(KernelFamily::Laguerre(g.clone())),
                    _ => Err(unsupported()),
                }
            }
            (Endpoint::At(l), Endpoint::At(h)) if *l == qi(-1) && *h == qi(1) && e.is_zero() => match fs {
                [] => Ok(KernelFamily::Jacobi(Q::zero())),
                [(c1, g1), (c2, g2)] if *c1 == qi(-1) && *c2 == qi(1) && g1 == g2 && *g1 > qi(-1) => {
                    Ok(KernelFamily::Jacobi(g1.clone()))
                }
                _ => Err(unsupported()),
            },
            _ => Err(unsupported()),
        }
    }

    pub fn support(&self) -> Support {
        match self {
            KernelFamily::Gaussian => Support::real_line(),
            KernelFamily::Laguerre(_) => Support::half_line(),
            KernelFamily::Jacobi(_) => Support::unit_interval(),
        }
    }

    pub fn kernel(&self) -> Kernel {
        match self {
            KernelFamily::Gaussian => Kernel::exp(xmop_exact::Poly::from_ints(&[0, 0, -1])),
            KernelFamily::Laguerre(a) => Kernel::new(xmop_exact::Poly::from_ints(&[0, -1]), vec![(Q::zero(), a.clone())]),
            KernelFamily::Jacobi(l) => Kernel::new(xmop_exact::Poly::zero(), vec![(qi(-1), l.clone()), (qi(1), l.clone())]),
        }
    }

    /// Unit shared by all moments and the rational multipliers m_k / unit for k < len.
    pub fn moment_table(&self, len: usize) -> Result<(Unit, Vec<Q>), KernelError> {
        let mut out = Vec::with_capacity(len);
        let base = match self {
            KernelFamily::Gaussian => ExactValue::sqrt_pi(),
            KernelFamily::Laguerre(a) => ExactValue::gamma(&(a + Q::one()))?,
            KernelFamily::Jacobi(l) => ExactValue::beta_half(&(l + Q::one()))?,
        };
        let unit = base.unit.clone();
        for k in 0..len {
            let m = match self {
                // m_{k+2} = (k+1)/2 m_k, odd moments vanish
                KernelFamily::Gaussian => {
                    if k % 2 == 1 {
                        Q::zero()
                    } else if k == 0 {
                        base.coeff.clone()
                    } else {
                        &out[k - 2] * q(k as i64 - 1, 2)
                    }
                }
                // m_k = (alpha + k) m_{k-1}
                KernelFamily::Laguerre(a) => {
                    if k == 0 {
                        base.coeff.clone()
                    } else {
                        &out[k - 1] * (a + qi(k as i64))
                    }
                }
                // m_{2j+2} / m_{2j} = (2j+1)/(2j+2 lambda+3)
                KernelFamily::Jacobi(l) => {
                    if k % 2 == 1 {
                        Q::zero()
                    } else if k == 0 {
                        base.coeff.clone()
                    } else {
                        let j = (k as i64 - 2) / 2;
                        &out[k - 2] * qi(2 * j + 1) / (qi(2 * j + 3) + qi(2) * l)
                    }
                }
            };
            out.push(m);
        }
        Ok((unit, out))
    }

    pub fn moment(&self, k: usize) -> Result<ExactValue, KernelError> {
        let (u, t) = self.moment_table(k + 1)?;
        Ok(ExactValue::new(t[k].clone(), u))
    }
}

impl WeightSpec {
    pub fn new(support: Support, kernel: Kernel, density: RatMat) -> Self {
        WeightSpec { support, kernel, density, point_masses: Vec::new(), normalized: false }
    }

    pub fn size(&self) -> usize {
        self.density.size()
    }

    pub fn unit_normalized(mut self) -> Self {
        self.normalized = true;
        self
    }

    pub fn with_point_mass(mut self, at: Q, zeta: Q, mass: QMat) -> Self {
        if !zeta.is_zero() {
            self.point_masses.push(PointMass { at, zeta, mass });
        }
        self
    }

    pub fn as_quasi(&self) -> QuasiRatMat {
        QuasiRatMat::new(self.kernel.clone(), self.density.clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.density == self.density.transpose() && self.point_masses.iter().all(|p| p.mass == p.mass.transpose())
    }

    pub fn family(&self) -> Result<KernelFamily, KernelError> {
        KernelFamily::classify(&self.support, &self.kernel)
    }

    fn poly_density(&self) -> Result<PolyMat, KernelError> {
        self.density.to_poly().ok_or(KernelError::RationalDensity)
    }

    /// k-th moment matrix: integral of t^k dW, including point masses.
    pub fn moments(&self, k: usize) -> Result<ValueMat, KernelError> {
        let n = self.size();
        let tk = PolyMat::scalar(n, xmop_exact::Poly::monomial(Q::one(), k));
        self.exact_inner_product(&tk, &PolyMat::identity(n))
    }

    /// <P, Q> = integral of P dW Q^T, exactly.
    pub fn exact_inner_product(&self, p: &PolyMat, qm: &PolyMat) -> Result<ValueMat, KernelError> {
        let fam = self.family()?;
        let d = self.poly_density()?;
        let integrand = &(p * &d) * &qm.transpose();
        let deg = integrand.degree().unwrap_or(0);
        let (unit, table) = fam.moment_table(deg + 1)?;
        let n = self.size();
        let mut coeffs = QMat::zeros(n);
        for k in 0..=deg {
            if table[k].is_zero() {
                continue;
            }
            coeffs = &coeffs + &integrand.coeff(k).map(|x| x * &table[k]);
        }
        let unit = if self.normalized { Unit::One } else { unit };
        let mut out = ValueMat::new(coeffs, unit);
        for pm in &self.point_masses {
            let v = &(&p.eval(&pm.at) * &pm.mass.map(|x| x * &pm.zeta)) * &qm.eval(&pm.at).transpose();
            out = out.add(&ValueMat::new(v, Unit::One))?;
        }
        Ok(out)
    }

    /// Scalar multiple of the weight (density and point masses).
    pub fn scale(&self, x: &Q) -> Self {
        WeightSpec {
            support: self.support.clone(),
            kernel: self.kernel.clone(),
            density: self.density.scale_q(x),
            point_masses: self
                .point_masses
                .iter()
                .map(|p| PointMass { at: p.at.clone(), zeta: &p.zeta * x, mass: p.mass.clone() })
                .collect(),
            normalized: self.normalized,
        }
    }

    pub fn has_negative_mass(&self) -> bool {
        self.point_masses.iter().any(|p| p.zeta.is_negative())
    }
}
