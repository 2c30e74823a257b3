//! Right-acting matrix differential operators y -> sum_j y^(j) F_j.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use xmop_exact::{binomial, AlgebraError, PolyMat, QMat, RatFn, RatMat};
use xmop_kernels::{decay_check, KernelError, QuasiRatMat, WeightSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffOpError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("operator order {0} not supported here (max {1})")]
    Order(usize, usize),
    #[error("function is singular as a matrix function")]
    SingularFunction,
}

/// Differential operator with right coefficients F_0..F_m (top coefficient nonzero).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDiffOp", into = "RawDiffOp")]
pub struct DiffOp {
    n: usize,
    coeffs: Vec<RatMat>,
}

#[derive(Serialize, Deserialize)]
struct RawDiffOp {
    size: usize,
    order: usize,
    coeffs: Vec<RatMat>,
}

impl TryFrom<RawDiffOp> for DiffOp {
    type Error = DiffOpError;
    fn try_from(r: RawDiffOp) -> Result<Self, DiffOpError> {
        if r.coeffs.iter().any(|c| c.size() != r.size) {
            return Err(AlgebraError::Dimension(r.size, 0).into());
        }
        let d = DiffOp::new(r.size, r.coeffs);
        if d.order() != r.order && !(d.is_zero() && r.order == 0) {
            return Err(DiffOpError::Order(r.order, d.order()));
        }
        Ok(d)
    }
}

impl From<DiffOp> for RawDiffOp {
    fn from(d: DiffOp) -> Self {
        RawDiffOp { size: d.n, order: d.order(), coeffs: d.coeffs }
    }
}

impl DiffOp {
    pub fn new(n: usize, mut coeffs: Vec<RatMat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DiffOp { n, coeffs }
    }

    pub fn from_poly(coeffs: &[PolyMat]) -> Self {
        let n = coeffs.first().map_or(0, |c| c.size());
        Self::new(n, coeffs.iter().map(|c| c.to_rat()).collect())
    }

    pub fn zero(n: usize) -> Self {
        DiffOp { n, coeffs: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::right_mul(&RatMat::identity(n))
    }

    /// y -> y M
    pub fn right_mul(m: &RatMat) -> Self {
        Self::new(m.size(), vec![m.clone()])
    }

    /// y -> y' I
    pub fn derivative(n: usize) -> Self {
        Self::new(n, vec![RatMat::zeros(n), RatMat::identity(n)])
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// F_j (zero beyond the order).
    pub fn coeff(&self, j: usize) -> RatMat {
        self.coeffs.get(j).cloned().unwrap_or_else(|| RatMat::zeros(self.n))
    }

    pub fn coeffs(&self) -> &[RatMat] {
        &self.coeffs
    }

    pub fn has_polynomial_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_polynomial())
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let m = self.coeffs.len().max(o.coeffs.len());
        DiffOp::new(self.n, (0..m).map(|j| &self.coeff(j) + &o.coeff(j)).collect())
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        self.add(&o.scale(&RatFn::constant(-xmop_exact::qi(1))))
    }

    pub fn scale(&self, r: &RatFn) -> DiffOp {
        DiffOp::new(self.n, self.coeffs.iter().map(|c| c.map(|x| x * r)).collect())
    }

    /// Linear combination sum u_i D_i.
    pub fn combination(ops: &[DiffOp], u: &[xmop_exact::Q]) -> DiffOp {
        let n = ops.first().map_or(0, |d| d.n);
        ops.iter()
            .zip(u)
            .fold(DiffOp::zero(n), |acc, (d, ui)| acc.add(&d.scale(&RatFn::constant(ui.clone()))))
    }

    /// sum_j y^(j) F_j
    pub fn apply(&self, y: &QuasiRatMat) -> QuasiRatMat {
        let mut body = RatMat::zeros(self.n);
        let mut dy = y.clone();
        for (j, f) in self.coeffs.iter().enumerate() {
            if j > 0 {
                dy = dy.derive();
            }
            if !f.is_zero() {
                body = &body + &(&dy.body * f);
            }
        }
        QuasiRatMat::new(y.kernel.clone(), body)
    }

    pub fn apply_rat(&self, y: &RatMat) -> RatMat {
        self.apply(&QuasiRatMat::rational(y.clone())).body
    }

    /// Polynomial image of a polynomial argument, if it is one.
    pub fn apply_poly(&self, y: &PolyMat) -> Option<PolyMat> {
        self.apply_rat(&y.to_rat()).to_poly()
    }

    /// The operator y -> outer(inner(y)).
    pub fn compose(outer: &DiffOp, inner: &DiffOp) -> DiffOp {
        let n = outer.n;
        let m = outer.order() + inner.order();
        if outer.is_zero() || inner.is_zero() {
            return DiffOp::zero(n);
        }
        // derivatives of inner coefficients up to outer.order()
        let dinner: Vec<Vec<RatMat>> = inner
            .coeffs
            .iter()
            .map(|f| {
                let mut v = vec![f.clone()];
                for _ in 0..outer.order() {
                    let last = v.last().unwrap().derive();
                    v.push(last);
                }
                v
            })
            .collect();
        let mut out = vec![RatMat::zeros(n); m + 1];
        for (i, g) in outer.coeffs.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            // (y F_j)^(i) = sum_k C(i,k) y^(j+k) F_j^(i-k)
            for (j, df) in dinner.iter().enumerate() {
                for k in 0..=i {
                    let fd = &df[i - k];
                    if fd.is_zero() {
                        continue;
                    }
                    let c = binomial(i, k);
                    let term = (fd * g).scale_q(&c);
                    out[j + k] = &out[j + k] + &term;
                }
            }
        }
        DiffOp::new(n, out)
    }

    /// Formal adjoint with respect to W: y -> (sum_j (-1)^j (y W E_j^T)^(j)) W^{-1}.
    /// The kernel of W cancels, so the coefficients are rational.
    pub fn formal_adjoint(&self, w: &QuasiRatMat) -> Result<DiffOp, DiffOpError> {
        let winv = w.body.inverse()?;
        let m = self.order();
        let mut out = vec![RatMat::zeros(self.n); m + 1];
        for (j, e) in self.coeffs.iter().enumerate() {
            let v = w.rmul(&e.transpose());
            let mut derivs = vec![v.clone()];
            for _ in 0..j {
                let last = derivs.last().unwrap().derive();
                derivs.push(last);
            }
            for l in 0..=j {
                let c = binomial(j, l);
                let c = if j % 2 == 1 { -c } else { c };
                let term = (&derivs[j - l].body * &winv).scale_q(&c);
                out[l] = &out[l] + &term;
            }
        }
        Ok(DiffOp::new(self.n, out))
    }

    /// D(P) P^{-1} when it is a constant matrix.
    pub fn eigencheck(&self, p: &QuasiRatMat) -> Result<Eigen, DiffOpError> {
        let pinv = p.body.inverse().map_err(|e| match e {
            AlgebraError::Singular => DiffOpError::SingularFunction,
            other => other.into(),
        })?;
        let g = &self.apply(p).body * &pinv;
        Ok(match g.to_const() {
            Some(c) => Eigen::Eigenvalue(c),
            None => Eigen::NotEigenfunction(g),
        })
    }

    pub fn eigencheck_poly(&self, p: &PolyMat) -> Result<Eigen, DiffOpError> {
        self.eigencheck(&QuasiRatMat::poly(p))
    }

    pub fn symmetry_check(&self, w: &WeightSpec) -> Result<Symmetry, DiffOpError> {
        self.symmetry_check_with(w, BOUNDARY_POWERS)
    }

    /// Symmetry equations as exact identities, boundary decay at every endpoint, and
    /// the point-mass compatibility conditions.
    pub fn symmetry_check_with(&self, w: &WeightSpec, max_n: usize) -> Result<Symmetry, DiffOpError> {
        if self.order() > 2 {
            return Err(DiffOpError::Order(self.order(), 2));
        }
        let wq = w.as_quasi();
        let (f0, f1, f2) = (self.coeff(0), self.coeff(1), self.coeff(2));
        let f2w = wq.lmul(&f2);
        let f1w = wq.lmul(&f1);
        let f0w = wq.lmul(&f0);
        let violated = |which: &str, residual: RatMat| {
            Ok(Symmetry::Violated { condition: which.to_string(), residual: residual.to_string() })
        };
        let r1 = &f2w.body - &(&w.density * &f2.transpose());
        if !r1.is_zero() {
            return violated("second-order coefficient", r1);
        }
        let d_f2w = f2w.derive();
        let r2 = &d_f2w.body.scale_q(&xmop_exact::qi(2)) - &(&(&w.density * &f1.transpose()) + &f1w.body);
        if !r2.is_zero() {
            return violated("first-order coefficient", r2);
        }
        let lhs = &(&d_f2w.derive().body - &f1w.derive().body) + &f0w.body;
        let r3 = &lhs - &(&w.density * &f0.transpose());
        if !r3.is_zero() {
            return violated("zeroth-order coefficient", r3);
        }
        let flux = d_f2w.sub(&f1w)?;
        for end in [&w.support.lo, &w.support.hi] {
            if !decay_check(&f2w, end, max_n) {
                return violated(&format!("boundary F2 W at {end}"), f2w.body.clone());
            }
            if !decay_check(&flux, end, max_n) {
                return violated(&format!("boundary (F2 W)' - F1 W at {end}"), flux.body.clone());
            }
        }
        for pm in &w.point_masses {
            let (m, t0) = (pm.mass.to_rat(), &pm.at);
            let e2 = &f2.eval(t0)?.to_rat() * &m;
            let e1 = &f1.eval(t0)?.to_rat() * &m;
            let c0 = f0.eval(t0)?;
            let e0 = (&(&c0 * &pm.mass) - &(&pm.mass * &c0.transpose())).to_rat();
            for (name, r) in [("point mass F2(t0) M", e2), ("point mass F1(t0) M", e1), ("point mass F0(t0) M", e0)] {
                if !r.is_zero() {
                    return violated(name, r);
                }
            }
        }
        Ok(Symmetry::Symmetric)
    }
}

/// Powers of t checked in the boundary conditions when decay is only algebraic.
pub const BOUNDARY_POWERS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eigen {
    Eigenvalue(QMat),
    NotEigenfunction(RatMat),
}

impl Eigen {
    pub fn value(&self) -> Option<&QMat> {
        match self {
            Eigen::Eigenvalue(g) => Some(g),
            Eigen::NotEigenfunction(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Symmetry {
    Symmetric,
    Violated { condition: String, residual: String },
}

impl Symmetry {
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Symmetry::Symmetric)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match j {
                0 => write!(f, "y*{c}")?,
                1 => write!(f, "y'*{c}")?,
                _ => write!(f, "y^({j})*{c}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}
