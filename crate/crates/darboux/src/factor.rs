use num_traits::Zero;
use serde::{Deserialize, Serialize};
use xmop_diffops::{DiffOp, Eigen};
use xmop_exact::{AlgebraError, Mat, Poly, QMat, RatFn, RatMat};
use xmop_kernels::{QuasiRatMat, WeightSpec};

use crate::error::DarbouxError;

fn singular_as(e: AlgebraError, err: DarbouxError) -> DarbouxError {
    match e {
        AlgebraError::Singular => err,
        other => other.into(),
    }
}

/// A(y) = -y U + y' (P')^{-1} P U, which kills P.
pub fn build_annihilator(p: &QuasiRatMat, u: &RatMat) -> Result<DiffOp, DarbouxError> {
    let dp_inv = p.derive().body.inverse().map_err(|e| singular_as(e, DarbouxError::SingularDerivative))?;
    u.inverse().map_err(|e| singular_as(e, DarbouxError::SingularU))?;
    let a1 = &(&dp_inv * &p.body) * u;
    Ok(DiffOp::new(u.size(), vec![-u, a1]))
}

/// D(y) = B(A(y)) - y Psi with first-order A and B.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub a: DiffOp,
    pub b: DiffOp,
    pub psi: RatMat,
}

fn first_order(a: &DiffOp) -> Result<(RatMat, RatMat), DarbouxError> {
    if a.order() != 1 {
        return Err(DarbouxError::Order { expected: 1, got: a.order() });
    }
    Ok((a.coeff(0), a.coeff(1)))
}

fn a1_inverse(a1: &RatMat) -> Result<RatMat, DarbouxError> {
    a1.inverse().map_err(|e| singular_as(e, DarbouxError::SingularA1))
}

pub fn factorize(d: &DiffOp, a: &DiffOp) -> Result<Factorization, DarbouxError> {
    if d.order() > 2 {
        return Err(DarbouxError::Order { expected: 2, got: d.order() });
    }
    let (a0, a1) = first_order(a)?;
    let a1i = a1_inverse(&a1)?;
    let (f0, f1, f2) = (d.coeff(0), d.coeff(1), d.coeff(2));
    let b1 = &a1i * &f2;
    let b0 = &a1i * &(&(&f1 - &(&a0 * &b1)) - &(&a1.derive() * &b1));
    let psi = &(&(&a0 * &b0) + &(&a0.derive() * &b1)) - &f0;
    let b = DiffOp::new(d.size(), vec![b0, b1]);
    Ok(Factorization { a: a.clone(), b, psi })
}

impl Factorization {
    pub fn a0(&self) -> RatMat {
        self.a.coeff(0)
    }

    pub fn a1(&self) -> RatMat {
        self.a.coeff(1)
    }

    /// B o A - Psi - D as an operator; zero when the factorization is exact.
    pub fn residual(&self, d: &DiffOp) -> DiffOp {
        DiffOp::compose(&self.b, &self.a).sub(&DiffOp::right_mul(&self.psi)).sub(d)
    }

    /// The identity checked on the probes t^k E_ij, k <= max_k.
    pub fn holds_on_probes(&self, d: &DiffOp, max_k: usize) -> bool {
        let n = d.size();
        (0..=max_k).all(|k| {
            (0..n * n).all(|ij| {
                let y = Mat::from_fn(n, |i, j| {
                    if i * n + j == ij {
                        RatFn::from_poly(Poly::monomial(xmop_exact::qi(1), k))
                    } else {
                        RatFn::from_poly(Poly::zero())
                    }
                });
                let lhs = &self.b.apply_rat(&self.a.apply_rat(&y)) - &(&y * &self.psi);
                lhs == d.apply_rat(&y)
            })
        })
    }

    /// With P an eigenfunction of D (eigenvalue G) killed by A, Psi = -P^{-1} G P.
    pub fn psi_matches_seed(&self, d: &DiffOp, p: &QuasiRatMat) -> Result<bool, DarbouxError> {
        let g = match d.eigencheck(p)? {
            Eigen::Eigenvalue(g) => g,
            Eigen::NotEigenfunction(_) => return Ok(false),
        };
        Ok(psi_from_eigenvalue(p, &g)? == self.psi)
    }

    /// A1^{-1} Psi A1, the term removed from A o B.
    pub fn conjugated_psi(&self) -> Result<RatMat, DarbouxError> {
        let a1 = self.a1();
        Ok(&(&a1_inverse(&a1)? * &self.psi) * &a1)
    }
}

/// The swapped operator A o B - y A1^{-1} Psi A1.
pub fn transform(d: &DiffOp, fact: &Factorization) -> Result<DiffOp, DarbouxError> {
    if fact.b.size() != d.size() {
        return Err(AlgebraError::Dimension(fact.b.size(), d.size()).into());
    }
    let cpsi = fact.conjugated_psi()?;
    Ok(DiffOp::compose(&fact.a, &fact.b).sub(&DiffOp::right_mul(&cpsi)))
}

/// Outcome of the invariance identity A(Psi) = A0 A1^{-1} Psi A1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceCheck {
    pub holds: bool,
    pub residual: RatMat,
}

pub fn invariance_check(a: &DiffOp, psi: &RatMat) -> Result<InvarianceCheck, DarbouxError> {
    let (a0, a1) = first_order(a)?;
    let a1i = a1_inverse(&a1)?;
    let lhs = a.apply_rat(psi);
    let rhs = &(&(&a0 * &a1i) * psi) * &a1;
    let residual = &lhs - &rhs;
    Ok(InvarianceCheck { holds: residual.is_zero(), residual })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelFactorization {
    /// Symmetry condition holds and D = -(d - L)^dagger o F2 o (d - L), L = P^{-1} P'.
    Holds,
    /// (F1/2 + L F2) W is not symmetric; the residual is X W - W X^T.
    ConditionViolated { residual: RatMat },
    /// The condition holds but the factorized form differs from D.
    FactorizationMismatch { residual: DiffOp },
}

impl KernelFactorization {
    pub fn holds(&self) -> bool {
        matches!(self, KernelFactorization::Holds)
    }
}

/// Self-adjoint factorization through a seed in the kernel of D.
pub fn kernel_factorization_check(
    d: &DiffOp,
    p: &QuasiRatMat,
    w: &WeightSpec,
) -> Result<KernelFactorization, DarbouxError> {
    if d.order() > 2 {
        return Err(DarbouxError::Order { expected: 2, got: d.order() });
    }
    let n = d.size();
    let l = &p.body.inverse()? * &p.derive().body;
    let half = xmop_exact::q(1, 2);
    let x = &d.coeff(1).scale_q(&half) + &(&l * &d.coeff(2));
    let residual = &(&x * &w.density) - &(&w.density * &x.transpose());
    // the symmetry condition is meaningful for any invertible P, so it is reported first
    if !residual.is_zero() {
        return Ok(KernelFactorization::ConditionViolated { residual });
    }
    match d.eigencheck(p)? {
        Eigen::Eigenvalue(g) if g.is_zero() => {}
        _ => return Err(DarbouxError::NotInKernel),
    }
    let dl = DiffOp::new(n, vec![-&l, RatMat::identity(n)]);
    let adj = dl.formal_adjoint(&w.as_quasi())?;
    let inner = DiffOp::compose(&DiffOp::right_mul(&d.coeff(2)), &dl);
    let minus_one = RatFn::constant(xmop_exact::qi(-1));
    let factored = DiffOp::compose(&adj, &inner).scale(&minus_one);
    let residual = factored.sub(d);
    if residual.is_zero() {
        Ok(KernelFactorization::Holds)
    } else {
        Ok(KernelFactorization::FactorizationMismatch { residual })
    }
}

/// Convenience for callers holding a constant eigenvalue: Psi = -P^{-1} G P.
pub fn psi_from_eigenvalue(p: &QuasiRatMat, g: &QMat) -> Result<RatMat, DarbouxError> {
    let pinv = p.body.inverse()?;
    Ok(-&(&(&pinv * &g.to_rat()) * &p.body))
}
