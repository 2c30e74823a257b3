use num_traits::{Signed, Zero};
use xmop_diffops::DiffOp;
use xmop_exact::sturm::has_root_open;
use xmop_exact::{fmt_q, Mat, QMat, RatMat, Q};
use xmop_kernels::{QuasiRatMat, WeightSpec};

use crate::error::DarbouxError;

/// Exceptional weight A1^{-1} F2 W A1^{-T} with A1 = (P')^{-1} P U, which must be polynomial.
pub fn exceptional_weight(
    p: &QuasiRatMat,
    u: &RatMat,
    f2: &RatMat,
    w: &WeightSpec,
) -> Result<WeightSpec, DarbouxError> {
    let a = crate::factor::build_annihilator(p, u)?;
    let a1 = a.coeff(1);
    if !a1.is_polynomial() {
        return Err(DarbouxError::NotPolynomial);
    }
    conjugated_weight(&a1, f2, w)
}

/// A1^{-1} F2 W A1^{-T}. A1 may be rational (later steps of a chain); det A1 must not
/// vanish in the open support and the resulting density must have no pole there. A zero of det A1 at a finite endpoint
/// is accepted only where the kernel already has a power factor; the resulting pole is
/// moved into the kernel and must stay integrable.
pub fn conjugated_weight(a1: &RatMat, f2: &RatMat, w: &WeightSpec) -> Result<WeightSpec, DarbouxError> {
    if !w.point_masses.is_empty() {
        return Err(DarbouxError::PointMassConjugation);
    }
    let det = a1.det();
    if det.is_zero() {
        return Err(DarbouxError::SingularA1);
    }
    let (lo, hi) = (w.support.lo.to_bound(), w.support.hi.to_bound());
    let det = det.num().clone();
    if has_root_open(&det, &lo, &hi) {
        return Err(DarbouxError::ZeroInSupport(format!("det A1 = {det}")));
    }
    for (c, _) in w.support.finite_ends() {
        if det.eval(&c).is_zero() && w.kernel.exponent_at(&c).is_zero() {
            return Err(DarbouxError::ZeroInSupport(format!("endpoint {}", fmt_q(&c))));
        }
    }
    let out = formal_conjugated_weight(a1, f2, w)?;
    let den = out.density.common_den();
    if has_root_open(&den, &lo, &hi) {
        return Err(DarbouxError::ZeroInSupport(format!("conjugated density has a pole, denominator {den}")));
    }
    Ok(out)
}

/// A1^{-1} F2 W A1^{-T} without the support checks. Intermediate steps of a chain may
/// produce matrix functions that are not weights themselves; only the last one has to be.
pub fn formal_conjugated_weight(a1: &RatMat, f2: &RatMat, w: &WeightSpec) -> Result<WeightSpec, DarbouxError> {
    if !w.point_masses.is_empty() {
        return Err(DarbouxError::PointMassConjugation);
    }
    let a1i = a1.inverse().map_err(|_| DarbouxError::SingularA1)?;
    let density = &(&(&a1i * f2) * &w.density) * &a1i.transpose();
    let mut q = QuasiRatMat::new(w.kernel.clone(), density);
    for (c, side) in w.support.finite_ends() {
        q = q.absorb_valuation(&c, side);
        if q.kernel.exponent_at(&c) <= Q::from_integer((-1).into()) {
            return Err(DarbouxError::NotIntegrable(fmt_q(&c)));
        }
    }
    let mut out = WeightSpec::new(w.support.clone(), q.kernel, q.body);
    out.normalized = w.normalized;
    Ok(out)
}

fn psd(m: &QMat) -> bool {
    // all principal minors nonnegative
    let n = m.size();
    (1u32..(1 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub = Mat::from_fn(idx.len(), |i, j| m[(idx[i], idx[j])].clone());
        !sub.det().is_negative()
    })
}

/// w + zeta M delta_{t0}, after checking the compatibility conditions with the operator.
pub fn delta_extension(
    dexc: &DiffOp,
    w: &WeightSpec,
    t0: &Q,
    m: &QMat,
    zeta: &Q,
) -> Result<WeightSpec, DarbouxError> {
    if zeta.is_negative() {
        return Err(DarbouxError::NegativeZeta);
    }
    if zeta.is_zero() {
        return Ok(w.clone());
    }
    if m != &m.transpose() || !psd(m) {
        return Err(DarbouxError::NotPositiveSemidefinite);
    }
    let mr = m.to_rat();
    let at = |k: usize| dexc.coeff(k).eval(t0);
    if !(&at(2)?.to_rat() * &mr).is_zero() {
        return Err(DarbouxError::Incompatible("F2(t0) M != 0".into()));
    }
    if !(&at(1)?.to_rat() * &mr).is_zero() {
        return Err(DarbouxError::Incompatible("F1(t0) M != 0".into()));
    }
    let f0 = at(0)?;
    if &f0 * m != m * &f0.transpose() {
        return Err(DarbouxError::Incompatible("F0(t0) M != M F0(t0)^T".into()));
    }
    let out = w.clone().with_point_mass(t0.clone(), zeta.clone(), m.clone());
    match dexc.symmetry_check(&out)? {
        xmop_diffops::Symmetry::Symmetric => Ok(out),
        xmop_diffops::Symmetry::Violated { condition, .. } => Err(DarbouxError::SymmetryLost(condition)),
    }
}
