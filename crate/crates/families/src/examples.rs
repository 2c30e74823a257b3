//! The five example pipelines: build the classical family, pick a seed and U, build the
//! annihilator, factorize, transform, and produce the exceptional family with its weight.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use xmop_darboux::{
    build_annihilator, conjugated_weight, delta_extension, exceptional_weight, factorize, formal_conjugated_weight,
    gram_schmidt, transform,
    DarbouxError, Factorization, TransformResult,
};
use xmop_diffops::{DiffOp, Eigen};
use xmop_exact::{fmt_q, parse_q, q, qi, PolyMat, QMat, RatMat, Unit, ValueMat, Q};
use xmop_kernels::{Kernel, QuasiRatMat, WeightSpec};

use crate::closed_forms::ex2_tilde_a;
use crate::error::FamilyError;
use crate::family::{hermite_gamma, ClassicalFamily, FamilyKind};
use crate::mk::{m2, pl, rc, rp};
use crate::par::{self, Exec};

pub type Params = BTreeMap<String, Q>;

/// Parse `a=2,zeta=1/3`; whitespace and empty items are ignored.
pub fn parse_params(s: &str) -> Result<Params, FamilyError> {
    let mut out = Params::new();
    for item in s.split([',', ' ']).filter(|x| !x.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| FamilyError::InvalidParameters(format!("expected key=value, got {item:?}")))?;
        out.insert(k.trim().to_string(), parse_q(v.trim())?);
    }
    Ok(out)
}

pub fn default_params(id: u8) -> Result<Params, FamilyError> {
    let kv: &[(&str, Q)] = match id {
        1 => &[("a", qi(2))],
        2 => &[("a", qi(4))],
        3 => &[("a", qi(1)), ("alpha", qi(0))],
        4 => &[("a", q(1, 2)), ("r", qi(3))],
        5 => &[("a", qi(2)), ("zeta", qi(1))],
        _ => return Err(FamilyError::UnknownExample(id)),
    };
    Ok(kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
}

/// Defaults overridden by the given keys; unknown keys are rejected.
pub fn resolve_params(id: u8, given: &Params) -> Result<Params, FamilyError> {
    let mut p = default_params(id)?;
    for (k, v) in given {
        if !p.contains_key(k) {
            return Err(FamilyError::InvalidParameters(format!("example {id} has no parameter {k:?}")));
        }
        p.insert(k.clone(), v.clone());
    }
    Ok(p)
}

pub mod serde_params {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Params, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(p.iter().map(|(k, v)| (k, fmt_q(v))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Params, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| parse_q(&v).map(|x| (k, x)).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// One quasi-Darboux step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub seed: QuasiRatMat,
    pub u: RatMat,
    pub annihilator: DiffOp,
    /// Operator with the seed in its kernel; its second-order coefficient enters the weight.
    pub kernel_op: DiffOp,
}

/// A transformed basis operator together with its basis coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisImage {
    #[serde(with = "xmop_exact::scalar::serde_q_vec")]
    pub u: Vec<Q>,
    pub operator: DiffOp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRun {
    pub id: u8,
    #[serde(with = "serde_params")]
    pub params: Params,
    pub max_n: usize,
    pub family: ClassicalFamily,
    pub steps: Vec<Step>,
    /// Member n is the chain image of P_{n - shift}.
    pub shift: usize,
    /// Member 0 is the identity (not a chain image).
    pub identity_at_zero: bool,
    pub basis: Vec<BasisImage>,
    pub result: TransformResult,
    pub weight: WeightSpec,
    /// Scalar removed from the conjugated weight.
    #[serde(with = "xmop_exact::scalar::serde_q")]
    pub weight_factor: Q,
    /// Chain images before Gram-Schmidt (point-mass example) or after the first step (two-step example).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub auxiliary: BTreeMap<usize, PolyMat>,
    /// Fifth-order operator A o D3 o B (Laguerre example).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub high_order: Option<DiffOp>,
}

fn param<'a>(p: &'a Params, k: &'static str) -> Result<&'a Q, FamilyError> {
    p.get(k).ok_or(FamilyError::MissingParameter(k))
}

fn unit_u(len: usize, i: usize) -> Vec<Q> {
    (0..len).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

fn one_step(d: &DiffOp, a: &DiffOp) -> Result<(DiffOp, Factorization), DarbouxError> {
    let f = factorize(d, a)?;
    Ok((transform(d, &f)?, f))
}

fn apply(a: &DiffOp, p: &PolyMat) -> Result<PolyMat, FamilyError> {
    a.apply_poly(p)
        .ok_or_else(|| FamilyError::InvalidParameters("annihilator does not map polynomials to polynomials".into()))
}

/// u with the degree-one Hermite-type member in the kernel at xi = 1 - a^2.
pub fn ex1_kernel_u(a: &Q) -> Vec<Q> {
    vec![qi(1), qi(4) / (a * a - qi(2)), qi(0), qi(0), qi(4)]
}

/// u of the operator compatible with the point mass at 0.
pub fn ex5_u(a: &Q) -> Vec<Q> {
    let a2 = a * a;
    vec![qi(1), qi(4) / &a2, qi(0), qi(0), qi(4) - qi(4) / &a2]
}

/// Seed and annihilator of the one-step Hermite-type example (U = I, xi = 1 - a^2).
pub fn ex1_step(a: &Q) -> Result<(ClassicalFamily, Step), FamilyError> {
    let a2 = a * a;
    if a2 <= qi(2) {
        return Err(FamilyError::InvalidParameters(format!("need a^2 > 2, got a = {}", fmt_q(a))));
    }
    let fam = ClassicalFamily::hermite(a.clone(), qi(1) - &a2)?;
    let seed = QuasiRatMat::poly(&fam.poly(1)?);
    let u = RatMat::identity(2);
    let annihilator = build_annihilator(&seed, &u)?;
    let kernel_op = fam.combination(&ex1_kernel_u(a))?;
    Ok((fam, Step { seed, u, annihilator, kernel_op }))
}

/// -<p, K(q)>_W / factor: inner product of chain images A(p), A(q) against the conjugated weight.
pub fn reduced_inner_product(
    w: &WeightSpec,
    kernel_op: &DiffOp,
    p: &PolyMat,
    qm: &PolyMat,
    factor: &Q,
) -> Result<ValueMat, FamilyError> {
    let kq = kernel_op
        .apply_poly(qm)
        .ok_or_else(|| FamilyError::InvalidParameters("kernel operator has rational coefficients".into()))?;
    Ok(w.exact_inner_product(p, &kq)?.scale(&(-factor.recip())))
}

fn transform_basis(
    fam: &ClassicalFamily,
    steps: &[Step],
    which: &[usize],
    exec: Exec,
) -> Result<Vec<BasisImage>, FamilyError> {
    let len = fam.operators.len();
    par::map(exec, which, |&i| {
        let u = unit_u(len, i);
        let mut d = fam.operators[i].clone();
        for s in steps {
            d = one_step(&d, &s.annihilator)?.0;
        }
        Ok(BasisImage { u, operator: d })
    })
    .into_iter()
    .collect()
}

pub fn run(id: u8, given: &Params, max_n: usize, exec: Exec) -> Result<ExampleRun, FamilyError> {
    let params = resolve_params(id, given)?;
    match id {
        1 => run1(params, max_n, exec),
        2 => run2(params, max_n, exec),
        3 => run3(params, max_n, exec),
        4 => run4(params, max_n, exec),
        5 => run5(params, max_n, exec),
        _ => Err(FamilyError::UnknownExample(id)),
    }
}

fn images(
    fam: &ClassicalFamily,
    a: &DiffOp,
    shift: usize,
    identity_at_zero: bool,
    max_n: usize,
    exec: Exec,
) -> Result<BTreeMap<usize, PolyMat>, FamilyError> {
    let base = fam.polys(max_n.saturating_sub(shift))?;
    let imgs = par::try_map_range(exec, shift, max_n + 1, |n| apply(a, &base[n - shift]).map(|p| (n, p)))?;
    let mut out: BTreeMap<usize, PolyMat> = imgs.into_iter().collect();
    if identity_at_zero {
        out.insert(0, PolyMat::identity(2));
    }
    Ok(out)
}

fn run1(params: Params, max_n: usize, exec: Exec) -> Result<ExampleRun, FamilyError> {
    let a = param(&params, "a")?.clone();
    let (fam, step) = ex1_step(&a)?;
    let basis = transform_basis(&fam, std::slice::from_ref(&step), &[0, 1, 2, 3, 4], exec)?;
    let imgs = images(&fam, &step.annihilator, 0, false, max_n, exec)?;
    let result = TransformResult::from_images(basis[0].operator.clone(), imgs, max_n)?;
    let factor = qi(4) * (&a * &a - qi(2));
    let weight = exceptional_weight(&step.seed, &step.u, &step.kernel_op.coeff(2), &fam.weight)?
        .scale(&factor.recip());
    Ok(ExampleRun {
        id: 1,
        params,
        max_n,
        family: fam,
        steps: vec![step],
        shift: 0,
        identity_at_zero: false,
        basis,
        result,
        weight,
        weight_factor: factor,
        auxiliary: BTreeMap::new(),
        high_order: None,
    })
}

fn run2(params: Params, max_n: usize, exec: Exec) -> Result<ExampleRun, FamilyError> {
    let a = param(&params, "a")?.clone();
    let a2 = &a * &a;
    let fam = ClassicalFamily::hermite(a.clone(), Q::one())?;
    // first step: seed P_1 with U = P_1'
    let p1 = fam.poly(1)?;
    let seed1 = QuasiRatMat::poly(&p1);
    let u1 = p1.derive().to_rat();
    let a1 = build_annihilator(&seed1, &u1)?;
    let k1 = fam.combination(&[qi(1), qi(-4) / (qi(2) + &a2), qi(0), qi(0), qi(4)])?;
    let step1 = Step { seed: seed1, u: u1, annihilator: a1.clone(), kernel_op: k1 };
    // second step: seed A_1(P_2) with a constant diagonal U
    let first = images(&fam, &a1, 0, false, max_n.max(2), exec)?;
    let s = first[&2].clone();
    let seed2 = QuasiRatMat::poly(&s);
    let u2 = QMat::diag(vec![q(1, 2), (&a2 + qi(2)).recip()]).to_rat();
    let a2op = build_annihilator(&seed2, &u2)?;
    let dhat = fam.combination(&[qi(1), qi(-2) / (qi(1) + &a2), qi(0), qi(0), qi(6)])?;
    let k2 = one_step(&dhat, &a1)?.0;
    let step2 = Step { seed: seed2, u: u2, annihilator: a2op.clone(), kernel_op: k2 };
    let steps = vec![step1, step2];
    let basis = transform_basis(&fam, &steps, &[0, 1, 2, 3, 4], exec)?;
    let idx: Vec<usize> = (0..=max_n).collect();
    let second: BTreeMap<usize, PolyMat> = par::map(exec, &idx, |&n| apply(&a2op, &first[&n]).map(|p| (n, p)))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let result = TransformResult::from_images(basis[0].operator.clone(), second, max_n)?;
    let b = qi(3) * &a2 + qi(2);
    let factor = qi(16) * &b * &b;
    let w1 = formal_conjugated_weight(&steps[0].annihilator.coeff(1), &steps[0].kernel_op.coeff(2), &fam.weight)?;
    let weight =
        conjugated_weight(&steps[1].annihilator.coeff(1), &steps[1].kernel_op.coeff(2), &w1)?.scale(&factor.recip());
    let auxiliary = first.into_iter().filter(|(n, _)| *n <= max_n).collect();
    Ok(ExampleRun {
        id: 2,
        params,
        max_n,
        family: fam,
        steps,
        shift: 0,
        identity_at_zero: false,
        basis,
        result,
        weight,
        weight_factor: factor,
        auxiliary,
        high_order: None,
    })
}

fn run3(params: Params, max_n: usize, exec: Exec) -> Result<ExampleRun, FamilyError> {
    let a = param(&params, "a")?.clone();
    let alpha = param(&params, "alpha")?.clone();
    let fam = ClassicalFamily::laguerre(a, alpha)?;
    let seed = fam.seed.clone().expect("laguerre seed");
    let annihilator = build_annihilator(&seed.p, &seed.u)?;
    let step = Step { seed: seed.p, u: seed.u, annihilator, kernel_op: fam.operators[0].clone() };
    let basis = transform_basis(&fam, std::slice::from_ref(&step), &[0, 1], exec)?;
    let imgs = images(&fam, &step.annihilator, 1, false, max_n, exec)?;
    let result = TransformResult::from_images(basis[0].operator.clone(), imgs, max_n)?;
    let weight = exceptional_weight(&step.seed, &step.u, &step.kernel_op.coeff(2), &fam.weight)?;
    let b = factorize(&step.kernel_op, &step.annihilator)?.b;
    let d5 = DiffOp::compose(&step.annihilator, &DiffOp::compose(&fam.operators[2], &b));
    Ok(ExampleRun {
        id: 3,
        params,
        max_n,
        family: fam,
        steps: vec![step],
        shift: 1,
        identity_at_zero: false,
        basis,
        result,
        weight,
        weight_factor: Q::one(),
        auxiliary: BTreeMap::new(),
        high_order: Some(d5),
    })
}

fn run4(params: Params, max_n: usize, exec: Exec) -> Result<ExampleRun, FamilyError> {
    let a = param(&params, "a")?.clone();
    let r = param(&params, "r")?.clone();
    let fam = ClassicalFamily::gegenbauer(a.clone(), r.clone())?;
    if fam.admissible != Some(true) {
        return Err(FamilyError::InvalidParameters(format!(
            "(a, r) = ({}, {}) is outside the admissible region",
            fmt_q(&a),
            fmt_q(&r)
        )));
    }
    let seed = fam.seed.clone().expect("gegenbauer seed");
    let annihilator = build_annihilator(&seed.p, &seed.u)?;
    let step = Step { seed: seed.p, u: seed.u, annihilator, kernel_op: fam.operators[0].clone() };
    let basis = transform_basis(&fam, std::slice::from_ref(&step), &[0], exec)?;
    let imgs = images(&fam, &step.annihilator, 2, true, max_n, exec)?;
    let result = TransformResult::from_images(basis[0].operator.clone(), imgs, max_n)?;
    let weight = exceptional_weight(&step.seed, &step.u, &step.kernel_op.coeff(2), &fam.weight)?;
    Ok(ExampleRun {
        id: 4,
        params,
        max_n,
        family: fam,
        steps: vec![step],
        shift: 2,
        identity_at_zero: true,
        basis,
        result,
        weight,
        weight_factor: Q::one(),
        auxiliary: BTreeMap::new(),
        high_order: None,
    })
}

/// Coefficients C_j with x = sum_j C_j basis_j, by leading-coefficient elimination.
pub fn decompose(x: &PolyMat, basis: &BTreeMap<usize, PolyMat>) -> Result<BTreeMap<usize, QMat>, FamilyError> {
    let mut rest = x.clone();
    let mut out = BTreeMap::new();
    while let Some(d) = rest.degree() {
        let b = basis.get(&d).ok_or(FamilyError::NotInSpan(d))?;
        let c = &rest.coeff(d) * &b.coeff(d).inverse()?;
        rest = &rest - &b.lmul_q(&c);
        out.insert(d, c);
    }
    Ok(out)
}

fn run5(params: Params, max_n: usize, exec: Exec) -> Result<ExampleRun, FamilyError> {
    let a = param(&params, "a")?.clone();
    let zeta = param(&params, "zeta")?.clone();
    if zeta < Q::zero() {
        return Err(FamilyError::InvalidParameters("zeta must be nonnegative".into()));
    }
    let (fam, step) = ex1_step(&a)?;
    let d = fam.combination(&ex5_u(&a))?;
    let (dexc, _) = one_step(&d, &step.annihilator)?;
    let factor = qi(4) * (&a * &a - qi(2));
    let base = exceptional_weight(&step.seed, &step.u, &step.kernel_op.coeff(2), &fam.weight)?
        .scale(&factor.recip())
        .unit_normalized();
    let m = QMat::diag(vec![Q::zero(), Q::one()]);
    let weight = delta_extension(&dexc, &base, &Q::zero(), &m, &zeta)?;
    let raw = images(&fam, &step.annihilator, 0, false, max_n, exec)?;
    let raw: BTreeMap<usize, PolyMat> = raw.into_iter().filter(|(n, p)| *n != 1 || !p.is_zero()).collect();
    let gs = {
        let ip = point_mass_inner_product(&fam, &step, &raw, &factor, &zeta, exec)?;
        gram_schmidt(&raw, |x, y| ip(x, y))?
    };
    let result = TransformResult::from_images(dexc.clone(), gs, max_n)?;
    Ok(ExampleRun {
        id: 5,
        params,
        max_n,
        family: fam,
        steps: vec![step],
        shift: 0,
        identity_at_zero: false,
        basis: vec![BasisImage { u: ex5_u(&a), operator: dexc }],
        result,
        weight,
        weight_factor: factor,
        auxiliary: raw,
        high_order: None,
    })
}

/// <x, y> for the normalized weight plus zeta diag(0,1) at 0, on the span of the chain images.
/// The continuous part goes through the Gram matrix of the images (exact reduction).
#[allow(clippy::type_complexity)]
fn point_mass_inner_product<'a>(
    fam: &ClassicalFamily,
    step: &'a Step,
    raw: &'a BTreeMap<usize, PolyMat>,
    factor: &Q,
    zeta: &Q,
    exec: Exec,
) -> Result<impl Fn(&PolyMat, &PolyMat) -> Result<QMat, DarbouxError> + 'a, FamilyError> {
    let idx: Vec<usize> = raw.keys().copied().collect();
    let base = fam.polys(*idx.last().unwrap_or(&0))?;
    let pairs: Vec<(usize, usize)> = idx.iter().flat_map(|&n| idx.iter().map(move |&m| (n, m))).collect();
    let gram: BTreeMap<(usize, usize), QMat> = par::map(exec, &pairs, |&(n, m)| {
        let v = reduced_inner_product(&fam.weight, &step.kernel_op, &base[n], &base[m], factor)?;
        let c = strip_unit(&v, &Unit::SqrtPi)?;
        Ok(((n, m), c))
    })
    .into_iter()
    .collect::<Result<_, FamilyError>>()?;
    let mass = QMat::diag(vec![Q::zero(), zeta.clone()]);
    let to_dx = |e: FamilyError| match e {
        FamilyError::Darboux(d) => d,
        FamilyError::Algebra(a) => DarbouxError::Algebra(a),
        other => DarbouxError::Incompatible(other.to_string()),
    };
    Ok(move |x: &PolyMat, y: &PolyMat| {
        let cx = decompose(x, raw).map_err(to_dx)?;
        let cy = decompose(y, raw).map_err(to_dx)?;
        let mut s = QMat::zeros(2);
        for (n, c) in &cx {
            for (m, d) in &cy {
                s = &s + &(&(c * &gram[&(*n, *m)]) * &d.transpose());
            }
        }
        let z = Q::zero();
        Ok(&s + &(&(&x.eval(&z) * &mass) * &y.eval(&z).transpose()))
    })
}

/// Rational coefficients of a value matrix carrying the expected unit (or zero).
pub fn strip_unit(v: &ValueMat, unit: &Unit) -> Result<QMat, FamilyError> {
    if v.is_zero() || &v.unit == unit {
        Ok(v.coeffs.clone())
    } else {
        Err(FamilyError::InvalidParameters(format!("expected unit {unit}, got {}", v.unit)))
    }
}

impl ExampleRun {
    /// Indices whose members are chain images A(P_{n - shift}).
    pub fn chain_indices(&self) -> Vec<usize> {
        self.result.polys.keys().copied().filter(|&n| n >= self.shift && !(self.identity_at_zero && n == 0)).collect()
    }

    /// Eigenvalue predicted by the classical family for basis image i at member n.
    pub fn expected_eigenvalue(&self, i: usize, n: usize) -> Result<Option<QMat>, FamilyError> {
        if n < self.shift || (self.identity_at_zero && n == 0) {
            return Ok(None);
        }
        let u = &self.basis[i].u;
        let m = n - self.shift;
        match &self.family.kind {
            FamilyKind::Hermite { a, xi } => Ok(Some(hermite_gamma(m, a, xi, u))),
            _ => self.family.eigenvalue(m, u).map(Some),
        }
    }

    /// <P_n, P_m> against the exceptional weight through the factorization, for chain images.
    pub fn reduced_gram(&self, n: usize, m: usize) -> Result<ValueMat, FamilyError> {
        let base = self.family.polys(n.max(m) - self.shift)?;
        let (pn, pm) = (&base[n - self.shift], &base[m - self.shift]);
        match self.steps.len() {
            1 => reduced_inner_product(&self.family.weight, &self.steps[0].kernel_op, pn, pm, &self.weight_factor),
            2 => {
                // <A2 X, A2 Y> = -<X, K2(Y)>; K2 acts on first-step images as an eigenvalue
                let first = |p: &PolyMat| apply(&self.steps[0].annihilator, p);
                let ym = first(pm)?;
                let g = match self.steps[1].kernel_op.eigencheck_poly(&ym)? {
                    Eigen::Eigenvalue(g) => g,
                    Eigen::NotEigenfunction(_) => return Err(DarbouxError::NotEigen(m).into()),
                };
                let inner = reduced_inner_product(&self.family.weight, &self.steps[0].kernel_op, pn, pm, &Q::one())?;
                Ok(inner.rmul(&g.transpose()).scale(&(-self.weight_factor.recip())))
            }
            _ => Err(FamilyError::InvalidParameters("unsupported chain length".into())),
        }
    }
}

/// Family from the non-polynomial seed e^{t^2} [[t, a/(a^2-2)], [-a/2, t]] W^{-1} at xi = 1,
/// indexed n = 2, 3, ... as A(P_{n-2}).
pub fn ex1_nonpolynomial_seed_family(a: &Q, max_n: usize) -> Result<BTreeMap<usize, PolyMat>, FamilyError> {
    let fam = ClassicalFamily::hermite(a.clone(), Q::one())?;
    let a2 = a * a;
    let k = &a2 - qi(2);
    let front = m2(rp(pl(&[Q::zero(), qi(1)])), rc(a / &k), rc(-a / qi(2)), rp(pl(&[Q::zero(), qi(1)])));
    let body = &front * &fam.weight.density.inverse()?;
    let seed = QuasiRatMat::new(Kernel::exp(pl(&[Q::zero(), Q::zero(), qi(1)])), body);
    let a21 = &a2 - qi(1);
    let u = m2(
        pl(&[qi(4) * (-&a2 - qi(2)) * &a21 / &k, Q::zero(), qi(4) * (qi(2) * &a2 - qi(4)) * &a21 / &k]),
        pl(&[Q::zero(), qi(-32) * a * &a21 * &k]),
        pl(&[Q::zero(), qi(8) * a]),
        pl(&[qi(8) * &k * (&a2 - qi(2)), Q::zero(), qi(8) * &k * (qi(2) * &a2 - qi(4))]),
    );
    let ann = build_annihilator(&seed, &u.to_rat())?;
    let base = fam.polys(max_n.saturating_sub(2))?;
    (2..=max_n).map(|n| apply(&ann, &base[n - 2]).map(|p| (n, p))).collect()
}

/// One-step family at a~ = a sqrt(2)/sqrt(3a^2+2), xi = 1, from the non-polynomial seed in the
/// kernel of D with u = ((3a~^2-2)/(a~^2-1), 4/(a~^2-1), 0, 0, -4(3a~^2-2)/(a~^2-1)).
/// Member 0 is I and member n + 3 is A(P_n).
pub fn ex2_one_step_family(a: &Q, max_n: usize) -> Result<(Q, Step, BTreeMap<usize, PolyMat>), FamilyError> {
    let at = ex2_tilde_a(a).ok_or_else(|| {
        FamilyError::InvalidParameters(format!("a sqrt(2)/sqrt(3a^2+2) is irrational at a = {}", fmt_q(a)))
    })?;
    let fam = ClassicalFamily::hermite(at.clone(), Q::one())?;
    let b2 = &at * &at;
    let (c1, c3) = (&b2 - qi(1), qi(3) * &b2 - qi(2));
    let kernel_op = fam.combination(&[&c3 / &c1, qi(4) / &c1, qi(0), qi(0), qi(-4) * &c3 / &c1])?;
    let front = m2(
        rp(pl(&[-(qi(2) * &c1).recip(), Q::zero(), qi(1)])),
        rp(pl(&[Q::zero(), &at / &c1])),
        rp(pl(&[Q::zero(), -at.clone()])),
        rp(pl(&[q(1, 2), Q::zero(), qi(1)])),
    );
    let body = &front * &fam.weight.density.inverse()?;
    let seed = QuasiRatMat::new(Kernel::exp(pl(&[Q::zero(), Q::zero(), qi(1)])), body);
    let u = m2(
        pl(&[Q::zero(), qi(-3) / (qi(2) * &c1), Q::zero(), qi(1)]),
        pl(&[qi(-3) * &at * &c3 / (qi(8) * &c1), Q::zero(), qi(-6) * &at * &c3 / (qi(8) * &c1)]),
        pl(&[qi(3) * &at / (qi(2) * &c3), Q::zero(), qi(3) * &at / &c3]),
        pl(&[Q::zero(), q(3, 2), Q::zero(), qi(1)]),
    )
    .to_rat();
    let annihilator = build_annihilator(&seed, &u)?;
    let base = fam.polys(max_n.saturating_sub(3))?;
    let mut out = BTreeMap::new();
    out.insert(0, PolyMat::identity(2));
    for n in 3..=max_n {
        out.insert(n, apply(&annihilator, &base[n - 3])?);
    }
    Ok((at, Step { seed, u, annihilator, kernel_op }, out))
}

/// Images A(P_{n,a,xi}) of a Hermite-type family at another xi, through the one-step annihilator.
pub fn shifted_xi_family(a: &Q, xi: &Q, max_n: usize) -> Result<BTreeMap<usize, PolyMat>, FamilyError> {
    let (_, step) = ex1_step(a)?;
    let fam = ClassicalFamily::hermite(a.clone(), xi.clone())?;
    fam.polys(max_n)?.iter().enumerate().map(|(n, p)| apply(&step.annihilator, p).map(|x| (n, x))).collect()
}

/// <A(P_{n,xi}), A(P_{m,xi})> against the normalized one-step weight, exactly.
pub fn shifted_xi_gram(a: &Q, xi: &Q, n: usize, m: usize) -> Result<ValueMat, FamilyError> {
    let (fam0, step) = ex1_step(a)?;
    let fam = ClassicalFamily::hermite(a.clone(), xi.clone())?;
    let ps = fam.polys(n.max(m))?;
    let factor = qi(4) * (a * a - qi(2));
    reduced_inner_product(&fam0.weight, &step.kernel_op, &ps[n], &ps[m], &factor)
}
