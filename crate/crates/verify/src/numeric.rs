//! Quadrature inner products. The weight's kernel (after moving the density's endpoint
//! valuation into it) must be classical; the rational part is folded into the integrand
//! and screened for poles on the closed support first.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use xmop_exact::sturm::has_root_closed;
use xmop_exact::{Poly, PolyMat, RatMat, Q};
use xmop_families::{par, Exec};
use xmop_kernels::{Kernel, KernelFamily, QuasiRatMat, WeightSpec};

use crate::dd::DD;
use crate::error::VerifyError;
use crate::quad::{exact_to_f64, gauss_rule, unit_value, QuadratureRule};

/// Small dense float matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumMat {
    pub n: usize,
    pub data: Vec<f64>,
}

impl NumMat {
    pub fn zeros(n: usize) -> Self {
        NumMat { n, data: vec![0.0; n * n] }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// max |self - other| / max(1, max |other|)
    pub fn rel_diff(&self, other: &NumMat) -> f64 {
        let d = self.data.iter().zip(&other.data).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        d / other.max_abs().max(1.0)
    }
}

impl fmt::Display for NumMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.n {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.n {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{:.3e}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

fn poly_dd(p: &Poly) -> Vec<DD> {
    p.coeffs().iter().map(DD::from_q).collect()
}

fn horner(c: &[DD], x: DD) -> DD {
    c.iter().rev().fold(DD::ZERO, |acc, a| acc * x + *a)
}

/// Matrix function with coefficients pre-converted for repeated evaluation.
struct DdRat {
    n: usize,
    num: Vec<Vec<DD>>,
    den: Vec<Vec<DD>>,
}

impl DdRat {
    fn new(m: &RatMat) -> Self {
        DdRat {
            n: m.size(),
            num: m.entries().iter().map(|e| poly_dd(e.num())).collect(),
            den: m.entries().iter().map(|e| poly_dd(e.den())).collect(),
        }
    }

    fn from_poly(m: &PolyMat) -> Self {
        DdRat { n: m.size(), num: m.entries().iter().map(poly_dd).collect(), den: vec![vec![DD::ONE]; m.size() * m.size()] }
    }

    fn eval(&self, x: DD) -> Vec<DD> {
        self.num.iter().zip(&self.den).map(|(a, b)| horner(a, x) / horner(b, x)).collect()
    }
}

fn matmul(n: usize, a: &[DD], b: &[DD]) -> Vec<DD> {
    let mut out = vec![DD::ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// a b^T
fn mul_bt(n: usize, a: &[DD], b: &[DD]) -> Vec<DD> {
    let mut out = vec![DD::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = DD::ZERO;
            for k in 0..n {
                s += a[i * n + k] * b[j * n + k];
            }
            out[i * n + j] = s;
        }
    }
    out
}

/// The weight split as (classical base kernel) x (rational density), ready for quadrature.
pub struct PreparedWeight {
    pub family: KernelFamily,
    pub density: RatMat,
    /// Divide the continuous part by this (normalized weights), else 1.
    pub scale: f64,
    pub spec: WeightSpec,
}

/// Move the density's endpoint valuations into the kernel, classify, and screen poles.
pub fn prepare_weight(w: &WeightSpec) -> Result<PreparedWeight, VerifyError> {
    let mut qm = w.as_quasi();
    for (c, side) in w.support.finite_ends() {
        qm = qm.absorb_valuation(&c, side);
    }
    let family = KernelFamily::classify(&w.support, &qm.kernel).map_err(|_| {
        VerifyError::UnsupportedKernel(format!("{} on [{}, {}]", qm.kernel, w.support.lo, w.support.hi))
    })?;
    screen_poles(&qm.body, w)?;
    let scale = if w.normalized { unit_value(&w.family()?.moment_table(1)?.0) } else { 1.0 };
    Ok(PreparedWeight { family, density: qm.body, scale, spec: w.clone() })
}

fn screen_poles(m: &RatMat, w: &WeightSpec) -> Result<(), VerifyError> {
    let den = m.common_den();
    if has_root_closed(&den, &w.support.lo.to_bound(), &w.support.hi.to_bound()) {
        return Err(VerifyError::PoleOnSupport(den.to_string()));
    }
    Ok(())
}

pub(crate) fn kernel_at(k: &Kernel, x: &Q) -> f64 {
    let e = xmop_exact::to_f64(&k.exp_arg().eval(x)).exp();
    k.factors().iter().fold(e, |acc, (c, g)| {
        let d = xmop_exact::to_f64(&(x - c)).abs();
        acc * d.powf(xmop_exact::to_f64(g))
    })
}

/// Point-mass contribution sum zeta F(t0) M G(t0)^T for rational F, G.
fn point_mass_part(f: &QuasiRatMat, g: &QuasiRatMat, w: &WeightSpec) -> Result<Vec<f64>, VerifyError> {
    let n = w.size();
    let mut out = vec![0.0; n * n];
    for pm in &w.point_masses {
        let fv = f.body_at(&pm.at)?;
        let gv = g.body_at(&pm.at)?;
        let kf = kernel_at(&f.kernel, &pm.at) * kernel_at(&g.kernel, &pm.at);
        let v = &(&fv * &pm.mass) * &gv.transpose();
        for (o, x) in out.iter_mut().zip(v.entries()) {
            *o += xmop_exact::to_f64(&pm.zeta) * xmop_exact::to_f64(x) * kf;
        }
    }
    Ok(out)
}

/// <F, G>_W = int F W G^T (+ point masses) with an npoints Gauss rule.
pub fn numeric_inner_product(
    f: &QuasiRatMat,
    g: &QuasiRatMat,
    w: &WeightSpec,
    npoints: usize,
) -> Result<NumMat, VerifyError> {
    // the factors' kernels join the weight's so the base stays classical
    let mut cont = WeightSpec::new(w.support.clone(), f.kernel.mul(&g.kernel).mul(&w.kernel), w.density.clone());
    cont.normalized = w.normalized;
    let w_cont = &cont;
    let pw = prepare_weight(w_cont)?;
    screen_poles(&f.body, w)?;
    screen_poles(&g.body, w)?;
    let rule = gauss_rule(&pw.family, npoints)?;
    let (fe, ge, we) = (DdRat::new(&f.body), DdRat::new(&g.body), DdRat::new(&pw.density));
    let n = we.n;
    let acc = integrate_matrix(&rule, n, |_, x| {
        let fw = matmul(n, &fe.eval(x), &we.eval(x));
        mul_bt(n, &fw, &ge.eval(x))
    });
    let mut data = finish(&acc, &rule, &pw);
    for (x, p) in data.iter_mut().zip(point_mass_part(f, g, w)?) {
        *x += p;
    }
    Ok(NumMat { n, data })
}

/// sum_i w_i f(i, x_i) / m_0 entrywise; nodes whose weight underflowed are skipped.
fn integrate_matrix(rule: &QuadratureRule, n: usize, mut f: impl FnMut(usize, DD) -> Vec<DD>) -> Vec<DD> {
    let mut acc = vec![DD::ZERO; n * n];
    for (i, (&x, &w)) in rule.nodes_dd.iter().zip(&rule.unit_weights).enumerate() {
        if w.hi == 0.0 {
            continue;
        }
        for (a, v) in acc.iter_mut().zip(f(i, x)) {
            *a += w * v;
        }
    }
    acc
}

fn finish(acc: &[DD], rule: &QuadratureRule, pw: &PreparedWeight) -> Vec<f64> {
    let m0 = exact_to_f64(&rule.mass) / pw.scale;
    acc.iter().map(|a| (*a * m0).to_f64()).collect()
}

/// Gram matrices <P_n, P_m> for the requested pairs, with each P_n and W evaluated once per node.
pub fn numeric_gram(
    polys: &BTreeMap<usize, PolyMat>,
    w: &WeightSpec,
    npoints: usize,
    pairs: &[(usize, usize)],
    exec: Exec,
) -> Result<BTreeMap<(usize, usize), NumMat>, VerifyError> {
    let pw = prepare_weight(w)?;
    let rule = gauss_rule(&pw.family, npoints)?;
    let n = w.size();
    let we = DdRat::new(&pw.density);
    let wvals: Vec<Vec<DD>> = rule.nodes_dd.iter().map(|&x| we.eval(x)).collect();
    let keys: Vec<usize> = polys.keys().copied().collect();
    let evals: BTreeMap<usize, Vec<Vec<DD>>> = par::map(exec, &keys, |k| {
        let e = DdRat::from_poly(&polys[k]);
        (*k, rule.nodes_dd.iter().map(|&x| e.eval(x)).collect())
    })
    .into_iter()
    .collect();
    let mut out = BTreeMap::new();
    let results = par::map(exec, pairs, |&(a, b)| {
        let (ea, eb) = (evals.get(&a).ok_or(VerifyError::MissingIndex(a))?, evals.get(&b).ok_or(VerifyError::MissingIndex(b))?);
        let acc = integrate_matrix(&rule, n, |i, _| mul_bt(n, &matmul(n, &ea[i], &wvals[i]), &eb[i]));
        let mut m = NumMat { n, data: finish(&acc, &rule, &pw) };
        let pm = point_mass_part(&QuasiRatMat::poly(&polys[&a]), &QuasiRatMat::poly(&polys[&b]), w)?;
        for (x, p) in m.data.iter_mut().zip(pm) {
            *x += p;
        }
        Ok::<_, VerifyError>(((a, b), m))
    });
    for r in results {
        let (k, v) = r?;
        out.insert(k, v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use xmop_exact::{qi, ValueMat};
    use xmop_families::ClassicalFamily;

    fn exact_f64(v: &ValueMat) -> NumMat {
        let u = unit_value(&v.unit);
        NumMat { n: v.coeffs.size(), data: v.coeffs.entries().iter().map(|x| xmop_exact::to_f64(x) * u).collect() }
    }

    #[test]
    fn hermite_family_numeric_matches_exact() {
        let fam = ClassicalFamily::hermite(qi(2), qi(1)).unwrap();
        let ps = fam.polys(4).unwrap();
        for (n, m) in [(2, 2), (3, 1), (4, 4)] {
            let num = numeric_inner_product(&QuasiRatMat::poly(&ps[n]), &QuasiRatMat::poly(&ps[m]), &fam.weight, 30)
                .unwrap();
            let ex = exact_f64(&fam.inner_product(n, m).unwrap());
            assert!(num.rel_diff(&ex) < 1e-12, "({n},{m}) {num} vs {ex}");
        }
    }

    #[test]
    fn pole_on_support_rejected() {
        let fam = ClassicalFamily::hermite(qi(2), qi(1)).unwrap();
        let f = QuasiRatMat::rational(RatMat::identity(2).map(|x| x / &xmop_exact::rf(&[-1, 1], &[1])));
        let g = QuasiRatMat::poly(&PolyMat::identity(2));
        assert!(matches!(numeric_inner_product(&f, &g, &fam.weight, 10), Err(VerifyError::PoleOnSupport(_))));
    }
}
