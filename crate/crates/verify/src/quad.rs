//! Gauss rules for the classical kernels. Nodes are the eigenvalues of the Jacobi matrix of
//! the exact monic recurrence: f64 bisection on Sturm counts, then Newton in double-double.
//! Weights come from the Christoffel-Darboux form of the Christoffel numbers.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use statrs::function::gamma::gamma;
use xmop_exact::{to_f64, ExactValue, Unit, Q};
use xmop_families::ScalarKind;
use xmop_kernels::{Kernel, KernelFamily, Support};

use crate::dd::DD;
use crate::error::VerifyError;

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub base_kernel: Kernel,
    pub order: usize,
    /// m_0 of the base kernel.
    pub mass: ExactValue,
    pub(crate) nodes_dd: Vec<DD>,
    /// Christoffel numbers divided by m_0.
    pub(crate) unit_weights: Vec<DD>,
}

pub fn unit_value(u: &Unit) -> f64 {
    match u {
        Unit::One => 1.0,
        Unit::SqrtPi => std::f64::consts::PI.sqrt(),
        Unit::Gamma(x) => gamma(to_f64(x)),
        Unit::BetaHalf(x) => {
            let x = to_f64(x);
            gamma(0.5) * gamma(x) / gamma(x + 0.5)
        }
    }
}

pub fn exact_to_f64(v: &ExactValue) -> f64 {
    to_f64(&v.coeff) * unit_value(&v.unit)
}

fn scalar_kind(f: &KernelFamily) -> ScalarKind {
    match f {
        KernelFamily::Gaussian => ScalarKind::Hermite,
        KernelFamily::Laguerre(a) => ScalarKind::LaguerreMonic { alpha: a.clone() },
        KernelFamily::Jacobi(l) => ScalarKind::JacobiMonic { alpha: l.clone(), beta: l.clone() },
    }
}

/// Monic recurrence p_{j+1} = (t - b_j) p_j - c_j p_{j-1}, j < n.
fn monic_recurrence(f: &KernelFamily, n: usize) -> (Vec<Q>, Vec<Q>) {
    let kind = scalar_kind(f);
    let (mut b, mut c) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let mut prev_x = Q::from_integer(1.into());
    for j in 0..n {
        let (x, bj, cj) = kind.recurrence(j);
        b.push(&bj / &x);
        c.push(if j == 0 { Q::from_integer(0.into()) } else { &cj / (&x * &prev_x) });
        prev_x = x;
    }
    (b, c)
}

/// Number of eigenvalues of the Jacobi matrix below x.
fn sturm_count(b: &[f64], c: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for j in 0..b.len() {
        let off = if j == 0 { 0.0 } else { c[j] / d };
        d = b[j] - x - off;
        if d == 0.0 {
            d = -f64::EPSILON * (b[j].abs() + x.abs() + 1.0);
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Orthonormal p_n(x), p_n'(x) and p_{n-1}(x), with a flag when the values had to be rescaled.
fn orthonormal_at(b: &[DD], sc: &[DD], x: DD) -> (DD, DD, DD, bool) {
    let n = b.len();
    let (mut p0, mut p1) = (DD::ZERO, DD::ONE);
    let (mut d0, mut d1) = (DD::ZERO, DD::ZERO);
    let mut scaled = false;
    for j in 0..n {
        // sqrt(c_{j+1}) p_{j+1} = (x - b_j) p_j - sqrt(c_j) p_{j-1}
        let s_next = sc[j + 1];
        let xb = x - b[j];
        let p2 = (xb * p1 - sc[j] * p0) / s_next;
        let d2 = (p1 + xb * d1 - sc[j] * d0) / s_next;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
        if p1.hi.abs() > 1e120 || d1.hi.abs() > 1e120 {
            let f = DD::new(1e-120);
            p0 = p0 * f;
            p1 = p1 * f;
            d0 = d0 * f;
            d1 = d1 * f;
            scaled = true;
        }
    }
    (p1, d1, p0, scaled)
}

fn build(family: &KernelFamily, n: usize) -> Result<QuadratureRule, VerifyError> {
    if n == 0 {
        return Err(VerifyError::Usage("quadrature needs at least one point".into()));
    }
    let (bq, cq) = monic_recurrence(family, n + 1);
    let b: Vec<DD> = bq.iter().take(n).map(DD::from_q).collect();
    // sc[j] = sqrt(c_j), with sc[n] closing the recurrence
    let sc: Vec<DD> = cq.iter().map(|c| DD::from_q(c).sqrt()).collect();
    let bf: Vec<f64> = b.iter().map(|x| x.to_f64()).collect();
    let cf: Vec<f64> = cq.iter().take(n).map(to_f64).collect();
    // Gershgorin bounds
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for j in 0..n {
        let r = (if j > 0 { cf[j].sqrt() } else { 0.0 }) + (if j + 1 < n { cf[j + 1].sqrt() } else { 0.0 });
        lo = lo.min(bf[j] - r);
        hi = hi.max(bf[j] + r);
    }
    let mut nodes_dd = Vec::with_capacity(n);
    let mut unit_weights = Vec::with_capacity(n);
    for k in 0..n {
        let (mut a, mut z) = (lo - 1.0, hi + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (a + z);
            if mid <= a || mid >= z {
                break;
            }
            if sturm_count(&bf, &cf, mid) > k {
                z = mid;
            } else {
                a = mid;
            }
        }
        let mut x = DD::new(0.5 * (a + z));
        for _ in 0..4 {
            let (p, dp, _, _) = orthonormal_at(&b, &sc, x);
            if dp.hi == 0.0 {
                break;
            }
            x = x - p / dp;
        }
        let (_, dp, pm1, scaled) = orthonormal_at(&b, &sc, x);
        // sum_{j<n} p_j(x)^2 = sqrt(c_n) p_n'(x) p_{n-1}(x) at a zero of p_n
        let w = if scaled { DD::ZERO } else { DD::ONE / (sc[n] * dp * pm1) };
        nodes_dd.push(x);
        unit_weights.push(w);
    }
    let mass = family.moment(0)?;
    let m0 = exact_to_f64(&mass);
    Ok(QuadratureRule {
        nodes: nodes_dd.iter().map(|x| x.to_f64()).collect(),
        weights: unit_weights.iter().map(|w| w.to_f64() * m0).collect(),
        base_kernel: family.kernel(),
        order: n,
        mass,
        nodes_dd,
        unit_weights,
    })
}

type Cache = Mutex<HashMap<(String, usize), Arc<QuadratureRule>>>;

/// Gauss rule with npoints nodes for a classical kernel; rules are cached per process.
pub fn gauss_quadrature(kernel: &Kernel, support: &Support, npoints: usize) -> Result<Arc<QuadratureRule>, VerifyError> {
    let family = KernelFamily::classify(support, kernel)
        .map_err(|_| VerifyError::UnsupportedKernel(format!("{kernel} on [{}, {}]", support.lo, support.hi)))?;
    gauss_rule(&family, npoints)
}

pub fn gauss_rule(family: &KernelFamily, npoints: usize) -> Result<Arc<QuadratureRule>, VerifyError> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (format!("{family:?}"), npoints);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().expect("rule cache").get(&key) {
        return Ok(r.clone());
    }
    let rule = Arc::new(build(family, npoints)?);
    cache.lock().expect("rule cache").insert(key, rule.clone());
    Ok(rule)
}

impl QuadratureRule {
    /// sum_i w_i f(x_i) / m_0, accumulated in double-double.
    pub fn unit_sum(&self, mut f: impl FnMut(DD) -> DD) -> DD {
        self.nodes_dd.iter().zip(&self.unit_weights).fold(DD::ZERO, |acc, (&x, &w)| acc + w * f(x))
    }

    pub fn integrate(&self, f: impl FnMut(f64) -> f64) -> f64 {
        let mut f = f;
        self.unit_sum(|x| DD::new(f(x.to_f64()))).to_f64() * exact_to_f64(&self.mass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use xmop_exact::{q, qi};

    #[test]
    fn two_point_gauss_hermite() {
        let r = gauss_rule(&KernelFamily::Gaussian, 2).unwrap();
        let s = 0.5f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        for w in &r.weights {
            assert!((w - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn weights_sum_to_mass() {
        for (fam, n) in [
            (KernelFamily::Gaussian, 30),
            (KernelFamily::Laguerre(q(1, 2)), 25),
            (KernelFamily::Jacobi(q(-1, 2)), 20),
            (KernelFamily::Jacobi(qi(1)), 17),
        ] {
            let r = gauss_rule(&fam, n).unwrap();
            let m0 = exact_to_f64(&fam.moment(0).unwrap());
            let s: f64 = r.weights.iter().sum();
            assert!((s / m0 - 1.0).abs() < 1e-12, "{fam:?}");
        }
    }

    #[test]
    fn fifty_point_hermite_tenth_moment() {
        let r = gauss_rule(&KernelFamily::Gaussian, 50).unwrap();
        let v = r.integrate(|x| x.powi(10));
        let exact = exact_to_f64(&KernelFamily::Gaussian.moment(10).unwrap());
        assert!((v / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn large_rules_stay_finite() {
        let r = gauss_rule(&KernelFamily::Gaussian, 400).unwrap();
        assert!(r.weights.iter().all(|w| w.is_finite() && *w >= 0.0));
        let s: f64 = r.weights.iter().sum();
        assert!((s / std::f64::consts::PI.sqrt() - 1.0).abs() < 1e-12);
    }
}
