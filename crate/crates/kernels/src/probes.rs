use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use xmop_exact::{fmt_q, Mat, QMat, Q};

use crate::error::KernelError;
use crate::quasi::QuasiRatMat;
use crate::weight::{Endpoint, WeightSpec};

/// True iff t^n f(t) -> 0 at the endpoint for every 0 <= n <= max_n, decided structurally.
pub fn decay_check(f: &QuasiRatMat, endpoint: &Endpoint, max_n: usize) -> bool {
    if f.is_zero() {
        return true;
    }
    let e = f.kernel.exp_arg();
    match endpoint {
        Endpoint::PosInf | Endpoint::NegInf => {
            if let Some(d) = e.degree().filter(|&d| d >= 1) {
                let lc = e.lc();
                let at_minus = matches!(endpoint, Endpoint::NegInf) && d % 2 == 1;
                return if at_minus { lc.is_positive() } else { lc.is_negative() };
            }
            // algebraic growth: body degree plus total power of the kernel factors
            let body_deg = f
                .body
                .entries()
                .iter()
                .filter_map(|r| r.degree())
                .max()
                .unwrap_or(i64::MIN);
            let power: Q = f.kernel.factors().iter().map(|(_, g)| g.clone()).sum();
            Q::from_integer((body_deg + max_n as i64).into()) + power < Q::zero()
        }
        Endpoint::At(c) => {
            let v = f.body_valuation(c).expect("nonzero body");
            f.kernel.exponent_at(c) + Q::from_integer(v.into()) > Q::zero()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Positivity {
    PositiveDefiniteOnSamples,
    Indefinite {
        #[serde(with = "xmop_exact::scalar::serde_q")]
        witness: Q,
    },
}

/// Leading principal minors of the density at each sample (kernels are positive there).
pub fn positivity_check(w: &WeightSpec, samples: &[Q]) -> Result<Positivity, KernelError> {
    for x in samples {
        if !w.support.contains_open(x) {
            return Err(KernelError::UnsupportedKernel(format!("sample {} outside the open support", fmt_q(x))));
        }
        let v = w.density.eval(x).map_err(|_| KernelError::SamplePole(fmt_q(x)))?;
        if !leading_minors_positive(&v) {
            return Ok(Positivity::Indefinite { witness: x.clone() });
        }
    }
    Ok(Positivity::PositiveDefiniteOnSamples)
}

pub fn leading_minors_positive(m: &QMat) -> bool {
    (1..=m.size()).all(|k| {
        let sub = Mat::from_fn(k, |i, j| m[(i, j)].clone());
        sub.det().is_positive()
    })
}

/// Exact L D L^T of a symmetric constant matrix, without pivoting.
pub fn ldlt(a: &QMat) -> Result<(QMat, Vec<Q>), KernelError> {
    let n = a.size();
    let mut l = QMat::identity(n);
    let mut d: Vec<Q> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = a[(j, j)].clone();
        for k in 0..j {
            dj -= &l[(j, k)] * &l[(j, k)] * &d[k];
        }
        if dj.is_zero() {
            return Err(KernelError::SingularBase);
        }
        for i in j + 1..n {
            let mut s = a[(i, j)].clone();
            for k in 0..j {
                s -= &l[(i, k)] * &l[(j, k)] * &d[k];
            }
            l[(i, j)] = s / &dj;
        }
        d.push(dj);
    }
    Ok((l, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Reducibility {
    CommutesOnAllSamples,
    NonReducibilityWitness {
        #[serde(with = "xmop_exact::scalar::serde_q")]
        t: Q,
        #[serde(with = "xmop_exact::scalar::serde_q")]
        s: Q,
    },
}

/// Commutation test of the base-point-normalized weight. With W(a) = L D L^T, the
/// normalized values are D^{-1/2} X(t) D^{-1/2} with X = L^{-1} W L^{-T}; they commute
/// pairwise iff X(t) D^{-1} X(s) is symmetric in (t, s), which stays inside Q.
/// The scalar kernel cancels from the commutator.
pub fn reducibility_probe(w: &WeightSpec, base: &Q, pairs: &[(Q, Q)]) -> Result<Reducibility, KernelError> {
    let wa = w.density.eval(base).map_err(|_| KernelError::SamplePole(fmt_q(base)))?;
    let (l, d) = ldlt(&wa)?;
    let linv = l.inverse()?;
    let dinv = QMat::diag(d.iter().map(|x| x.recip()).collect());
    let x = |t: &Q| -> Result<QMat, KernelError> {
        let v = w.density.eval(t).map_err(|_| KernelError::SamplePole(fmt_q(t)))?;
        Ok(&(&linv * &v) * &linv.transpose())
    };
    for (t, s) in pairs {
        let (xt, xs) = (x(t)?, x(s)?);
        let lhs = &(&xt * &dinv) * &xs;
        let rhs = &(&xs * &dinv) * &xt;
        if lhs != rhs {
            return Ok(Reducibility::NonReducibilityWitness { t: t.clone(), s: s.clone() });
        }
    }
    Ok(Reducibility::CommutesOnAllSamples)
}

/// Sample pairs from a small symmetric grid, for probing without hand-picked points.
pub fn default_sample_pairs(support: &crate::weight::Support) -> Vec<(Q, Q)> {
    let grid: Vec<Q> = (-4..=4)
        .map(|k| Q::new(k.into(), 3.into()))
        .filter(|x| support.contains_open(x))
        .collect();
    let mut out = Vec::new();
    for (i, t) in grid.iter().enumerate() {
        for s in &grid[i + 1..] {
            out.push((t.clone(), s.clone()));
        }
    }
    if out.is_empty() {
        out.push((Q::one(), Q::one() + Q::one()));
    }
    out
}
