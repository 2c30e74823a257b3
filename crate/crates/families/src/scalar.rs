//! Scalar classical polynomials: physicists' Hermite, monic Laguerre, monic Jacobi.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use xmop_exact::{fmt_q, qi, Poly, Q};
use xmop_kernels::{Kernel, Support};

use crate::error::FamilyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScalarKind {
    Hermite,
    LaguerreMonic {
        #[serde(with = "xmop_exact::scalar::serde_q")]
        alpha: Q,
    },
    JacobiMonic {
        #[serde(with = "xmop_exact::scalar::serde_q")]
        alpha: Q,
        #[serde(with = "xmop_exact::scalar::serde_q")]
        beta: Q,
    },
}

impl ScalarKind {
    pub fn validate(&self) -> Result<(), FamilyError> {
        let bad = |name: &str, x: &Q| FamilyError::InvalidParameters(format!("{name} = {} must exceed -1", fmt_q(x)));
        match self {
            ScalarKind::Hermite => Ok(()),
            ScalarKind::LaguerreMonic { alpha } if *alpha <= qi(-1) => Err(bad("alpha", alpha)),
            ScalarKind::JacobiMonic { alpha, .. } if *alpha <= qi(-1) => Err(bad("alpha", alpha)),
            ScalarKind::JacobiMonic { beta, .. } if *beta <= qi(-1) => Err(bad("beta", beta)),
            _ => Ok(()),
        }
    }

    /// Recurrence p_{n+1} = (x t - b_n) p_n - c_n p_{n-1}; returns (x, b_n, c_n).
    pub fn recurrence(&self, n: usize) -> (Q, Q, Q) {
        let nq = qi(n as i64);
        match self {
            ScalarKind::Hermite => (qi(2), Q::zero(), qi(2) * nq),
            ScalarKind::LaguerreMonic { alpha } => (Q::one(), qi(2) * &nq + alpha + qi(1), &nq * (&nq + alpha)),
            ScalarKind::JacobiMonic { alpha, beta } => {
                let s = alpha + beta;
                let m = qi(2) * &nq + &s;
                // n = 0 and n = 1 are written in cancelled form; the general
                // expressions are 0/0 at alpha + beta = 0 or -1
                let b = if n == 0 {
                    (beta - alpha) / (&s + qi(2))
                } else {
                    (beta * beta - alpha * alpha) / (&m * (&m + qi(2)))
                };
                let c = if n == 0 {
                    Q::zero()
                } else if n == 1 {
                    qi(4) * (alpha + qi(1)) * (beta + qi(1)) / ((&s + qi(2)) * (&s + qi(2)) * (&s + qi(3)))
                } else {
                    qi(4) * &nq * (&nq + alpha) * (&nq + beta) * (&nq + &s) / (&m * &m * (&m + qi(1)) * (&m - qi(1)))
                };
                (Q::one(), b, c)
            }
        }
    }

    /// Support and kernel the family is orthogonal against.
    pub fn orthogonality_kernel(&self) -> (Support, Kernel) {
        match self {
            ScalarKind::Hermite => (Support::real_line(), Kernel::exp(Poly::from_ints(&[0, 0, -1]))),
            ScalarKind::LaguerreMonic { alpha } => {
                (Support::half_line(), Kernel::new(Poly::from_ints(&[0, -1]), vec![(Q::zero(), alpha.clone())]))
            }
            ScalarKind::JacobiMonic { alpha, beta } => (
                Support::unit_interval(),
                Kernel::new(Poly::zero(), vec![(qi(1), alpha.clone()), (qi(-1), beta.clone())]),
            ),
        }
    }
}

/// p_0..p_n.
pub fn scalar_table(kind: &ScalarKind, n: usize) -> Result<Vec<Poly>, FamilyError> {
    kind.validate()?;
    let mut out = vec![Poly::one()];
    let mut prev = Poly::zero();
    for j in 0..n {
        let (x, b, c) = kind.recurrence(j);
        let next = &(&Poly::from_coeffs(vec![-b, x]) * &out[j]) - &prev.scale(&c);
        prev = out[j].clone();
        out.push(next);
    }
    Ok(out)
}

pub fn scalar_classical(kind: &ScalarKind, n: usize) -> Result<Poly, FamilyError> {
    Ok(scalar_table(kind, n)?.pop().expect("nonempty"))
}
