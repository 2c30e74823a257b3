//! Three-term recurrence test for the point-mass candidates P_0..P_3(tau2, tau3):
//! eliminate t P_2 = A P_3 + B P_2 + C P_1 by leading coefficients. What is left has degree
//! zero and its entries are polynomials in (tau2, tau3) of degree at most two in each; they
//! are recovered exactly by interpolation on a 3x3 grid and checked at extra points.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use xmop_exact::{fmt_q, q, qi, PolyMat, QMat, Q};
use xmop_families::closed_forms::ex5_candidates;

use crate::error::VerifyError;

/// sum c_{ij} tau2^i tau3^j
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Bivariate(pub BTreeMap<(usize, usize), Q>);

impl Bivariate {
    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        self.0.iter().fold(Q::zero(), |acc, ((i, j), c)| {
            acc + c * xmop_exact::scalar::pow(x, *i) * xmop_exact::scalar::pow(y, *j)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Nonzero constant: the entry can never vanish.
    pub fn is_nonzero_constant(&self) -> bool {
        self.0.len() == 1 && self.0.contains_key(&(0, 0))
    }
}

impl fmt::Display for Bivariate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|((i, j), c)| {
                let mut s = fmt_q(c);
                if *i > 0 {
                    s += &format!("*tau2^{i}");
                }
                if *j > 0 {
                    s += &format!("*tau3^{j}");
                }
                s
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauCertificate {
    /// Residual entries (row-major) as polynomials in tau2, tau3.
    pub residual: Vec<String>,
    /// Some entry is a nonzero constant, so no choice of the parameters works.
    pub infeasible: bool,
    /// A parameter choice making the residual vanish, if one was found on the grid.
    pub witness: Option<(String, String)>,
}

/// Degree-0 residual of t P_2 after eliminating P_3, P_2, P_1.
pub fn residual_at(a: &Q, zeta: &Q, tau2: &Q, tau3: &Q) -> Result<QMat, VerifyError> {
    let ps = ex5_candidates(a, zeta, tau2, tau3);
    let tp2 = ps[2].map(|e| &xmop_exact::Poly::t() * e);
    let mut rest: PolyMat = tp2;
    for d in [3usize, 2, 1] {
        let c = &rest.coeff(d) * &ps[d].coeff(d).inverse()?;
        rest = &rest - &ps[d].lmul_q(&c);
    }
    if rest.degree().is_some_and(|d| d > 0) {
        return Err(VerifyError::Interpolation("elimination left a nonconstant residual".into()));
    }
    Ok(rest.coeff(0))
}

/// Coefficients of the degree-(2,2) interpolant through f on nodes x nodes.
fn interpolate(nodes: &[Q], vals: &[Vec<Q>]) -> Bivariate {
    // basis polynomial coefficients of each Lagrange factor
    let basis: Vec<[Q; 3]> = (0..3)
        .map(|k| {
            let others: Vec<&Q> = nodes.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| x).collect();
            let den = others.iter().fold(Q::from_integer(1.into()), |acc, x| acc * (&nodes[k] - *x));
            let (u, v) = (others[0], others[1]);
            [u * v / &den, -(u + v) / &den, Q::from_integer(1.into()) / &den]
        })
        .collect();
    let mut out = BTreeMap::new();
    for (k, bk) in basis.iter().enumerate() {
        for (l, bl) in basis.iter().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    let c = &vals[k][l] * &bk[i] * &bl[j];
                    *out.entry((i, j)).or_insert_with(Q::zero) += c;
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    Bivariate(out)
}

pub fn three_term_certificate(a: &Q, zeta: &Q) -> Result<TauCertificate, VerifyError> {
    let nodes = [qi(0), qi(1), qi(2)];
    let grid: Vec<Vec<QMat>> = nodes
        .iter()
        .map(|x| nodes.iter().map(|y| residual_at(a, zeta, x, y)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let size = grid[0][0].size();
    let mut entries = Vec::new();
    for e in 0..size * size {
        let vals: Vec<Vec<Q>> = grid.iter().map(|row| row.iter().map(|m| m.entries()[e].clone()).collect()).collect();
        entries.push(interpolate(&nodes, &vals));
    }
    for (x, y) in [(qi(3), qi(5)), (qi(-1), q(1, 2)), (q(7, 3), qi(-4))] {
        let r = residual_at(a, zeta, &x, &y)?;
        for (e, p) in entries.iter().enumerate() {
            if p.eval(&x, &y) != r.entries()[e] {
                return Err(VerifyError::Interpolation(format!("entry {e} at ({}, {})", fmt_q(&x), fmt_q(&y))));
            }
        }
    }
    let infeasible = entries.iter().any(Bivariate::is_nonzero_constant);
    let witness = if infeasible {
        None
    } else {
        let cands: Vec<Q> = vec![qi(0), qi(1), qi(-1), qi(2), q(1, 2)];
        cands
            .iter()
            .flat_map(|x| cands.iter().map(move |y| (x.clone(), y.clone())))
            .find(|(x, y)| entries.iter().all(|p| p.eval(x, y).is_zero()))
            .map(|(x, y)| (fmt_q(&x), fmt_q(&y)))
    };
    Ok(TauCertificate { residual: entries.iter().map(|p| p.to_string()).collect(), infeasible, witness })
}
