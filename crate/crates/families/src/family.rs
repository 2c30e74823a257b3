//! Classical 2x2 families: weight, polynomials, operator basis, eigenvalues and norms.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use xmop_diffops::DiffOp;
use xmop_exact::{fmt_q, qi, PolyMat, QMat, RatMat, Unit, ValueMat, Q};
use xmop_kernels::{Kernel, QuasiRatMat, Support, WeightSpec};

use crate::error::FamilyError;
use crate::mk::{c, m2, pl, rc, rp, t, zp};
use crate::par::{self, Exec};
use crate::scalar::{scalar_table, ScalarKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FamilyKind {
    Hermite {
        #[serde(with = "xmop_exact::scalar::serde_q")]
        a: Q,
        #[serde(with = "xmop_exact::scalar::serde_q")]
        xi: Q,
    },
    Laguerre {
        #[serde(with = "xmop_exact::scalar::serde_q")]
        a: Q,
        #[serde(with = "xmop_exact::scalar::serde_q")]
        alpha: Q,
    },
    Gegenbauer {
        #[serde(with = "xmop_exact::scalar::serde_q")]
        a: Q,
        #[serde(with = "xmop_exact::scalar::serde_q")]
        r: Q,
    },
}

/// Non-polynomial seed with the U used to build its annihilator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub p: QuasiRatMat,
    pub u: RatMat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalFamily {
    #[serde(flatten)]
    pub kind: FamilyKind,
    pub weight: WeightSpec,
    /// Basis operators; eigenvalues are linear in the basis coefficients.
    pub operators: Vec<DiffOp>,
    /// True when the weight is not positive definite.
    pub signed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<Seed>,
    /// Whether the exceptional construction is admissible (Gegenbauer only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible: Option<bool>,
}

fn invalid(msg: String) -> FamilyError {
    FamilyError::InvalidParameters(msg)
}

fn gaussian() -> Kernel {
    Kernel::exp(pl(&[Q::zero(), Q::zero(), qi(-1)]))
}

pub fn hermite_weight(a: &Q, xi: &Q) -> WeightSpec {
    let at = t().scale(a);
    let d = m2(&c(xi.clone()) + &(&at * &at), at.clone(), at, c(Q::one()));
    WeightSpec::new(Support::real_line(), gaussian(), d.to_rat())
}

/// D1..D4 and the identity (the u5 direction).
pub fn hermite_operators(a: &Q, xi: &Q) -> Vec<DiffOp> {
    let a2 = a * a;
    let ts = |x: Q| t().scale(&x);
    let id = || PolyMat::identity(2);
    let zero = || PolyMat::zeros(2);
    let d1 = DiffOp::from_poly(&[
        m2(c(qi(-2)), zp(), zp(), zp()),
        m2(ts(qi(-2)), c(qi(2) * a), zp(), ts(qi(-2))),
        id(),
    ]);
    let d2 = DiffOp::from_poly(&[
        m2(zp(), zp(), zp(), c(xi.clone())),
        m2(zp(), c(a * xi / qi(2)), c(-a / qi(2)), ts(&a2 / qi(2))),
        m2(c(-&a2 / qi(4)), ts(&a2 * a / qi(4)), zp(), zp()),
    ]);
    let d3 = DiffOp::from_poly(&[
        m2(zp(), c(xi * (&a2 + qi(2) * xi) / a), zp(), zp()),
        m2(c(-&a2 - xi), ts(a * (&a2 + qi(2) * xi)), zp(), c(xi.clone())),
        m2(ts(-&a2 / qi(2)), (&t() * &t()).scale(&(&a2 * a / qi(2))), c(-a / qi(2)), ts(&a2 / qi(2))),
    ]);
    let d4 = DiffOp::from_poly(&[
        m2(zp(), zp(), c(Q::one()), zp()),
        m2(c(a / qi(2)), zp(), zp(), c(-a / qi(2))),
        m2(zp(), c(-&a2 / qi(4)), zp(), zp()),
    ]);
    let d5 = DiffOp::from_poly(&[id(), zero(), zero()]);
    vec![d1, d2, d3, d4, d5]
}

/// Closed-form eigenvalue of sum u_i D_i on the degree-n Hermite-type polynomial.
pub fn hermite_gamma(n: usize, a: &Q, xi: &Q, u: &[Q]) -> QMat {
    let (nq, a2) = (qi(n as i64), a * a);
    let half = |m: &Q| m * &a2 / qi(2) + xi;
    let n1 = &nq + qi(1);
    QMat::from_rows(vec![
        vec![qi(-2) * &n1 * &u[0] + &u[4], (&n1 * &a2 + qi(2) * xi) * &u[2] / a],
        vec![half(&nq) * &u[3], qi(-2) * &nq * &u[0] + half(&nq) * &u[1] + &u[4]],
    ])
    .expect("2x2")
}

/// sqrt(pi) 2^n n! diag(xi + a^2 (n+1)/2, xi (xi + a^2 n/2)).
pub fn hermite_norm(n: usize, a: &Q, xi: &Q) -> ValueMat {
    let (nq, a2) = (qi(n as i64), a * a);
    let s = xmop_exact::scalar::pow(&qi(2), n) * xmop_exact::factorial(n);
    let d = QMat::diag(vec![
        &s * (xi + &a2 * (&nq + qi(1)) / qi(2)),
        &s * xi * (xi + &a2 * &nq / qi(2)),
    ]);
    ValueMat::new(d, Unit::SqrtPi)
}

pub fn laguerre_weight(a: &Q, alpha: &Q) -> WeightSpec {
    let d = m2(
        pl(&[Q::zero(), qi(1), a * a]),
        t().scale(a),
        t().scale(a),
        c(Q::one()),
    );
    let kernel = Kernel::new(pl(&[Q::zero(), qi(-1)]), vec![(Q::zero(), alpha.clone())]);
    WeightSpec::new(Support::half_line(), kernel, d.to_rat())
}

/// D1, D2 (second order) and D3 (third order).
pub fn laguerre_operators(a: &Q, al: &Q) -> Vec<DiffOp> {
    let a2 = a * a;
    let lin = |c0: Q, c1: Q| pl(&[c0, c1]);
    let one = Q::one;
    let d1 = DiffOp::from_poly(&[
        m2(c(-al - qi(3)), c(a * (al + qi(1))), zp(), c(-al - qi(2))),
        m2(lin(al + qi(2), qi(-1)), t().scale(a), zp(), lin(al + qi(1), qi(-1))),
        PolyMat::scalar(2, t()),
    ]);
    let d2 = DiffOp::from_poly(&[
        m2(c(one() / &a2), c(-(al + qi(1)) / a), zp(), zp()),
        m2(c(al + qi(2)), t().scale(&(-(one() + &a2 * (al + qi(2))) / a)), c(one() / a), t().scale(&qi(-1))),
        m2(t(), pl(&[Q::zero(), Q::zero(), -a.clone()]), zp(), zp()),
    ]);
    let d3 = DiffOp::from_poly(&[
        m2(
            c(-(al + qi(1)) / a),
            c((al + qi(1)) * (&a2 * al - qi(1)) / &a2),
            c(-one() / &a2),
            c((al + qi(1)) / a),
        ),
        m2(
            lin(qi(2) * (&a2 + qi(1)) * (qi(2) + al) / a, -one() / a),
            pl(&[
                -(al + qi(2)) * (al + qi(1)),
                -one() / &a2 - qi(2) * (&a2 * (al + qi(2)) + qi(1)),
            ]),
            c(one() / &a2),
            lin(qi(-2) * (al + qi(1)) / a, one() / a),
        ),
        m2(
            t().scale(&(a * (al + qi(5)) + qi(2) / a)),
            pl(&[Q::zero(), -(qi(2) * al + qi(4)), -&a2 * (al + qi(5)) - qi(1)]),
            c(qi(2) + al),
            t().scale(&(-a * (al + qi(2)) - qi(2) / a)),
        ),
        m2(
            pl(&[Q::zero(), Q::zero(), a.clone()]),
            pl(&[Q::zero(), Q::zero(), qi(-1), -&a2]),
            t(),
            pl(&[Q::zero(), Q::zero(), -a.clone()]),
        ),
    ]);
    vec![d1, d2, d3]
}

/// Seed e^t [[-(t+alpha+2), (t+alpha+2) a t], [0, -(t+alpha+1)]] in the kernel of D1, with its U.
pub fn laguerre_seed(a: &Q, al: &Q) -> Seed {
    let s2 = pl(&[al + qi(2), qi(1)]);
    let s1 = pl(&[al + qi(1), qi(1)]);
    let body = m2(-&s2, &s2 * &t().scale(a), zp(), -&s1);
    let u = m2(
        pl(&[al + qi(3), qi(1)]),
        pl(&[qi(2) * a, -a.clone()]),
        zp(),
        s2.clone(),
    );
    Seed { p: QuasiRatMat::new(Kernel::exp(t()), body.to_rat()), u: u.to_rat() }
}

/// Density without the (1-t^2)^{r/2-1} kernel.
pub fn gegenbauer_density(a: &Q, r: &Q) -> PolyMat {
    let rt = t().scale(&-r);
    m2(
        pl(&[r - a, Q::zero(), a.clone()]),
        rt.clone(),
        rt,
        pl(&[a.clone(), Q::zero(), r - a]),
    )
}

pub fn gegenbauer_weight(a: &Q, r: &Q) -> WeightSpec {
    let g = r / qi(2) - qi(1);
    let kernel = Kernel::new(zp(), vec![(qi(-1), g.clone()), (qi(1), g)]);
    WeightSpec::new(Support::unit_interval(), kernel, gegenbauer_density(a, r).to_rat())
}

/// The second-order operator with the Gegenbauer-type family as eigenfunctions.
pub fn gegenbauer_operator(a: &Q, r: &Q) -> DiffOp {
    let one = Q::one();
    let f2 = m2(
        pl(&[(a - qi(2)) * (a - r + qi(1)), Q::zero(), (&one - a) * (qi(2) + a - r)]),
        t().scale(&(r - qi(2) * a)),
        t().scale(&(qi(2) * a - r)),
        pl(&[(a - qi(1)) * (a - r + qi(2)), Q::zero(), (qi(2) - a) * (a + qi(1) - r)]),
    );
    let f1 = m2(
        t().scale(&((&one - a) * (qi(2) + a - r) * (r + qi(2)))),
        c(r * r - a * r - qi(2) * a - qi(2) * r + qi(4)),
        c(a * r + qi(2) * a - qi(4) * r + qi(4)),
        t().scale(&((qi(2) - a) * (a - r + qi(1)) * (r + qi(2)))),
    );
    let f0 = PolyMat::diag(vec![
        c(qi(2) * (r - qi(1)) * (&one - a) * (qi(2) - r + a)),
        c(qi(2) * (r - qi(1)) * (qi(2) - a) * (a - r + qi(1))),
    ]);
    DiffOp::from_poly(&[f0, f1, f2])
}

/// Seed [[t, -1/(a-r+1)], [1/(a-1), t]] W^{-1}, which the operator kills, with its U.
pub fn gegenbauer_seed(a: &Q, r: &Q) -> Result<Seed, FamilyError> {
    let w = gegenbauer_weight(a, r);
    let front = m2(rp(t()), rc(-(a - r + qi(1)).recip()), rc((a - qi(1)).recip()), rp(t()));
    let body = &front * &w.density.inverse()?;
    let one = Q::one();
    let u = m2(
        rp(pl(&[(r + qi(1) - a) / (a + qi(1) - r), Q::zero(), &one - r])),
        rp(t().scale(&(qi(2) * (&one - r) * (a + qi(2) - r) / ((a - qi(2)) * (a + qi(1) - r))))),
        rp(t().scale(&(qi(2) * (r - qi(1)) * (a - qi(2)) / ((a - qi(1)) * (a + qi(2) - r))))),
        rp(pl(&[-(a + qi(1)) / (a - qi(1)), Q::zero(), -(a * r - a - r + qi(1)) / (a - qi(1))])),
    );
    Ok(Seed { p: QuasiRatMat::new(w.kernel.recip(), body), u })
}

/// Admissible region for the Gegenbauer-type exceptional construction.
pub fn gegenbauer_admissible(a: &Q, r: &Q) -> bool {
    let (one, two) = (qi(1), qi(2));
    let between = |x: &Q, lo: Q, hi: Q| lo < *x && *x < hi;
    if between(a, Q::zero(), one.clone()) {
        between(r, a.clone(), a + &one) || *r > a + &two
    } else if between(a, one.clone(), two.clone()) {
        between(r, a + &one, a + &two)
    } else if *a > two {
        between(r, a.clone(), a + &one)
    } else {
        false
    }
}

impl ClassicalFamily {
    pub fn hermite(a: Q, xi: Q) -> Result<Self, FamilyError> {
        if a.is_zero() {
            return Err(invalid("a must be nonzero".into()));
        }
        if xi.is_zero() {
            return Err(invalid("xi must be nonzero".into()));
        }
        Ok(ClassicalFamily {
            weight: hermite_weight(&a, &xi),
            operators: hermite_operators(&a, &xi),
            signed: xi < Q::zero(),
            seed: None,
            admissible: None,
            kind: FamilyKind::Hermite { a, xi },
        })
    }

    pub fn laguerre(a: Q, alpha: Q) -> Result<Self, FamilyError> {
        if a.is_zero() {
            return Err(invalid("a must be nonzero".into()));
        }
        if alpha <= qi(-1) {
            return Err(invalid(format!("alpha = {} must exceed -1", fmt_q(&alpha))));
        }
        Ok(ClassicalFamily {
            weight: laguerre_weight(&a, &alpha),
            operators: laguerre_operators(&a, &alpha),
            signed: false,
            seed: Some(laguerre_seed(&a, &alpha)),
            admissible: None,
            kind: FamilyKind::Laguerre { a, alpha },
        })
    }

    pub fn gegenbauer(a: Q, r: Q) -> Result<Self, FamilyError> {
        if r <= Q::zero() || a <= Q::zero() || a >= r {
            return Err(invalid(format!("need r > 0 and 0 < a < r, got a = {}, r = {}", fmt_q(&a), fmt_q(&r))));
        }
        for bad in [qi(1), qi(2), &r - qi(1), &r - qi(2)] {
            if a == bad {
                return Err(invalid(format!("a = {} is excluded", fmt_q(&a))));
            }
        }
        Ok(ClassicalFamily {
            weight: gegenbauer_weight(&a, &r),
            operators: vec![gegenbauer_operator(&a, &r)],
            signed: false,
            seed: Some(gegenbauer_seed(&a, &r)?),
            admissible: Some(gegenbauer_admissible(&a, &r)),
            kind: FamilyKind::Gegenbauer { a, r },
        })
    }

    pub fn a(&self) -> &Q {
        match &self.kind {
            FamilyKind::Hermite { a, .. } | FamilyKind::Laguerre { a, .. } | FamilyKind::Gegenbauer { a, .. } => a,
        }
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        match &self.kind {
            FamilyKind::Hermite { .. } => ScalarKind::Hermite,
            FamilyKind::Laguerre { alpha, .. } => ScalarKind::LaguerreMonic { alpha: alpha.clone() },
            FamilyKind::Gegenbauer { r, .. } => ScalarKind::JacobiMonic { alpha: r / qi(2), beta: r / qi(2) },
        }
    }

    /// P_0..P_max.
    pub fn polys(&self, max_n: usize) -> Result<Vec<PolyMat>, FamilyError> {
        let tt = t();
        match &self.kind {
            FamilyKind::Hermite { a, xi } => {
                let h = scalar_table(&ScalarKind::Hermite, max_n)?;
                Ok((0..=max_n)
                    .map(|n| {
                        let base = m2(h[n].clone(), zp(), zp(), h[n].scale(xi));
                        if n == 0 {
                            return base;
                        }
                        let hm = h[n - 1].scale(&qi(n as i64));
                        &base + &m2(zp(), hm.scale(&-a), hm.scale(&-a), &hm * &tt.scale(&(a * a)))
                    })
                    .collect())
            }
            FamilyKind::Laguerre { a, alpha } => {
                let l0 = scalar_table(&ScalarKind::LaguerreMonic { alpha: alpha.clone() }, max_n + 1)?;
                let l1 = scalar_table(&ScalarKind::LaguerreMonic { alpha: alpha + qi(1) }, max_n)?;
                Ok((0..=max_n)
                    .map(|n| {
                        let nq = qi(n as i64);
                        let prev = if n == 0 { zp() } else { l1[n - 1].clone() };
                        m2(
                            l1[n].clone(),
                            (&l0[n + 1] - &(&l1[n] * &tt)).scale(a),
                            prev.scale(&(-a * &nq)),
                            &(&prev * &tt).scale(&(a * a * &nq)) + &l0[n],
                        )
                    })
                    .collect())
            }
            FamilyKind::Gegenbauer { a, r } => {
                let p = scalar_table(&self.scalar_kind(), max_n)?;
                Ok(p.iter()
                    .map(|pn| {
                        let dp = pn.derive();
                        let dpt = &dp * &tt;
                        m2(dp.clone(), &pn.scale(&(r - a)) + &dpt, &pn.scale(a) + &dpt, dp)
                    })
                    .collect())
            }
        }
    }

    pub fn poly(&self, n: usize) -> Result<PolyMat, FamilyError> {
        Ok(self.polys(n)?.pop().expect("nonempty"))
    }

    pub fn combination(&self, u: &[Q]) -> Result<DiffOp, FamilyError> {
        if u.len() != self.operators.len() {
            return Err(invalid(format!("expected {} basis coefficients, got {}", self.operators.len(), u.len())));
        }
        Ok(DiffOp::combination(&self.operators, u))
    }

    /// Eigenvalue of sum u_i D_i on P_n from leading coefficients:
    /// Gamma = L (sum_j n(n-1)..(n-j+1) [t^j] F_j) L^{-1}, L the leading coefficient of P_n.
    /// Valid for operators whose coefficient F_j has degree at most j.
    pub fn eigenvalue(&self, n: usize, u: &[Q]) -> Result<QMat, FamilyError> {
        let d = self.combination(u)?;
        let p = self.poly(n)?;
        let lc = p.coeff(n);
        let mut k = QMat::zeros(2);
        for (j, f) in d.coeffs().iter().enumerate() {
            let fp = f.to_poly().ok_or_else(|| invalid("operator coefficients are not polynomial".into()))?;
            if fp.degree().is_some_and(|dg| dg > j) {
                return Err(invalid(format!("coefficient {j} raises the degree")));
            }
            let falling: Q = (0..j).map(|i| qi(n as i64 - i as i64)).product();
            k = &k + &fp.coeff(j).scale(&falling);
        }
        Ok(&(&lc * &k) * &lc.inverse()?)
    }

    /// ||P_n||^2: closed form for the Hermite type, exact moments otherwise.
    pub fn norm(&self, n: usize) -> Result<ValueMat, FamilyError> {
        match &self.kind {
            FamilyKind::Hermite { a, xi } => Ok(hermite_norm(n, a, xi)),
            _ => {
                let p = self.poly(n)?;
                Ok(self.weight.exact_inner_product(&p, &p)?)
            }
        }
    }

    pub fn norms(&self, max_n: usize, exec: Exec) -> Result<Vec<ValueMat>, FamilyError> {
        par::try_map_range(exec, 0, max_n + 1, |n| self.norm(n))
    }

    /// Gram matrix <P_n, P_m> by exact moments.
    pub fn inner_product(&self, n: usize, m: usize) -> Result<ValueMat, FamilyError> {
        let ps = self.polys(n.max(m))?;
        Ok(self.weight.exact_inner_product(&ps[n], &ps[m])?)
    }
}
