//! Closed forms for the example families: leading coefficients, norms, weights and
//! operators written out by hand. Pipelines never use these to build anything; they
//! are the independent side of the comparisons.

use num_traits::{One, Zero};
use xmop_exact::scalar::pow;
use xmop_exact::{qi, PolyMat, QMat, RatFn, RatMat, ValueMat, Q};
use xmop_kernels::{Kernel, Support, WeightSpec};

use crate::family::hermite_norm;
use crate::mk::{m2, pl, rc, rp, t};

fn gaussian_spec(d: RatMat) -> WeightSpec {
    WeightSpec::new(Support::real_line(), Kernel::exp(pl(&[Q::zero(), Q::zero(), qi(-1)])), d)
}

/// 2(2 - a^2) t^2 - a^2.
pub fn pfrak1(a: &Q) -> RatFn {
    let a2 = a * a;
    rp(pl(&[-a2.clone(), Q::zero(), qi(2) * (qi(2) - &a2)]))
}

/// Leading coefficient of the one-step family, n >= 2: (n-1) 2^{n-1} diag(2, (n-2)a^2 + 2).
pub fn ex1_leading(a: &Q, n: usize) -> QMat {
    let nq = qi(n as i64);
    let s = (&nq - qi(1)) * pow(&qi(2), n - 1);
    QMat::diag(vec![&s * qi(2), &s * ((&nq - qi(2)) * a * a + qi(2))])
}

/// (n-1)/(2(a^2-2)) diag(1, -2/(a^2-2)) times the Hermite-type norm at xi = 1 - a^2.
pub fn ex1_norm(a: &Q, n: usize) -> ValueMat {
    let k = a * a - qi(2);
    let f = qi(n as i64 - 1) / (qi(2) * &k);
    let l = QMat::diag(vec![f.clone(), -f * qi(2) / &k]);
    hermite_norm(n, a, &(qi(1) - a * a)).lmul(&l)
}

/// The exceptional Hermite-type weight, normalized.
pub fn ex1_weight(a: &Q) -> WeightSpec {
    let a2 = a * a;
    let k = &a2 - qi(2);
    let p = pfrak1(a);
    let p2 = &p * &p;
    let e11 = &(&(&rc(&a2 / (qi(4) * &k)) * &p2) + &(&p * &rc(k.recip()))) - &rc(a2.clone());
    let e12 = &(&rc(a.clone()) * &(&(&p * &rc(k.recip())) - &rc(qi(2)))) * &RatFn::t();
    let e22 = &rc(qi(2) / (&k * &k)) * &(&rc(&a2 * &k) - &p);
    gaussian_spec(m2(&e11 / &p2, &e12 / &p2, &e12 / &p2, &e22 / &p2))
}

/// Transformed D1 (u1 = 1) of the one-step family: (F0, F1, F2).
pub fn ex1_d1(a: &Q) -> [RatMat; 3] {
    let a2 = a * a;
    let k = &a2 - qi(2);
    let p = pfrak1(a);
    let tt = RatFn::t();
    let f1 = m2(
        &(&tt * &(&p + &rc(qi(4)))) * &rc(qi(-2)),
        &rc(qi(-4) * a * &k) * &(&(&tt * &tt) - &rc(Q::one() / qi(2))),
        rc(qi(8) * a / &k),
        &(&tt * &(&(&p - &rc(qi(4) * &a2)) + &rc(qi(4)))) * &rc(qi(-2)),
    )
    .map(|x| x / &p);
    [RatMat::diag(vec![rc(qi(-2)), RatFn::zero()]), f1, RatMat::identity(2)]
}

/// Transformed operator carrying the point mass, u = (1, 4/a^2, 0, 0, 4 - 4/a^2): (F0, F1, F2).
pub fn ex5_operator(a: &Q) -> [RatMat; 3] {
    let a2 = a * a;
    let k = &a2 - qi(2);
    let p = pfrak1(a);
    let tt = RatFn::t();
    let t2 = &tt * &tt;
    let two_t2_1 = &(&t2 * &rc(qi(2))) + &rc(qi(1));
    let f2 = m2(
        &two_t2_1 * &rc(-&a2),
        &(&tt * &two_t2_1) * &rc(-(&k * a)),
        &tt * &rc(qi(4) * a / &k),
        &t2 * &rc(qi(4)),
    )
    .map(|x| x / &p);
    let p2 = &p * &p;
    let f1 = m2(
        &(&tt * &(&(&p2 + &(&p * &rc(qi(4)))) - &rc(qi(4) * &a2))) * &rc(qi(-2)),
        &(&t2 * &rc(qi(4) * &k / a)) * &(&rc(qi(2) * &a2) - &p),
        &(&(&p + &rc(qi(2) * &a2)) * &(&p - &rc(a2.clone()))) * &rc(qi(4) / (a * &k)),
        &tt * &rc(qi(-8) * &a2),
    )
    .map(|x| x / &p2);
    [RatMat::diag(vec![rc(qi(2) - qi(4) / &a2), RatFn::zero()]), f1, f2]
}

/// Monic form of the degree-2 point-mass polynomial.
pub fn ex5_p2(a: &Q, zeta: &Q) -> PolyMat {
    let a2 = a * a;
    let k = &a2 - qi(2);
    let kz = zeta * &k * &k + qi(1);
    m2(
        pl(&[-(&a2 + qi(2)) / (qi(2) * &a2 - qi(4)), Q::zero(), Q::one()]),
        t().scale(&-a),
        t().scale(&(qi(2) * a / &k)),
        pl(&[(qi(2) * kz).recip(), Q::zero(), Q::one()]),
    )
}

/// Monic form of the degree-3 point-mass polynomial (independent of zeta).
pub fn ex5_p3(a: &Q) -> PolyMat {
    let a2 = a * a;
    m2(
        pl(&[Q::zero(), qi(-3) * &a2 / (qi(2) * &a2 - qi(4)), Q::zero(), Q::one()]),
        pl(&[Q::zero(), Q::zero(), qi(-3) * a / qi(2)]),
        pl(&[Q::zero(), Q::zero(), qi(6) * a / (&a2 * &a2 - qi(4))]),
        pl(&[Q::zero(), qi(3) * &a2 / (qi(2) * &a2 + qi(4)), Q::zero(), Q::one()]),
    )
}

/// Candidate polynomials P_0..P_3 with free parameters tau2, tau3.
pub fn ex5_candidates(a: &Q, zeta: &Q, tau2: &Q, tau3: &Q) -> Vec<PolyMat> {
    let a2 = a * a;
    let k = &a2 - qi(2);
    let kz = zeta * &k * &k + qi(1);
    let p1 = m2(t(), pl(&[-a / qi(2)]), pl(&[a / &k]), t());
    let p2 = m2(
        pl(&[-Q::one() / qi(2), Q::zero(), Q::one()]),
        t().scale(&-a),
        pl(&[tau2.clone(), -a.clone()]),
        pl(&[(&a2 * &kz - qi(1)) / (qi(2) * &kz), tau2 * &k / a, Q::one()]),
    );
    let p3 = m2(
        pl(&[Q::zero(), qi(-3) / qi(2), Q::zero(), Q::one()]),
        pl(&[qi(3) * a / qi(4), Q::zero(), qi(-3) * a / qi(2)]),
        pl(&[tau3.clone(), Q::zero(), qi(-3) * a / (&a2 + qi(2))]),
        pl(&[Q::zero(), tau3 * &k / a, Q::zero(), Q::one()]),
    )
    .map(|x| x.scale(&(Q::one() / qi(2))));
    vec![-PolyMat::identity(2), p1, p2, p3]
}

/// Leading coefficient of the first-step family at xi = 1: (n-1) 2^{n-1} diag(4, (a^2+2)(n a^2+2)).
pub fn ex2_leading_first(a: &Q, n: usize) -> QMat {
    let nq = qi(n as i64);
    let a2 = a * a;
    let s = (&nq - qi(1)) * pow(&qi(2), n.saturating_sub(1));
    QMat::diag(vec![&s * qi(4), &s * (&a2 + qi(2)) * (&nq * &a2 + qi(2))])
}

/// Leading coefficient of the two-step family: (n-1)(n/2-1) 2^{n-1} diag(2, 2 + n a^2).
pub fn ex2_leading_second(a: &Q, n: usize) -> QMat {
    let nq = qi(n as i64);
    let s = (&nq - qi(1)) * (&nq / qi(2) - qi(1)) * pow(&qi(2), n.saturating_sub(1));
    QMat::diag(vec![&s * qi(2), &s * (qi(2) + &nq * a * a)])
}

/// (n-1)(n-2) diag(1/(4(3a^2+2)^2), 1/(4(3a^2+2)(a^2+2))) times the Hermite-type norm at xi = 1.
pub fn ex2_norm(a: &Q, n: usize) -> ValueMat {
    let a2 = a * a;
    let b = qi(3) * &a2 + qi(2);
    let f = qi(n as i64 - 1) * qi(n as i64 - 2);
    let l = QMat::diag(vec![&f / (qi(4) * &b * &b), &f / (qi(4) * &b * (&a2 + qi(2)))]);
    hermite_norm(n, a, &Q::one()).lmul(&l)
}

/// 4(a^2+2) t^4 + 8 t^2 + 3a^2 + 2.
pub fn pfrak2(a: &Q) -> RatFn {
    let a2 = a * a;
    rp(pl(&[qi(3) * &a2 + qi(2), Q::zero(), qi(8), Q::zero(), qi(4) * (&a2 + qi(2))]))
}

/// The two-step weight, normalized.
pub fn ex2_weight(a: &Q) -> WeightSpec {
    let a2 = a * a;
    let b = qi(3) * &a2 + qi(2);
    let c2 = &a2 + qi(2);
    let p = pfrak2(a);
    let tt = RatFn::t();
    let t2 = &tt * &tt;
    let e11 = &(&(&(&(&t2 * &rc(a2.clone())) + &rc(qi(3) * &a2 + qi(1))) * &p)
        + &(&(&(&t2 * &rc(qi(2))) - &rc(qi(3))) * &rc(&a2 * &b)))
        * &rc(&c2 / (&b * &b));
    let e12 = &(&tt * &(&p + &(&(&(&t2 * &rc(c2.clone())) + &rc(qi(1))) * &rc(qi(8))))) * &rc(a / &b);
    let e22 = &(&p + &(&(&(&t2 * &rc(qi(6) * &c2 / &b)) - &rc(qi(1))) * &rc(qi(2) * &a2))) * &rc(c2.recip());
    let p2 = &p * &p;
    gaussian_spec(m2(&e11 / &p2, &e12 / &p2, &e12 / &p2, &e22 / &p2))
}

/// The exceptional Laguerre-type weight.
pub fn ex3_weight(a: &Q, al: &Q) -> WeightSpec {
    let tt = RatFn::t();
    let s2 = &tt + &rc(al + qi(2));
    let s1 = &tt + &rc(al + qi(1));
    let tm1 = &tt - &rc(Q::one());
    let d11 = &(&tt * &(&(&(&(&s2 * &s2) * &(&tm1 * &tm1)) * &rc(a * a)) + &(&tt * &(&s1 * &s1))))
        / &(&(&s2 * &s2) * &(&s1 * &s1));
    let d12 = &(&(&tm1 * &tt) * &rc(a.clone())) / &(&s1 * &s1);
    let d22 = &tt / &(&s1 * &s1);
    let kernel = Kernel::new(pl(&[Q::zero(), qi(-1)]), vec![(Q::zero(), al.clone())]);
    WeightSpec::new(Support::half_line(), kernel, m2(d11, d12.clone(), d12, d22))
}

/// Closed-form eigenvalue of the fifth-order operator: antidiagonal, (1,2) entry first.
pub fn ex3_d5_eigenvalue(a: &Q, al: &Q, n: usize) -> QMat {
    let nq = qi(n as i64);
    let a2 = a * a;
    let x = (al + &nq + qi(3)) * (al + &nq + qi(1)) * ((&nq + qi(1)) * &a2 + qi(1)) / &a2;
    let y = (&nq * &a2 + qi(1)) * (al + &nq + qi(2)) / &a2;
    m2(Q::zero(), x, y, Q::zero())
}

/// t^2 (a^2 - a r + r - 1) + 1.
pub fn pfrak4(a: &Q, r: &Q) -> RatFn {
    rp(pl(&[Q::one(), Q::zero(), a * a - a * r + r - qi(1)]))
}

/// The exceptional Gegenbauer-type weight, (1-t^2)^{r/2-2} c Q / p^2.
pub fn ex4_weight(a: &Q, r: &Q) -> WeightSpec {
    let p = pfrak4(a, r);
    let p2 = &p * &p;
    let tt = RatFn::t();
    let one = Q::one();
    let s = a * a - a * r + r;
    let q11 = &(&(&(&p2 * &rc(a - qi(2))) - &(&p * &rc((a - r) * (a * (a - r) + qi(4)))))
        + &rc(qi(2) * (a - r) * &s))
        * &rc(one.clone() / ((a - qi(2)) * (a - qi(2)) * (a + qi(1) - r) * (r - a)));
    let q12 = &(&tt * &(&(&p * &rc(r - qi(4))) + &rc(qi(2) * &s))) * &rc(one.clone() / ((a - qi(2)) * (a + qi(2) - r)));
    let q22 = &(&(&(&p2 * &rc(a + qi(2) - r)) - &(&p * &rc(a * (a * a - a * r + qi(4)))))
        + &rc(qi(2) * a * (a * (a - r) + r)))
        * &rc(one / (a * (a - qi(1)) * (a + qi(2) - r) * (a + qi(2) - r)));
    let c = a * (a - qi(1)) * (a - qi(2)) * (a + qi(1) - r) * (a + qi(2) - r) * (r - a);
    let g = r / qi(2) - qi(2);
    let kernel = Kernel::new(Default::default(), vec![(qi(-1), g.clone()), (qi(1), g)]);
    let d = m2(q11, q12.clone(), q12, q22).map(|x| &(x * &rc(c.clone())) / &p2);
    WeightSpec::new(Support::unit_interval(), kernel, d)
}

/// Multipliers n -> entrywise ratios between the non-polynomial-seed family and the
/// one-step family at index n (the signs of the second row as computed).
pub fn ex1_conjugation_ratios(a: &Q, n: usize) -> [Q; 4] {
    let a2 = a * a;
    let n1 = qi(n as i64 - 1);
    [
        qi(-2) * (&a2 - qi(1)) / &n1,
        qi(-8) * (&a2 - qi(2)) * (&a2 - qi(1)) / &n1,
        -(&a2 - qi(2)) / &n1,
        qi(-4) * (&a2 - qi(2)) * (&a2 - qi(2)) / &n1,
    ]
}

/// Exact square root of a nonnegative rational, when it exists.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x < &Q::zero() {
        return None;
    }
    let (n, d) = (x.numer().clone(), x.denom().clone());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == n && &rd * &rd == d).then(|| Q::new(rn, rd))
}

/// a sqrt(2) / sqrt(3a^2 + 2), when rational.
pub fn ex2_tilde_a(a: &Q) -> Option<Q> {
    let a2 = a * a;
    rational_sqrt(&(qi(2) * &a2 / (qi(3) * &a2 + qi(2)))).map(|s| if a < &Q::zero() { -s } else { s })
}
