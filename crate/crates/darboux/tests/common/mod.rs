#![allow(dead_code)]

use num_traits::{One, Zero};
use xmop_diffops::DiffOp;
use xmop_exact::{qi, Mat, Poly, PolyMat, QMat, Q};
use xmop_kernels::{Kernel, Support, WeightSpec};

pub fn k(x: Q) -> Poly {
    Poly::constant(x)
}

pub fn t() -> Poly {
    Poly::t()
}

pub fn pm(rows: [[Poly; 2]; 2]) -> PolyMat {
    let [[a, b], [c, d]] = rows;
    Mat::from_rows(vec![vec![a, b], vec![c, d]]).unwrap()
}

pub fn op(f: [PolyMat; 3]) -> DiffOp {
    DiffOp::from_poly(&f)
}

pub fn gaussian() -> Kernel {
    Kernel::exp(Poly::from_ints(&[0, 0, -1]))
}

pub fn hermite_weight(a: &Q, xi: &Q) -> WeightSpec {
    let at = &k(a.clone()) * &t();
    let d = pm([[&k(xi.clone()) + &(&at * &at), at.clone()], [at, Poly::one()]]);
    WeightSpec::new(Support::real_line(), gaussian(), d.to_rat())
}

/// The five second-order operators having the Hermite-type family as eigenfunctions.
pub fn hermite_ops(a: &Q, xi: &Q) -> Vec<DiffOp> {
    let z = Poly::zero;
    let c = |x: Q| k(x);
    let a2 = a * a;
    let id = || pm([[Poly::one(), z()], [z(), Poly::one()]]);
    let zero = || pm([[z(), z()], [z(), z()]]);
    let d1 = op([
        pm([[c(qi(-2)), z()], [z(), z()]]),
        pm([[t().scale(&qi(-2)), c(qi(2) * a)], [z(), t().scale(&qi(-2))]]),
        id(),
    ]);
    let d2 = op([
        pm([[z(), z()], [z(), c(xi.clone())]]),
        pm([[z(), c(a * xi / qi(2))], [c(-a / qi(2)), t().scale(&(&a2 / qi(2)))]]),
        pm([[c(-&a2 / qi(4)), t().scale(&(&a2 * a / qi(4)))], [z(), z()]]),
    ]);
    let d3 = op([
        pm([[z(), c(xi * (&a2 + qi(2) * xi) / a)], [z(), z()]]),
        pm([[c(-&a2 - xi), t().scale(&(a * (&a2 + qi(2) * xi)))], [z(), c(xi.clone())]]),
        pm([
            [t().scale(&(-&a2 / qi(2))), (&t() * &t()).scale(&(&a2 * a / qi(2)))],
            [c(-a / qi(2)), t().scale(&(&a2 / qi(2)))],
        ]),
    ]);
    let d4 = op([
        pm([[z(), z()], [Poly::one(), z()]]),
        pm([[c(a / qi(2)), z()], [z(), c(-a / qi(2))]]),
        pm([[z(), c(-&a2 / qi(4))], [z(), z()]]),
    ]);
    let d5 = op([id(), zero(), zero()]);
    vec![d1, d2, d3, d4, d5]
}

pub fn hermite_scalar(n: usize) -> Vec<Poly> {
    let mut h = vec![Poly::one(), t().scale(&qi(2))];
    for j in 1..n {
        let next = &(&t() * &h[j]).scale(&qi(2)) - &h[j - 1].scale(&qi(2 * j as i64));
        h.push(next);
    }
    h.truncate(n + 1);
    h
}

pub fn hermite_family(a: &Q, xi: &Q, n: usize) -> Vec<PolyMat> {
    let h = hermite_scalar(n);
    (0..=n)
        .map(|m| {
            let base = pm([[h[m].clone(), Poly::zero()], [Poly::zero(), h[m].scale(xi)]]);
            if m == 0 {
                return base;
            }
            let hm = h[m - 1].scale(&qi(m as i64));
            let corr = pm([
                [Poly::zero(), hm.scale(&-a)],
                [hm.scale(&-a), &hm * &t().scale(&(a * a))],
            ]);
            &base + &corr
        })
        .collect()
}

/// Eigenvalue of sum u_i D_i on P_n.
pub fn gamma(n: i64, a: &Q, xi: &Q, u: &[Q]) -> QMat {
    let (nq, a2) = (qi(n), a * a);
    let half = |m: &Q| m * &a2 / qi(2) + xi;
    Mat::from_rows(vec![
        vec![
            qi(-2) * (&nq + qi(1)) * &u[0] + &u[4],
            ((&nq + qi(1)) * &a2 + qi(2) * xi) * &u[2] / a,
        ],
        vec![half(&nq) * &u[3], qi(-2) * &nq * &u[0] + half(&nq) * &u[1] + &u[4]],
    ])
    .unwrap()
}

pub fn unit(i: usize) -> Vec<Q> {
    (0..5).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

