use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use xmop_exact::{q, qi, rf, ExactValue, Mat, Poly, PolyMat, QMat, RatFn, RatMat, Unit, ValueMat, Q};
use xmop_kernels::*;

fn gaussian() -> Kernel {
    Kernel::exp(Poly::from_ints(&[0, 0, -1]))
}

fn rm(rows: Vec<Vec<RatFn>>) -> RatMat {
    Mat::from_rows(rows).unwrap()
}

fn c(x: Q) -> RatFn {
    RatFn::constant(x)
}

fn t() -> RatFn {
    RatFn::t()
}

/// Density of the Hermite-type weight [[xi + a^2 t^2, a t], [a t, 1]].
fn hermite_density(a: &Q, xi: &Q) -> RatMat {
    let at = &c(a.clone()) * &t();
    rm(vec![vec![&c(xi.clone()) + &(&at * &at), at.clone()], vec![at, RatFn::one()]])
}

fn hermite_weight(a: i64, xi: i64) -> WeightSpec {
    WeightSpec::new(Support::real_line(), gaussian(), hermite_density(&qi(a), &qi(xi)))
}

/// The exceptional Hermite-type weight for a^2 > 2, with p = 2(2-a^2)t^2 - a^2.
fn exceptional_weight(a: i64) -> WeightSpec {
    let a = qi(a);
    let a2 = &a * &a;
    let k = &a2 - qi(2);
    let p = RatFn::from_poly(Poly::from_coeffs(vec![-a2.clone(), Q::zero(), qi(2) * (qi(2) - &a2)]));
    let p2 = &p * &p;
    let e11 = &(&(&c(&a2 / (qi(4) * &k)) * &p2) + &(&p * &c(k.recip()))) - &c(a2.clone());
    let e12 = &(&c(a.clone()) * &(&(&p * &c(k.recip())) - &c(qi(2)))) * &t();
    let e22 = &c(qi(2) / (&k * &k)) * &(&c(&a2 * &k) - &p);
    let d = rm(vec![vec![&e11 / &p2, &e12 / &p2], vec![&e12 / &p2, &e22 / &p2]]);
    WeightSpec::new(Support::real_line(), gaussian(), d)
}

fn eval_f64(r: &RatFn, x: f64) -> f64 {
    let h = |p: &Poly| p.coeffs().iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap());
    h(r.num()) / h(r.den())
}

#[test]
fn log_derivatives() {
    assert_eq!(log_derivative(&gaussian()), rf(&[0, -2], &[1]));
    let lag = Kernel::new(Poly::from_ints(&[0, -1]), vec![(qi(0), q(1, 2))]);
    assert_eq!(lag.log_derivative(), &c(qi(-1)) + &rf(&[1], &[0, 2]));
    let jac = Kernel::new(Poly::zero(), vec![(qi(1), q(1, 2)), (qi(-1), q(1, 2))]);
    let ld = jac.log_derivative();
    assert_eq!(ld, rf(&[0, 1], &[-1, 0, 1]));
    // symmetric difference of sqrt(1-t^2) at t = 0.3
    let f = |x: f64| (1.0 - x * x).sqrt();
    let (x, h) = (0.3, 1e-6);
    let numeric = (f(x + h) - f(x - h)) / (2.0 * h) / f(x);
    assert!((eval_f64(&ld, x) - numeric).abs() < 1e-8);
}

#[test]
fn differentiate_seed_body() {
    // P_{1,xi} at a = 2, xi = -3: [[2t, -2], [-2, -2t]]
    let p = QuasiRatMat::rational(rm(vec![vec![&c(qi(2)) * &t(), c(qi(-2))], vec![c(qi(-2)), &c(qi(-2)) * &t()]]));
    let d = p.derive();
    assert_eq!(d.body, QMat::diag(vec![qi(2), qi(-2)]).to_rat());
    assert!(d.kernel.is_trivial());
}

#[test]
fn differentiate_constant_body_under_gaussian() {
    let body = QMat::from_ints(&[&[1, 2], &[3, 4]]).to_rat();
    let f = QuasiRatMat::new(gaussian(), body.clone());
    let d = f.derive();
    assert_eq!(d.kernel, gaussian());
    assert_eq!(d.body, body.map(|x| x * &rf(&[0, -2], &[1])));
}

#[test]
fn nonpolynomial_seed_second_derivative_matches_finite_differences() {
    // P = exp(t^2) [[t, a/(a^2-2)], [-a/2, t]] W_{a,1}^{-1} at a = 2
    let w = hermite_density(&qi(2), &qi(1));
    let m = rm(vec![vec![t(), c(qi(1))], vec![c(qi(-1)), t()]]);
    let p = QuasiRatMat::new(Kernel::exp(Poly::from_ints(&[0, 0, 1])), &m * &w.inverse().unwrap());
    let d2 = p.derive().derive();
    assert_eq!(d2.kernel, p.kernel);
    let value = |x: f64, i: usize| (x * x).exp() * eval_f64(&p.body.entries()[i], x);
    let x0 = 1.0 / 3.0;
    for i in 0..4 {
        let fd = |h: f64| (value(x0 + h, i) - 2.0 * value(x0, i) + value(x0 - h, i)) / (h * h);
        // Richardson extrapolation of the central difference
        let h = 1e-3;
        let rich = (4.0 * fd(h / 2.0) - fd(h)) / 3.0;
        let exact = (x0 * x0).exp() * eval_f64(&d2.body.entries()[i], x0);
        assert!((rich - exact).abs() <= 1e-8 * exact.abs().max(1.0), "entry {i}: {rich} vs {exact}");
    }
}

#[test]
fn gaussian_scalar_moments() {
    let w = WeightSpec::new(Support::real_line(), gaussian(), RatMat::identity(1));
    let m = |k| w.moments(k).unwrap().get(0, 0);
    assert_eq!(m(0), ExactValue::sqrt_pi());
    assert_eq!(m(2), ExactValue::sqrt_pi().scale(&q(1, 2)));
    assert_eq!(m(4), ExactValue::sqrt_pi().scale(&q(3, 4)));
    for k in [1, 3, 5, 7] {
        assert!(m(k).is_zero());
    }
}

#[test]
fn laguerre_moments_are_factorials() {
    let k = Kernel::exp(Poly::from_ints(&[0, -1]));
    let w = WeightSpec::new(Support::half_line(), k, RatMat::identity(1));
    let mut f = Q::one();
    for n in 0..12 {
        if n > 0 {
            f *= qi(n);
        }
        assert_eq!(w.moments(n as usize).unwrap().get(0, 0), ExactValue::rational(f.clone()));
    }
}

#[test]
fn hermite_weight_inner_products() {
    // P0 = diag(1, xi), P1 = H1 diag(1, xi) + [[0, -a], [-a, a^2 t]]
    let w = hermite_weight(2, -3);
    let p0 = QMat::diag(vec![qi(1), qi(-3)]).to_poly();
    let n00 = w.exact_inner_product(&p0, &p0).unwrap();
    assert_eq!(n00, ValueMat::new(QMat::diag(vec![qi(-1), qi(9)]), Unit::SqrtPi));
    let p1: PolyMat = Mat::from_rows(vec![
        vec![Poly::from_ints(&[0, 2]), Poly::from_ints(&[-2])],
        vec![Poly::from_ints(&[-2]), Poly::from_ints(&[0, -2])],
    ])
    .unwrap();
    assert!(w.exact_inner_product(&p1, &p0).unwrap().is_zero());
}

#[test]
fn pure_point_mass() {
    let m = QMat::from_ints(&[&[0, 0], &[0, 1]]);
    let w = WeightSpec::new(Support::real_line(), gaussian(), RatMat::zeros(2)).with_point_mass(qi(0), qi(1), m.clone());
    let i = PolyMat::identity(2);
    assert_eq!(w.exact_inner_product(&i, &i).unwrap(), ValueMat::new(m, Unit::One));
}

#[test]
fn unit_normalized_weight_mixes_with_point_masses() {
    let m = QMat::from_ints(&[&[0, 0], &[0, 1]]);
    let plain = hermite_weight(2, -3).with_point_mass(qi(0), qi(2), m.clone());
    let p0 = PolyMat::identity(2);
    assert!(matches!(plain.exact_inner_product(&p0, &p0), Err(KernelError::Algebra(_))));
    // zeroth moment: sqrt(pi) diag(-3 + 4/2, 1) / sqrt(pi), plus 2 diag(0, 1) at the origin
    let w = hermite_weight(2, -3).unit_normalized().with_point_mass(qi(0), qi(2), m);
    let got = w.exact_inner_product(&p0, &p0).unwrap();
    assert_eq!(got, ValueMat::new(QMat::from_ints(&[&[-1, 0], &[0, 3]]), Unit::One));
    let s = serde_json::to_string(&w).unwrap();
    assert!(s.contains("\"normalized\":true"));
    assert_eq!(serde_json::from_str::<WeightSpec>(&s).unwrap(), w);
    assert!(!serde_json::to_string(&hermite_weight(2, 1)).unwrap().contains("normalized"));
}

#[test]
fn rational_density_is_rejected_by_moments() {
    assert_eq!(exceptional_weight(2).moments(0), Err(KernelError::RationalDensity));
}

#[test]
fn decay_examples() {
    let body = QMat::identity(2).to_poly().map(|p| p * &Poly::from_ints(&[1, 0, 3])).to_rat();
    let f = QuasiRatMat::new(gaussian(), body.clone());
    assert!(decay_check(&f, &Endpoint::PosInf, 10));
    assert!(decay_check(&f, &Endpoint::NegInf, 10));
    // F2 W for the Laguerre-type weight with alpha = 1/2: F2 = t I
    let k = Kernel::new(Poly::from_ints(&[0, -1]), vec![(qi(0), q(1, 2))]);
    let at = t();
    let wb = rm(vec![vec![&t() + &(&t() * &t()), at.clone()], vec![at, RatFn::one()]]);
    let f2w = QuasiRatMat::new(k, wb.map(|x| x * &t()));
    assert!(decay_check(&f2w, &Endpoint::At(qi(0)), 6));
    let grow = QuasiRatMat::new(Kernel::exp(Poly::from_ints(&[0, 0, 1])), body);
    assert!(!decay_check(&grow, &Endpoint::PosInf, 0));
}

#[test]
fn positivity_examples() {
    let samples: Vec<Q> = (-2..=2).map(qi).collect();
    assert_eq!(positivity_check(&exceptional_weight(2), &samples), Ok(Positivity::PositiveDefiniteOnSamples));
    assert_eq!(
        positivity_check(&hermite_weight(2, -3), &[qi(0)]),
        Ok(Positivity::Indefinite { witness: qi(0) })
    );
    // F2 of the operator with u = (1, 4/(a^2-2), 0, 0, 4) at a = 2 is [[-1, 4t], [0, 1]]
    let f2 = rm(vec![vec![c(qi(-1)), &c(qi(4)) * &t()], vec![RatFn::zero(), RatFn::one()]]);
    let w = hermite_weight(2, -3);
    let f2w = WeightSpec::new(w.support.clone(), w.kernel.clone(), &f2 * &w.density);
    assert_eq!(positivity_check(&f2w, &samples), Ok(Positivity::PositiveDefiniteOnSamples));
}

#[test]
fn exceptional_weight_value_at_zero() {
    assert_eq!(exceptional_weight(2).density.eval(&qi(0)).unwrap(), QMat::diag(vec![q(1, 8), q(3, 8)]));
}

#[test]
fn reducibility_examples() {
    let w = hermite_weight(2, 1);
    assert_eq!(
        reducibility_probe(&w, &q(1, 2), &[(qi(0), qi(1))]),
        Ok(Reducibility::NonReducibilityWitness { t: qi(0), s: qi(1) })
    );
    let diag = WeightSpec::new(
        Support::real_line(),
        gaussian(),
        rm(vec![vec![RatFn::one(), RatFn::zero()], vec![RatFn::zero(), &t() * &t()]]),
    );
    let pairs = probes::default_sample_pairs(&diag.support);
    assert_eq!(reducibility_probe(&diag, &qi(1), &pairs), Ok(Reducibility::CommutesOnAllSamples));
    let ex = exceptional_weight(2);
    let pairs = probes::default_sample_pairs(&ex.support);
    assert!(matches!(reducibility_probe(&ex, &qi(0), &pairs), Ok(Reducibility::NonReducibilityWitness { .. })));
}

#[test]
fn weight_spec_json_round_trip() {
    let w = exceptional_weight(2).with_point_mass(qi(0), q(1, 3), QMat::from_ints(&[&[0, 0], &[0, 1]]));
    let s1 = serde_json::to_string(&w).unwrap();
    let back: WeightSpec = serde_json::from_str(&s1).unwrap();
    assert_eq!(back, w);
    assert_eq!(serde_json::to_string(&back).unwrap(), s1);
    let lag = WeightSpec::new(
        Support::half_line(),
        Kernel::new(Poly::from_ints(&[0, -1]), vec![(qi(0), q(1, 2))]),
        RatMat::identity(2),
    );
    let s = serde_json::to_string(&lag).unwrap();
    assert_eq!(serde_json::from_str::<WeightSpec>(&s).unwrap(), lag);
}

fn poly_mat() -> impl Strategy<Value = PolyMat> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 0..=4), 4).prop_map(|v| {
        let mut it = v.into_iter();
        Mat::from_fn(2, |_, _| Poly::from_ints(&it.next().unwrap()))
    })
}

fn const_mat() -> impl Strategy<Value = QMat> {
    prop::collection::vec(-5i64..=5, 4).prop_map(|v| QMat::from_fn(2, |i, j| qi(v[2 * i + j])))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, rng_seed: proptest::test_runner::RngSeed::Fixed(7), ..ProptestConfig::default() })]

    #[test]
    fn kernel_closure_under_differentiation(e in prop::collection::vec(-2i64..=2, 0..4), g in -3i64..=3, m in poly_mat()) {
        let k = Kernel::new(Poly::from_ints(&e), vec![(qi(1), q(g, 2))]);
        let f = QuasiRatMat::new(k.clone(), m.to_rat());
        prop_assert_eq!(f.derive().kernel, k.clone());
        prop_assert_eq!(f.derive().derive().kernel, k);
    }

    #[test]
    fn left_priority_and_transpose_symmetry(a in const_mat(), p in poly_mat(), qm in poly_mat()) {
        let w = hermite_weight(2, 1);
        let lhs = w.exact_inner_product(&p.lmul_q(&a), &qm).unwrap();
        let rhs = w.exact_inner_product(&p, &qm).unwrap().lmul(&a);
        prop_assert_eq!(lhs, rhs);
        let pq = w.exact_inner_product(&p, &qm).unwrap();
        let qp = w.exact_inner_product(&qm, &p).unwrap();
        prop_assert_eq!(pq, qp.transpose());
    }

    #[test]
    fn decay_is_downward_closed(n in 0usize..8, deg in 0usize..4, gamma in -6i64..6) {
        let body = RatMat::identity(1).map(|_| RatFn::from_poly(Poly::monomial(Q::one(), deg)));
        let f = QuasiRatMat::new(Kernel::power(qi(0), q(gamma, 2)), body);
        if decay_check(&f, &Endpoint::PosInf, n) {
            for m in 0..=n {
                prop_assert!(decay_check(&f, &Endpoint::PosInf, m));
            }
        }
    }
}

#[test]
fn gaussian_moment_recurrence_to_forty() {
    let (unit, table) = KernelFamily::Gaussian.moment_table(43).unwrap();
    assert_eq!(unit, Unit::SqrtPi);
    for k in 0..=40 {
        assert_eq!(table[k + 2], &table[k] * q(k as i64 + 1, 2));
    }
}
