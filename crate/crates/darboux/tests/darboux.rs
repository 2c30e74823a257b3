mod common;

use std::collections::BTreeMap;

use common::*;
use num_traits::{One, Zero};
use xmop_darboux::*;
use xmop_diffops::DiffOp;
use xmop_exact::{q, qi, Mat, Poly, PolyMat, QMat, RatFn, RatMat, Q};
use xmop_kernels::{Kernel, QuasiRatMat, Support, WeightSpec};

fn rm(rows: [[RatFn; 2]; 2]) -> RatMat {
    let [[a, b], [c, d]] = rows;
    Mat::from_rows(vec![vec![a, b], vec![c, d]]).unwrap()
}

fn cr(x: Q) -> RatFn {
    RatFn::constant(x)
}

/// Degree-one member of the Hermite-type family, used as seed.
fn seed(a: &Q, xi: &Q) -> QuasiRatMat {
    QuasiRatMat::poly(&hermite_family(a, xi, 1)[1])
}

/// Operator with u = (1, 4/(a^2-2), 0, 0, 4), which kills the degree-one member at xi = 1 - a^2.
fn d0(a: &Q) -> DiffOp {
    let a2 = a * a;
    let xi = qi(1) - &a2;
    let u = [qi(1), qi(4) / (&a2 - qi(2)), qi(0), qi(0), qi(4)];
    DiffOp::combination(&hermite_ops(a, &xi), &u)
}

#[test]
fn annihilator_kills_seed_and_first_member_vanishes() {
    let (a, xi) = (qi(2), qi(-3));
    let p = seed(&a, &xi);
    assert_eq!(p.body, PolyMat::from_rows(vec![
        vec![Poly::from_ints(&[0, 2]), Poly::from_ints(&[-2])],
        vec![Poly::from_ints(&[-2]), Poly::from_ints(&[0, -2])],
    ]).unwrap().to_rat());
    let aop = build_annihilator(&p, &RatMat::identity(2)).unwrap();
    assert!(aop.apply(&p).is_zero());
    assert_eq!(aop.coeff(0), -&RatMat::identity(2));
    // P' = diag(2, -2), so A1 = [[t, -a/2], [a/(a^2-2), t]]
    let a1 = rm([[RatFn::t(), cr(qi(-1))], [cr(qi(1)), RatFn::t()]]);
    assert_eq!(aop.coeff(1), a1);
}

#[test]
fn annihilator_errors() {
    let c = QuasiRatMat::constant(&QMat::identity(2));
    assert_eq!(build_annihilator(&c, &RatMat::identity(2)), Err(DarbouxError::SingularDerivative));
    let p = seed(&qi(2), &qi(-3));
    let u = QMat::from_ints(&[&[1, 1], &[1, 1]]).to_rat();
    assert_eq!(build_annihilator(&p, &u), Err(DarbouxError::SingularU));
}

#[test]
fn kernel_seed_gives_zero_psi() {
    let a = qi(2);
    let d = d0(&a);
    let p = seed(&a, &qi(-3));
    let aop = build_annihilator(&p, &RatMat::identity(2)).unwrap();
    let f = factorize(&d, &aop).unwrap();
    assert!(f.psi.is_zero());
    assert!(f.residual(&d).is_zero());
    assert!(f.holds_on_probes(&d, 5));
    assert!(f.psi_matches_seed(&d, &p).unwrap());
    assert_eq!(f.b.coeff(1), &aop.coeff(1).inverse().unwrap() * &d.coeff(2));
    assert_eq!(transform(&d, &f).unwrap(), DiffOp::compose(&f.a, &f.b));
}

#[test]
fn eigen_seed_gives_conjugated_eigenvalue() {
    let (a, xi) = (qi(2), qi(1));
    let d1 = hermite_ops(&a, &xi)[0].clone();
    let p = seed(&a, &xi);
    assert_eq!(d1.eigencheck(&p).unwrap().value(), Some(&QMat::diag(vec![qi(-4), qi(-2)])));
    let aop = build_annihilator(&p, &RatMat::identity(2)).unwrap();
    let f = factorize(&d1, &aop).unwrap();
    // independent expansion of B(A(y)) - y Psi against D(y)
    assert!(f.holds_on_probes(&d1, 5));
    assert!(f.residual(&d1).is_zero());
    let g = QMat::diag(vec![qi(-4), qi(-2)]).to_rat();
    let pinv = p.body.inverse().unwrap();
    assert_eq!(f.psi, -&(&(&pinv * &g) * &p.body));
    assert!(invariance_check(&aop, &f.psi).unwrap().holds);
}

#[test]
fn plain_derivative_factorization() {
    let d = hermite_ops(&q(1, 2), &qi(3))[2].clone();
    let f = factorize(&d, &DiffOp::derivative(2)).unwrap();
    assert_eq!(f.b.coeff(1), d.coeff(2));
    assert_eq!(f.b.coeff(0), d.coeff(1));
    assert_eq!(f.psi, -&d.coeff(0));
}

#[test]
fn invariance_identity_examples() {
    let aop = DiffOp::new(2, vec![-&RatMat::identity(2), RatMat::identity(2)]);
    assert!(invariance_check(&aop, &RatMat::zeros(2)).unwrap().holds);
    let psi = RatMat::scalar(2, RatFn::t());
    let r = invariance_check(&aop, &psi).unwrap();
    assert!(!r.holds);
    // left side -t I + I, right side -t I
    assert_eq!(r.residual, RatMat::identity(2));
    assert!(matches!(invariance_check(&DiffOp::identity(2), &psi), Err(DarbouxError::Order { .. })));
}

/// p(t) = 2(2 - a^2) t^2 - a^2, the determinant of the seed.
fn pfrak(a: &Q) -> RatFn {
    let a2 = a * a;
    RatFn::from_poly(Poly::from_coeffs(vec![-a2.clone(), Q::zero(), qi(2) * (qi(2) - &a2)]))
}

#[test]
fn transformed_operator_matches_closed_form() {
    // u1 = 1 only, i.e. D1 at xi = 1 - a^2, transformed through the degree-one seed
    for a in [qi(2), qi(3), q(5, 3)] {
        let a2 = &a * &a;
        let xi = qi(1) - &a2;
        let d1 = hermite_ops(&a, &xi)[0].clone();
        let aop = build_annihilator(&seed(&a, &xi), &RatMat::identity(2)).unwrap();
        let f = factorize(&d1, &aop).unwrap();
        assert!(invariance_check(&aop, &f.psi).unwrap().holds);
        let dt = transform(&d1, &f).unwrap();
        let p = pfrak(&a);
        let t = RatFn::t();
        let k = &a2 - qi(2);
        let f1 = rm([
            [&(&t * &(&p + &cr(qi(4)))) * &cr(qi(-2)), &cr(qi(-4) * &a * &k) * &(&(&t * &t) - &cr(q(1, 2)))],
            [cr(qi(8) * &a / &k), &(&t * &(&(&p - &cr(qi(4) * &a2)) + &cr(qi(4)))) * &cr(qi(-2))],
        ])
        .map(|x| x / &p);
        assert_eq!(dt.coeff(2), RatMat::identity(2), "a={a}");
        assert_eq!(dt.coeff(1), f1, "a={a}");
        assert_eq!(dt.coeff(0), RatMat::diag(vec![cr(qi(-2)), RatFn::zero()]), "a={a}");
    }
}

#[test]
fn intertwining_carries_eigenvalues() {
    let (a, xi) = (qi(2), qi(-3));
    let u = [qi(1), qi(2), qi(0), qi(0), qi(4)];
    let d = d0(&a);
    let p = seed(&a, &xi);
    let aop = build_annihilator(&p, &RatMat::identity(2)).unwrap();
    let f = factorize(&d, &aop).unwrap();
    assert!(invariance_check(&aop, &f.psi).unwrap().holds);
    let dt = transform(&d, &f).unwrap();
    let mut images = BTreeMap::new();
    for (n, pn) in hermite_family(&a, &xi, 10).into_iter().enumerate() {
        let img = aop.apply_poly(&pn).unwrap();
        if n != 1 {
            // leading coefficient (n-1) 2^(n-1) diag(2, (n-2) a^2 + 2) for n >= 1,
            // and A(P_0) = -P_0
            if n == 0 {
                assert_eq!(img, -&pn);
            }
            let s = qi(n as i64 - 1) * xmop_exact::scalar::pow(&qi(2), n.saturating_sub(1));
            let lc = QMat::diag(vec![&s * qi(2), &s * (qi(n as i64 - 2) * &a * &a + qi(2))]);
            if n >= 2 {
                assert_eq!(img.coeff(n), lc, "n={n}");
            }
            assert_eq!(dt.eigencheck_poly(&img).unwrap().value(), Some(&gamma(n as i64, &a, &xi, &u)), "n={n}");
        }
        images.insert(n, img);
    }
    let res = TransformResult::from_images(dt, images, 10).unwrap();
    assert_eq!(res.gaps.iter().copied().collect::<Vec<_>>(), vec![1]);
    assert_eq!(res.polys.len(), 10);
    let s = serde_json::to_string(&res).unwrap();
    let back: TransformResult = serde_json::from_str(&s).unwrap();
    assert_eq!(back, res);
    assert_eq!(serde_json::to_string(&back).unwrap(), s);
    let stacked: Vec<PolyMat> = res.polys.range(..=6).map(|(_, p)| p.clone()).collect();
    assert!(minors_gcd(&stacked).is_constant());
}

#[test]
fn eigen_seed_transform_is_intertwining() {
    // Psi != 0 case: D1 with the degree-one member as seed
    let (a, xi) = (qi(2), qi(1));
    let d1 = hermite_ops(&a, &xi)[0].clone();
    let aop = build_annihilator(&seed(&a, &xi), &RatMat::identity(2)).unwrap();
    let dt = transform(&d1, &factorize(&d1, &aop).unwrap()).unwrap();
    for (n, pn) in hermite_family(&a, &xi, 6).into_iter().enumerate().skip(2) {
        let img = aop.apply_poly(&pn).unwrap();
        assert_eq!(dt.eigencheck_poly(&img).unwrap().value(), Some(&gamma(n as i64, &a, &xi, &unit(0))));
    }
}

/// The exceptional Hermite-type weight with p = 2(2-a^2)t^2 - a^2 (closed form).
fn one_step_density(a: &Q) -> RatMat {
    let a2 = a * a;
    let k = &a2 - qi(2);
    let p = RatFn::from_poly(Poly::from_coeffs(vec![-a2.clone(), Q::zero(), qi(2) * (qi(2) - &a2)]));
    let p2 = &p * &p;
    let e11 = &(&(&cr(&a2 / (qi(4) * &k)) * &p2) + &(&p * &cr(k.recip()))) - &cr(a2.clone());
    let e12 = &(&cr(a.clone()) * &(&(&p * &cr(k.recip())) - &cr(qi(2)))) * &RatFn::t();
    let e22 = &cr(qi(2) / (&k * &k)) * &(&cr(&a2 * &k) - &p);
    rm([[&e11 / &p2, &e12 / &p2], [&e12 / &p2, &e22 / &p2]])
}

#[test]
fn exceptional_weight_matches_closed_form() {
    for a in [qi(2), qi(3), q(3, 2)] {
        let xi = qi(1) - &a * &a;
        let w = hermite_weight(&a, &xi);
        let d = d0(&a);
        let got = exceptional_weight(&seed(&a, &xi), &RatMat::identity(2), &d.coeff(2), &w).unwrap();
        let factor = qi(4) * (&a * &a - qi(2));
        assert_eq!(got.density, one_step_density(&a).scale_q(&factor), "a={a}");
        assert_eq!(got.kernel, gaussian());
        // the transformed operator is symmetric with respect to it
        let p = seed(&a, &xi);
        let aop = build_annihilator(&p, &RatMat::identity(2)).unwrap();
        let dt = transform(&d, &factorize(&d, &aop).unwrap()).unwrap();
        assert!(dt.symmetry_check(&got).unwrap().is_symmetric());
    }
}

#[test]
fn exceptional_weight_rejects_zero_in_support() {
    // seed t I - diag(0, 1): A1 = P has det t (t - 1), zero inside the real line
    let p = QuasiRatMat::poly(&PolyMat::from_rows(vec![
        vec![Poly::from_ints(&[0, 1]), Poly::zero()],
        vec![Poly::zero(), Poly::from_ints(&[-1, 1])],
    ]).unwrap());
    let w = hermite_weight(&qi(2), &qi(1));
    let err = exceptional_weight(&p, &RatMat::identity(2), &RatMat::identity(2), &w).unwrap_err();
    assert!(matches!(err, DarbouxError::ZeroInSupport(_)));
}

#[test]
fn endpoint_zero_is_moved_into_the_kernel() {
    // on [0, inf) with kernel e^{-t} t^{1/2}: A1 = t I gives density W / t^2
    let k = Kernel::new(Poly::from_ints(&[0, -1]), vec![(qi(0), q(1, 2))]);
    let w = WeightSpec::new(Support::half_line(), k.clone(), RatMat::identity(2));
    let a1 = RatMat::scalar(2, RatFn::t());
    let got = conjugated_weight(&a1, &RatMat::identity(2), &w).unwrap_err();
    assert_eq!(got, DarbouxError::NotIntegrable("0".into()));
    let f2 = RatMat::scalar(2, RatFn::t());
    let got = conjugated_weight(&a1, &f2, &w).unwrap();
    assert_eq!(got.density, RatMat::identity(2));
    assert_eq!(got.kernel, k.with_factor(qi(0), qi(-1)));
    // without a power factor at the endpoint the zero is rejected
    let plain = WeightSpec::new(Support::half_line(), Kernel::exp(Poly::from_ints(&[0, -1])), RatMat::identity(2));
    assert!(matches!(conjugated_weight(&a1, &f2, &plain), Err(DarbouxError::ZeroInSupport(_))));
}

#[test]
fn kernel_factorization_examples() {
    let a = qi(2);
    let xi = qi(-3);
    let w = hermite_weight(&a, &xi);
    let d = d0(&a);
    let p = seed(&a, &xi);
    assert_eq!(kernel_factorization_check(&d, &p, &w).unwrap(), KernelFactorization::Holds);
    let bumped = QuasiRatMat::new(p.kernel.clone(), &p.body + &RatMat::diag(vec![RatFn::zero(), RatFn::t()]));
    match kernel_factorization_check(&d, &bumped, &w).unwrap() {
        KernelFactorization::ConditionViolated { residual } => assert!(!residual.is_zero()),
        other => panic!("{other:?}"),
    }
    // D1 has P as eigenfunction but not in its kernel
    let d1 = hermite_ops(&a, &xi)[0].clone();
    let res = kernel_factorization_check(&d1, &p, &w);
    assert!(matches!(res, Err(DarbouxError::NotInKernel) | Ok(KernelFactorization::ConditionViolated { .. })));
}

/// Transformed operator of the point-mass example: u = (1, 4/a^2, 0, 0, 4 - 4/a^2).
fn point_mass_operator(a: &Q) -> (DiffOp, WeightSpec) {
    let a2 = a * a;
    let xi = qi(1) - &a2;
    let u = [qi(1), qi(4) / &a2, qi(0), qi(0), qi(4) - qi(4) / &a2];
    let d = DiffOp::combination(&hermite_ops(a, &xi), &u);
    let p = seed(a, &xi);
    let aop = build_annihilator(&p, &RatMat::identity(2)).unwrap();
    let f = factorize(&d, &aop).unwrap();
    assert!(invariance_check(&aop, &f.psi).unwrap().holds);
    let dt = transform(&d, &f).unwrap();
    let w = exceptional_weight(&p, &RatMat::identity(2), &d0(a).coeff(2), &hermite_weight(a, &xi)).unwrap();
    (dt, w)
}

#[test]
fn point_mass_operator_closed_form() {
    for a in [qi(2), qi(3), q(5, 3)] {
        let (dt, _) = point_mass_operator(&a);
        let a2 = &a * &a;
        let k = &a2 - qi(2);
        let p = pfrak(&a);
        let t = RatFn::t();
        let t2 = &t * &t;
        let two_t2_1 = &(&t2 * &cr(qi(2))) + &cr(qi(1));
        let f2 = rm([
            [&two_t2_1 * &cr(-&a2), &(&t * &two_t2_1) * &cr(-(&k * &a))],
            [&t * &cr(qi(4) * &a / &k), &t2 * &cr(qi(4))],
        ])
        .map(|x| x / &p);
        let p2 = &p * &p;
        let f1 = rm([
            [
                &(&t * &(&(&p2 + &(&p * &cr(qi(4)))) - &cr(qi(4) * &a2))) * &cr(qi(-2)),
                &(&t2 * &cr(qi(4) * &k / &a)) * &(&cr(qi(2) * &a2) - &p),
            ],
            [
                &(&(&p + &cr(qi(2) * &a2)) * &(&p - &cr(a2.clone()))) * &cr(qi(4) / (&a * &k)),
                &t * &cr(qi(-8) * &a2),
            ],
        ])
        .map(|x| x / &p2);
        assert_eq!(dt.coeff(2), f2, "a={a}");
        assert_eq!(dt.coeff(1), f1, "a={a}");
        assert_eq!(dt.coeff(0), RatMat::diag(vec![cr(qi(2) - qi(4) / &a2), RatFn::zero()]), "a={a}");
    }
}

#[test]
fn delta_extension_examples() {
    let (dt, w) = point_mass_operator(&qi(2));
    let w = w.unit_normalized();
    let m = QMat::diag(vec![qi(0), qi(1)]);
    let ext = delta_extension(&dt, &w, &qi(0), &m, &qi(1)).unwrap();
    assert_eq!(ext.point_masses.len(), 1);
    assert_eq!(delta_extension(&dt, &w, &qi(0), &m, &qi(0)).unwrap(), w);
    let err = delta_extension(&dt, &w, &qi(0), &QMat::identity(2), &qi(1)).unwrap_err();
    assert_eq!(err, DarbouxError::Incompatible("F2(t0) M != 0".into()));
    assert_eq!(delta_extension(&dt, &w, &qi(0), &m, &qi(-1)).unwrap_err(), DarbouxError::NegativeZeta);
    let indefinite = QMat::diag(vec![qi(0), qi(-1)]);
    assert_eq!(delta_extension(&dt, &w, &qi(0), &indefinite, &qi(1)).unwrap_err(), DarbouxError::NotPositiveSemidefinite);
}

#[test]
fn gram_schmidt_keeps_orthogonal_input() {
    let (a, xi) = (qi(2), qi(1));
    let w = hermite_weight(&a, &xi);
    let fam: BTreeMap<usize, PolyMat> = hermite_family(&a, &xi, 5).into_iter().enumerate().collect();
    let ip = |x: &PolyMat, y: &PolyMat| Ok(w.exact_inner_product(x, y)?.coeffs);
    assert_eq!(gram_schmidt(&fam, ip).unwrap(), fam);
}

#[test]
fn gram_schmidt_orthogonalizes_monomials() {
    let (a, xi) = (qi(2), qi(1));
    let w = hermite_weight(&a, &xi);
    let ip = |x: &PolyMat, y: &PolyMat| Ok(w.exact_inner_product(x, y)?.coeffs);
    let raw: BTreeMap<usize, PolyMat> =
        (0..5).map(|n| (n, PolyMat::scalar(2, Poly::monomial(Q::one(), n)))).collect();
    let out = gram_schmidt(&raw, ip).unwrap();
    for (n, p) in &out {
        assert_eq!(p.degree(), Some(*n));
        assert_eq!(p.coeff(*n), QMat::identity(2));
        for (m, r) in &out {
            if m != n {
                assert!(ip(p, r).unwrap().is_zero());
            }
        }
    }
    // the same span as the monic family: leading coefficient of P_n is diag(2^n, 2^n xi)
    let fam = hermite_family(&a, &xi, 4);
    for (n, p) in &out {
        let lc = fam[*n].coeff(*n);
        assert_eq!(&fam[*n], &p.lmul_q(&lc));
    }
}

#[test]
fn gram_schmidt_errors() {
    let raw: BTreeMap<usize, PolyMat> = [(0, PolyMat::identity(2)), (1, PolyMat::identity(2))].into();
    let ip = |_: &PolyMat, _: &PolyMat| Ok(QMat::identity(2));
    assert_eq!(gram_schmidt(&raw, ip), Err(DarbouxError::DegreeMismatch { n: 1, got: Some(0) }));
    let raw: BTreeMap<usize, PolyMat> = [(0, PolyMat::identity(2))].into();
    let zero = |_: &PolyMat, _: &PolyMat| Ok(QMat::zeros(2));
    assert_eq!(gram_schmidt(&raw, zero), Err(DarbouxError::GramSingular(0)));
}

#[test]
fn common_right_factor_is_detected() {
    let fam = hermite_family(&qi(2), &qi(1), 6);
    assert_eq!(minors_gcd(&fam), Poly::one());
    let r = PolyMat::from_rows(vec![vec![Poly::from_ints(&[0, 1]), Poly::zero()], vec![Poly::zero(), Poly::one()]]).unwrap();
    let factored: Vec<PolyMat> = fam.iter().map(|p| p * &r).collect();
    assert_eq!(minors_gcd(&factored), Poly::t());
}
