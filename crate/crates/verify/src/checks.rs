//! Check bundles over artifacts. Exact checks compare with zero tolerance; numeric checks
//! report the largest residual against `NUMERIC_TOL`. Each bundle aggregates over indices,
//! so a report stays readable and its failures carry the first offending index.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use xmop_darboux::{kernel_factorization_check, KernelFactorization};
use xmop_diffops::{DiffOp, Eigen, Symmetry};
use xmop_exact::{fmt_q, Poly, PolyMat, QMat, ValueMat, Q};
use xmop_families::closed_forms::*;
use xmop_families::examples::{
    ex1_nonpolynomial_seed_family, ex2_one_step_family, run, ExampleRun, Params,
};
use xmop_families::{par, ClassicalFamily, Exec};
use xmop_kernels::{QuasiRatMat, WeightSpec};

use crate::artifact::Artifact;
use crate::conj::conjugation_check;
use crate::error::VerifyError;
use crate::numeric::{numeric_gram, NumMat};
use crate::quad::unit_value;
use crate::recur::fit_recurrence;
use crate::report::{Check, Status};
use crate::tau::three_term_certificate;

pub const NUMERIC_TOL: f64 = 1e-9;

fn unit_u(len: usize, i: usize) -> Vec<Q> {
    (0..len).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

fn param(r: &ExampleRun, k: &str) -> Result<Q, VerifyError> {
    r.params.get(k).cloned().ok_or_else(|| VerifyError::Usage(format!("example {} has no parameter {k}", r.id)))
}

pub fn left_monic(p: &PolyMat) -> Result<PolyMat, VerifyError> {
    let n = p.degree().ok_or(VerifyError::Inconsistent("zero polynomial".into()))?;
    Ok(p.lmul_q(&p.coeff(n).inverse()?))
}

/// Canonical form with the density's valuation at each finite end moved into the kernel.
fn canon(w: &WeightSpec) -> QuasiRatMat {
    let mut qm = w.as_quasi();
    for (c, side) in w.support.finite_ends() {
        qm = qm.absorb_valuation(&c, side);
    }
    qm
}

pub fn same_weight(a: &WeightSpec, b: &WeightSpec) -> bool {
    a.support == b.support && a.normalized == b.normalized && a.point_masses == b.point_masses && canon(a) == canon(b)
}

/// First failure over `items`, or a pass with `detail`.
fn all_of<T: Sync>(
    key: &str,
    items: &[T],
    exec: Exec,
    f: impl Fn(&T) -> Result<Option<String>, VerifyError> + Sync + Send,
    detail: impl Into<String>,
) -> Check {
    Check::timed(key, || {
        let out = par::map(exec, items, |x| f(x));
        for r in out {
            if let Some(w) = r? {
                return Ok(Check::new(key, Status::fail(w)));
            }
        }
        Ok(Check::new(key, Status::ExactPass).with_detail(detail))
    })
}

fn eigenvalue_of(op: &DiffOp, p: &PolyMat) -> Result<Result<QMat, String>, VerifyError> {
    Ok(match op.eigencheck_poly(p)? {
        Eigen::Eigenvalue(g) => Ok(g),
        Eigen::NotEigenfunction(r) => Err(format!("not an eigenfunction, D(P) P^-1 = {r}")),
    })
}

/// Every member is an eigenfunction of every operator, with the predicted eigenvalue where
/// one is known.
pub fn eigen_checks(art: &Artifact, exec: Exec) -> Vec<Check> {
    let ops = art.operators();
    let idx: Vec<usize> = art.polys().keys().copied().collect();
    (0..ops.len())
        .map(|i| {
            let key = format!("eigen/D{}", i + 1);
            all_of(
                &key,
                &idx,
                exec,
                |&n| {
                    let p = &art.polys()[&n];
                    let g = match eigenvalue_of(&ops[i], p)? {
                        Ok(g) => g,
                        Err(w) => return Ok(Some(format!("n = {n}: {w}"))),
                    };
                    let expected = match art {
                        Artifact::Family(f) => Some(f.family.eigenvalue(n, &unit_u(ops.len(), i))?),
                        Artifact::Example(r) => r.expected_eigenvalue(i, n)?,
                    };
                    Ok(expected.filter(|e| *e != g).map(|e| format!("n = {n}: eigenvalue {g}, expected {e}")))
                },
                format!("indices {idx:?}"),
            )
        })
        .collect()
}

/// Degree n with nonsingular leading coefficient, and the gap set.
pub fn degree_check(art: &Artifact) -> Check {
    Check::timed("degrees", || {
        for (&n, p) in art.polys() {
            if p.degree() != Some(n) || p.coeff(n).det().is_zero() {
                return Ok(Check::new("degrees", Status::fail(format!("member {n} has degree {:?}", p.degree()))));
            }
        }
        let detail = match art {
            Artifact::Example(r) => format!("gaps {:?}", r.result.gaps),
            Artifact::Family(_) => "no gaps".into(),
        };
        Ok(Check::new("degrees", Status::ExactPass).with_detail(detail))
    })
}

fn leading_against(
    key: &str,
    polys: &BTreeMap<usize, PolyMat>,
    from: usize,
    exec: Exec,
    expect: impl Fn(usize) -> QMat + Sync + Send,
) -> Check {
    let idx: Vec<usize> = polys.keys().copied().filter(|&n| n >= from).collect();
    all_of(
        key,
        &idx,
        exec,
        |&n| {
            let (got, want) = (polys[&n].coeff(n), expect(n));
            Ok((got != want).then(|| format!("n = {n}: {got}, closed form {want}")))
        },
        format!("n in {idx:?}"),
    )
}

pub fn leading_checks(r: &ExampleRun, exec: Exec) -> Vec<Check> {
    let Ok(a) = param(r, "a") else { return vec![] };
    match r.id {
        1 => vec![leading_against("leading/closed-form", &r.result.polys, 2, exec, |n| ex1_leading(&a, n))],
        2 => vec![
            leading_against("leading/first-step", &r.auxiliary, 2, exec, |n| ex2_leading_first(&a, n)),
            leading_against("leading/closed-form", &r.result.polys, 3, exec, |n| ex2_leading_second(&a, n)),
        ],
        _ => vec![],
    }
}

pub fn weight_checks(r: &ExampleRun) -> Vec<Check> {
    let key = "weight/closed-form";
    vec![Check::timed(key, || {
        let a = param(r, "a")?;
        let (closed, detail) = match r.id {
            1 => (ex1_weight(&a), format!("conjugated weight is {} times the closed form", fmt_q(&r.weight_factor))),
            2 => (ex2_weight(&a), format!("conjugated weight is {} times the closed form", fmt_q(&r.weight_factor))),
            3 => (ex3_weight(&a, &param(r, "alpha")?), String::new()),
            4 => {
                let rr = param(r, "r")?;
                (ex4_weight(&a, &rr), format!("denominator p(t)^2 with p = {}", pfrak4(&a, &rr)))
            }
            _ => {
                let zeta = param(r, "zeta")?;
                let mut w = ex1_weight(&a).unit_normalized();
                if !zeta.is_zero() {
                    w = w.with_point_mass(Q::zero(), zeta, QMat::diag(vec![Q::zero(), Q::one()]));
                }
                (w, "normalized one-step weight plus the point mass at 0".into())
            }
        };
        let st = Status::exact(same_weight(&r.weight, &closed), || {
            format!("density {} differs from {}", canon(&r.weight).body, canon(&closed).body)
        });
        Ok(Check::new(key, st).with_detail(detail))
    })]
}

fn chain_pairs(r: &ExampleRun, upto: usize) -> Vec<(usize, usize)> {
    let idx: Vec<usize> = r.chain_indices().into_iter().filter(|&n| n <= upto).collect();
    idx.iter().flat_map(|&n| idx.iter().filter(move |&&m| m < n).map(move |&m| (n, m))).collect()
}

/// <P_n, P_m> = 0 for n != m through the factorization, and norms against closed forms.
pub fn exact_orthogonality_checks(r: &ExampleRun, exec: Exec) -> Vec<Check> {
    if r.id == 5 {
        return vec![];
    }
    let pairs = chain_pairs(r, r.max_n);
    let mut out = vec![all_of(
        "orthogonality/exact",
        &pairs,
        exec,
        |&(n, m)| {
            let g = r.reduced_gram(n, m)?;
            Ok((!g.is_zero()).then(|| format!("<P_{n}, P_{m}> = {g}")))
        },
        format!("{} pairs of chain members", pairs.len()),
    )];
    let a = param(r, "a");
    let norm: Option<(usize, Box<dyn Fn(usize) -> ValueMat + Sync + Send>)> = match (r.id, a) {
        (1, Ok(a)) => Some((0, Box::new(move |n| ex1_norm(&a, n)))),
        (2, Ok(a)) => Some((3, Box::new(move |n| ex2_norm(&a, n)))),
        _ => None,
    };
    if let Some((from, f)) = norm {
        let idx: Vec<usize> = r.chain_indices().into_iter().filter(|&n| n >= from).collect();
        out.push(all_of(
            "norms/closed-form",
            &idx,
            exec,
            |&n| {
                let (got, want) = (r.reduced_gram(n, n)?, f(n));
                Ok((got != want).then(|| format!("n = {n}: {got}, closed form {want}")))
            },
            format!("n in {idx:?}"),
        ));
    }
    out
}

/// Largest |<P_n, P_m>| over n != m (both <= upto) with an npoints rule.
pub fn numeric_orthogonality(
    polys: &BTreeMap<usize, PolyMat>,
    w: &WeightSpec,
    npoints: usize,
    upto: usize,
    exec: Exec,
) -> Result<(f64, (usize, usize), BTreeMap<(usize, usize), NumMat>), VerifyError> {
    let idx: Vec<usize> = polys.keys().copied().filter(|&n| n <= upto).collect();
    let pairs: Vec<(usize, usize)> =
        idx.iter().flat_map(|&n| idx.iter().filter(move |&&m| m < n).map(move |&m| (n, m))).collect();
    let grams = numeric_gram(polys, w, npoints, &pairs, exec)?;
    let (mut worst, mut at) = (0.0f64, (0, 0));
    for (&k, g) in &grams {
        if !(g.max_abs() <= worst) {
            worst = g.max_abs();
            at = k;
        }
    }
    Ok((worst, at, grams))
}

pub fn numeric_orthogonality_check(
    polys: &BTreeMap<usize, PolyMat>,
    w: &WeightSpec,
    npoints: usize,
    upto: usize,
    exec: Exec,
) -> Check {
    let key = format!("orthogonality/numeric/{npoints}pt");
    Check::timed(&key, || {
        let (worst, (n, m), grams) = numeric_orthogonality(polys, w, npoints, upto, exec)?;
        let failing: Vec<(usize, usize)> =
            grams.iter().filter(|(_, g)| !(g.max_abs() < NUMERIC_TOL)).map(|(k, _)| *k).collect();
        let st = Status::numeric(worst, NUMERIC_TOL, || {
            format!("max |<P_{n}, P_{m}>| = {worst:.3e}; {} of {} pairs above 1e-9: {failing:?}", failing.len(), grams.len())
        });
        Ok(Check::new(&key, st).with_detail(format!("{} pairs, indices <= {upto}", grams.len())))
    })
}

fn value_f64(v: &ValueMat) -> NumMat {
    let u = unit_value(&v.unit);
    NumMat { n: v.coeffs.size(), data: v.coeffs.entries().iter().map(|x| xmop_exact::to_f64(x) * u).collect() }
}

/// Quadrature norms against exact ones, relative.
pub fn numeric_norm_check(r: &ExampleRun, npoints: usize, upto: usize, exec: Exec) -> Check {
    let key = format!("norms/numeric/{npoints}pt");
    Check::timed(&key, || {
        let idx: Vec<usize> = r.chain_indices().into_iter().filter(|&n| n <= upto).collect();
        let pairs: Vec<(usize, usize)> = idx.iter().map(|&n| (n, n)).collect();
        let grams = numeric_gram(&r.result.polys, &r.weight, npoints, &pairs, exec)?;
        let mut worst = (0.0f64, 0);
        for &n in &idx {
            let exact = value_f64(&r.reduced_gram(n, n)?);
            let d = grams[&(n, n)].rel_diff(&exact) * exact.max_abs().max(1.0) / exact.max_abs();
            if !(d <= worst.0) {
                worst = (d, n);
            }
        }
        let st = Status::numeric(worst.0, NUMERIC_TOL, || format!("n = {}: relative error {:.3e}", worst.1, worst.0));
        Ok(Check::new(&key, st).with_detail(format!("n in {idx:?}")))
    })
}

fn kernel_membership(fam: &ClassicalFamily, op: &DiffOp) -> Vec<Check> {
    let Some(seed) = fam.seed.clone() else { return vec![] };
    vec![
        Check::timed("seed/in-kernel", || {
            let st = match op.eigencheck(&seed.p)? {
                Eigen::Eigenvalue(g) if g.is_zero() => Status::ExactPass,
                Eigen::Eigenvalue(g) => Status::fail(format!("D(P) = {g} P")),
                Eigen::NotEigenfunction(r) => Status::fail(format!("D(P) P^-1 = {r}")),
            };
            Ok(Check::new("seed/in-kernel", st))
        }),
        Check::timed("seed/factorization", || {
            let st = match kernel_factorization_check(op, &seed.p, &fam.weight)? {
                KernelFactorization::Holds => Status::ExactPass,
                other => Status::fail(format!("{other:?}")),
            };
            Ok(Check::new("seed/factorization", st)
                .with_detail("D = -(d - P^-1 P')^* F2 (d - P^-1 P') with the symmetry condition"))
        }),
    ]
}

pub fn specific_checks(r: &ExampleRun, exec: Exec) -> Vec<Check> {
    match r.id {
        3 => {
            let mut out = kernel_membership(&r.family, &r.family.operators[0]);
            out.push(Check::timed("high-order/eigen", || {
                let d5 = r.high_order.clone().ok_or(VerifyError::Inconsistent("no fifth-order operator".into()))?;
                if d5.order() != 5 {
                    return Ok(Check::new("", Status::fail(format!("order {}", d5.order()))));
                }
                let (a, al) = (param(r, "a")?, param(r, "alpha")?);
                // member n + 1 is A(P_n)
                for n in 1..r.max_n {
                    let Some(p) = r.result.polys.get(&(n + 1)) else { continue };
                    let want = ex3_d5_eigenvalue(&a, &al, n);
                    match eigenvalue_of(&d5, p)? {
                        Ok(g) if g == want => {}
                        Ok(g) => return Ok(Check::new("", Status::fail(format!("member {}: {g}, formula {want}", n + 1)))),
                        Err(w) => return Ok(Check::new("", Status::fail(format!("member {}: {w}", n + 1)))),
                    }
                }
                Ok(Check::new("", Status::ExactPass).with_detail("fifth-order eigenvalue formula at members 2.."))
            }));
            out
        }
        4 => {
            let mut out = vec![Check::new(
                "admissible",
                Status::exact(r.family.admissible == Some(true), || "outside the admissible region".into()),
            )];
            out.push(Check::timed("base/symmetric", || {
                let st = match r.family.operators[0].symmetry_check(&r.family.weight)? {
                    Symmetry::Symmetric => Status::ExactPass,
                    Symmetry::Violated { condition, residual } => Status::fail(format!("{condition}: {residual}")),
                };
                Ok(Check::new("", st))
            }));
            out.extend(kernel_membership(&r.family, &r.family.operators[0]));
            out
        }
        5 => point_mass_checks(r, exec),
        _ => vec![],
    }
}

fn point_mass_checks(r: &ExampleRun, exec: Exec) -> Vec<Check> {
    let mut out = vec![];
    let op = &r.result.operator;
    out.push(Check::timed("delta/compatibility", || {
        for pm in &r.weight.point_masses {
            let at = |k: usize| op.coeff(k).eval(&pm.at);
            let m = &pm.mass;
            if !(&at(2)? * m).is_zero() {
                return Ok(Check::new("", Status::fail("F2(t0) M != 0")));
            }
            if !(&at(1)? * m).is_zero() {
                return Ok(Check::new("", Status::fail("F1(t0) M != 0")));
            }
            let f0 = at(0)?;
            if &f0 * m != m * &f0.transpose() {
                return Ok(Check::new("", Status::fail("F0(t0) M != M F0(t0)^T")));
            }
        }
        Ok(Check::new("", Status::ExactPass).with_detail(format!("{} point mass(es)", r.weight.point_masses.len())))
    }));
    out.push(Check::timed("delta/symmetry", || {
        let st = match op.symmetry_check(&r.weight)? {
            Symmetry::Symmetric => Status::ExactPass,
            Symmetry::Violated { condition, .. } => Status::fail(condition),
        };
        Ok(Check::new("", st))
    }));
    out.push(Check::timed("gram-schmidt/closed-form", || {
        let (a, zeta) = (param(r, "a")?, param(r, "zeta")?);
        for (n, want) in [(2usize, ex5_p2(&a, &zeta)), (3, ex5_p3(&a))] {
            let p = r.result.polys.get(&n).ok_or(VerifyError::MissingIndex(n))?;
            let got = left_monic(p)?;
            if got != want {
                return Ok(Check::new("", Status::fail(format!("monic P_{n} = {got}, closed form {want}"))));
            }
        }
        Ok(Check::new("", Status::ExactPass).with_detail("monic P_2 and P_3"))
    }));
    out.push(Check::timed("zeta-zero/reproduces-one-step", || {
        let a = param(r, "a")?;
        let mut p = Params::new();
        p.insert("a".into(), a.clone());
        let one = run(1, &p, r.max_n, exec)?;
        p.insert("zeta".into(), Q::zero());
        let five = run(5, &p, r.max_n, exec)?;
        let st = Status::exact(one.result.polys == five.result.polys, || {
            let n = one.result.polys.iter().find(|(n, q)| five.result.polys.get(n) != Some(q)).map(|(n, _)| *n);
            format!("first difference at n = {n:?}")
        });
        Ok(Check::new("", st))
    }));
    if param(r, "zeta").is_ok_and(|z| !z.is_zero()) {
        out.push(Check::timed("three-term/infeasible", || {
            let c = three_term_certificate(&param(r, "a")?, &param(r, "zeta")?)?;
            let st = Status::exact(c.infeasible, || format!("feasible at (tau2, tau3) = {:?}", c.witness));
            Ok(Check::new("", st).with_detail(format!("residual entries {:?}", c.residual)))
        }));
    }
    out
}

/// q' used by the recurrence fits: det of the seed member of the first step.
pub fn default_qprime(r: &ExampleRun) -> Result<Poly, VerifyError> {
    match r.id {
        1 => Ok(r.family.poly(1)?.det()),
        2 => Ok(r.auxiliary.get(&2).ok_or(VerifyError::MissingIndex(2))?.det()),
        id => Err(VerifyError::Usage(format!("no default q' for example {id}; pass --qprime"))),
    }
}

pub fn default_recurrence_ns(polys: &BTreeMap<usize, PolyMat>, band: usize) -> Vec<usize> {
    let top = polys.keys().next_back().copied().unwrap_or(0);
    (3..=8).filter(|n| n + band <= top && polys.contains_key(n)).collect()
}

pub fn recurrence_check(polys: &BTreeMap<usize, PolyMat>, band: usize, qprime: &Poly, ns: &[usize]) -> Check {
    let key = format!("recurrence/band-{band}");
    Check::timed(&key, || {
        if ns.is_empty() {
            let top = polys.keys().next_back().copied().unwrap_or(0);
            return Ok(Check::new("", Status::fail(format!("largest index {top} too small for band {band}"))));
        }
        let fit = fit_recurrence(polys, qprime, band, ns.iter().copied())?;
        let st = if !fit.reconstructs(polys) {
            Status::fail("re-expansion does not reproduce q P_n")
        } else if let Some((n, res)) = fit.residuals.iter().next() {
            Status::fail(format!("n = {n}: residual {res}"))
        } else {
            Status::ExactPass
        };
        Ok(Check::new("", st).with_detail(format!("{}-term, q = {}, n in {ns:?}", 2 * band + 1, fit.q)))
    })
}

/// Diagonal equivalence with the companion construction of the same family.
pub fn conjugation_checks(r: &ExampleRun) -> Vec<Check> {
    let Ok(a) = param(r, "a") else { return vec![] };
    match r.id {
        1 => vec![Check::timed("conjugation/nonpolynomial-seed", || {
            let other = ex1_nonpolynomial_seed_family(&a, r.max_n)?;
            let ns: Vec<usize> = (2..=r.max_n).collect();
            let c = conjugation_check(&r.result.polys, &other, ns.iter().copied())?;
            for &n in &ns {
                let want: Vec<Option<String>> = ex1_conjugation_ratios(&a, n).iter().map(|x| Some(fmt_q(x))).collect();
                if c.multipliers[&n] != want {
                    return Ok(Check::new("", Status::fail(format!("n = {n}: multipliers {:?}", c.multipliers[&n]))));
                }
            }
            Ok(Check::new("", Status::ExactPass).with_detail(format!("R = {}, n in {ns:?}", c.right)))
        })],
        2 if ex2_tilde_a(&a).is_some() => vec![Check::timed("conjugation/one-step", || {
            let (at, _, other) = ex2_one_step_family(&a, r.max_n)?;
            let ns: Vec<usize> = (3..=r.max_n).collect();
            let c = conjugation_check(&r.result.polys, &other, ns.iter().copied())?;
            Ok(Check::new("", Status::ExactPass).with_detail(format!("a~ = {}, R = {}, n in {ns:?}", fmt_q(&at), c.right)))
        })],
        _ => vec![],
    }
}

/// Exact symmetry decision per operator, then the bilinear identity <D P, Q> = <P, D Q>
/// on t^k E_1j (k <= max_deg) for those that pass. That basis suffices: D commutes with
/// constant left factors.
pub fn symmetry_checks(art: &Artifact, max_deg: usize, exec: Exec) -> Vec<Check> {
    let w = art.weight();
    let ops = art.operators();
    let mut out = vec![];
    let size = w.size();
    let probes: Vec<PolyMat> = (0..=max_deg)
        .flat_map(|k| {
            (0..size).map(move |j| {
                PolyMat::from_fn(size, |r, c| if r == 0 && c == j { Poly::monomial(Q::one(), k) } else { Poly::zero() })
            })
        })
        .collect();
    for (i, op) in ops.iter().enumerate() {
        let key = format!("symmetry/D{}", i + 1);
        let decision = op.symmetry_check(w);
        out.push(Check::timed(&key, || {
            Ok(match &decision {
                Ok(Symmetry::Symmetric) => Check::new("", Status::ExactPass).with_detail("symmetric"),
                Ok(Symmetry::Violated { condition, .. }) => {
                    Check::new("", Status::ExactPass).with_detail(format!("not symmetric: {condition}"))
                }
                Err(e) => Check::new("", Status::fail(e.to_string())),
            })
        }));
        if !matches!(decision, Ok(Symmetry::Symmetric)) {
            continue;
        }
        let pairs: Vec<(usize, usize)> =
            (0..probes.len()).flat_map(|x| (0..probes.len()).map(move |y| (x, y))).collect();
        let images: Vec<Option<PolyMat>> = probes.iter().map(|p| op.apply_poly(p)).collect();
        out.push(all_of(
            &format!("{key}/bilinear"),
            &pairs,
            exec,
            |&(x, y)| {
                let (Some(dx), Some(dy)) = (&images[x], &images[y]) else {
                    return Ok(Some("operator has rational coefficients".into()));
                };
                let l = w.exact_inner_product(dx, &probes[y])?;
                let rr = w.exact_inner_product(&probes[x], dy)?;
                Ok((l != rr).then(|| format!("probe pair ({x}, {y}): {l} vs {rr}")))
            },
            format!("{} probe pairs of degree <= {max_deg}", pairs.len()),
        ));
    }
    out
}

/// The standard exact bundle for an example run.
pub fn example_checks(r: &ExampleRun, exec: Exec) -> Vec<Check> {
    let art = Artifact::Example(Box::new(r.clone()));
    let mut out = eigen_checks(&art, exec);
    out.push(degree_check(&art));
    out.extend(leading_checks(r, exec));
    out.extend(weight_checks(r));
    out.extend(exact_orthogonality_checks(r, exec));
    out.extend(specific_checks(r, exec));
    if matches!(r.id, 1 | 2) {
        let band = if r.id == 1 { 3 } else { 5 };
        let ns = default_recurrence_ns(&r.result.polys, band);
        if !ns.is_empty() {
            match default_qprime(r) {
                Ok(q) => out.push(recurrence_check(&r.result.polys, band, &q, &ns)),
                Err(e) => out.push(Check::new(format!("recurrence/band-{band}"), Status::fail(e.to_string()))),
            }
        }
    }
    out.extend(conjugation_checks(r));
    out
}

/// The family of the shifted-xi companion indexed like the one-step family (n != 1).
pub fn shifted_xi_members(a: &Q, xi: &Q, max_n: usize) -> Result<BTreeMap<usize, PolyMat>, VerifyError> {
    let mut f = xmop_families::examples::shifted_xi_family(a, xi, max_n)?;
    f.remove(&1);
    Ok(f)
}
