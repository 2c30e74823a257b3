use std::collections::BTreeMap;

use num_traits::Zero;
use xmop_exact::{AlgebraError, Poly, PolyMat, QMat};

use crate::error::DarbouxError;

/// Block Gram-Schmidt in ascending index order with left coefficients:
/// Q_n = R_n - sum_j <R_n, Q_j> <Q_j, Q_j>^{-1} Q_j.
/// Degrees and leading coefficients are preserved when every R_n has degree n.
pub fn gram_schmidt<F>(raw: &BTreeMap<usize, PolyMat>, mut ip: F) -> Result<BTreeMap<usize, PolyMat>, DarbouxError>
where
    F: FnMut(&PolyMat, &PolyMat) -> Result<QMat, DarbouxError>,
{
    let mut out: BTreeMap<usize, PolyMat> = BTreeMap::new();
    let mut norms_inv: BTreeMap<usize, QMat> = BTreeMap::new();
    for (&n, r) in raw {
        if r.degree() != Some(n) {
            return Err(DarbouxError::DegreeMismatch { n, got: r.degree() });
        }
        if r.coeff(n).det().is_zero() {
            return Err(DarbouxError::SingularLeading(n));
        }
        let mut qn = r.clone();
        for (j, qj) in &out {
            let c = &ip(r, qj)? * &norms_inv[j];
            if !c.is_zero() {
                qn = &qn - &qj.lmul_q(&c);
            }
        }
        let nrm = ip(&qn, &qn)?;
        let inv = nrm.inverse().map_err(|e| match e {
            AlgebraError::Singular => DarbouxError::GramSingular(n),
            other => other.into(),
        })?;
        norms_inv.insert(n, inv);
        out.insert(n, qn);
    }
    Ok(out)
}

/// gcd of all 2x2 (or k x k for size k) row minors of the stacked matrices; 1 means
/// the family has no common right factor with nonconstant determinant.
pub fn minors_gcd(polys: &[PolyMat]) -> Poly {
    let n = polys.first().map_or(0, |p| p.size());
    let rows: Vec<Vec<Poly>> = polys.iter().flat_map(|p| p.to_rows()).collect();
    let mut g = Poly::zero();
    let mut pick = Vec::with_capacity(n);
    minors_rec(&rows, n, 0, &mut pick, &mut g);
    g
}

fn minors_rec(rows: &[Vec<Poly>], n: usize, start: usize, pick: &mut Vec<usize>, g: &mut Poly) {
    if g.degree() == Some(0) {
        return;
    }
    if pick.len() == n {
        let m = PolyMat::from_fn(n, |i, j| rows[pick[i]][j].clone());
        let d = m.det();
        if !d.is_zero() {
            *g = if g.is_zero() { d.monic() } else { g.gcd(&d) };
        }
        return;
    }
    for r in start..rows.len() {
        pick.push(r);
        minors_rec(rows, n, r + 1, pick, g);
        pick.pop();
    }
}
