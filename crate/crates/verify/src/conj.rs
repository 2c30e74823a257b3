//! Diagonal conjugation B_n = L_n A_n R with L_n diagonal (per n) and R diagonal, R_11 = 1.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use xmop_exact::{fmt_q, Poly, PolyMat, QMat, Q};

use crate::error::VerifyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjugation {
    #[serde(with = "xmop_exact::mat::serde_qmat_map")]
    pub left: BTreeMap<usize, QMat>,
    #[serde(with = "xmop_exact::mat::serde_qmat")]
    pub right: QMat,
    /// Entrywise ratios B_n[i][j] / A_n[i][j] (None where both vanish), row-major.
    pub multipliers: BTreeMap<usize, Vec<Option<String>>>,
}

/// The constant c with b = c a, if there is one (None when both are zero).
fn ratio(a: &Poly, b: &Poly) -> Result<Option<Q>, String> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => Ok(None),
        (true, false) => Err(format!("{b} is not a multiple of 0")),
        (false, _) => {
            let d = a.degree().unwrap_or(0);
            let c = b.coeff(d) / a.coeff(d);
            if &a.scale(&c) == b {
                Ok(Some(c))
            } else {
                Err(format!("{b} is not a constant multiple of {a}"))
            }
        }
    }
}

pub fn conjugation_check(
    fam_a: &BTreeMap<usize, PolyMat>,
    fam_b: &BTreeMap<usize, PolyMat>,
    ns: impl IntoIterator<Item = usize>,
) -> Result<Conjugation, VerifyError> {
    let ns: Vec<usize> = ns.into_iter().collect();
    let mut ks: BTreeMap<usize, Vec<Option<Q>>> = BTreeMap::new();
    let mut size = 0;
    for &n in &ns {
        let a = fam_a.get(&n).ok_or(VerifyError::MissingIndex(n))?;
        let b = fam_b.get(&n).ok_or(VerifyError::MissingIndex(n))?;
        if a.degree() != b.degree() {
            return Err(VerifyError::Inconsistent(format!("degrees differ at n = {n}")));
        }
        size = a.size();
        let k = a
            .entries()
            .iter()
            .zip(b.entries())
            .map(|(x, y)| ratio(x, y))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| VerifyError::Inconsistent(format!("n = {n}: {e}")))?;
        ks.insert(n, k);
    }
    // k_ij = l_i r_j; r_0 = 1 pins the scale, r_j from any row with both entries known
    let mut right = vec![None; size];
    if size > 0 {
        right[0] = Some(Q::one());
    }
    for j in 1..size {
        'find: for k in ks.values() {
            for i in 0..size {
                if let (Some(k0), Some(kj)) = (&k[i * size], &k[i * size + j]) {
                    if !k0.is_zero() {
                        right[j] = Some(kj / k0);
                        break 'find;
                    }
                }
            }
        }
    }
    let right: Vec<Q> = right
        .into_iter()
        .enumerate()
        .map(|(j, r)| r.ok_or_else(|| VerifyError::Inconsistent(format!("column {} is undetermined", j + 1))))
        .collect::<Result<_, _>>()?;
    let mut left = BTreeMap::new();
    for (&n, k) in &ks {
        let mut l = vec![Q::zero(); size];
        for (i, li) in l.iter_mut().enumerate() {
            let known = (0..size).find_map(|j| k[i * size + j].as_ref().map(|c| c / &right[j]));
            *li = known.ok_or_else(|| VerifyError::Inconsistent(format!("row {} at n = {n} is undetermined", i + 1)))?;
        }
        let lm = QMat::diag(l);
        let rm = QMat::diag(right.clone());
        let rebuilt = &fam_a[&n].lmul_q(&lm) * &rm.to_poly();
        if rebuilt != fam_b[&n] {
            return Err(VerifyError::Inconsistent(format!("n = {n}: L A R differs from B")));
        }
        left.insert(n, lm);
    }
    let multipliers = ks.into_iter().map(|(n, k)| (n, k.into_iter().map(|c| c.map(|c| fmt_q(&c))).collect())).collect();
    Ok(Conjugation { left, right: QMat::diag(right), multipliers })
}
