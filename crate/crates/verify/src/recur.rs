//! Banded recurrences q P_n = sum_{|j| <= r} A_{n,j} P_{n+j}, solved by leading-coefficient
//! elimination in the family basis.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use xmop_exact::{Poly, PolyMat, QMat};

use crate::error::VerifyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceFit {
    pub q: Poly,
    pub band: usize,
    /// n -> (j -> A_{n,j}), offsets j in [-band, band] skipping gaps.
    #[serde(with = "serde_coeffs")]
    pub coefficients: BTreeMap<usize, BTreeMap<i64, QMat>>,
    /// Nonzero residuals q P_n - sum_j A_{n,j} P_{n+j} after eliminating the band.
    pub residuals: BTreeMap<usize, PolyMat>,
}

impl RecurrenceFit {
    pub fn exact(&self) -> bool {
        self.residuals.is_empty()
    }

    /// Re-expands sum_j A_{n,j} P_{n+j} (+ residual) and compares with q P_n.
    pub fn reconstructs(&self, polys: &BTreeMap<usize, PolyMat>) -> bool {
        self.coefficients.iter().all(|(&n, cs)| {
            let mut s = self.residuals.get(&n).cloned().unwrap_or_else(|| PolyMat::zeros(polys[&n].size()));
            for (&j, a) in cs {
                s = &s + &polys[&((n as i64 + j) as usize)].lmul_q(a);
            }
            s == qmul(&self.q, &polys[&n])
        })
    }
}

mod serde_coeffs {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrap(#[serde(with = "xmop_exact::mat::serde_qmat")] QMat);

    type Nested = BTreeMap<usize, BTreeMap<i64, Wrap>>;

    pub fn serialize<S: Serializer>(m: &BTreeMap<usize, BTreeMap<i64, QMat>>, s: S) -> Result<S::Ok, S::Error> {
        let n: Nested = m.iter().map(|(k, v)| (*k, v.iter().map(|(j, a)| (*j, Wrap(a.clone()))).collect())).collect();
        n.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, BTreeMap<i64, QMat>>, D::Error> {
        let n = Nested::deserialize(d)?;
        Ok(n.into_iter().map(|(k, v)| (k, v.into_iter().map(|(j, a)| (j, a.0)).collect())).collect())
    }
}

fn qmul(q: &Poly, p: &PolyMat) -> PolyMat {
    p.map(|e| q * e)
}

/// q = integral of qprime with zero constant term.
pub fn antiderivative(qprime: &Poly) -> Poly {
    qprime.integrate()
}

/// Fit the recurrence for each n in `ns`. Indices absent from `polys` below its largest key
/// are gaps; a needed index above it is an error.
pub fn fit_recurrence(
    polys: &BTreeMap<usize, PolyMat>,
    qprime: &Poly,
    band: usize,
    ns: impl IntoIterator<Item = usize>,
) -> Result<RecurrenceFit, VerifyError> {
    let q = antiderivative(qprime);
    let top = polys.keys().next_back().copied().unwrap_or(0);
    let mut coefficients = BTreeMap::new();
    let mut residuals = BTreeMap::new();
    for n in ns {
        let p = polys.get(&n).ok_or(VerifyError::MissingIndex(n))?;
        if n + band > top {
            return Err(VerifyError::MissingIndex(n + band));
        }
        let mut rest = qmul(&q, p);
        let mut cs = BTreeMap::new();
        for d in (n.saturating_sub(band)..=n + band).rev() {
            let Some(b) = polys.get(&d) else { continue };
            let c = rest.coeff(d);
            if c.is_zero() {
                continue;
            }
            let a = &c * &b.coeff(d).inverse()?;
            rest = &rest - &b.lmul_q(&a);
            cs.insert(d as i64 - n as i64, a);
        }
        if !rest.is_zero() {
            residuals.insert(n, rest);
        }
        coefficients.insert(n, cs);
    }
    Ok(RecurrenceFit { q, band, coefficients, residuals })
}
