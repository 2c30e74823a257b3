use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use xmop_diffops::{DiffOp, Eigen};
use xmop_exact::{PolyMat, QMat};

use crate::error::DarbouxError;

/// Transformed operator with its polynomial eigenfunctions, eigenvalues and gap set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformResult {
    pub operator: DiffOp,
    pub polys: BTreeMap<usize, PolyMat>,
    pub gaps: BTreeSet<usize>,
    #[serde(with = "xmop_exact::mat::serde_qmat_map")]
    pub eigenvalues: BTreeMap<usize, QMat>,
}

impl TransformResult {
    /// Index n gets images[n] when that is nonzero of degree n with nonsingular leading
    /// coefficient; zero or missing images are gaps. Each stored polynomial must be an
    /// eigenfunction of the operator.
    pub fn from_images(
        operator: DiffOp,
        images: BTreeMap<usize, PolyMat>,
        max_n: usize,
    ) -> Result<Self, DarbouxError> {
        let mut polys = BTreeMap::new();
        let mut gaps = BTreeSet::new();
        let mut eigenvalues = BTreeMap::new();
        for n in 0..=max_n {
            let p = match images.get(&n) {
                Some(p) if !p.is_zero() => p,
                _ => {
                    gaps.insert(n);
                    continue;
                }
            };
            if p.degree() != Some(n) {
                return Err(DarbouxError::DegreeMismatch { n, got: p.degree() });
            }
            if p.coeff(n).det().is_zero() {
                gaps.insert(n);
                continue;
            }
            match operator.eigencheck_poly(p)? {
                Eigen::Eigenvalue(g) => {
                    eigenvalues.insert(n, g);
                }
                Eigen::NotEigenfunction(_) => return Err(DarbouxError::NotEigen(n)),
            }
            polys.insert(n, p.clone());
        }
        Ok(TransformResult { operator, polys, gaps, eigenvalues })
    }
}
