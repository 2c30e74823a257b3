//! On-disk artifacts: a classical family (`family build`) or a full example run
//! (`example run`). Both are JSON: `{"artifact": kind, "data": ...}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use xmop_diffops::DiffOp;
use xmop_exact::{fmt_q, PolyMat};
use xmop_families::examples::{serde_params, ExampleRun, Params};
use xmop_families::{ClassicalFamily, FamilyKind};
use xmop_kernels::WeightSpec;

use crate::error::VerifyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyArtifact {
    pub kind: String,
    #[serde(with = "serde_params")]
    pub params: Params,
    pub max_n: usize,
    pub family: ClassicalFamily,
    pub polys: BTreeMap<usize, PolyMat>,
}

impl FamilyArtifact {
    pub fn build(kind: &str, params: &Params, max_n: usize) -> Result<Self, VerifyError> {
        let get = |k: &str| {
            params.get(k).cloned().ok_or_else(|| VerifyError::Usage(format!("{kind} needs parameter {k}")))
        };
        let allowed: &[&str] = match kind {
            "hermite" => &["a", "xi"],
            "laguerre" => &["a", "alpha"],
            "gegenbauer" => &["a", "r"],
            _ => return Err(VerifyError::Usage(format!("unknown family kind {kind:?}"))),
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(VerifyError::Usage(format!("{kind} has no parameter {k:?}")));
        }
        let family = match kind {
            "hermite" => ClassicalFamily::hermite(get("a")?, get("xi")?)?,
            "laguerre" => ClassicalFamily::laguerre(get("a")?, get("alpha")?)?,
            _ => ClassicalFamily::gegenbauer(get("a")?, get("r")?)?,
        };
        let polys = family.polys(max_n)?.into_iter().enumerate().collect();
        Ok(FamilyArtifact { kind: kind.to_string(), params: params.clone(), max_n, family, polys })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "artifact", content = "data", rename_all = "lowercase")]
pub enum Artifact {
    Family(FamilyArtifact),
    Example(Box<ExampleRun>),
}

impl Artifact {
    pub fn read(path: &Path) -> Result<Self, VerifyError> {
        let s = std::fs::read_to_string(path).map_err(|source| VerifyError::Io { path: path.display().to_string(), source })?;
        serde_json::from_str(&s).map_err(|source| VerifyError::Json { path: path.display().to_string(), source })
    }

    pub fn write(&self, path: &Path) -> Result<(), VerifyError> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|source| VerifyError::Io { path: dir.display().to_string(), source })?;
        }
        let s = serde_json::to_string(self).map_err(|source| VerifyError::Json { path: path.display().to_string(), source })?;
        std::fs::write(path, s + "\n").map_err(|source| VerifyError::Io { path: path.display().to_string(), source })
    }

    pub fn polys(&self) -> &BTreeMap<usize, PolyMat> {
        match self {
            Artifact::Family(f) => &f.polys,
            Artifact::Example(r) => &r.result.polys,
        }
    }

    pub fn weight(&self) -> &WeightSpec {
        match self {
            Artifact::Family(f) => &f.family.weight,
            Artifact::Example(r) => &r.weight,
        }
    }

    /// Operators with the polynomials as eigenfunctions, labelled D1, D2, ...
    pub fn operators(&self) -> Vec<DiffOp> {
        match self {
            Artifact::Family(f) => f.family.operators.clone(),
            Artifact::Example(r) => r.basis.iter().map(|b| b.operator.clone()).collect(),
        }
    }

    pub fn example_id(&self) -> Option<u8> {
        match self {
            Artifact::Family(_) => None,
            Artifact::Example(r) => Some(r.id),
        }
    }

    pub fn params(&self) -> BTreeMap<String, String> {
        let p = match self {
            Artifact::Family(f) => &f.params,
            Artifact::Example(r) => &r.params,
        };
        p.iter().map(|(k, v)| (k.clone(), fmt_q(v))).collect()
    }

    pub fn label(&self) -> String {
        match self {
            Artifact::Family(f) => match &f.family.kind {
                FamilyKind::Hermite { .. } => "hermite family".into(),
                FamilyKind::Laguerre { .. } => "laguerre family".into(),
                FamilyKind::Gegenbauer { .. } => "gegenbauer family".into(),
            },
            Artifact::Example(r) => format!("example {}", r.id),
        }
    }
}
