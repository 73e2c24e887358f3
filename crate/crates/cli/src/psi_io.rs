//! JSON form of a Ψ vector. Labels are written for reading only; on load
//! they are recomputed from the instance and must match.

use anyhow::{bail, Result};
use qkz_core::algebra::parse_poly;
use qkz_core::combinatorics::Basis;
use qkz_core::qkz::PsiVector;
use serde::{Deserialize, Serialize};

use crate::report::SCHEMA;

#[derive(Debug, Serialize, Deserialize)]
pub struct PsiFile {
    pub schema: u32,
    pub k: usize,
    pub lambda: Vec<usize>,
    pub m: Vec<usize>,
    pub basis: String,
    pub dimension: usize,
    pub labels: Vec<String>,
    /// Polynomials in `z1..zN` and `hb` (ħ).
    pub entries: Vec<String>,
}

fn basis_name(b: Basis) -> &'static str {
    match b {
        Basis::Standard => "standard",
        Basis::Component => "component",
    }
}

impl PsiFile {
    pub fn from_psi(psi: &PsiVector) -> Self {
        PsiFile {
            schema: SCHEMA,
            k: psi.k,
            lambda: psi.lambda.clone(),
            m: psi.sizes.clone(),
            basis: basis_name(psi.basis).into(),
            dimension: psi.len(),
            labels: psi.label_strings(),
            entries: psi.entries.iter().map(|e| e.to_string()).collect(),
        }
    }

    pub fn to_psi(&self) -> Result<PsiVector> {
        if self.schema != SCHEMA {
            bail!("unsupported schema {}", self.schema);
        }
        let basis = match self.basis.as_str() {
            "standard" => Basis::Standard,
            "component" => Basis::Component,
            other => bail!("unknown basis {other:?}"),
        };
        let vars = qkz_core::algebra::VarSet::indexed(self.m.len());
        let entries = self
            .entries
            .iter()
            .map(|e| parse_poly(e, &vars))
            .collect::<Result<Vec<_>, _>>()?;
        let psi = PsiVector::new(self.k, &self.lambda, &self.m, basis, entries)?;
        if psi.label_strings() != self.labels {
            bail!("labels in the file do not match the basis of the instance");
        }
        Ok(psi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qkz_core::qkz::build_psi_fundamental;

    #[test]
    fn round_trip() {
        let psi = build_psi_fundamental(2, &[2, 2]).unwrap();
        let text = serde_json::to_string(&PsiFile::from_psi(&psi)).unwrap();
        let back: PsiFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_psi().unwrap(), psi);
        let mut bad = back;
        bad.labels.swap(0, 1);
        assert!(bad.to_psi().is_err());
    }
}
