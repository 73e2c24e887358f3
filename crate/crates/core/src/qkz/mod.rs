//! Ψ vectors and the functional identities they satisfy.

mod build;
mod checks;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{Polynomial, VarSet};
use crate::combinatorics::{enumerate_standard_labels, enumerate_tableaux, phi, Basis, SubsetSequence};
use crate::error::{Error, Result};

pub use build::{build_psi_fundamental, extreme_component, fuse_psi};
pub use checks::{
    check_cyclicity, check_exchange, check_recurrence, check_wheel, qkz_operators, qkz_step,
    recurrence_sign, QkzOperators,
};

/// The vector `Ψ = Σ_β Ψ_β u^β` for one ordering of block sizes.
///
/// Entries are polynomials in `z_1, …, z_N` and ħ. In the component basis
/// the labels are `φ(T)` for the tableaux `T`, in tableau order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiVector {
    pub k: usize,
    pub lambda: Vec<usize>,
    pub sizes: Vec<usize>,
    pub basis: Basis,
    pub vars: VarSet,
    pub labels: Vec<SubsetSequence>,
    pub entries: Vec<Polynomial>,
}

impl PsiVector {
    /// Checks the labels and contexts against the expected basis.
    pub fn new(
        k: usize,
        lambda: &[usize],
        sizes: &[usize],
        basis: Basis,
        entries: Vec<Polynomial>,
    ) -> Result<Self> {
        let labels = expected_labels(k, lambda, sizes, basis);
        if labels.len() != entries.len() {
            return Err(Error::invalid(format!(
                "{} entries for a basis of size {}",
                entries.len(),
                labels.len()
            )));
        }
        let vars = VarSet::indexed(sizes.len());
        if let Some(e) = entries.iter().find(|e| e.vars() != &vars) {
            return Err(Error::Context(format!(
                "entry lives in {:?}, expected z1..z{}",
                e.vars().names(),
                sizes.len()
            )));
        }
        Ok(PsiVector {
            k,
            lambda: lambda.to_vec(),
            sizes: sizes.to_vec(),
            basis,
            vars,
            labels,
            entries,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, label: &SubsetSequence) -> Option<usize> {
        match self.basis {
            Basis::Standard => self.labels.binary_search(label).ok(),
            Basis::Component => self.labels.iter().position(|l| l == label),
        }
    }

    pub fn entry(&self, label: &SubsetSequence) -> Option<&Polynomial> {
        self.index_of(label).map(|i| &self.entries[i])
    }

    pub fn label_strings(&self) -> Vec<String> {
        self.labels.iter().map(|l| format!("{l}")).collect()
    }

    /// Every nonzero entry is homogeneous of degree `Σ λ_a(λ_a − 1)/2`.
    pub fn check_degrees(&self) -> Result<()> {
        let d: usize = self.lambda.iter().map(|&l| l * l.saturating_sub(1) / 2).sum();
        for (l, e) in self.labels.iter().zip(&self.entries) {
            if !e.is_zero() && (!e.is_homogeneous() || e.degree() as usize != d) {
                return Err(Error::mismatch(
                    "degree",
                    format!("{l}"),
                    format!("expected homogeneous of degree {d}, got {e}"),
                ));
            }
        }
        Ok(())
    }
}

pub(crate) fn expected_labels(
    k: usize,
    lambda: &[usize],
    sizes: &[usize],
    basis: Basis,
) -> Vec<SubsetSequence> {
    match basis {
        Basis::Standard => enumerate_standard_labels(k, lambda, sizes),
        Basis::Component => enumerate_tableaux(lambda, sizes).iter().map(phi).collect(),
    }
}
