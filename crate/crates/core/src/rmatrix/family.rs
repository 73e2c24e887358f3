use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{wedge_basis, ROperator};
use crate::algebra::{Operator, Polynomial, Substitution, VarSet};
use crate::combinatorics::{
    enumerate_standard_labels, rho, Basis, QuiverData, SignedPermutation, SubsetSequence,
};
use crate::error::{Error, Result};

/// A consistent choice of bases for every ordering of the block sizes,
/// together with the exchange operators between them and the rotation
/// operator of the cyclicity relation.
pub trait ExchangeFamily {
    fn dim(&self, sizes: &[usize]) -> Result<usize>;

    /// Human readable basis labels, for reports.
    fn labels(&self, sizes: &[usize]) -> Result<Vec<String>>;

    /// Ř on factors `slot` and `slot + 1` (0-based) at spectral argument
    /// `arg`, mapping the basis for `sizes` to the basis for the sizes with
    /// those two entries exchanged.
    fn exchange(
        &self,
        vars: &VarSet,
        sizes: &[usize],
        slot: usize,
        arg: &Polynomial,
    ) -> Result<Operator>;

    /// ρ from the basis for `sizes` to the basis for `(sizes_2, …, sizes_1)`.
    fn rotation(&self, sizes: &[usize]) -> Result<SignedPermutation>;
}

fn spectral_substitution(vars: &VarSet, arg: &Polynomial) -> Result<Substitution> {
    if arg.vars() != vars {
        return Err(Error::Context("spectral argument".into()));
    }
    let spectral = VarSet::spectral();
    let mut sub = Substitution::into_context(&spectral, vars);
    sub.set(0, arg.clone())?;
    sub.set(spectral.h(), Polynomial::var(vars, vars.h()))?;
    Ok(sub)
}

/// Embeds a two-factor Ř into the space spanned by `src`, acting on
/// factors `slot`, `slot + 1` and landing in the space spanned by `dst`.
pub fn embed_local(
    local: &ROperator,
    vars: &VarSet,
    src: &[SubsetSequence],
    dst: &[SubsetSequence],
    slot: usize,
    arg: &Polynomial,
) -> Result<Operator> {
    let sub = spectral_substitution(vars, arg)?;
    let mut cols: BTreeMap<usize, Vec<(usize, crate::algebra::RationalFunction)>> =
        BTreeMap::new();
    let mut out = Operator::zeros(vars, dst.len(), src.len());
    for (ci, lab) in src.iter().enumerate() {
        let sets = lab.sets();
        if slot + 1 >= sets.len() {
            return Err(Error::invalid(format!("slot {} out of range", slot + 1)));
        }
        let pair = (sets[slot].clone(), sets[slot + 1].clone());
        let c = local
            .source_index(&pair)
            .ok_or_else(|| Error::invalid(format!("label {lab} does not fit the R-matrix")))?;
        if !cols.contains_key(&c) {
            let col = local
                .column(c)
                .iter()
                .map(|(r, x)| Ok((*r, x.substitute(&sub)?)))
                .collect::<Result<Vec<_>>>()?;
            cols.insert(c, col);
        }
        for (r, x) in &cols[&c] {
            let (t1, t2) = &local.target()[*r];
            let mut new = sets.to_vec();
            new[slot] = t1.clone();
            new[slot + 1] = t2.clone();
            let new = SubsetSequence::from_sorted(new);
            let ri = dst
                .binary_search(&new)
                .map_err(|_| Error::invalid(format!("image label {new} missing")))?;
            out.set(ri, ci, x.clone())?;
        }
    }
    Ok(out)
}

/// The standard (fixed point) basis of a weight space of
/// `⊗ Λ^{m_i} C^k`, or of the whole tensor product when no weight is
/// given, with fused R-matrices.
#[derive(Clone, Debug)]
pub struct StandardFamily {
    pub k: usize,
    pub lambda: Option<Vec<usize>>,
    locals: BTreeMap<(usize, usize), ROperator>,
}

impl StandardFamily {
    /// Precomputes the R-matrices for every pair of sizes occurring in
    /// `sizes`.
    pub fn new(k: usize, lambda: Option<&[usize]>, sizes: &[usize]) -> Result<Self> {
        let mut distinct: Vec<usize> = sizes.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let mut locals = BTreeMap::new();
        for &a in &distinct {
            for &b in &distinct {
                locals.insert((a, b), super::fused_rcheck(k, a, b)?);
            }
        }
        Ok(StandardFamily {
            k,
            lambda: lambda.map(<[usize]>::to_vec),
            locals,
        })
    }

    pub fn local(&self, a: usize, b: usize) -> Option<&ROperator> {
        self.locals.get(&(a, b))
    }

    pub fn basis(&self, sizes: &[usize]) -> Vec<SubsetSequence> {
        match &self.lambda {
            Some(l) => enumerate_standard_labels(self.k, l, sizes),
            None => {
                let mut out = alloc::vec![SubsetSequence::from_sorted(Vec::new())];
                for &s in sizes {
                    let wb = wedge_basis(self.k, s);
                    out = out
                        .iter()
                        .flat_map(|p| {
                            wb.iter().map(move |w| {
                                let mut sets = p.sets().to_vec();
                                sets.push(w.clone());
                                SubsetSequence::from_sorted(sets)
                            })
                        })
                        .collect();
                }
                out
            }
        }
    }
}

impl ExchangeFamily for StandardFamily {
    fn dim(&self, sizes: &[usize]) -> Result<usize> {
        Ok(self.basis(sizes).len())
    }

    fn labels(&self, sizes: &[usize]) -> Result<Vec<String>> {
        Ok(self.basis(sizes).iter().map(|l| format!("{l}")).collect())
    }

    fn exchange(
        &self,
        vars: &VarSet,
        sizes: &[usize],
        slot: usize,
        arg: &Polynomial,
    ) -> Result<Operator> {
        if slot + 1 >= sizes.len() {
            return Err(Error::invalid(format!("slot {} out of range", slot + 1)));
        }
        let (a, b) = (sizes[slot], sizes[slot + 1]);
        let local = self.local(a, b).ok_or_else(|| {
            Error::invalid(format!("no R-matrix prepared for sizes ({a},{b})"))
        })?;
        let mut swapped = sizes.to_vec();
        swapped.swap(slot, slot + 1);
        embed_local(
            local,
            vars,
            &self.basis(sizes),
            &self.basis(&swapped),
            slot,
            arg,
        )
    }

    fn rotation(&self, sizes: &[usize]) -> Result<SignedPermutation> {
        let lambda = self.lambda.as_ref().ok_or_else(|| {
            Error::Unsupported("rotation needs a fixed weight space".into())
        })?;
        let q = QuiverData::from_weights(self.k, lambda, sizes)?;
        rho(&q, Basis::Standard)
    }
}

/// Exchange matrices given explicitly for one homogeneous sequence of
/// sizes, one per slot, with entries in the spectral context.
#[derive(Clone, Debug)]
pub struct FixtureFamily {
    pub labels: Vec<String>,
    pub sizes: Vec<usize>,
    pub exchanges: Vec<Operator>,
    pub rotation: Option<SignedPermutation>,
}

impl FixtureFamily {
    fn check_sizes(&self, sizes: &[usize]) -> Result<()> {
        if sizes != self.sizes.as_slice() {
            return Err(Error::invalid(format!(
                "fixture family only covers sizes {:?}",
                self.sizes
            )));
        }
        Ok(())
    }
}

impl ExchangeFamily for FixtureFamily {
    fn dim(&self, sizes: &[usize]) -> Result<usize> {
        self.check_sizes(sizes)?;
        Ok(self.labels.len())
    }

    fn labels(&self, sizes: &[usize]) -> Result<Vec<String>> {
        self.check_sizes(sizes)?;
        Ok(self.labels.clone())
    }

    fn exchange(
        &self,
        vars: &VarSet,
        sizes: &[usize],
        slot: usize,
        arg: &Polynomial,
    ) -> Result<Operator> {
        self.check_sizes(sizes)?;
        let m = self
            .exchanges
            .get(slot)
            .ok_or_else(|| Error::invalid(format!("no exchange matrix for slot {}", slot + 1)))?;
        m.substitute(&spectral_substitution(vars, arg)?)
    }

    fn rotation(&self, sizes: &[usize]) -> Result<SignedPermutation> {
        self.check_sizes(sizes)?;
        self.rotation
            .clone()
            .ok_or_else(|| Error::Unsupported("fixture has no rotation matrix".into()))
    }
}
