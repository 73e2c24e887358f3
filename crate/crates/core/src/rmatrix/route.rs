use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::ExchangeFamily;
use crate::algebra::{q, Operator, Polynomial, RationalFunction, VarSet};
use crate::combinatorics::SignedPermutation;
use crate::error::{Error, Result};
use crate::report::Report;

/// Operator of a signed permutation, `cols` being the source dimension.
pub(crate) fn permutation_operator(vars: &VarSet, p: &SignedPermutation) -> Result<Operator> {
    let n = p.len();
    let mut op = Operator::zeros(vars, n, n);
    for (a, (&s, &g)) in p.source.iter().zip(&p.sign).enumerate() {
        op.set(a, s, RationalFunction::constant(vars, q(i64::from(g))))?;
    }
    Ok(op)
}

fn inverse(p: &SignedPermutation) -> SignedPermutation {
    let mut source = alloc::vec![0; p.len()];
    let mut sign = alloc::vec![1; p.len()];
    for (a, (&s, &g)) in p.source.iter().zip(&p.sign).enumerate() {
        source[s] = a;
        sign[s] = g;
    }
    SignedPermutation { source, sign }
}

/// A chain of exchange and rotation moves applied to `Ψ^{m}(z_1, …, z_N)`.
///
/// The state records the current ordering of block sizes, the arguments
/// sitting in each slot and the accumulated operator `O` such that the
/// vector for the current sizes, evaluated at the current arguments,
/// equals `O · Ψ^{m}(z)`.
pub struct Route<'a> {
    family: &'a dyn ExchangeFamily,
    vars: VarSet,
    sizes: Vec<usize>,
    args: Vec<Polynomial>,
    op: Operator,
    steps: Vec<String>,
}

impl<'a> Route<'a> {
    /// Starts at the identity with arguments `z_1, …, z_N`.
    pub fn start(family: &'a dyn ExchangeFamily, vars: &VarSet, sizes: &[usize]) -> Result<Self> {
        if vars.len() < sizes.len() {
            return Err(Error::invalid("not enough variables for the route"));
        }
        let args = (0..sizes.len()).map(|i| Polynomial::var(vars, i)).collect();
        let dim = family.dim(sizes)?;
        Ok(Route {
            family,
            vars: vars.clone(),
            sizes: sizes.to_vec(),
            args,
            op: Operator::identity(vars, dim),
            steps: Vec::new(),
        })
    }

    /// Moves the block in `slot` (0-based) one step to the right.
    pub fn exchange(&mut self, slot: usize) -> Result<&mut Self> {
        if slot + 1 >= self.sizes.len() {
            return Err(Error::invalid(format!("slot {} out of range", slot + 1)));
        }
        let arg = &self.args[slot] - &self.args[slot + 1];
        let r = self.family.exchange(&self.vars, &self.sizes, slot, &arg)?;
        self.op = r.mul(&self.op)?;
        self.sizes.swap(slot, slot + 1);
        self.args.swap(slot, slot + 1);
        self.steps.push(format!("R{}", slot + 1));
        Ok(self)
    }

    /// Moves the block in slot `from` to slot `to` by adjacent exchanges.
    pub fn carry(&mut self, from: usize, to: usize) -> Result<&mut Self> {
        if from < to {
            for s in from..to {
                self.exchange(s)?;
            }
        } else {
            for s in (to..from).rev() {
                self.exchange(s)?;
            }
        }
        Ok(self)
    }

    /// Cyclicity: the first block moves to the end with its argument
    /// shifted by `shift`.
    pub fn rotate(&mut self, shift: &Polynomial) -> Result<&mut Self> {
        let rho = self.family.rotation(&self.sizes)?;
        self.op = permutation_operator(&self.vars, &rho)?.mul(&self.op)?;
        self.sizes.rotate_left(1);
        self.args.rotate_left(1);
        let last = self.args.len() - 1;
        self.args[last] = &self.args[last] + shift;
        self.steps.push("rho".into());
        Ok(self)
    }

    /// Inverse cyclicity: the last block moves to the front with its
    /// argument shifted by `−shift`.
    pub fn rotate_back(&mut self, shift: &Polynomial) -> Result<&mut Self> {
        let mut prev = self.sizes.clone();
        prev.rotate_right(1);
        let rho = self.family.rotation(&prev)?;
        self.op = permutation_operator(&self.vars, &inverse(&rho))?.mul(&self.op)?;
        self.sizes = prev;
        self.args.rotate_right(1);
        self.args[0] = &self.args[0] - shift;
        self.steps.push("rho^-1".into());
        Ok(self)
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn args(&self) -> &[Polynomial] {
        &self.args
    }

    /// Moves applied so far, e.g. `R2 R1 rho`.
    pub fn word(&self) -> String {
        self.steps.join(" ")
    }
}

/// Compares two operators, naming the first differing entry.
pub(crate) fn compare_operators(
    check: &str,
    left: &Operator,
    right: &Operator,
    row_labels: &[String],
    col_labels: &[String],
) -> Result<usize> {
    match left.first_difference(right) {
        None => Ok(left.rows() * left.cols()),
        Some((r, c)) => {
            let name = |v: &[String], i: usize| v.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
            let (a, b) = if r < left.rows() && c < left.cols() && r < right.rows() && c < right.cols() {
                (left.get(r, c), right.get(r, c))
            } else {
                return Err(Error::mismatch(check, "shape", "operators have different shapes"));
            };
            Err(Error::mismatch(
                check,
                format!("{} <- {}", name(row_labels, r), name(col_labels, c)),
                format!("{} vs {}", a.render(), b.render()),
            ))
        }
    }
}

fn route_pair(
    check: &str,
    family: &dyn ExchangeFamily,
    sizes: &[usize],
    left: &[usize],
    right: &[usize],
) -> Result<Report> {
    let vars = VarSet::indexed(sizes.len());
    let mut l = Route::start(family, &vars, sizes)?;
    for &s in left {
        l.exchange(s)?;
    }
    let mut r = Route::start(family, &vars, sizes)?;
    for &s in right {
        r.exchange(s)?;
    }
    if l.sizes() != r.sizes() {
        return Err(Error::invalid("routes end at different size orderings"));
    }
    let cases = compare_operators(
        check,
        l.operator(),
        r.operator(),
        &family.labels(l.sizes())?,
        &family.labels(sizes)?,
    )?;
    Ok(Report::new(
        check,
        format!("sizes {sizes:?}, {} vs {}", l.word(), r.word()),
        cases,
    ))
}

/// `Ř_i(u) Ř_{i+1}(u+v) Ř_i(v) = Ř_{i+1}(v) Ř_i(u+v) Ř_{i+1}(u)` with
/// `u, v` realised as differences of the slot variables. `i` is 1-based.
pub fn verify_ybe(family: &dyn ExchangeFamily, sizes: &[usize], i: usize) -> Result<Report> {
    if i == 0 || i + 2 > sizes.len() {
        return Err(Error::invalid(format!("YBE needs slots {i}..{}", i + 2)));
    }
    let j = i - 1;
    route_pair("ybe", family, sizes, &[j, j + 1, j], &[j + 1, j, j + 1])
}

/// `Ř_i(u) Ř_i(−u) = 1`.
pub fn verify_unitarity(family: &dyn ExchangeFamily, sizes: &[usize], i: usize) -> Result<Report> {
    if i == 0 || i + 1 > sizes.len() {
        return Err(Error::invalid(format!("unitarity needs slots {i}, {}", i + 1)));
    }
    route_pair("unitarity", family, sizes, &[i - 1, i - 1], &[])
}

/// `Ř_i(u) Ř_j(v) = Ř_j(v) Ř_i(u)` for `|i − j| ≥ 2`.
pub fn verify_comm(
    family: &dyn ExchangeFamily,
    sizes: &[usize],
    i: usize,
    j: usize,
) -> Result<Report> {
    if i == 0 || j == 0 || i.abs_diff(j) < 2 || i.max(j) + 1 > sizes.len() {
        return Err(Error::invalid(format!("far commutation needs distant slots, got {i}, {j}")));
    }
    route_pair("comm", family, sizes, &[i - 1, j - 1], &[j - 1, i - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::StandardFamily;

    #[test]
    fn fundamental_k2_relations() {
        let f = StandardFamily::new(2, None, &[1, 1, 1]).unwrap();
        verify_ybe(&f, &[1, 1, 1], 1).unwrap();
        verify_unitarity(&f, &[1, 1, 1], 2).unwrap();
        let f4 = StandardFamily::new(2, Some(&[2, 2]), &[1, 1, 1, 1]).unwrap();
        verify_comm(&f4, &[1, 1, 1, 1], 1, 3).unwrap();
    }

    #[test]
    fn fused_relations_small() {
        let f = StandardFamily::new(3, None, &[1, 2]).unwrap();
        verify_unitarity(&f, &[1, 2], 1).unwrap();
        verify_unitarity(&f, &[2, 2], 1).unwrap();
        verify_ybe(&f, &[1, 2, 1], 1).unwrap();
        verify_ybe(&f, &[2, 1, 2], 1).unwrap();
    }
}
