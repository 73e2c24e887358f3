use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{RationalFunction, Substitution, VarSet};
use crate::error::{Error, Result};

/// Sparse matrix of rational functions, stored by rows. Absent entries are
/// zero.
#[derive(Clone, Debug)]
pub struct Operator {
    rows: usize,
    cols: usize,
    vars: VarSet,
    data: Vec<BTreeMap<usize, RationalFunction>>,
}

impl Operator {
    pub fn zeros(vars: &VarSet, rows: usize, cols: usize) -> Self {
        Operator {
            rows,
            cols,
            vars: vars.clone(),
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(vars: &VarSet, n: usize) -> Self {
        let mut m = Self::zeros(vars, n, n);
        for i in 0..n {
            m.data[i].insert(i, RationalFunction::one(vars));
        }
        m
    }

    pub fn from_dense(vars: &VarSet, rows: Vec<Vec<RationalFunction>>) -> Result<Self> {
        let n = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(vars, n, c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::invalid("ragged matrix"));
            }
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x)?;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn get(&self, r: usize, c: usize) -> RationalFunction {
        self.data[r]
            .get(&c)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.vars))
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, RationalFunction> {
        &self.data[r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RationalFunction) -> Result<()> {
        if v.vars() != &self.vars {
            return Err(Error::Context("operator entry".into()));
        }
        if r >= self.rows || c >= self.cols {
            return Err(Error::invalid("operator index out of range"));
        }
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
        Ok(())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn mul(&self, o: &Operator) -> Result<Operator> {
        if self.cols != o.rows {
            return Err(Error::invalid("operator shapes do not chain"));
        }
        if self.vars != o.vars {
            return Err(Error::Context("operator product".into()));
        }
        let mut out = Self::zeros(&self.vars, self.rows, o.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc: BTreeMap<usize, RationalFunction> = BTreeMap::new();
            for (k, a) in row {
                for (j, b) in &o.data[*k] {
                    let t = a.try_mul(b)?;
                    match acc.get_mut(j) {
                        Some(x) => *x = x.try_add(&t)?,
                        None => {
                            acc.insert(*j, t);
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[RationalFunction]) -> Result<Vec<RationalFunction>> {
        if v.len() != self.cols {
            return Err(Error::invalid("vector length does not match operator"));
        }
        self.data
            .iter()
            .map(|row| {
                let mut acc = RationalFunction::zero(&self.vars);
                for (j, a) in row {
                    if !v[*j].is_zero() {
                        acc = acc.try_add(&a.try_mul(&v[*j])?)?;
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn substitute(&self, sub: &Substitution) -> Result<Operator> {
        let mut out = Self::zeros(sub.target(), self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, a) in row {
                out.set(i, *j, a.substitute(sub)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RationalFunction) -> Result<Operator> {
        let mut out = Self::zeros(&self.vars, self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, a) in row {
                out.set(i, *j, a.try_mul(c)?)?;
            }
        }
        Ok(out)
    }

    /// First position where the two operators differ.
    pub fn first_difference(&self, o: &Operator) -> Option<(usize, usize)> {
        if self.rows != o.rows || self.cols != o.cols {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for (j, a) in &self.data[i] {
                if !o.get(i, *j).equals(a) {
                    return Some((i, *j));
                }
            }
            for (j, b) in &o.data[i] {
                if !self.data[i].contains_key(j) && !b.is_zero() {
                    return Some((i, *j));
                }
            }
        }
        None
    }
}

impl PartialEq for Operator {
    fn eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Polynomial, Q};

    #[test]
    fn identity_is_neutral() {
        let v = VarSet::spectral();
        let z = RationalFunction::from_poly(Polynomial::var(&v, 0));
        let mut a = Operator::zeros(&v, 2, 2);
        a.set(0, 1, z.clone()).unwrap();
        a.set(1, 0, RationalFunction::constant(&v, Q::from_integer(3.into()))).unwrap();
        let id = Operator::identity(&v, 2);
        assert_eq!(a.mul(&id).unwrap(), a);
        assert_eq!(id.mul(&a).unwrap(), a);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.get(0, 0), z.scale(&Q::from_integer(3.into())));
        assert!(sq.get(0, 1).is_zero());
    }
}
