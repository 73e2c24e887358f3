//! The slice `x_m + T′_m` through a nilpotent orbit closure, its equations
//! and the linear algebra around its components.

mod components;
mod equations;
mod formula;
mod matrix;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{Polynomial, VarSet};
use crate::error::{Error, Result};

pub use components::{
    component_point, linear_component_multidegree, verify_component_membership, Elimination, Membership,
};
pub use equations::{
    elementary_symmetric, emit_deformed_equations, emit_equations, two_block_matrices,
    verify_two_block_relations,
    EquationSet,
};
pub use formula::{eval_formula, FormulaEnv, Value};
pub use matrix::PolyMatrix;

/// Which blocks carry free coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// Every block pair: the slice itself.
    Full,
    /// Blocks `(i, j)` with `i < j`: the intersection with `n`.
    StrictUpper,
    /// Blocks with `i ≤ j`, used for the deformed components.
    Upper,
}

/// One free entry of the slice, in the last row of block row `i` and the
/// `column`-th column of block column `j` (all 0-based except `column`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinate {
    pub i: usize,
    pub j: usize,
    pub column: usize,
    pub row_index: usize,
    pub col_index: usize,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceModel {
    pub m: Vec<usize>,
    pub restriction: Restriction,
    /// First matrix index of each block.
    pub offsets: Vec<usize>,
    pub coords: Vec<Coordinate>,
    /// Coordinates first, then any deformation parameters `t1, t2, …`.
    pub vars: VarSet,
    pub params: usize,
}

/// Largest matrix size handled.
pub const MAX_SIZE: usize = 12;

/// Coordinates are named by a letter and the block indices, e.g. `A12`;
/// within a block the letters run `A, B, …` from the last allowed column
/// to the first, so `A` has the smallest scaling weight.
fn coordinate_name(i: usize, j: usize, letter: usize, n: usize) -> String {
    let l = char::from(b'A' + letter as u8);
    if n <= 9 {
        format!("{l}{}{}", i + 1, j + 1)
    } else {
        format!("{l}{}_{}", i + 1, j + 1)
    }
}

impl SliceModel {
    pub fn new(m: &[usize], restriction: Restriction) -> Result<Self> {
        if m.is_empty() || m.contains(&0) {
            return Err(Error::invalid("block sizes must be positive"));
        }
        if m.iter().any(|&x| x > 26) {
            return Err(Error::invalid("blocks larger than 26 are not supported"));
        }
        let n = m.len();
        let mut offsets = Vec::with_capacity(n);
        let mut acc = 0;
        for &x in m {
            offsets.push(acc);
            acc += x;
        }
        let mut coords = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let keep = match restriction {
                    Restriction::Full => true,
                    Restriction::StrictUpper => i < j,
                    Restriction::Upper => i <= j,
                };
                if !keep {
                    continue;
                }
                let w = m[i].min(m[j]);
                for c in 1..=w {
                    coords.push(Coordinate {
                        i,
                        j,
                        column: c,
                        row_index: offsets[i] + m[i] - 1,
                        col_index: offsets[j] + c - 1,
                        name: coordinate_name(i, j, w - c, n),
                    });
                }
            }
        }
        let vars = VarSet::named(coords.iter().map(|c| c.name.clone()));
        Ok(SliceModel {
            m: m.to_vec(),
            restriction,
            offsets,
            coords,
            vars,
            params: 0,
        })
    }

    /// Adds deformation parameters `t1, …, tp` to the context.
    pub fn with_parameters(&self, p: usize) -> Self {
        let names = self
            .coords
            .iter()
            .map(|c| c.name.clone())
            .chain((1..=p).map(|a| format!("t{a}")));
        SliceModel {
            vars: VarSet::named(names),
            params: p,
            ..self.clone()
        }
    }

    pub fn size(&self) -> usize {
        self.m.iter().sum()
    }

    pub fn n(&self) -> usize {
        self.m.len()
    }

    pub fn coordinate(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c.name == name)
    }

    /// The deformation parameter `t_a` (1-based) as a polynomial.
    pub fn parameter(&self, a: usize) -> Option<Polynomial> {
        (a >= 1 && a <= self.params).then(|| Polynomial::var(&self.vars, self.coords.len() + a - 1))
    }

    /// `(z_i − z_j) + ((m_i + m_j)/2 − (c − 1))ħ` in the context `z`.
    pub fn weight(&self, coord: usize, z: &VarSet) -> Polynomial {
        let c = &self.coords[coord];
        let units = (self.m[c.i] + self.m[c.j]) as i64 - 2 * (c.column as i64 - 1);
        let h = &Polynomial::integer(z, units) * &Polynomial::var(z, z.h());
        &(&h + &Polynomial::var(z, c.i)) - &Polynomial::var(z, c.j)
    }

    /// Integer weight vector of a coordinate: the z-part as `e_i − e_j`
    /// followed by the ħ/2 count.
    pub(crate) fn weight_vector(&self, coord: usize) -> Vec<i64> {
        let c = &self.coords[coord];
        let mut w = alloc::vec![0i64; self.n() + 1];
        w[c.i] += 1;
        w[c.j] -= 1;
        w[self.n()] = (self.m[c.i] + self.m[c.j]) as i64 - 2 * (c.column as i64 - 1);
        w
    }

    /// `x_m` plus the free coordinates.
    pub fn matrix(&self) -> PolyMatrix {
        let size = self.size();
        let mut x = PolyMatrix::zeros(&self.vars, size, size);
        for (b, &mb) in self.m.iter().enumerate() {
            let o = self.offsets[b];
            for r in 0..mb.saturating_sub(1) {
                x.set(o + r, o + r + 1, Polynomial::one(&self.vars));
            }
        }
        for (v, c) in self.coords.iter().enumerate() {
            x.set(c.row_index, c.col_index, Polynomial::var(&self.vars, v));
        }
        x
    }

    /// `dim M_0 = dim O_ℓ − dim O_{x_m}` from the Jordan types.
    pub fn orbit_dimension_gap(&self, ell: &[usize]) -> usize {
        let sq = |p: &[usize]| -> usize {
            let mut s = p.to_vec();
            s.sort_unstable_by(|a, b| b.cmp(a));
            crate::combinatorics::conjugate(&s).iter().map(|x| x * x).sum()
        };
        sq(&self.m) - sq(ell)
    }
}

/// The slice for the block sizes `m`.
pub fn build_slice(m: &[usize]) -> Result<SliceModel> {
    SliceModel::new(m, Restriction::Full)
}

/// Keeps only the coordinates strictly above the block diagonal.
pub fn intersect_with_n(model: &SliceModel) -> SliceModel {
    SliceModel::new(&model.m, Restriction::StrictUpper).expect("sizes already validated")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn appendix_coordinates() {
        let s = build_slice(&[2, 2, 2, 2]).unwrap();
        assert_eq!(s.coords.len(), 32);
        let z = VarSet::indexed(4);
        let a = s.coordinate("A12").unwrap();
        let b = s.coordinate("B12").unwrap();
        assert_eq!(s.weight(a, &z), parse_poly("hb + z1 - z2", &z).unwrap());
        assert_eq!(s.weight(b, &z), parse_poly("2hb + z1 - z2", &z).unwrap());
        assert_eq!((s.coords[b].column, s.coords[a].column), (1, 2));
        let n = intersect_with_n(&s);
        assert_eq!(n.coords.len(), 12);
        assert_eq!(s.orbit_dimension_gap(&[4, 4]), 16);
    }

    #[test]
    fn unequal_blocks() {
        let s = build_slice(&[3, 1]).unwrap();
        let z = VarSet::indexed(2);
        let c = s.coords.iter().position(|c| (c.i, c.j) == (0, 1)).unwrap();
        assert_eq!(s.weight(c, &z), parse_poly("2hb + z1 - z2", &z).unwrap());
        let x = s.matrix();
        assert_eq!(x.get(0, 1), &Polynomial::one(&s.vars));
        assert_eq!(x.get(1, 2), &Polynomial::one(&s.vars));
        assert!(x.get(2, 3).vars() == &s.vars);
    }

    #[test]
    fn fundamental_weights() {
        let s = intersect_with_n(&build_slice(&[1, 1, 1]).unwrap());
        let z = VarSet::indexed(3);
        for (v, c) in s.coords.iter().enumerate() {
            let want = format!("hb + z{} - z{}", c.i + 1, c.j + 1);
            assert_eq!(s.weight(v, &z), parse_poly(&want, &z).unwrap());
        }
        assert_eq!(s.coords.len(), 3);
    }
}
