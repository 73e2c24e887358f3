use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{Polynomial, VarSet};
use crate::error::{Error, Result};

/// Dense matrix of polynomials in one context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    vars: VarSet,
    rows: usize,
    cols: usize,
    data: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(vars: &VarSet, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            vars: vars.clone(),
            rows,
            cols,
            data: (0..rows * cols).map(|_| Polynomial::zero(vars)).collect(),
        }
    }

    pub fn identity(vars: &VarSet, n: usize) -> Self {
        Self::scalar(vars, n, &Polynomial::one(vars))
    }

    pub fn scalar(vars: &VarSet, n: usize, c: &Polynomial) -> Self {
        let mut m = Self::zeros(vars, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Polynomial) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &Polynomial> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Polynomial::is_zero)
    }

    fn check_shape(&self, o: &PolyMatrix, rows: usize, cols: usize) -> Result<()> {
        if o.rows != rows || o.cols != cols || o.vars != self.vars {
            return Err(Error::invalid(format!(
                "shape {}x{} does not fit {}x{}",
                o.rows, o.cols, rows, cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        self.check_shape(o, self.rows, self.cols)?;
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&o.data) {
            *x = &*x + y;
        }
        Ok(out)
    }

    pub fn sub(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PolyMatrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = -&*x;
        }
        out
    }

    pub fn scale(&self, c: &Polynomial) -> PolyMatrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = &*x * c;
        }
        out
    }

    pub fn mul(&self, o: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != o.rows || self.vars != o.vars {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(&self.vars, self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(l, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<PolyMatrix> {
        let mut acc = Self::identity(&self.vars, self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The submatrix on the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = Self::zeros(&self.vars, rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                out.set(a, b, self.get(r, c).clone());
            }
        }
        out
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> Result<Polynomial> {
        if self.rows != self.cols {
            return Err(Error::invalid("determinant of a non-square matrix"));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Polynomial::one(&self.vars));
        }
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = Polynomial::one(&self.vars);
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a.get(r, k).is_zero()) else {
                    return Ok(Polynomial::zero(&self.vars));
                };
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(a.get(i, j) * a.get(k, k)) - &(a.get(i, k) * a.get(k, j));
                    a.set(i, j, v.exact_div(&prev)?);
                }
            }
            prev = a.get(k, k).clone();
        }
        let d = a.get(n - 1, n - 1).clone();
        Ok(if sign < 0 { -d } else { d })
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<_> = (0..self.cols).map(|c| format!("{}", self.get(r, c))).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn determinant_matches_expansion() {
        let v = VarSet::named(["a", "b", "c", "d"]);
        let p = |s: &str| parse_poly(s, &v).unwrap();
        let mut m = PolyMatrix::zeros(&v, 3, 3);
        let e = [["0", "a", "b"], ["c", "0", "d"], ["1", "a", "0"]];
        for (i, row) in e.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, p(x));
            }
        }
        // 0 - a(0 - d) + b(ca - 0)
        assert_eq!(m.det().unwrap(), p("a*d + a*b*c"));
    }
}
