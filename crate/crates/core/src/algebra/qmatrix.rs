use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Q;

/// Dense matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows, "matrix shapes do not chain");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    /// Leading principal submatrix of size `n`.
    pub fn leading(&self, n: usize) -> QMatrix {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Exact rank by fraction-free (Bareiss) elimination on the matrix
    /// scaled row-wise to integers.
    pub fn rank(&self) -> usize {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let l = row.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
                row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
            })
            .collect();
        let (m, n) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..m {
                for j in c + 1..n {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> Q {
        Q::from_integer(x.into())
    }

    #[test]
    fn rank_of_small_matrices() {
        let mut m = QMatrix::zeros(3, 3);
        for (i, row) in [[1, 2, 3], [2, 4, 6], [1, 0, 1]].iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, q(x));
            }
        }
        assert_eq!(m.rank(), 2);
        assert_eq!(QMatrix::identity(4).rank(), 4);
        assert_eq!(QMatrix::zeros(2, 5).rank(), 0);
        let mut h = QMatrix::zeros(2, 2);
        h.set(0, 0, Q::new(1.into(), 2.into()));
        h.set(0, 1, Q::new(1.into(), 3.into()));
        h.set(1, 0, Q::new(1.into(), 3.into()));
        h.set(1, 1, Q::new(1.into(), 4.into()));
        assert_eq!(h.rank(), 2);
    }
}
