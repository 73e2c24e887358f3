use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::conjugate;
use crate::error::{Error, Result};

/// Weight data of a type A_{k−1} quiver with framing `w` and gauge
/// dimensions `v`, together with the block sizes of the slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverData {
    pub k: usize,
    pub w: Vec<usize>,
    pub v: Vec<usize>,
    /// Highest weight `Σ w_a ω_a`, length k.
    pub mu: Vec<usize>,
    /// `μ − Σ v_a α_a`, length k, weakly decreasing.
    pub lambda: Vec<usize>,
    /// Number of tensor factors.
    pub n: usize,
    /// Total size `Σ m_i = Σ a·w_a`.
    pub m_total: usize,
    /// Column heights of μ (one per tensor factor).
    pub m: Vec<usize>,
    /// Column heights of λ padded with zeros to length `n`.
    pub ell: Vec<usize>,
}

fn column_heights(p: &[usize]) -> Vec<usize> {
    conjugate(p)
}

impl QuiverData {
    /// From framing and gauge dimensions, both of length `k − 1`.
    pub fn from_quiver(k: usize, w: &[usize], v: &[usize]) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid("k must be at least 2"));
        }
        if w.len() != k - 1 || v.len() != k - 1 {
            return Err(Error::invalid(format!(
                "w and v must have length k-1 = {}",
                k - 1
            )));
        }
        let mut mu = vec![0usize; k];
        for j in 0..k - 1 {
            mu[j] = w[j..].iter().sum();
        }
        let mut lambda = vec![0i64; k];
        for j in 0..k {
            let vj = if j < k - 1 { v[j] as i64 } else { 0 };
            let vprev = if j > 0 { v[j - 1] as i64 } else { 0 };
            lambda[j] = mu[j] as i64 - vj + vprev;
        }
        let lambda = check_lambda(&lambda)?;
        let m = column_heights(&mu);
        Self::assemble(k, w.to_vec(), v.to_vec(), mu, lambda, m)
    }

    /// From a weight λ and an ordered sequence of block sizes. Entries of
    /// `m` may equal `k` (full columns), which the recurrence needs.
    pub fn from_weights(k: usize, lambda: &[usize], m: &[usize]) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid("k must be at least 2"));
        }
        if lambda.len() > k {
            return Err(Error::invalid(format!("λ has more than k = {k} rows")));
        }
        if let Some(&bad) = m.iter().find(|&&x| x == 0 || x > k) {
            return Err(Error::invalid(format!("block size {bad} outside 1..={k}")));
        }
        let mut lam: Vec<i64> = lambda.iter().map(|&x| x as i64).collect();
        lam.resize(k, 0);
        let lambda = check_lambda(&lam)?;
        let mut sorted = m.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let mut mu = conjugate(&sorted);
        mu.resize(k, 0);
        if mu.iter().sum::<usize>() != lambda.iter().sum::<usize>() {
            return Err(Error::invalid(format!(
                "|λ| = {} differs from Σm = {}",
                lambda.iter().sum::<usize>(),
                m.iter().sum::<usize>()
            )));
        }
        let mut w = vec![0usize; k - 1];
        for &x in m {
            if x < k {
                w[x - 1] += 1;
            }
        }
        let mut v = vec![0usize; k - 1];
        let mut acc = 0i64;
        for j in 0..k - 1 {
            acc += mu[j] as i64 - lambda[j] as i64;
            if acc < 0 {
                return Err(Error::invalid(format!(
                    "λ = {lambda:?} is not below μ = {mu:?}"
                )));
            }
            v[j] = acc as usize;
        }
        Self::assemble(k, w, v, mu, lambda, m.to_vec())
    }

    fn assemble(
        k: usize,
        w: Vec<usize>,
        v: Vec<usize>,
        mu: Vec<usize>,
        lambda: Vec<usize>,
        m: Vec<usize>,
    ) -> Result<Self> {
        let n = m.len();
        let m_total = m.iter().sum();
        let mut ell = column_heights(&lambda);
        if ell.len() > n {
            return Err(Error::invalid(format!(
                "λ = {lambda:?} has more columns than there are factors ({n})"
            )));
        }
        ell.resize(n, 0);
        Ok(QuiverData {
            k,
            w,
            v,
            mu,
            lambda,
            n,
            m_total,
            m,
            ell,
        })
    }

    /// Codimension `Σ λ_a(λ_a − 1)/2`, the degree of every Ψ entry.
    pub fn psi_degree(&self) -> usize {
        self.lambda.iter().map(|&l| l * l.saturating_sub(1) / 2).sum()
    }

    /// Is λ a multiple of the determinant (all rows equal)?
    pub fn is_rectangular(&self) -> bool {
        self.lambda.windows(2).all(|p| p[0] == p[1])
    }
}

fn check_lambda(l: &[i64]) -> Result<Vec<usize>> {
    for j in 0..l.len().saturating_sub(1) {
        if l[j] < l[j + 1] {
            return Err(Error::invalid(format!(
                "λ = {l:?} is not dominant: row {} ({}) < row {} ({})",
                j + 1,
                l[j],
                j + 2,
                l[j + 1]
            )));
        }
    }
    if let Some(&x) = l.last() {
        if x < 0 {
            return Err(Error::invalid(format!("λ = {l:?} has a negative entry")));
        }
    }
    Ok(l.iter().map(|&x| x as usize).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thirteen_box_example() {
        let q = QuiverData::from_quiver(4, &[2, 1, 3], &[1, 0, 1]).unwrap();
        assert_eq!(q.mu, vec![6, 4, 3, 0]);
        assert_eq!(q.lambda, vec![5, 5, 2, 1]);
        assert_eq!((q.n, q.m_total), (6, 13));
        assert_eq!(q.m, vec![3, 3, 3, 2, 1, 1]);
        assert_eq!(q.ell, vec![4, 3, 2, 2, 2, 0]);
    }

    #[test]
    fn appendix_instance() {
        let q = QuiverData::from_quiver(4, &[0, 4, 0], &[2, 4, 2]).unwrap();
        assert_eq!(q.mu, vec![4, 4, 0, 0]);
        assert_eq!(q.lambda, vec![2, 2, 2, 2]);
        assert_eq!(q.m, vec![2, 2, 2, 2]);
        assert_eq!(q.ell, vec![4, 4, 0, 0]);
        assert_eq!(q.psi_degree(), 4);
        let again = QuiverData::from_weights(4, &[2, 2, 2, 2], &[2, 2, 2, 2]).unwrap();
        assert_eq!(again, q);
    }

    #[test]
    fn highest_weight_case() {
        let q = QuiverData::from_quiver(2, &[5], &[0]).unwrap();
        assert_eq!(q.lambda, q.mu);
        assert_eq!(q.lambda, vec![5, 0]);
    }

    #[test]
    fn non_dominant_is_rejected() {
        let e = QuiverData::from_quiver(3, &[1, 0], &[0, 1]).unwrap_err();
        assert!(alloc::format!("{e}").contains("not dominant"));
    }
}
