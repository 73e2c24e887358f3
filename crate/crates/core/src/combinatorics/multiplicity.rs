use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{enumerate_tableaux, QuiverData};
use crate::error::{Error, Result};

/// Both sides of the component count identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub tableaux: usize,
    pub pieri: usize,
}

/// Multiplicity of `L_λ` in `⊗_i Λ^{m_i} C^k`, by adding vertical strips
/// one factor at a time and keeping only the counts per shape.
pub fn pieri_multiplicity(k: usize, lambda: &[usize], m: &[usize]) -> usize {
    let mut lam = lambda.to_vec();
    lam.resize(k, 0);
    if lambda.len() > k {
        return 0;
    }
    let mut layer: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    layer.insert(vec![0; k], 1);
    for &s in m {
        let mut next: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (shape, count) in &layer {
            add_strips(shape, s, &lam, &mut |p| *next.entry(p).or_insert(0) += count);
        }
        layer = next;
    }
    layer.get(&lam).copied().unwrap_or(0)
}

/// Calls `f` on every partition obtained from `shape` by adding a vertical
/// strip of `size` boxes that stays inside `bound`.
fn add_strips(shape: &[usize], size: usize, bound: &[usize], f: &mut dyn FnMut(Vec<usize>)) {
    fn go(
        r: usize,
        left: usize,
        cur: &mut Vec<usize>,
        shape: &[usize],
        bound: &[usize],
        f: &mut dyn FnMut(Vec<usize>),
    ) {
        if left == 0 {
            f(cur.clone());
            return;
        }
        if r == shape.len() || shape.len() - r < left {
            return;
        }
        // row r grows if the row above (already final) leaves room
        let room = r == 0 || cur[r - 1] > shape[r];
        if room && shape[r] < bound[r] {
            cur[r] += 1;
            go(r + 1, left - 1, cur, shape, bound, f);
            cur[r] -= 1;
        }
        go(r + 1, left, cur, shape, bound, f);
    }
    go(0, size, &mut shape.to_vec(), shape, bound, f);
}

/// Compares the tableau count with the Pieri multiplicity and returns the
/// common value.
pub fn multiplicity_check(q: &QuiverData) -> Result<usize> {
    let r = MultiplicityReport {
        tableaux: enumerate_tableaux(&q.lambda, &q.m).len(),
        pieri: pieri_multiplicity(q.k, &q.lambda, &q.m),
    };
    if r.tableaux != r.pieri {
        return Err(Error::Inconsistent(format!(
            "{} tableaux but multiplicity {} for λ = {:?}, m = {:?}",
            r.tableaux, r.pieri, q.lambda, q.m
        )));
    }
    Ok(r.pieri)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(pieri_multiplicity(4, &[2, 2, 2, 2], &[2, 2, 2, 2]), 3);
        assert_eq!(pieri_multiplicity(2, &[2, 2], &[1, 1, 1, 1]), 2);
        assert_eq!(pieri_multiplicity(3, &[1, 1, 1], &[1, 1, 1]), 1);
        assert_eq!(pieri_multiplicity(3, &[2, 1], &[1, 1, 1]), 2);
    }

    #[test]
    fn highest_weight_is_one() {
        let q = QuiverData::from_quiver(3, &[2, 1], &[0, 0]).unwrap();
        assert_eq!(multiplicity_check(&q).unwrap(), 1);
    }
}
