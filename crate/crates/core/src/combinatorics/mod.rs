//! Weights, tableaux, subset sequences and the maps between them.

mod multiplicity;
mod quiver;
mod spaltenstein;
mod tableau;

use alloc::vec::Vec;

pub use multiplicity::{multiplicity_check, pieri_multiplicity, MultiplicityReport};
pub use quiver::QuiverData;
pub use spaltenstein::{jordan_chain, spaltenstein_label};
pub use tableau::{
    enumerate_standard_labels, enumerate_tableaux, phi, promotion, rho, rotation_sign, Basis, SignedPermutation,
    SubsetSequence, Tableau,
};

/// Conjugate partition. Trailing zeros in the input are ignored.
pub fn conjugate(p: &[usize]) -> Vec<usize> {
    let first = p.first().copied().unwrap_or(0);
    (0..first)
        .map(|c| p.iter().take_while(|&&x| x > c).count())
        .collect()
}

/// Removes trailing zeros.
pub(crate) fn trim(p: &[usize]) -> Vec<usize> {
    let n = p.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    p[..n].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn conjugation() {
        assert_eq!(conjugate(&[5, 5, 2, 1]), vec![4, 3, 2, 2, 2]);
        assert_eq!(conjugate(&[4, 4, 0, 0]), vec![2, 2, 2, 2]);
        assert_eq!(conjugate(&[]), Vec::<usize>::new());
        assert_eq!(conjugate(&conjugate(&[3, 1, 1])), vec![3, 1, 1]);
    }
}
