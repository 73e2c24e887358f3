use qkz_core::algebra::Polynomial;
use qkz_core::qkz::{build_psi_fundamental, fuse_psi, PsiVector};
use qkz_core::rmatrix::{
    fundamental_rcheck, fused_rcheck, solve_local_rmatrix, solve_rmatrix_from_exchange, ROperator,
};

fn cases(psi: &PsiVector) -> Vec<(&PsiVector, &PsiVector, usize)> {
    (1..psi.sizes.len()).map(|i| (psi, psi, i)).collect()
}

fn assert_same_columns(got: &ROperator, want: &ROperator, skip: &[(Vec<u16>, Vec<u16>)]) {
    for s in want.source() {
        if skip.contains(s) {
            continue;
        }
        for t in want.target() {
            let (g, w) = (got.entry(t, s).unwrap(), want.entry(t, s).unwrap());
            assert!(g.equals(&w), "{t:?} <- {s:?}: {} vs {}", g.render(), w.render());
        }
    }
}

#[test]
fn fundamental_k2_three_sites() {
    let psi = build_psi_fundamental(2, &[2, 1]).unwrap();
    let sol = solve_local_rmatrix(2, 1, 1, &cases(&psi)).unwrap();
    // the letter 2 appears once, so the pair (2, 2) never occurs
    assert_eq!(sol.free_columns, [(vec![2], vec![2])]);
    assert_same_columns(&sol.rcheck, &fundamental_rcheck(2).unwrap(), &sol.free_columns);
}

#[test]
fn fundamental_from_a_family() {
    for (k, lambdas) in [(2, vec![vec![2, 2]]), (3, vec![vec![2, 2, 2], vec![1, 1, 1]])] {
        let psis: Vec<PsiVector> = lambdas.iter().map(|l| build_psi_fundamental(k, l).unwrap()).collect();
        let all: Vec<_> = psis.iter().flat_map(cases).collect();
        let sol = solve_local_rmatrix(k, 1, 1, &all).unwrap();
        assert!(sol.free_columns.is_empty(), "{:?}", sol.free_columns);
        assert_same_columns(&sol.rcheck, &fundamental_rcheck(k).unwrap(), &[]);
    }
}

#[test]
fn fused_pair_k2() {
    let psi = fuse_psi(&build_psi_fundamental(2, &[2, 2]).unwrap(), &[2, 1, 1]).unwrap();
    let swapped = fuse_psi(&build_psi_fundamental(2, &[2, 2]).unwrap(), &[1, 2, 1]).unwrap();
    let sol = solve_local_rmatrix(2, 2, 1, &[(&psi, &swapped, 1)]).unwrap();
    assert_same_columns(&sol.rcheck, &fused_rcheck(2, 2, 1).unwrap(), &sol.free_columns);
}

#[test]
fn basis_solve_needs_enough_components() {
    let psi = build_psi_fundamental(2, &[2, 1]).unwrap();
    assert!(solve_rmatrix_from_exchange(&psi.vars, &psi.entries, &psi.entries, 1).is_err());
}

#[test]
fn inconsistent_vectors_are_rejected() {
    let mut psi = build_psi_fundamental(2, &[2, 2]).unwrap();
    psi.entries[1] = &psi.entries[1] * &Polynomial::var(&psi.vars, 2);
    assert!(solve_local_rmatrix(2, 1, 1, &cases(&psi)).is_err());
}
