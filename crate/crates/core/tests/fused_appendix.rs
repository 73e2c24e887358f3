use qkz_core::algebra::parse_poly;
use qkz_core::combinatorics::{rho, Basis, QuiverData, SubsetSequence};
use qkz_core::qkz::{
    build_psi_fundamental, check_cyclicity, check_exchange, check_wheel, fuse_psi, qkz_step,
    PsiVector,
};
use qkz_core::rmatrix::StandardFamily;

fn fused() -> PsiVector {
    let psi1 = build_psi_fundamental(4, &[2, 2, 2, 2]).unwrap();
    fuse_psi(&psi1, &[2, 2, 2, 2]).unwrap()
}

#[test]
fn fused_appendix_instance() {
    let psi = fused();
    psi.check_degrees().unwrap();
    let l = SubsetSequence::new(vec![vec![1, 2], vec![1, 2], vec![3, 4], vec![3, 4]]).unwrap();
    let t1 = parse_poly("(hb+z1-z2)(hb+z3-z4)(2hb+z1-z2)(2hb+z3-z4)", &psi.vars).unwrap();
    let e = psi.entry(&l).unwrap();
    assert_eq!(*e, t1);
    for pos in [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]] {
        check_wheel(&psi, &pos).unwrap();
    }
    let f = StandardFamily::new(4, Some(&[2, 2, 2, 2]), &psi.sizes).unwrap();
    for i in 1..4 {
        check_exchange(&f, &psi, &psi, i).unwrap();
    }
    let q = QuiverData::from_weights(4, &[2, 2, 2, 2], &psi.sizes).unwrap();
    check_cyclicity(&rho(&q, Basis::Standard).unwrap(), &psi, &psi).unwrap();
    qkz_step(&f, &psi, 2).unwrap();
}
