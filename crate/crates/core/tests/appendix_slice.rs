use qkz_core::algebra::{parse_poly, Polynomial, VarSet};
use qkz_core::slice::{
    build_slice, emit_deformed_equations, emit_equations, eval_formula, intersect_with_n,
    linear_component_multidegree, verify_component_membership, FormulaEnv, PolyMatrix,
    Restriction, SliceModel,
};

const M: [usize; 4] = [2, 2, 2, 2];
const ELL: [usize; 4] = [4, 4, 0, 0];

const PLAIN: [&str; 3] = ["B(A^2+B)", "(A^2+B)B", "A^3+AB+BA"];

const DEFORMED: [&str; 3] = [
    "A^2 B + B^2 - e_1 A B + e_2 B + e_4",
    "B A^2 + B^2 - e_1 B A + e_2 B + e_4",
    "A^3 + A B + B A - e_1 (A^2+B) +e_2 A - e_3",
];

fn matrices(model: &SliceModel, src: &[&str; 3]) -> Vec<PolyMatrix> {
    let env = FormulaEnv::for_slice(model);
    src.iter()
        .map(|s| eval_formula(s, &env).unwrap().into_matrix(model.n()))
        .collect()
}

fn scalars(model: &SliceModel, src: &[&str]) -> Vec<Polynomial> {
    let env = FormulaEnv::for_slice(model);
    src.iter()
        .map(|s| eval_formula(s, &env).unwrap().into_scalar().unwrap())
        .collect()
}

#[test]
fn matrix_relations_match_nilpotency() {
    let full = build_slice(&M).unwrap();
    let n = intersect_with_n(&full);
    for model in [&full, &n] {
        let d = matrices(model, &PLAIN);
        // (A²+B)B is the top-left block, B(A²+B) the bottom-right correction
        qkz_core::slice::verify_two_block_relations(model, [&d[1], &d[0], &d[2]], false).unwrap();
        let eq = emit_equations(model, &ELL).unwrap();
        eq.check_homogeneous(model).unwrap();
    }
    // a wrong relation is caught
    let mut d = matrices(&full, &PLAIN);
    d[2] = d[2].add(&PolyMatrix::identity(&full.vars, 4)).unwrap();
    assert!(qkz_core::slice::verify_two_block_relations(&full, [&d[1], &d[0], &d[2]], false).is_err());
}

#[test]
fn deformed_relations_match() {
    let full = build_slice(&M).unwrap().with_parameters(4);
    let d = matrices(&full, &DEFORMED);
    qkz_core::slice::verify_two_block_relations(&full, [&d[0], &d[1], &d[2]], true).unwrap();
    assert_eq!(emit_deformed_equations(&full, &ELL).unwrap().relations.len() > 0, true);
}

fn strict() -> SliceModel {
    intersect_with_n(&build_slice(&M).unwrap())
}

#[test]
fn three_components() {
    let n = strict();
    let rel = emit_equations(&n, &ELL).unwrap().relations;
    let comps: [&[&str]; 3] = [
        &["A_{1,2}", "A_{3,4}", "B_{1,2}", "B_{3,4}"],
        &["B_{1,2}", "B_{2,3}", "B_{3,4}", "(A^3+AB+BA)_{1,4}"],
        &["A_{2,3}", "B_{2,3}", "(AB+BA)_{1,4}", "(B^2)_{1,4}"],
    ];
    for c in comps {
        let m = verify_component_membership(&n, &scalars(&n, c), &rel).unwrap();
        assert_eq!(m.dimension(), 8, "{c:?}");
        assert!(m.implied.is_empty());
    }
    // dropping a constraint leaves a locus that is not inside Z_0
    let loose = scalars(&n, &["A_{1,2}", "A_{3,4}", "B_{1,2}"]);
    assert!(verify_component_membership(&n, &loose, &rel).is_err());
}

#[test]
fn linear_component_multidegree_is_printed() {
    let n = strict();
    let names: Vec<String> = ["A12", "A34", "B12", "B34"].map(String::from).to_vec();
    let p = linear_component_multidegree(&n, &names).unwrap();
    let z = VarSet::indexed(4);
    let want = parse_poly("(hb+z1-z2)(hb+z3-z4)(2hb+z1-z2)(2hb+z3-z4)", &z).unwrap();
    assert_eq!(p, want);
    assert_eq!(linear_component_multidegree(&n, &[]).unwrap(), Polynomial::one(&z));
}

const DEFORMED_COMPONENT: [&str; 3] = [
    "B_{2,3}A_{3,4}+(t_3-t_2)B_{2,4}+t_3 A_{2,3}A_{3,4}+t_3(t_3-t_2)A_{2,4}",
    "A_{1,2}B_{2,3}+(t_2-t_3)B_{1,3}+t_2 A_{1,2}A_{2,3}+t_2(t_2-t_3)A_{1,3}",
    "A_{1,2}B_{2,4}+B_{1,3}A_{3,4}+A_{1,2}A_{2,3}A_{3,4}+t_2A_{1,3}A_{3,4}+t_3A_{1,2}A_{2,4}",
];

fn diagonal(alpha: &[[u8; 2]; 4]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, s) in alpha.iter().enumerate() {
        let i = i + 1;
        out.push(format!("A_{{{i},{i}}} - t_{} - t_{}", s[0], s[1]));
        out.push(format!("B_{{{i},{i}}} + t_{} t_{}", s[0], s[1]));
    }
    out
}

#[test]
fn deformed_component() {
    let up = SliceModel::new(&M, Restriction::Upper).unwrap().with_parameters(4);
    let rel = emit_deformed_equations(&up, &ELL).unwrap().relations;
    let alpha = [[1, 2], [1, 3], [2, 4], [3, 4]];
    let diag = diagonal(&alpha);
    let mut src: Vec<&str> = diag.iter().map(String::as_str).collect();
    let printed_only: Vec<&str> = src.iter().copied().chain(DEFORMED_COMPONENT).collect();
    assert!(verify_component_membership(&up, &scalars(&up, &printed_only), &rel).is_err());

    // with the two edge relations the printed locus lies in Z_t, and the
    // last printed relation follows from the others
    src.extend(["B_{1,2} + t_1 A_{1,2}", "B_{3,4} + t_4 A_{3,4}"]);
    src.extend(DEFORMED_COMPONENT);
    let m = verify_component_membership(&up, &scalars(&up, &src), &rel).unwrap();
    assert_eq!(m.dimension(), 8);
    assert_eq!(m.implied, vec![src.len() - 1]);
}
