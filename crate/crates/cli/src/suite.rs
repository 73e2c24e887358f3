//! Every identity of the worked example, checked against the fixtures.

use anyhow::{anyhow, bail, ensure, Result};
use qkz_core::algebra::{q, Polynomial, Substitution, VarSet};
use qkz_core::combinatorics::{rho, Basis, QuiverData};
use qkz_core::qkz::{check_cyclicity, check_exchange, check_wheel, PsiVector};
use qkz_core::rmatrix::{solve_rmatrix_from_exchange, verify_comm, verify_unitarity, verify_ybe};
use qkz_core::slice::{
    build_slice, emit_deformed_equations, emit_equations, eval_formula, intersect_with_n,
    linear_component_multidegree, verify_component_membership, verify_two_block_relations,
    FormulaEnv, Membership, PolyMatrix, Restriction, SliceModel,
};
use rayon::prelude::*;

use crate::fixtures::{wheel_vars, Appendix, ELL, K, LAMBDA, M};
use crate::report::CheckReport;

pub const INSTANCE: &str = "k=4, λ=(2,2,2,2), m=(2,2,2,2)";

/// Extra relations needed by the printed deformed component (see README).
pub const DEFORMED_EDGE_RELATIONS: [&str; 2] = ["B_{1,2} + t_1 A_{1,2}", "B_{3,4} + t_4 A_{3,4}"];

pub fn quiver() -> QuiverData {
    QuiverData::from_weights(K, &LAMBDA, &M).expect("appendix weights are valid")
}

fn matrix_formulas(model: &SliceModel, src: &[String]) -> Result<Vec<PolyMatrix>> {
    let env = FormulaEnv::for_slice(model);
    src.iter()
        .map(|s| Ok(eval_formula(s, &env)?.into_matrix(model.n())))
        .collect()
}

pub fn scalar_formulas(model: &SliceModel, src: &[String]) -> Result<Vec<Polynomial>> {
    let env = FormulaEnv::for_slice(model);
    src.iter()
        .map(|s| Ok(eval_formula(s, &env)?.into_scalar()?))
        .collect()
}

/// The printed relations `B(A²+B)`, `(A²+B)B`, `A³+AB+BA` generate the
/// same ideal as `X⁴`, on the slice and on its strictly upper part.
pub fn equations(app: &Appendix) -> Result<usize> {
    ensure!(app.relations.len() == 3, "expected three matrix relations");
    let mut cases = 0;
    for model in [build_slice(&M)?, intersect_with_n(&build_slice(&M)?)] {
        let d = matrix_formulas(&model, &app.relations)?;
        // top-left block of X⁴ is (A²+B)B, the bottom-right one B(A²+B) + A(A³+AB+BA)
        cases += verify_two_block_relations(&model, [&d[1], &d[0], &d[2]], false)?.cases;
        let eq = emit_equations(&model, &ELL)?;
        eq.check_homogeneous(&model)?;
        cases += eq.relations.len();
    }
    Ok(cases)
}

/// Membership of each printed component in `Z_0`, with half the
/// dimension of `M_0`.
pub fn components(app: &Appendix) -> Result<usize> {
    let n = intersect_with_n(&build_slice(&M)?);
    let rel = emit_equations(&n, &ELL)?.relations;
    let half = n.orbit_dimension_gap(&ELL) / 2;
    ensure!(app.components.len() == app.psi.len(), "component count differs from Ψ");
    let mut cases = 0;
    for c in &app.components {
        ensure!(
            app.psi_labels.contains(&c.label),
            "component {} has no multidegree",
            c.label
        );
        let m = component_membership(&n, &c.constraints, &rel)?;
        ensure!(
            m.dimension() == half,
            "component {} has dimension {}, expected {half}",
            c.label,
            m.dimension()
        );
        cases += rel.len();
    }
    Ok(cases)
}

pub fn component_membership(
    model: &SliceModel,
    constraints: &[String],
    relations: &[Polynomial],
) -> Result<Membership> {
    let c = scalar_formulas(model, constraints)?;
    Ok(verify_component_membership(model, &c, relations)?)
}

/// The coordinate-subspace component has the printed multidegree; all
/// printed multidegrees have degree equal to the codimension.
pub fn multidegrees(app: &Appendix) -> Result<usize> {
    let n = intersect_with_n(&build_slice(&M)?);
    app.psi.check_degrees()?;
    let codim = n.coords.len() - n.orbit_dimension_gap(&ELL) / 2;
    let mut linear = 0;
    for c in &app.components {
        let polys = scalar_formulas(&n, &c.constraints)?;
        let names: Option<Vec<String>> = polys
            .iter()
            .map(|p| {
                let (m, coef) = p.terms().next()?;
                let v = m.exps().iter().position(|&e| e == 1)?;
                (p.len() == 1 && m.degree() == 1 && coef == &q(1))
                    .then(|| n.vars.name(v).to_string())
            })
            .collect();
        let Some(names) = names else { continue };
        let i = app.psi_labels.iter().position(|t| t == &c.label).expect("checked");
        let got = linear_component_multidegree(&n, &names)?;
        if &got != &app.psi.entries[i] {
            bail!("multidegree of {}: {got} vs {}", c.label, app.psi.entries[i]);
        }
        ensure!(got.degree() as usize == codim, "degree {} vs codimension {codim}", got.degree());
        linear += 1;
    }
    ensure!(linear == 1, "expected one coordinate-subspace component, found {linear}");
    Ok(app.psi.len() + linear)
}

/// The printed Ř satisfy the exchange relation with the printed Ψ, and
/// solving the exchange relation for Ř gives them back.
pub fn rmatrix_solve(app: &Appendix) -> Result<usize> {
    let fam = app.family();
    let mut cases = 0;
    for i in 1..M.len() {
        cases += check_exchange(&fam, &app.psi, &app.psi, i)?.cases;
        let solved = solve_rmatrix_from_exchange(&app.psi.vars, &app.psi.entries, &app.psi.entries, i)?;
        if let Some((r, c)) = solved.first_difference(&app.rmatrices[i - 1]) {
            bail!(
                "solved Ř_{i} differs at ({}, {}): {} vs {}",
                r + 1,
                c + 1,
                solved.get(r, c).render(),
                app.rmatrices[i - 1].get(r, c).render()
            );
        }
        cases += solved.rows() * solved.cols();
    }
    Ok(cases)
}

/// Yang–Baxter, unitarity and far commutation for the printed Ř.
pub fn rmatrix_relations(app: &Appendix) -> Result<usize> {
    let fam = app.family();
    let mut cases = 0;
    for i in 1..=2 {
        cases += verify_ybe(&fam, &M, i)?.cases;
    }
    for i in 1..=3 {
        cases += verify_unitarity(&fam, &M, i)?.cases;
    }
    cases += verify_comm(&fam, &M, 1, 3)?.cases;
    Ok(cases)
}

fn substitute_all(psi: &PsiVector, target: &VarSet, args: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let mut sub = Substitution::into_context(&psi.vars, target);
    for (i, a) in args.iter().enumerate() {
        sub.set(i, a.clone())?;
    }
    sub.set(psi.vars.h(), Polynomial::var(target, target.h()))?;
    Ok(psi
        .entries
        .iter()
        .map(|e| e.substitute(&sub))
        .collect::<Result<Vec<_>, _>>()?)
}

/// The printed cyclicity relation, by direct substitution, and agreement
/// of the printed ρ with promotion and the sign `ε^{m_1}`.
pub fn cyclicity(app: &Appendix) -> Result<usize> {
    let psi = &app.psi;
    let lhs = substitute_all(psi, &psi.vars, &app.cyclic_args)?;
    for (a, l) in lhs.iter().enumerate() {
        let s = app.rho.source[a];
        let r = psi.entries[s].scale(&q(app.rho.sign[a].into()));
        ensure!(*l == r, "row {}: {l} vs {r}", a + 1);
    }
    let shift = &app.cyclic_args[M.len() - 1] - &Polynomial::var(&psi.vars, 0);
    let want = Polynomial::hbar(&psi.vars).scale(&q((K + 1) as i64));
    ensure!(shift == want, "shift {shift} is not (k+1)ħ");
    let ours = rho(&quiver(), Basis::Component)?;
    ensure!(ours == app.rho, "promotion gives {:?}, printed {:?}", ours.to_dense(), app.rho.to_dense());
    check_cyclicity(&ours, psi, psi)?;
    Ok(2 * psi.len())
}

/// Ψ vanishes at every printed placement of `(z, z+2ħ, z+4ħ)`.
pub fn wheel(app: &Appendix) -> Result<usize> {
    let vars = wheel_vars();
    let w = Polynomial::var(&vars, 1);
    let mut cases = 0;
    for placement in &app.wheel {
        for (l, v) in app.psi.labels.iter().zip(substitute_all(&app.psi, &vars, placement)?) {
            ensure!(v.is_zero(), "Ψ_{l} at {placement:?} is {v}");
            cases += 1;
        }
        let positions: Vec<usize> = placement
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != w)
            .map(|(i, _)| i + 1)
            .collect();
        check_wheel(&app.psi, &positions)?;
    }
    ensure!(app.wheel.len() == 4, "expected four placements");
    Ok(cases)
}

/// The printed deformed relations against `∏(X − t_a)`, and the printed
/// deformed component.
pub fn deformed(app: &Appendix) -> Result<usize> {
    let full = build_slice(&M)?.with_parameters(4);
    let d = matrix_formulas(&full, &app.deformed_relations)?;
    ensure!(d.len() == 3, "expected three deformed relations");
    let mut cases = verify_two_block_relations(&full, [&d[0], &d[1], &d[2]], true)?.cases;
    let (m, _) = deformed_component(app)?;
    ensure!(m.dimension() == 8, "deformed component has dimension {}", m.dimension());
    cases += 1;
    Ok(cases)
}

/// Membership of the printed deformed component, completed by
/// [`DEFORMED_EDGE_RELATIONS`]. Also returns whether the printed
/// constraints alone fail, which they should.
pub fn deformed_component(app: &Appendix) -> Result<(Membership, bool)> {
    let up = SliceModel::new(&M, Restriction::Upper)?.with_parameters(4);
    let rel = emit_deformed_equations(&up, &ELL)?.relations;
    let printed_alone = component_membership(&up, &app.deformed_constraints, &rel).is_err();
    ensure!(printed_alone, "the printed constraints alone already lie in Z_t");
    let (diag, quad): (Vec<String>, Vec<String>) = app
        .deformed_constraints
        .iter()
        .cloned()
        .partition(|c| is_diagonal(c));
    let mut src = diag;
    src.extend(DEFORMED_EDGE_RELATIONS.iter().map(|s| s.to_string()));
    let last = src.len() + quad.len() - 1;
    src.extend(quad);
    let m = component_membership(&up, &src, &rel)?;
    if m.implied != [last] {
        bail!("expected only the last printed relation to be implied, got {:?}", m.implied);
    }
    Ok((m, printed_alone))
}

fn is_diagonal(c: &str) -> bool {
    (1..=M.len()).any(|i| c.starts_with(&format!("A_{{{i},{i}}}")) || c.starts_with(&format!("B_{{{i},{i}}}")))
}

/// The eight checks, run in parallel.
pub fn run(app: &Appendix) -> Vec<CheckReport> {
    type Check = fn(&Appendix) -> Result<usize>;
    let checks: [(&str, Check); 8] = [
        ("equations", equations),
        ("components", components),
        ("multidegrees", multidegrees),
        ("rmatrix-solve", rmatrix_solve),
        ("ybe-unitarity", rmatrix_relations),
        ("cyclicity", cyclicity),
        ("wheel", wheel),
        ("deformed-equations", deformed),
    ];
    checks
        .par_iter()
        .map(|(name, f)| CheckReport::run(name, INSTANCE, || f(app)))
        .collect()
}

/// Loads the fixtures and runs the suite; a parse failure counts as one
/// failing report.
pub fn run_embedded() -> Vec<CheckReport> {
    match Appendix::load() {
        Ok(app) => run(&app),
        Err(e) => vec![CheckReport::run("fixtures", INSTANCE, || Err(anyhow!(e)))],
    }
}
