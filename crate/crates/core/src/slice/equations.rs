use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{PolyMatrix, SliceModel, MAX_SIZE};
use crate::algebra::{Polynomial, VarSet};
use crate::error::{Error, Result};
use crate::report::Report;

/// Relations in the slice coordinates, in canonical order: leading
/// coefficient positive, duplicates removed, sorted by degree and text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSet {
    pub vars: VarSet,
    pub relations: Vec<Polynomial>,
}

impl EquationSet {
    fn canonical(vars: &VarSet, raw: impl IntoIterator<Item = Polynomial>) -> Self {
        let mut rel: Vec<(u32, String, Polynomial)> = Vec::new();
        for p in raw {
            if p.is_zero() {
                continue;
            }
            let p = match p.leading() {
                Some((_, c)) if *c < num_traits::Zero::zero() => -&p,
                _ => p,
            };
            rel.push((p.degree(), format!("{p}"), p));
        }
        rel.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        rel.dedup_by(|a, b| a.2 == b.2);
        EquationSet {
            vars: vars.clone(),
            relations: rel.into_iter().map(|r| r.2).collect(),
        }
    }

    /// Every relation is homogeneous for the torus and scaling weights of
    /// the coordinates. Parameters count as weight zero, so only
    /// undeformed sets pass in general.
    pub fn check_homogeneous(&self, model: &SliceModel) -> Result<()> {
        let nc = model.coords.len();
        let wv: Vec<Vec<i64>> = (0..nc).map(|c| model.weight_vector(c)).collect();
        let weight = |e: &[u16]| -> Vec<i64> {
            let mut w = alloc::vec![0i64; model.n() + 1];
            for (v, &x) in e.iter().enumerate().take(nc) {
                for (a, b) in w.iter_mut().zip(&wv[v]) {
                    *a += i64::from(x) * b;
                }
            }
            w
        };
        for r in &self.relations {
            let mut ws = r.terms().map(|(m, _)| weight(m.exps()));
            let first = ws.next();
            if ws.any(|w| Some(&w) != first.as_ref()) {
                return Err(Error::mismatch("homogeneity", format!("{r}"), "mixed weights"));
            }
        }
        Ok(())
    }
}

fn ell_partition(model: &SliceModel, ell: &[usize]) -> Result<Vec<usize>> {
    let size = model.size();
    if size > MAX_SIZE {
        return Err(Error::Unsupported(format!(
            "matrix size {size} exceeds {MAX_SIZE}"
        )));
    }
    let mut l: Vec<usize> = ell.iter().copied().filter(|&x| x > 0).collect();
    l.sort_unstable_by(|a, b| b.cmp(a));
    if l.iter().sum::<usize>() != size {
        return Err(Error::invalid(format!(
            "Jordan type {ell:?} does not partition {size}"
        )));
    }
    Ok(l)
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Conditions for `X = x_m + Y` to have Jordan type at most `ℓ`: the
/// entries of `X^L` when ℓ is rectangular with parts `L`, and otherwise
/// the minors bounding `rank X^s ≤ Σ_i max(ℓ_i − s, 0)`.
pub fn emit_equations(model: &SliceModel, ell: &[usize]) -> Result<EquationSet> {
    let l = ell_partition(model, ell)?;
    let x = model.matrix();
    let size = model.size();
    let top = l[0];
    if l.iter().all(|&p| p == top) {
        let p = x.pow(top as u32)?;
        return Ok(EquationSet::canonical(&model.vars, p.entries().cloned()));
    }
    let mut raw = Vec::new();
    let mut power = PolyMatrix::identity(&model.vars, size);
    for s in 1..=top {
        power = power.mul(&x)?;
        let bound: usize = l.iter().map(|&p| p.saturating_sub(s)).sum();
        if bound >= size {
            continue;
        }
        let r = bound + 1;
        let subsets = combinations(size, r);
        if subsets.len() * subsets.len() > 100_000 {
            return Err(Error::Unsupported(format!(
                "{} minors of size {r} are too many",
                subsets.len() * subsets.len()
            )));
        }
        for rows in &subsets {
            for cols in &subsets {
                raw.push(power.select(rows, cols).det()?);
            }
        }
    }
    Ok(EquationSet::canonical(&model.vars, raw))
}

/// `e_0, …, e_p` of the variables given.
pub fn elementary_symmetric(t: &[Polynomial], vars: &VarSet) -> Vec<Polynomial> {
    let mut e = alloc::vec![Polynomial::one(vars)];
    for x in t {
        let mut next = e.clone();
        next.push(Polynomial::zero(vars));
        for i in 1..next.len() {
            next[i] = &e.get(i).cloned().unwrap_or_else(|| Polynomial::zero(vars)) + &(&e[i - 1] * x);
        }
        e = next;
    }
    e
}

/// Entries of `∏_{a=1}^{L} (X − t_a) = Σ_i (−1)^i e_i X^{L−i}` for
/// rectangular ℓ with parts `L`. The model must carry `L` parameters.
pub fn emit_deformed_equations(model: &SliceModel, ell: &[usize]) -> Result<EquationSet> {
    let l = ell_partition(model, ell)?;
    let top = l[0];
    if l.iter().any(|&p| p != top) {
        return Err(Error::Unsupported(format!(
            "deformation is only modelled for rectangular Jordan types, got {ell:?}"
        )));
    }
    if model.params != top {
        return Err(Error::invalid(format!(
            "the model carries {} parameters, {top} needed",
            model.params
        )));
    }
    let p = deformed_polynomial(model, top)?;
    Ok(EquationSet::canonical(&model.vars, p.entries().cloned()))
}

fn deformed_polynomial(model: &SliceModel, top: usize) -> Result<PolyMatrix> {
    let x = model.matrix();
    let size = model.size();
    let t: Vec<Polynomial> = (1..=top).map(|a| model.parameter(a).expect("parameter")).collect();
    let e = elementary_symmetric(&t, &model.vars);
    let mut acc = PolyMatrix::zeros(&model.vars, size, size);
    let mut power = PolyMatrix::identity(&model.vars, size);
    for i in (0..=top).rev() {
        let c = if i % 2 == 0 { e[i].clone() } else { -&e[i] };
        acc = acc.add(&power.scale(&c))?;
        if i > 0 {
            power = power.mul(&x)?;
        }
    }
    Ok(acc)
}

/// The coordinate matrices `A` (second column of each block) and `B`
/// (first column) of a slice with all blocks of size 2.
pub fn two_block_matrices(model: &SliceModel) -> Result<(PolyMatrix, PolyMatrix)> {
    if model.m.iter().any(|&x| x != 2) {
        return Err(Error::invalid("A and B are defined for blocks of size 2"));
    }
    let n = model.n();
    let mut a = PolyMatrix::zeros(&model.vars, n, n);
    let mut b = PolyMatrix::zeros(&model.vars, n, n);
    for (v, c) in model.coords.iter().enumerate() {
        let target = if c.column == 2 { &mut a } else { &mut b };
        target.set(c.i, c.j, Polynomial::var(&model.vars, v));
    }
    Ok((a, b))
}

/// For blocks of size 2 and `X^4 = 0` (or its deformation), reordering the
/// basis turns `X` into `(0 1; B A)`. Given matrix relations `D1, D2, D3`
/// this checks
///
/// `P(X) = (D1, D3; D3·B, D2 + A·D3)`,
///
/// which shows the entries of `P(X)` and of `D1, D2, D3` generate the same
/// ideal.
pub fn verify_two_block_relations(
    model: &SliceModel,
    relations: [&PolyMatrix; 3],
    deformed: bool,
) -> Result<Report> {
    let (a, b) = two_block_matrices(model)?;
    let n = model.n();
    let p = if deformed {
        deformed_polynomial(model, 4)?
    } else {
        model.matrix().pow(4)?
    };
    let [d1, d2, d3] = relations;
    let blocks = [
        ("top left", d1.clone()),
        ("top right", d3.clone()),
        ("bottom left", d3.mul(&b)?),
        ("bottom right", d2.add(&a.mul(d3)?)?),
    ];
    let perm: Vec<usize> = (0..n).map(|i| 2 * i).chain((0..n).map(|i| 2 * i + 1)).collect();
    let mut cases = 0;
    for (q, (name, want)) in blocks.iter().enumerate() {
        let (ro, co) = ((q / 2) * n, (q % 2) * n);
        for i in 0..n {
            for j in 0..n {
                let got = p.get(perm[ro + i], perm[co + j]);
                if got != want.get(i, j) {
                    return Err(Error::mismatch(
                        "two-block relations",
                        format!("{name} ({}, {})", i + 1, j + 1),
                        format!("{got} vs {}", want.get(i, j)),
                    ));
                }
                cases += 1;
            }
        }
    }
    Ok(Report::new(
        "two-block relations",
        format!("m={:?}, deformed={deformed}", model.m),
        cases,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slice::{build_slice, intersect_with_n, SliceModel};

    #[test]
    fn trivial_cases() {
        let s = build_slice(&[1]).unwrap();
        let e = emit_equations(&s, &[1]).unwrap();
        assert_eq!(e.relations.len(), 1);
        assert_eq!(format!("{}", e.relations[0]), "A11");
        let n = intersect_with_n(&build_slice(&[1, 1]).unwrap());
        assert!(emit_equations(&n, &[2, 0]).unwrap().relations.is_empty());
    }

    #[test]
    fn rank_conditions() {
        // ℓ = (2,1) on the 3x3 strict upper triangle: X^2 has rank ≤ 0
        let n = intersect_with_n(&build_slice(&[1, 1, 1]).unwrap());
        let e = emit_equations(&n, &[2, 1]).unwrap();
        assert_eq!(e.relations.len(), 1);
        assert_eq!(format!("{}", e.relations[0]), "A12*A23");
        e.check_homogeneous(&n).unwrap();
    }

    #[test]
    fn deformation_at_zero_parameters() {
        let s = SliceModel::new(&[2, 2], crate::slice::Restriction::Full)
            .unwrap()
            .with_parameters(2);
        let d = emit_deformed_equations(&s, &[2, 2]).unwrap();
        let mut sub = crate::algebra::Substitution::identity(&s.vars);
        for a in 1..=2 {
            sub.set(s.coords.len() + a - 1, Polynomial::zero(&s.vars)).unwrap();
        }
        let at_zero: Vec<_> = d.relations.iter().map(|r| r.substitute(&sub).unwrap()).collect();
        let plain = emit_equations(&s, &[2, 2]).unwrap();
        assert_eq!(EquationSet::canonical(&s.vars, at_zero), plain);
        plain.check_homogeneous(&s).unwrap();
    }
}
