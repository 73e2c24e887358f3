use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::{
    LinearForm, Operator, Polynomial, RationalFunction, Substitution, UniPoly, UniRat, VarSet, Q,
};
use crate::combinatorics::{Basis, SubsetSequence};
use crate::error::{Error, Result};
use crate::qkz::PsiVector;

use super::{embed_local, pair_basis, pair_content, PairLabel, ROperator};

/// Coefficients in the variable `u` of a polynomial with no other
/// variables left except those grouped out by the caller.
fn to_unipoly(p: &Polynomial, u: usize) -> UniPoly {
    let mut c: Vec<Q> = Vec::new();
    for (m, x) in p.terms() {
        let e = m.exps()[u] as usize;
        if c.len() <= e {
            c.resize(e + 1, Q::zero());
        }
        c[e] += x;
    }
    UniPoly::new(c)
}

/// Back from `Q(u)` (at h = 1) to a degree-zero homogeneous rational
/// function of the spectral variable and ħ.
fn homogenize(r: &UniRat, spectral: &VarSet) -> Result<RationalFunction> {
    if r.is_zero() {
        return Ok(RationalFunction::zero(spectral));
    }
    let (roots, cofactor) = r.den().integer_roots();
    if cofactor.degree() != Some(0) {
        return Err(Error::Unsupported(format!(
            "solved entry has a denominator that does not split into z + a·ħ/2: {:?}",
            cofactor
        )));
    }
    let d = roots.len();
    let n = r.num().degree().unwrap_or(0);
    if n > d {
        return Err(Error::Inconsistent(
            "solved entry is not homogeneous of degree zero".into(),
        ));
    }
    let scale = Q::one() / cofactor.lead();
    let mut num = Polynomial::zero(spectral);
    for (j, c) in r.num().coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut e = vec![0u16; spectral.width()];
        e[0] = j as u16;
        e[spectral.h()] = (d - j) as u16;
        num = &num + &Polynomial::from_terms(spectral, [(e, c * &scale)])?;
    }
    let mut out = RationalFunction::from_poly(num);
    for root in roots {
        // u − root at h = 1 is z − root·h
        let (s, f) = LinearForm::new(-root, Some(0), None).expect("nonzero form");
        out = out.div_form(&f).scale(&(Q::one() / s));
    }
    Ok(out)
}

/// Row reduction of `[C | D]` over `Q(u)`; returns the solution `X` of
/// `C X = D` when `C` has full column rank and the system is consistent.
fn solve_system(mut rows: Vec<Vec<UniRat>>, unknowns: usize) -> Result<Vec<Vec<UniRat>>> {
    let width = rows.first().map_or(unknowns, Vec::len);
    let mut rank = 0;
    let mut pivots = Vec::new();
    for c in 0..unknowns {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = UniRat::from_poly(UniPoly::constant(Q::one())).div(&rows[rank][c])?;
        for j in c..width {
            rows[rank][j] = rows[rank][j].mul(&inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for j in c..width {
                    let t = rows[rank][j].mul(&f);
                    rows[r][j] = rows[r][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if rank < unknowns {
        return Err(Error::Underdetermined(format!(
            "the Ψ components only determine {rank} of {unknowns} unknowns"
        )));
    }
    for row in &rows[rank..] {
        if row[unknowns..].iter().any(|x| !x.is_zero()) {
            return Err(Error::Inconsistent(
                "no R-matrix depending on z_i − z_{i+1} and ħ alone solves the exchange relation"
                    .into(),
            ));
        }
    }
    let rhs = width - unknowns;
    let mut x = vec![vec![UniRat::zero(); rhs]; unknowns];
    for (r, &c) in pivots.iter().enumerate() {
        for g in 0..rhs {
            x[c][g] = rows[r][unknowns + g].clone();
        }
    }
    Ok(x)
}

/// Solves `Ψ'(…, z_{i+1}, z_i, …) = Ř(z_i − z_{i+1}) Ψ(z)` for Ř, where
/// `Ψ'` is the vector for the block sizes with entries `i`, `i + 1`
/// exchanged (equal to `Ψ` when those sizes agree). `i` is 1-based.
///
/// The ansatz is that the entries depend only on `u = z_i − z_{i+1}` and
/// ħ: after `z_i ↦ z_{i+1} + u` and `ħ ↦ 2`, the identity is split along
/// the monomials in the remaining variables and solved over `Q(u)`. The
/// result is then checked symbolically against the original identity.
pub fn solve_rmatrix_from_exchange(
    vars: &VarSet,
    psi: &[Polynomial],
    psi_swapped: &[Polynomial],
    i: usize,
) -> Result<Operator> {
    if i == 0 || i >= vars.len() {
        return Err(Error::invalid(format!("slot {i} has no right neighbour")));
    }
    let (p, qv) = (i - 1, i);
    let mut sub = Substitution::identity(vars);
    sub.set(p, &Polynomial::var(vars, p) + &Polynomial::var(vars, qv))?;
    sub.set(vars.h(), Polynomial::one(vars))?;
    let lhs = psi_swapped
        .iter()
        .map(|x| x.swap(p, qv).substitute(&sub))
        .collect::<Result<Vec<_>>>()?;
    let rhs = psi
        .iter()
        .map(|x| x.substitute(&sub))
        .collect::<Result<Vec<_>>>()?;
    // outer monomial -> (coefficients for each β, coefficients for each γ)
    let d = rhs.len();
    let g = lhs.len();
    let mut eqs: BTreeMap<Vec<u16>, Vec<UniRat>> = BTreeMap::new();
    let blank = || vec![UniRat::zero(); d + g];
    for (b, x) in rhs.iter().enumerate() {
        for (outer, inner) in x.collect_by(&[p]) {
            eqs.entry(outer).or_insert_with(blank)[b] = UniRat::from_poly(to_unipoly(&inner, p));
        }
    }
    for (c, x) in lhs.iter().enumerate() {
        for (outer, inner) in x.collect_by(&[p]) {
            eqs.entry(outer).or_insert_with(blank)[d + c] =
                UniRat::from_poly(to_unipoly(&inner, p));
        }
    }
    let solution = solve_system(eqs.into_values().collect(), d)?;
    let spectral = VarSet::spectral();
    let mut out = Operator::zeros(&spectral, g, d);
    for (b, col) in solution.iter().enumerate() {
        for (c, x) in col.iter().enumerate() {
            out.set(c, b, homogenize(x, &spectral)?)?;
        }
    }
    check_solution(vars, &out, psi, psi_swapped, i)?;
    Ok(out)
}

/// A local Ř solved from exchange relations, with the source pairs no
/// case ever exercised. Their columns are left at zero.
#[derive(Clone, Debug)]
pub struct LocalSolution {
    pub rcheck: ROperator,
    pub free_columns: Vec<PairLabel>,
}

/// One exchange relation `τ_i Ψ' = Ř_i Ψ`: the vector, the vector for the
/// sizes with slots `i`, `i + 1` exchanged, and the 1-based slot.
pub type ExchangeCase<'a> = (&'a PsiVector, &'a PsiVector, usize);

/// Solves for the two-factor Ř on `Λ^a ⊗ Λ^b` shared by every case,
/// rather than for an operator on each Ψ basis. Unknowns are the
/// weight-preserving entries; each is a function of the spectral argument
/// alone. The result is checked against every case symbolically.
pub fn solve_local_rmatrix(k: usize, a: usize, b: usize, cases: &[ExchangeCase]) -> Result<LocalSolution> {
    let (source, target) = (pair_basis(k, a, b), pair_basis(k, b, a));
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    for (c, s) in source.iter().enumerate() {
        for (r, t) in target.iter().enumerate() {
            if pair_content(s, k) == pair_content(t, k) {
                unknowns.push((r, c));
            }
        }
    }
    let n = unknowns.len();
    let mut seen = vec![false; source.len()];
    let mut eqs: BTreeMap<(usize, usize, Vec<u16>), Vec<UniRat>> = BTreeMap::new();
    let blank_row = || vec![UniRat::zero(); n + 1];
    for (ci, &(psi, swapped, i)) in cases.iter().enumerate() {
        if psi.k != k || swapped.k != k || psi.basis != Basis::Standard || swapped.basis != Basis::Standard {
            return Err(Error::invalid("cases must be standard-basis vectors of rank k"));
        }
        let (p, q) = (i - 1, i);
        if i == 0 || q >= psi.sizes.len() || psi.sizes[p] != a || psi.sizes[q] != b {
            return Err(Error::invalid(format!("slot {i} of {:?} does not carry ({a},{b})", psi.sizes)));
        }
        let vars = &psi.vars;
        let mut sub = Substitution::identity(vars);
        sub.set(p, &Polynomial::var(vars, p) + &Polynomial::var(vars, q))?;
        sub.set(vars.h(), Polynomial::one(vars))?;
        for (g, y) in swapped.entries.iter().enumerate() {
            for (outer, inner) in y.swap(p, q).substitute(&sub)?.collect_by(&[p]) {
                eqs.entry((ci, g, outer)).or_insert_with(blank_row)[n] =
                    UniRat::from_poly(to_unipoly(&inner, p));
            }
        }
        for (l, x) in psi.labels.iter().zip(&psi.entries) {
            let sets = l.sets();
            let pair = (sets[p].clone(), sets[q].clone());
            let c = source.binary_search(&pair).map_err(|_| Error::invalid("label outside the pair basis"))?;
            seen[c] = true;
            let x = x.substitute(&sub)?.collect_by(&[p]);
            for (u, &(r, _)) in unknowns.iter().enumerate().filter(|(_, uc)| uc.1 == c) {
                let mut new = sets.to_vec();
                new[p] = target[r].0.clone();
                new[q] = target[r].1.clone();
                let Some(g) = swapped.index_of(&SubsetSequence::from_sorted(new)) else {
                    continue;
                };
                for (outer, inner) in &x {
                    let row = eqs.entry((ci, g, outer.clone())).or_insert_with(blank_row);
                    row[u] = row[u].add(&UniRat::from_poly(to_unipoly(inner, p)));
                }
            }
        }
    }
    // unknowns in columns no case reaches are fixed to zero
    let mut rows: Vec<Vec<UniRat>> = eqs.into_values().collect();
    for (u, &(_, c)) in unknowns.iter().enumerate() {
        if !seen[c] {
            let mut row = blank_row();
            row[u] = UniRat::from_poly(UniPoly::constant(Q::one()));
            rows.push(row);
        }
    }
    let x = solve_system(rows, n)?;
    let spectral = VarSet::spectral();
    let mut m = Operator::zeros(&spectral, target.len(), source.len());
    for (u, &(r, c)) in unknowns.iter().enumerate() {
        m.set(r, c, homogenize(&x[u][0], &spectral)?)?;
    }
    let rcheck = ROperator::new(k, a, b, m)?;
    for &(psi, swapped, i) in cases {
        let arg = &Polynomial::var(&psi.vars, i - 1) - &Polynomial::var(&psi.vars, i);
        let op = embed_local(&rcheck, &psi.vars, &psi.labels, &swapped.labels, i - 1, &arg)?;
        let v: Vec<RationalFunction> = psi.entries.iter().cloned().map(RationalFunction::from_poly).collect();
        for (g, (x, y)) in op.apply(&v)?.iter().zip(&swapped.entries).enumerate() {
            if !x.equals(&RationalFunction::from_poly(y.swap(i - 1, i))) {
                return Err(Error::mismatch(
                    "exchange",
                    format!("{}", swapped.labels[g]),
                    "solved local R-matrix fails the exchange relation",
                ));
            }
        }
    }
    let free_columns = source.iter().zip(&seen).filter(|(_, s)| !**s).map(|(p, _)| p.clone()).collect();
    Ok(LocalSolution { rcheck, free_columns })
}

fn check_solution(
    vars: &VarSet,
    r: &Operator,
    psi: &[Polynomial],
    psi_swapped: &[Polynomial],
    i: usize,
) -> Result<()> {
    let spectral = VarSet::spectral();
    let mut sub = Substitution::into_context(&spectral, vars);
    sub.set(0, &Polynomial::var(vars, i - 1) - &Polynomial::var(vars, i))?;
    sub.set(spectral.h(), Polynomial::var(vars, vars.h()))?;
    let embedded = r.substitute(&sub)?;
    let v: Vec<RationalFunction> = psi.iter().cloned().map(RationalFunction::from_poly).collect();
    let got = embedded.apply(&v)?;
    for (c, (x, y)) in got.iter().zip(psi_swapped).enumerate() {
        let want = RationalFunction::from_poly(y.swap(i - 1, i));
        if !x.equals(&want) {
            return Err(Error::mismatch(
                "exchange",
                format!("row {}", c + 1),
                "solved R-matrix fails the exchange relation",
            ));
        }
    }
    Ok(())
}
