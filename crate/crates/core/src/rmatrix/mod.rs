//! Fundamental and fused R-matrices, the families of exchange operators
//! acting on whole tensor products, and the identities between them.

mod family;
mod route;
mod solve;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::algebra::{Operator, Polynomial, RationalFunction, VarSet};
use crate::error::{Error, Result};

pub use family::{embed_local, ExchangeFamily, FixtureFamily, StandardFamily};
pub use route::{verify_comm, verify_unitarity, verify_ybe, Route};
pub(crate) use route::compare_operators;
pub use solve::{solve_local_rmatrix, solve_rmatrix_from_exchange, ExchangeCase, LocalSolution};

/// Pair of wedge labels `(S, T)` for `Λ^a ⊗ Λ^b`.
pub type PairLabel = (Vec<u16>, Vec<u16>);

/// Ř acting from `Λ^a C^k ⊗ Λ^b C^k` to `Λ^b C^k ⊗ Λ^a C^k`, with entries
/// in the spectral variable `z` and ħ. Rows are target labels.
#[derive(Clone, Debug)]
pub struct ROperator {
    pub k: usize,
    pub a: usize,
    pub b: usize,
    source: Vec<PairLabel>,
    target: Vec<PairLabel>,
    matrix: Operator,
    columns: Vec<Vec<(usize, RationalFunction)>>,
}

/// Sorted subsets of `{1..=k}` of the given size, in lexicographic order.
pub fn wedge_basis(k: usize, size: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: u16, k: u16, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for x in start..=k {
            cur.push(x);
            go(x + 1, k, left - 1, cur, out);
            cur.pop();
        }
    }
    go(1, k as u16, size, &mut cur, &mut out);
    out
}

pub(crate) fn pair_basis(k: usize, a: usize, b: usize) -> Vec<PairLabel> {
    let left = wedge_basis(k, a);
    let right = wedge_basis(k, b);
    let mut out = Vec::with_capacity(left.len() * right.len());
    for s in &left {
        for t in &right {
            out.push((s.clone(), t.clone()));
        }
    }
    out
}

pub(crate) fn pair_content(p: &PairLabel, k: usize) -> Vec<u8> {
    let mut c = vec![0u8; k];
    for &x in p.0.iter().chain(&p.1) {
        c[x as usize - 1] += 1;
    }
    c
}

impl ROperator {
    /// Wraps a matrix, checking shapes and weight preservation.
    pub fn new(k: usize, a: usize, b: usize, matrix: Operator) -> Result<Self> {
        let source = pair_basis(k, a, b);
        let target = pair_basis(k, b, a);
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(Error::invalid(format!(
                "R-matrix for ({a},{b}) must be {}x{}",
                target.len(),
                source.len()
            )));
        }
        let mut columns = vec![Vec::new(); source.len()];
        for (r, t) in target.iter().enumerate() {
            for (c, x) in matrix.row(r) {
                if pair_content(t, k) != pair_content(&source[*c], k) {
                    return Err(Error::Inconsistent(format!(
                        "entry {t:?} <- {:?} breaks weight preservation",
                        source[*c]
                    )));
                }
                columns[*c].push((r, x.clone()));
            }
        }
        Ok(ROperator {
            k,
            a,
            b,
            source,
            target,
            matrix,
            columns,
        })
    }

    pub fn source(&self) -> &[PairLabel] {
        &self.source
    }

    pub fn target(&self) -> &[PairLabel] {
        &self.target
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    /// Nonzero entries of column `c` as `(row, value)`.
    pub fn column(&self, c: usize) -> &[(usize, RationalFunction)] {
        &self.columns[c]
    }

    pub fn source_index(&self, p: &PairLabel) -> Option<usize> {
        self.source.binary_search(p).ok()
    }

    pub fn target_index(&self, p: &PairLabel) -> Option<usize> {
        self.target.binary_search(p).ok()
    }

    /// Entry between two labels (zero when absent).
    pub fn entry(&self, target: &PairLabel, source: &PairLabel) -> Result<RationalFunction> {
        let r = self
            .target_index(target)
            .ok_or_else(|| Error::invalid(format!("unknown target label {target:?}")))?;
        let c = self
            .source_index(source)
            .ok_or_else(|| Error::invalid(format!("unknown source label {source:?}")))?;
        Ok(self.matrix.get(r, c))
    }
}

fn spectral_z(v: &VarSet) -> Polynomial {
    Polynomial::var(v, 0)
}

/// `z + units·(ħ/2)` in the spectral context.
fn z_plus_half_hbar(v: &VarSet, units: i64) -> Polynomial {
    &spectral_z(v) + &Polynomial::var(v, v.h()).scale(&crate::algebra::q(units))
}

/// The two coefficients of `Ř(x) = (ħ − xP)/(ħ + x)`: the diagonal part
/// `ħ/(ħ+x)` and the permutation part `−x/(ħ+x)`.
fn fundamental_coefficients(x: &Polynomial) -> Result<(RationalFunction, RationalFunction)> {
    let v = x.vars();
    let hb = Polynomial::hbar(v);
    let den = &hb + x;
    let id = RationalFunction::from_poly(hb).div_linear(&den)?;
    let perm = RationalFunction::from_poly(-x).div_linear(&den)?;
    Ok((id, perm))
}

/// `Ř(z) = (ħ − zP)/(ħ + z)` on `C^k ⊗ C^k`.
pub fn fundamental_rcheck(k: usize) -> Result<ROperator> {
    if k < 2 {
        return Err(Error::invalid("k must be at least 2"));
    }
    let v = VarSet::spectral();
    let (id, perm) = fundamental_coefficients(&spectral_z(&v))?;
    let basis = pair_basis(k, 1, 1);
    let mut m = Operator::zeros(&v, basis.len(), basis.len());
    for (c, (s, t)) in basis.iter().enumerate() {
        let swapped = (t.clone(), s.clone());
        let r = basis.binary_search(&swapped).expect("pair basis is complete");
        if r == c {
            m.set(r, c, &id + &perm)?;
        } else {
            m.set(c, c, id.clone())?;
            m.set(r, c, perm.clone())?;
        }
    }
    ROperator::new(k, 1, 1, m)
}

/// `∏_{j=1}^{min(a,b)} (jħ − z)/(jħ + z)`.
pub fn normalization_factor(a: usize, b: usize) -> Result<RationalFunction> {
    let v = VarSet::spectral();
    let z = spectral_z(&v);
    let mut out = RationalFunction::one(&v);
    for j in 1..=a.min(b) as i64 {
        let jh = Polynomial::hbar(&v).scale(&crate::algebra::q(j));
        out = out.mul_poly(&(&jh - &z))?.div_linear(&(&jh + &z))?;
    }
    Ok(out)
}

/// Orderings of `s` with the signs of the permutations.
pub(crate) fn signed_orderings(s: &[u16]) -> Vec<(Vec<u16>, i8)> {
    if s.len() <= 1 {
        return vec![(s.to_vec(), 1)];
    }
    let mut out = Vec::new();
    for i in 0..s.len() {
        let mut rest = s.to_vec();
        let first = rest.remove(i);
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for (mut tail, sg) in signed_orderings(&rest) {
            let mut w = Vec::with_capacity(s.len());
            w.push(first);
            w.append(&mut tail);
            out.push((w, sign * sg));
        }
    }
    out
}

/// Sorts a word, returning the sign of the sorting permutation, or `None`
/// when a letter repeats.
pub(crate) fn sort_with_sign(w: &[u16]) -> Option<(Vec<u16>, i8)> {
    let mut v = w.to_vec();
    let mut sign = 1i8;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((v, sign))
}

type WordVector = BTreeMap<Vec<u16>, RationalFunction>;

fn add_into(acc: &mut WordVector, w: Vec<u16>, x: RationalFunction) -> Result<()> {
    match acc.get_mut(&w) {
        Some(y) => {
            *y = y.try_add(&x)?;
            if y.is_zero() {
                acc.remove(&w);
            }
        }
        None => {
            if !x.is_zero() {
                acc.insert(w, x);
            }
        }
    }
    Ok(())
}

/// Ř for `Λ^a ⊗ Λ^b`, fused from `ab` fundamental ones.
///
/// The factor `Λ^a` is embedded in `(C^k)^{⊗a}` by signed sums over
/// orderings, with spectral parameters `z − (a−1)/2·ħ, …, z + (a−1)/2·ħ`;
/// the fundamental Ř's move those slots past the `b` slots of the other
/// factor, and the result is read off on sorted representatives after
/// checking that it is antisymmetric within each new group.
///
/// This is the normalization under which fused Ψ vectors satisfy the
/// exchange relation. For `a = b` it agrees with [`normalization_factor`]
/// on the extremal weight; for `a ≠ b` see [`fused_rcheck_normalized`].
pub fn fused_rcheck(k: usize, a: usize, b: usize) -> Result<ROperator> {
    fused_raw(k, a, b)
}

/// [`fused_rcheck`] rescaled so that its eigenvalue on the extremal weight
/// `({1..a}, {1..b})` is [`normalization_factor`].
pub fn fused_rcheck_normalized(k: usize, a: usize, b: usize) -> Result<ROperator> {
    let raw = fused_raw(k, a, b)?;
    let ratio = extremal_ratio(&raw)?;
    if ratio.as_constant().is_some_and(|c| c.is_one()) {
        return Ok(raw);
    }
    ROperator::new(k, a, b, raw.matrix.scale(&ratio)?)
}

/// Ratio between the prescribed normalization and the raw fused matrix on
/// the extremal weight. It is 1 when fusion already produces the
/// geometric normalization.
pub fn fused_rescaling(k: usize, a: usize, b: usize) -> Result<RationalFunction> {
    extremal_ratio(&fused_raw(k, a, b)?)
}

fn extremal_ratio(raw: &ROperator) -> Result<RationalFunction> {
    let (a, b) = (raw.a, raw.b);
    let s: Vec<u16> = (1..=a as u16).collect();
    let t: Vec<u16> = (1..=b as u16).collect();
    let e = raw.entry(&(t.clone(), s.clone()), &(s, t))?;
    normalization_factor(a, b)?.try_div(&e)
}

/// The unnormalized fused matrix.
fn fused_raw(k: usize, a: usize, b: usize) -> Result<ROperator> {
    if a == 0 || b == 0 || a > k || b > k {
        return Err(Error::invalid(format!(
            "fused R-matrix needs 1 <= a, b <= k, got a = {a}, b = {b}, k = {k}"
        )));
    }
    let v = VarSet::spectral();
    // (group, index) of each slot; the spectral shift of (g, c) in units of
    // ħ/2 is 2c − size(g) − 1
    let mut arr: Vec<(u8, i64)> = (1..=a as i64)
        .map(|c| (0, c))
        .chain((1..=b as i64).map(|d| (1, d)))
        .collect();
    let shift = |(g, c): (u8, i64)| 2 * c - if g == 0 { a as i64 } else { b as i64 } - 1;
    let mut swaps = Vec::new();
    for d in 0..b {
        for p in (d..a + d).rev() {
            let x = z_plus_half_hbar(&v, shift(arr[p]) - shift(arr[p + 1]));
            swaps.push((p, fundamental_coefficients(&x)?));
            arr.swap(p, p + 1);
        }
    }
    let source = pair_basis(k, a, b);
    let target = pair_basis(k, b, a);
    let mut m = Operator::zeros(&v, target.len(), source.len());
    for (c, (s, t)) in source.iter().enumerate() {
        let mut vec: WordVector = BTreeMap::new();
        for (ws, gs) in signed_orderings(s) {
            for (wt, gt) in signed_orderings(t) {
                let mut w = ws.clone();
                w.extend_from_slice(&wt);
                let sign = crate::algebra::q(i64::from(gs * gt));
                vec.insert(w, RationalFunction::constant(&v, sign));
            }
        }
        for (p, (id, perm)) in &swaps {
            let mut next: WordVector = BTreeMap::new();
            for (w, x) in &vec {
                add_into(&mut next, w.clone(), x.try_mul(id)?)?;
                let mut sw = w.clone();
                sw.swap(*p, p + 1);
                add_into(&mut next, sw, x.try_mul(perm)?)?;
            }
            vec = next;
        }
        // antisymmetry within the new groups (first b letters, last a)
        for (w, x) in &vec {
            let left = sort_with_sign(&w[..b]);
            let right = sort_with_sign(&w[b..]);
            let ok = match (left, right) {
                (Some((l, gl)), Some((r, gr))) => {
                    let mut rep = l;
                    rep.extend_from_slice(&r);
                    let y = vec
                        .get(&rep)
                        .cloned()
                        .unwrap_or_else(|| RationalFunction::zero(&v));
                    y.scale(&crate::algebra::q(i64::from(gl * gr))).equals(x)
                }
                _ => false,
            };
            if !ok {
                return Err(Error::Inconsistent(format!(
                    "fused image of {s:?}⊗{t:?} is not antisymmetric at word {w:?}"
                )));
            }
        }
        for (r, (t2, s2)) in target.iter().enumerate() {
            let mut rep = t2.clone();
            rep.extend_from_slice(s2);
            if let Some(x) = vec.get(&rep) {
                m.set(r, c, x.clone())?;
            }
        }
    }
    ROperator::new(k, a, b, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_rf, Substitution};

    fn at(r: &RationalFunction, x: Polynomial) -> RationalFunction {
        let mut s = Substitution::identity(r.vars());
        s.set(0, x).unwrap();
        r.substitute(&s).unwrap()
    }

    #[test]
    fn fundamental_entries() {
        let r = fundamental_rcheck(3).unwrap();
        let v = VarSet::spectral();
        let aa = (vec![2], vec![2]);
        assert_eq!(
            r.entry(&aa, &aa).unwrap(),
            parse_rf("(\\hbar - z)/(\\hbar + z)", &v).unwrap()
        );
        let e = r.entry(&(vec![2], vec![1]), &(vec![1], vec![2])).unwrap();
        assert_eq!(e, parse_rf("-z/(\\hbar + z)", &v).unwrap());
        let zero = Polynomial::zero(&v);
        let id = r.matrix().clone();
        for i in 0..9 {
            for j in 0..9 {
                let x = at(&id.get(i, j), zero.clone());
                assert_eq!(x.as_constant().unwrap(), crate::algebra::q((i == j) as i64));
            }
        }
    }

    #[test]
    fn normalization_values() {
        let v = VarSet::spectral();
        assert_eq!(
            normalization_factor(1, 1).unwrap(),
            parse_rf("(\\hbar - z)/(\\hbar + z)", &v).unwrap()
        );
        assert_eq!(
            normalization_factor(2, 3).unwrap(),
            parse_rf("(\\hbar-z)(2\\hbar-z)/((\\hbar+z)(2\\hbar+z))", &v).unwrap()
        );
        let f = normalization_factor(2, 2).unwrap();
        let g = at(&f, -&Polynomial::var(&v, 0));
        assert!(f.try_mul(&g).unwrap().as_constant().unwrap().is_one());
    }

    #[test]
    fn fused_one_one_is_fundamental() {
        let f = fused_rcheck(3, 1, 1).unwrap();
        assert_eq!(f.matrix(), fundamental_rcheck(3).unwrap().matrix());
    }

    #[test]
    fn fused_rescaling_is_trivial() {
        for (a, b) in [(2, 2), (3, 3)] {
            let r = fused_rescaling(4, a, b).unwrap();
            assert!(r.as_constant().is_some_and(|c| c.is_one()), "({a},{b}): {r}");
        }
    }

    #[test]
    fn mixed_extremal_eigenvalue() {
        // on the extremal weight the fused matrix acts by
        // ± ∏_j ((j + |a−b|/2)ħ − z)/((j + |a−b|/2)ħ + z)
        let v = VarSet::spectral();
        for (a, b, sign) in [(1, 2, -1), (2, 1, -1), (1, 3, 1), (2, 3, 1)] {
            let r = fused_rcheck(4, a, b).unwrap();
            let s: Vec<u16> = (1..=a as u16).collect();
            let t: Vec<u16> = (1..=b as u16).collect();
            let e = r.entry(&(t.clone(), s.clone()), &(s, t)).unwrap();
            let mut want = RationalFunction::constant(&v, crate::algebra::q(sign));
            let off = a.abs_diff(b) as i64;
            for j in 1..=a.min(b) as i64 {
                let c = Polynomial::var(&v, v.h()).scale(&crate::algebra::q(2 * j + off));
                let z = Polynomial::var(&v, 0);
                want = want.mul_poly(&(&c - &z)).unwrap().div_linear(&(&c + &z)).unwrap();
            }
            assert_eq!(e, want, "({a},{b})");
            let n = fused_rcheck_normalized(4, a, b).unwrap();
            assert_eq!(
                n.entry(&(r.target()[0].clone()), &r.source()[0]).unwrap(),
                normalization_factor(a, b).unwrap()
            );
        }
    }

    #[test]
    fn orderings_and_signs() {
        let o = signed_orderings(&[1, 2, 3]);
        assert_eq!(o.len(), 6);
        for (w, s) in o {
            assert_eq!(sort_with_sign(&w), Some((vec![1, 2, 3], s)));
        }
        assert_eq!(sort_with_sign(&[2, 2]), None);
    }
}
