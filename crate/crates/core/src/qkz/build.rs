use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::packed::{PackedPoly, MAX_WIDTH};
use crate::algebra::{Polynomial, Substitution, VarSet, Q};
use crate::combinatorics::{enumerate_standard_labels, Basis, SubsetSequence};
use crate::error::{Error, Result};
use crate::rmatrix::signed_orderings;

use super::PsiVector;

fn word(l: &SubsetSequence) -> Vec<u16> {
    l.sets().iter().map(|s| s[0]).collect()
}

fn inversions(w: &[u16]) -> usize {
    let mut n = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                n += 1;
            }
        }
    }
    n
}

/// `ħ + z_i − z_j` (0-based slots).
fn hbar_plus(vars: &VarSet, i: usize, j: usize) -> Polynomial {
    &(&Polynomial::hbar(vars) + &Polynomial::var(vars, i)) - &Polynomial::var(vars, j)
}

/// The label `(1^{λ_1}, 2^{λ_2}, …)` and its entry `∏ (ħ + z_i − z_j)`
/// over pairs of slots carrying the same letter.
pub fn extreme_component(lambda: &[usize]) -> Result<(SubsetSequence, Polynomial)> {
    if lambda.windows(2).any(|p| p[0] < p[1]) {
        return Err(Error::invalid(format!("λ = {lambda:?} is not dominant")));
    }
    let m: usize = lambda.iter().sum();
    let vars = VarSet::indexed(m);
    let mut sets = Vec::with_capacity(m);
    let mut pairs = Vec::new();
    let mut start = 0;
    for (a, &l) in lambda.iter().enumerate() {
        for i in start..start + l {
            sets.push(vec![a as u16 + 1]);
            pairs.extend((i + 1..start + l).map(|j| (i, j)));
        }
        start += l;
    }
    let packed = (vars.width() <= MAX_WIDTH).then(|| {
        let h = vars.h();
        pairs.iter().try_fold(PackedPoly::linear(vars.width(), 1, &[]), |p, &(i, j)| {
            p.mul(&PackedPoly::linear(vars.width(), 0, &[(2, h), (1, i), (-1, j)]))
        })
    });
    let poly = match packed.flatten() {
        Some(p) => p.to_poly(&vars),
        None => pairs
            .iter()
            .fold(Polynomial::one(&vars), |p, &(i, j)| &p * &hbar_plus(&vars, i, j)),
    };
    Ok((SubsetSequence::new(sets)?, poly))
}

/// Entry at `s_i β′` from the entry at `β′` (0-based slot `i`).
fn propagate(vars: &VarSet, prev: &Polynomial, i: usize) -> Result<Polynomial> {
    let swapped = prev.swap(i, i + 1);
    let num = &(&Polynomial::hbar(vars) * prev) - &(&hbar_plus(vars, i, i + 1) * &swapped);
    let den = &Polynomial::var(vars, i) - &Polynomial::var(vars, i + 1);
    num.exact_div(&den)
}

/// Entry at `s_i β′` in packed arithmetic; `None` on a remainder or an
/// overflow, which the generic path then reports or handles.
fn propagate_packed(h: usize, prev: &PackedPoly, i: usize) -> Option<PackedPoly> {
    let width = h + 1;
    let swapped = prev.swap(i, i + 1);
    let hbar = PackedPoly::linear(width, 0, &[(2, h)]);
    let plus = PackedPoly::linear(width, 0, &[(2, h), (1, i), (-1, i + 1)]);
    let num = hbar.mul(prev)?.sub(&plus.mul(&swapped)?)?;
    num.div_linear(i, &[(-1, i + 1)])
}

/// Labels in propagation order with the descents of their words.
fn schedule(labels: &[SubsetSequence]) -> Vec<(usize, Vec<usize>)> {
    let words: Vec<Vec<u16>> = labels.iter().map(word).collect();
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by_key(|&b| (inversions(&words[b]), b));
    order
        .into_iter()
        .map(|b| {
            let w = &words[b];
            let d = (0..w.len().saturating_sub(1)).filter(|&i| w[i] > w[i + 1]).collect();
            (b, d)
        })
        .collect()
}

/// The propagation in packed arithmetic, or `None` if anything needs the
/// generic path.
fn build_packed(
    h: usize,
    labels: &[SubsetSequence],
    seed: &Polynomial,
) -> Option<Vec<PackedPoly>> {
    let seed = PackedPoly::from_poly(seed)?;
    let mut entries: Vec<Option<PackedPoly>> = vec![None; labels.len()];
    for (b, descents) in schedule(labels) {
        let via = |i: usize| -> Option<PackedPoly> {
            let p = labels.binary_search(&labels[b].swapped(i)).ok()?;
            propagate_packed(h, entries[p].as_ref()?, i)
        };
        let value = match (descents.first(), descents.last()) {
            (None, _) => seed.clone(),
            (Some(&first), Some(&last)) => {
                let v = via(first)?;
                if last != first && via(last)? != v {
                    return None;
                }
                v
            }
            _ => unreachable!(),
        };
        entries[b] = Some(value);
    }
    Some(entries.into_iter().map(|e| e.expect("all labels built")).collect())
}

/// The packed form of [`check_adjacent_equal`]; `false` leaves the verdict
/// and the error message to the generic check.
fn adjacent_equal_packed(h: usize, labels: &[SubsetSequence], entries: &[PackedPoly]) -> bool {
    labels.iter().zip(entries).all(|(l, e)| {
        let w = word(l);
        (0..w.len().saturating_sub(1)).filter(|&i| w[i] == w[i + 1]).all(|i| {
            e.div_linear(i, &[(2, h), (-1, i + 1)])
                .is_some_and(|q| q.swap(i, i + 1) == q)
        })
    })
}

/// Ψ in the fundamental case `m = (1, …, 1)`, built from the extreme
/// component by the exchange relation with the fundamental Ř.
pub fn build_psi_fundamental(k: usize, lambda: &[usize]) -> Result<PsiVector> {
    if lambda.len() > k {
        return Err(Error::invalid(format!("λ has more than k = {k} rows")));
    }
    let (seed_label, seed) = extreme_component(lambda)?;
    let m = seed_label.len();
    let sizes = vec![1; m];
    let vars = VarSet::indexed(m);
    let labels = enumerate_standard_labels(k, lambda, &sizes);
    let increasing: Vec<&SubsetSequence> =
        labels.iter().filter(|l| inversions(&word(l)) == 0).collect();
    if increasing != [&seed_label] {
        return Err(Error::invalid("the extreme label is not the only weakly increasing one"));
    }
    let (entries, checked) = match build_packed(vars.h(), &labels, &seed) {
        Some(e) => {
            let ok = adjacent_equal_packed(vars.h(), &labels, &e);
            (e.iter().map(|p| p.to_poly(&vars)).collect(), ok)
        }
        None => (build_generic(&labels, &seed, &vars)?, false),
    };
    let psi = PsiVector::new(k, lambda, &sizes, Basis::Standard, entries)?;
    if !checked {
        check_adjacent_equal(&psi)?;
    }
    Ok(psi)
}

fn build_generic(labels: &[SubsetSequence], seed: &Polynomial, vars: &VarSet) -> Result<Vec<Polynomial>> {
    let mut entries: Vec<Option<Polynomial>> = vec![None; labels.len()];
    for (b, descents) in schedule(labels) {
        let Some(&first) = descents.first() else {
            entries[b] = Some(seed.clone());
            continue;
        };
        let via = |i: usize| -> Result<Polynomial> {
            let prev = labels
                .binary_search(&labels[b].swapped(i))
                .ok()
                .and_then(|p| entries[p].as_ref())
                .ok_or_else(|| Error::invalid("propagation reached an unbuilt label"))?;
            propagate(vars, prev, i).map_err(|e| match e {
                Error::NotDivisible(r) => Error::mismatch(
                    "propagation",
                    format!("{}", labels[b]),
                    format!("division by z{} - z{} leaves {r}", i + 1, i + 2),
                ),
                e => e,
            })
        };
        let value = via(first)?;
        if let Some(&last) = descents.last().filter(|&&d| d != first) {
            if via(last)? != value {
                return Err(Error::mismatch(
                    "propagation",
                    format!("{}", labels[b]),
                    format!("descents at {} and {} give different entries", first + 1, last + 1),
                ));
            }
        }
        entries[b] = Some(value);
    }
    Ok(entries.into_iter().map(|e| e.expect("all labels built")).collect())
}

/// For `β_i = β_{i+1}` the entry is `(ħ + z_i − z_{i+1})` times a
/// τ_i-symmetric polynomial.
pub(crate) fn check_adjacent_equal(psi: &PsiVector) -> Result<()> {
    for (l, e) in psi.labels.iter().zip(&psi.entries) {
        let w = word(l);
        for i in 0..w.len().saturating_sub(1) {
            if w[i] != w[i + 1] {
                continue;
            }
            let q = e.exact_div(&hbar_plus(&psi.vars, i, i + 1)).map_err(|_| {
                Error::mismatch(
                    "adjacent-equal",
                    format!("{l}"),
                    format!("not divisible by ħ + z{} - z{}", i + 1, i + 2),
                )
            })?;
            if q.swap(i, i + 1) != q {
                return Err(Error::mismatch(
                    "adjacent-equal",
                    format!("{l}"),
                    format!("quotient is not symmetric in z{}, z{}", i + 1, i + 2),
                ));
            }
        }
    }
    Ok(())
}

/// Fusion of a fundamental Ψ into blocks of sizes `m`: the variables of
/// block `g` are specialised to `z_g + (c − (m_g + 1)/2)ħ`, `c = 1..m_g`,
/// and each block is projected with the antisymmetriser `p_{m_g}`
/// (including its `1/m_g!`).
pub fn fuse_psi(psi1: &PsiVector, m: &[usize]) -> Result<PsiVector> {
    if psi1.basis != Basis::Standard || psi1.sizes.iter().any(|&s| s != 1) {
        return Err(Error::invalid("fusion starts from a fundamental Ψ in the standard basis"));
    }
    if m.iter().sum::<usize>() != psi1.sizes.len() {
        return Err(Error::invalid(format!(
            "Σm = {} but Ψ has {} factors",
            m.iter().sum::<usize>(),
            psi1.sizes.len()
        )));
    }
    let vars = VarSet::indexed(m.len());
    let mut sub = Substitution::into_context(&psi1.vars, &vars);
    let mut slot = 0;
    for (g, &mg) in m.iter().enumerate() {
        for c in 1..=mg {
            let shift = (2 * c) as i64 - mg as i64 - 1;
            let img = &Polynomial::var(&vars, g)
                + &(&Polynomial::integer(&vars, shift) * &Polynomial::var(&vars, vars.h()));
            sub.set(slot, img)?;
            slot += 1;
        }
    }
    sub.set(psi1.vars.h(), Polynomial::var(&vars, vars.h()))?;
    let norm: u64 = m.iter().map(|&x| (1..=x as u64).product::<u64>()).product();
    let norm = Q::new(1.into(), norm.into());
    let labels = enumerate_standard_labels(psi1.k, &psi1.lambda, m);
    let mut cache: BTreeMap<usize, Polynomial> = BTreeMap::new();
    let mut entries = Vec::with_capacity(labels.len());
    for l in &labels {
        let mut words: Vec<(Vec<u16>, i8)> = vec![(Vec::new(), 1)];
        for s in l.sets() {
            let ords = signed_orderings(s);
            words = words
                .iter()
                .flat_map(|(w, g)| {
                    ords.iter().map(move |(o, h)| {
                        let mut w = w.clone();
                        w.extend_from_slice(o);
                        (w, g * h)
                    })
                })
                .collect();
        }
        let mut acc = Polynomial::zero(&vars);
        for (w, g) in words {
            let lab = SubsetSequence::new(w.iter().map(|&x| vec![x]).collect())?;
            let Some(idx) = psi1.index_of(&lab) else {
                continue;
            };
            if !cache.contains_key(&idx) {
                cache.insert(idx, psi1.entries[idx].substitute(&sub)?);
            }
            let v = &cache[&idx];
            acc = if g > 0 { &acc + v } else { &acc - v };
        }
        entries.push(acc.scale(&norm));
    }
    PsiVector::new(psi1.k, &psi1.lambda, m, Basis::Standard, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn packed_and_generic_builds_agree() {
        for (k, lambda) in [(2, vec![3, 2]), (3, vec![2, 2, 1]), (4, vec![2, 1, 1, 1])] {
            let (_, seed) = extreme_component(&lambda).unwrap();
            let vars = seed.vars().clone();
            let n: usize = lambda.iter().sum();
            let labels = enumerate_standard_labels(k, &lambda, &vec![1; n]);
            assert!(labels.len() > 1);
            let packed = build_packed(vars.h(), &labels, &seed).unwrap();
            assert!(adjacent_equal_packed(vars.h(), &labels, &packed));
            let packed: Vec<_> = packed.iter().map(|p| p.to_poly(&vars)).collect();
            assert_eq!(packed, build_generic(&labels, &seed, &vars).unwrap());
        }
    }

    #[test]
    fn extreme_examples() {
        let (l, p) = extreme_component(&[1, 1]).unwrap();
        assert_eq!(format!("{l}"), "({1},{2})");
        assert_eq!(p, Polynomial::one(p.vars()));
        let (_, p) = extreme_component(&[2]).unwrap();
        assert_eq!(p, parse_poly("hb + z1 - z2", p.vars()).unwrap());
        let (_, p) = extreme_component(&[2, 2, 2, 2]).unwrap();
        let want = parse_poly(
            "(hb+z1-z2)(hb+z3-z4)(hb+z5-z6)(hb+z7-z8)",
            p.vars(),
        )
        .unwrap();
        assert_eq!(p, want);
    }

    #[test]
    fn two_letter_fundamental() {
        let psi = build_psi_fundamental(2, &[1, 1]).unwrap();
        let c: Vec<_> = psi.entries.iter().map(|e| e.as_constant().unwrap()).collect();
        assert_eq!(c, vec![crate::algebra::q(1), crate::algebra::q(-1)]);
    }

    #[test]
    fn k2_four_sites() {
        let psi = build_psi_fundamental(2, &[2, 2]).unwrap();
        assert_eq!(psi.len(), 6);
        let want = parse_poly("(hb+z1-z2)(hb+z3-z4)", &psi.vars).unwrap();
        assert_eq!(psi.entries[0], want);
        psi.check_degrees().unwrap();
    }

    #[test]
    fn trivial_fusion_is_identity() {
        let psi = build_psi_fundamental(3, &[2, 1, 1]).unwrap();
        let f = fuse_psi(&psi, &[1, 1, 1, 1]).unwrap();
        assert_eq!(f, psi);
    }
}
