use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Operator, Polynomial, RationalFunction, Substitution, VarSet};
use crate::combinatorics::{Basis, SignedPermutation, SubsetSequence};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::rmatrix::{compare_operators, ExchangeFamily, Route};

use super::PsiVector;

fn as_rf(p: &PsiVector) -> Vec<RationalFunction> {
    p.entries.iter().cloned().map(RationalFunction::from_poly).collect()
}

/// `c` times ħ as a polynomial, `c` counted in units of ħ/2.
fn h_units(vars: &VarSet, c: i64) -> Polynomial {
    &Polynomial::integer(vars, c) * &Polynomial::var(vars, vars.h())
}

fn compare_vectors(
    check: &str,
    got: &[RationalFunction],
    want: &[RationalFunction],
    labels: &[SubsetSequence],
) -> Result<usize> {
    for ((g, w), l) in got.iter().zip(want).zip(labels) {
        if !g.equals(w) {
            return Err(Error::mismatch(
                check,
                format!("{l}"),
                format!("{} vs {}", g.render(), w.render()),
            ));
        }
    }
    Ok(got.len())
}

/// `Ψ^{…m_{i+1} m_i…}(…, z_{i+1}, z_i, …) = Ř_i(z_i − z_{i+1}) Ψ^{m}(z)`.
/// `psi_swapped` is the vector for the exchanged sizes (pass `psi` again
/// when `m_i = m_{i+1}`). `i` is 1-based.
pub fn check_exchange(
    family: &dyn ExchangeFamily,
    psi: &PsiVector,
    psi_swapped: &PsiVector,
    i: usize,
) -> Result<Report> {
    let n = psi.sizes.len();
    if i == 0 || i >= n {
        return Err(Error::invalid(format!("slot {i} has no right neighbour")));
    }
    let mut sizes = psi.sizes.clone();
    sizes.swap(i - 1, i);
    if psi_swapped.sizes != sizes {
        return Err(Error::invalid(format!(
            "second vector has sizes {:?}, expected {sizes:?}",
            psi_swapped.sizes
        )));
    }
    let arg = &Polynomial::var(&psi.vars, i - 1) - &Polynomial::var(&psi.vars, i);
    let r = family.exchange(&psi.vars, &psi.sizes, i - 1, &arg)?;
    let got = r.apply(&as_rf(psi))?;
    let want: Vec<_> = psi_swapped
        .entries
        .iter()
        .map(|e| RationalFunction::from_poly(e.swap(i - 1, i)))
        .collect();
    let cases = compare_vectors("exchange", &got, &want, &psi_swapped.labels)?;
    Ok(Report::new(
        "exchange",
        format!("k={}, m={:?}, i={i}", psi.k, psi.sizes),
        cases,
    ))
}

/// Substitutes `ζ_{j+1} = ζ_j + (n_j + n_{j+1})ħ/2` at the given slots
/// (1-based, increasing) and requires every entry to vanish. The sizes
/// `n_j` at those slots must add up to more than k.
pub fn check_wheel(psi: &PsiVector, positions: &[usize]) -> Result<Report> {
    let n = psi.sizes.len();
    if positions.windows(2).any(|p| p[0] >= p[1]) || positions.iter().any(|&p| p == 0 || p > n) {
        return Err(Error::invalid(format!("bad wheel positions {positions:?}")));
    }
    let ns: Vec<usize> = positions.iter().map(|&p| psi.sizes[p - 1]).collect();
    if ns.iter().sum::<usize>() <= psi.k {
        return Err(Error::invalid(format!(
            "wheel needs Σn > k, got Σ{ns:?} = {} with k = {}",
            ns.iter().sum::<usize>(),
            psi.k
        )));
    }
    let vars = &psi.vars;
    let mut sub = Substitution::identity(vars);
    let first = Polynomial::var(vars, positions[0] - 1);
    let mut offset = 0i64;
    for j in 1..positions.len() {
        offset += (ns[j - 1] + ns[j]) as i64;
        sub.set(positions[j] - 1, &first + &h_units(vars, offset))?;
    }
    for (l, e) in psi.labels.iter().zip(&psi.entries) {
        let v = e.substitute(&sub)?;
        if !v.is_zero() {
            return Err(Error::mismatch("wheel", format!("{l}"), format!("{v}")));
        }
    }
    Ok(Report::new(
        "wheel",
        format!("k={}, m={:?}, positions {positions:?}", psi.k, psi.sizes),
        psi.len(),
    ))
}

/// Sign relating the standard-basis entries in the recurrence:
/// `(−1)^{k(k−1)/2 + Σ_a λ_a (k − a) + (p − 1)(k + 1)}` with λ the weight
/// of the larger vector and p the 1-based insertion point.
pub fn recurrence_sign(k: usize, lambda: &[usize], p: usize) -> i64 {
    let e: usize = lambda
        .iter()
        .enumerate()
        .map(|(a, &l)| l * (k - a - 1))
        .sum::<usize>()
        + k * (k - 1) / 2
        + (p - 1) * (k + 1);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn permutation_sign(w: &[u16]) -> i64 {
    let mut s = 1;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                s = -s;
            }
        }
    }
    s
}

/// Inserts `r` blocks with sizes adding up to k at the 1-based slot `p`
/// of `small` and compares with `big` at `ζ_{j+1} = ζ_j + (n_j +
/// n_{j+1})ħ/2`. Entries whose inserted rows are not increasing vanish,
/// the others are the small entry times the explicit prefactor.
///
/// In the standard basis the inserted sets must partition `{1..k}`; the
/// entry then carries the sign of that ordering times
/// [`recurrence_sign`].
pub fn check_recurrence(big: &PsiVector, small: &PsiVector, p: usize, r: usize) -> Result<Report> {
    let (k, nb) = (big.k, big.sizes.len());
    if big.basis != small.basis || small.k != k {
        return Err(Error::invalid("vectors use different bases or ranks"));
    }
    if p == 0 || r == 0 || p - 1 + r > nb || small.sizes.len() + r != nb {
        return Err(Error::invalid(format!("cannot insert {r} blocks at slot {p}")));
    }
    let ns = &big.sizes[p - 1..p - 1 + r];
    if ns.iter().sum::<usize>() != k {
        return Err(Error::invalid(format!("inserted sizes {ns:?} do not add up to k = {k}")));
    }
    let mut rest = big.sizes[..p - 1].to_vec();
    rest.extend_from_slice(&big.sizes[p - 1 + r..]);
    if rest != small.sizes {
        return Err(Error::invalid(format!(
            "removing {ns:?} leaves {rest:?}, not {:?}",
            small.sizes
        )));
    }
    let mut shifted = big.lambda.clone();
    shifted.resize(k, 0);
    let mut lam_small = Vec::with_capacity(k);
    for &l in &shifted {
        lam_small.push(l.checked_sub(1).ok_or_else(|| Error::invalid("λ has fewer than k rows"))?);
    }
    while lam_small.last() == Some(&0) {
        lam_small.pop();
    }
    let mut small_lambda = small.lambda.clone();
    while small_lambda.last() == Some(&0) {
        small_lambda.pop();
    }
    if small_lambda != lam_small {
        return Err(Error::invalid(format!(
            "small vector has λ = {:?}, expected {lam_small:?}",
            small.lambda
        )));
    }

    let vars = &big.vars;
    let zeta = |j: usize| p - 1 + j;
    let mut sub = Substitution::identity(vars);
    let z1 = Polynomial::var(vars, zeta(0));
    let mut offsets = vec![0i64];
    for j in 1..r {
        let o = offsets[j - 1] + (ns[j - 1] + ns[j]) as i64;
        offsets.push(o);
        sub.set(zeta(j), &z1 + &h_units(vars, o))?;
    }
    let zeta_r = &z1 + &h_units(vars, offsets[r - 1]);
    let small_map: Vec<usize> = (0..small.sizes.len())
        .map(|i| if i < p - 1 { i } else { i + r })
        .chain([vars.h()])
        .collect();
    let mut prefactor = Polynomial::one(vars);
    for (i, &mi) in small.sizes.iter().enumerate() {
        let zi = Polynomial::var(vars, small_map[i]);
        for a in 0..mi {
            let f = if i < p - 1 {
                let c = (mi + ns[0]) as i64 - 2 * a as i64;
                &(&h_units(vars, c) + &zi) - &z1
            } else {
                let c = (mi + ns[r - 1]) as i64 - 2 * a as i64;
                &(&h_units(vars, c) + &zeta_r) - &zi
            };
            prefactor = &prefactor * &f;
        }
    }
    let global = match big.basis {
        Basis::Standard => recurrence_sign(k, &big.lambda, p),
        Basis::Component => 1,
    };

    for (l, e) in big.labels.iter().zip(&big.entries) {
        let got = e.substitute(&sub)?;
        let sets = l.sets();
        let inserted = &sets[p - 1..p - 1 + r];
        let surviving = match big.basis {
            Basis::Standard => {
                let mut all: Vec<u16> = inserted.concat();
                all.sort_unstable();
                all.dedup();
                all.len() == k
            }
            Basis::Component => inserted.windows(2).all(|w| {
                w[0].iter().max().zip(w[1].iter().min()).is_some_and(|(a, b)| a < b)
            }),
        };
        let want = if !surviving {
            Polynomial::zero(vars)
        } else {
            let mut rest_sets = sets[..p - 1].to_vec();
            rest_sets.extend_from_slice(&sets[p - 1 + r..]);
            let label = SubsetSequence::new(rest_sets)?;
            let s = small.entry(&label).ok_or_else(|| {
                Error::mismatch("recurrence", format!("{l}"), format!("{label} is not a small label"))
            })?;
            let sign = match big.basis {
                Basis::Standard => global * permutation_sign(&inserted.concat()),
                Basis::Component => 1,
            };
            (&s.embed(vars, &small_map)? * &prefactor).scale(&crate::algebra::q(sign))
        };
        if got != want {
            return Err(Error::mismatch(
                "recurrence",
                format!("{l}"),
                format!("{got} vs {want}"),
            ));
        }
    }
    Ok(Report::new(
        "recurrence",
        format!("k={k}, m={:?}, inserted {ns:?} at {p}", big.sizes),
        big.len(),
    ))
}

/// `Ψ^{m_2…m_N m_1}(z_2, …, z_N, z_1 + (k+1)ħ) = ρ Ψ^{m}(z)`, where
/// `psi_rot` is the vector for the rotated sizes.
pub fn check_cyclicity(
    rho: &SignedPermutation,
    psi: &PsiVector,
    psi_rot: &PsiVector,
) -> Result<Report> {
    let n = psi.sizes.len();
    let mut sizes = psi.sizes.clone();
    sizes.rotate_left(1);
    if psi_rot.sizes != sizes || rho.len() != psi.len() || psi_rot.len() != psi.len() {
        return Err(Error::invalid("rotated vector or ρ does not match"));
    }
    let vars = &psi.vars;
    let mut sub = Substitution::identity(vars);
    for j in 0..n - 1 {
        sub.set(j, Polynomial::var(vars, j + 1))?;
    }
    let s = h_units(vars, 2 * (psi.k as i64 + 1));
    sub.set(n - 1, &Polynomial::var(vars, 0) + &s)?;
    let lhs: Vec<_> = psi_rot
        .entries
        .iter()
        .map(|e| e.substitute(&sub).map(RationalFunction::from_poly))
        .collect::<Result<_>>()?;
    let rhs: Vec<_> = rho
        .source
        .iter()
        .zip(&rho.sign)
        .map(|(&src, &g)| {
            let e = &psi.entries[src];
            RationalFunction::from_poly(if g > 0 { e.clone() } else { -e })
        })
        .collect();
    let cases = compare_vectors("cyclicity", &lhs, &rhs, &psi_rot.labels)?;
    Ok(Report::new(
        "cyclicity",
        format!("k={}, m={:?}", psi.k, psi.sizes),
        cases,
    ))
}

/// The two composites for the shift of slot `i`.
pub struct QkzOperators {
    pub route_a: Operator,
    pub route_b: Operator,
    pub word_a: String,
    pub word_b: String,
}

/// Builds `S_i` twice. Route A carries slot `i` to the front, wraps it
/// round with ρ and carries it back. Route B rotates `i` times, brings
/// the wrapped block in front of the other shifted ones, rotates those
/// back with ρ⁻¹ and carries the block to slot `i`.
pub fn qkz_operators(
    family: &dyn ExchangeFamily,
    vars: &VarSet,
    sizes: &[usize],
    k: usize,
    i: usize,
) -> Result<QkzOperators> {
    let n = sizes.len();
    if i == 0 || i > n {
        return Err(Error::invalid(format!("slot {i} out of range")));
    }
    let s = h_units(vars, 2 * (k as i64 + 1));
    let mut a = Route::start(family, vars, sizes)?;
    a.carry(i - 1, 0)?.rotate(&s)?.carry(n - 1, i - 1)?;
    let mut b = Route::start(family, vars, sizes)?;
    for _ in 0..i {
        b.rotate(&s)?;
    }
    b.carry(n - 1, n - i)?;
    for _ in 0..i - 1 {
        b.rotate_back(&s)?;
    }
    b.carry(n - 1, i - 1)?;
    if a.sizes() != sizes || b.sizes() != sizes || a.args() != b.args() {
        return Err(Error::invalid("routes do not end at the shifted configuration"));
    }
    Ok(QkzOperators {
        word_a: a.word(),
        word_b: b.word(),
        route_a: a.into_operator(),
        route_b: b.into_operator(),
    })
}

/// `Ψ(z_1, …, z_i + (k+1)ħ, …, z_N) = S_i Ψ(z)`, with `S_i` from route A
/// after checking that route B gives the same operator.
pub fn qkz_step(family: &dyn ExchangeFamily, psi: &PsiVector, i: usize) -> Result<Report> {
    let ops = qkz_operators(family, &psi.vars, &psi.sizes, psi.k, i)?;
    let labels = psi.label_strings();
    let mut cases = compare_operators("qkz-route", &ops.route_a, &ops.route_b, &labels, &labels)?;
    let vars = &psi.vars;
    let mut sub = Substitution::identity(vars);
    let s = h_units(vars, 2 * (psi.k as i64 + 1));
    sub.set(i - 1, &Polynomial::var(vars, i - 1) + &s)?;
    let lhs: Vec<_> = psi
        .entries
        .iter()
        .map(|e| e.substitute(&sub).map(RationalFunction::from_poly))
        .collect::<Result<_>>()?;
    let rhs = ops.route_a.apply(&as_rf(psi))?;
    cases += compare_vectors("qkz", &lhs, &rhs, &psi.labels)?;
    Ok(Report::new(
        "qkz",
        format!("k={}, m={:?}, i={i}: {}", psi.k, psi.sizes, ops.word_a),
        cases,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{rho, QuiverData};
    use crate::qkz::{build_psi_fundamental, fuse_psi};
    use crate::rmatrix::StandardFamily;

    fn fundamental(k: usize, lambda: &[usize]) -> (PsiVector, StandardFamily) {
        let psi = build_psi_fundamental(k, lambda).unwrap();
        let f = StandardFamily::new(k, Some(lambda), &psi.sizes).unwrap();
        (psi, f)
    }

    #[test]
    fn exchange_regression() {
        let (psi, f) = fundamental(2, &[2, 1]);
        for i in 1..3 {
            check_exchange(&f, &psi, &psi, i).unwrap();
        }
        let mut bad = psi.clone();
        bad.entries[1] = &bad.entries[1] + &Polynomial::var(&bad.vars, 0);
        let e = check_exchange(&f, &bad, &bad, 1).unwrap_err();
        assert!(matches!(e, Error::Mismatch { .. }));
    }

    #[test]
    fn wheel_k2() {
        let (psi, _) = fundamental(2, &[2, 2]);
        check_wheel(&psi, &[1, 2, 3]).unwrap();
        check_wheel(&psi, &[1, 3, 4]).unwrap();
        assert!(matches!(check_wheel(&psi, &[1, 2]), Err(Error::Invalid(_))));
    }

    #[test]
    fn cyclicity_and_qkz_k2() {
        let (psi, f) = fundamental(2, &[2, 2]);
        let q = QuiverData::from_weights(2, &[2, 2], &psi.sizes).unwrap();
        let r = rho(&q, Basis::Standard).unwrap();
        check_cyclicity(&r, &psi, &psi).unwrap();
        for i in 1..=4 {
            qkz_step(&f, &psi, i).unwrap();
        }
    }

    #[test]
    fn cyclicity_sign_two_sites() {
        let (psi, _) = fundamental(2, &[1, 1]);
        let q = QuiverData::from_weights(2, &[1, 1], &psi.sizes).unwrap();
        let r = rho(&q, Basis::Standard).unwrap();
        assert_eq!(r.sign, vec![-1, -1]);
        check_cyclicity(&r, &psi, &psi).unwrap();
    }

    #[test]
    fn recurrence_k2() {
        let (big, _) = fundamental(2, &[2, 2]);
        let (small, _) = fundamental(2, &[1, 1]);
        for p in 1..=3 {
            check_recurrence(&big, &small, p, 2).unwrap();
        }
    }

    #[test]
    fn fused_exchange_k3() {
        let psi1 = build_psi_fundamental(3, &[2, 2, 2]).unwrap();
        let psi = fuse_psi(&psi1, &[2, 2, 2]).unwrap();
        psi.check_degrees().unwrap();
        assert!(psi.entries.iter().any(|e| !e.is_zero()));
        let f = StandardFamily::new(3, Some(&[2, 2, 2]), &psi.sizes).unwrap();
        check_exchange(&f, &psi, &psi, 1).unwrap();
        check_exchange(&f, &psi, &psi, 2).unwrap();
    }

    #[test]
    fn recurrence_sweep() {
        let cases: &[(usize, &[usize], &[usize])] = &[
            (2, &[3, 3], &[2, 2]),
            (2, &[3, 1], &[2]),
            (3, &[2, 2, 1], &[1, 1]),
            (3, &[3, 2, 1], &[2, 1]),
            (4, &[2, 2, 1, 1], &[1, 1]),
            (4, &[1, 1, 1, 1], &[]),
            (5, &[2, 1, 1, 1, 1], &[1]),
        ];
        for &(k, lb, ls) in cases {
            let big = build_psi_fundamental(k, lb).unwrap();
            let small = build_psi_fundamental(k, ls).unwrap();
            for p in 1..=small.sizes.len() + 1 {
                check_recurrence(&big, &small, p, k).unwrap();
            }
        }
    }
}
