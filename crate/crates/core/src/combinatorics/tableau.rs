use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{conjugate, trim, QuiverData};
use crate::error::{Error, Result};

/// A filling of a Young diagram with letters `1..=N`, rows strictly
/// increasing and columns weakly increasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tableau {
    rows: Vec<Vec<u16>>,
}

impl Tableau {
    pub fn new(rows: Vec<Vec<u16>>) -> Result<Self> {
        let rows: Vec<Vec<u16>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
        for (r, row) in rows.iter().enumerate() {
            if row.iter().any(|&x| x == 0) {
                return Err(Error::invalid("tableau letters start at 1"));
            }
            if row.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::invalid(format!(
                    "row {} of the tableau is not strictly increasing",
                    r + 1
                )));
            }
            if r > 0 {
                let up = &rows[r - 1];
                if row.len() > up.len() {
                    return Err(Error::invalid("tableau rows must weakly decrease in length"));
                }
                if row.iter().zip(up).any(|(d, u)| d < u) {
                    return Err(Error::invalid(format!(
                        "a column decreases between rows {r} and {}",
                        r + 1
                    )));
                }
            }
        }
        Ok(Tableau { rows })
    }

    pub fn rows(&self) -> &[Vec<u16>] {
        &self.rows
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    /// Number of occurrences of each letter `1..=n`.
    pub fn content(&self, n: usize) -> Vec<usize> {
        let mut c = vec![0; n];
        for &x in self.rows.iter().flatten() {
            if (x as usize) <= n {
                c[x as usize - 1] += 1;
            }
        }
        c
    }

    pub fn reading_word(&self) -> Vec<u16> {
        self.rows.iter().flatten().copied().collect()
    }

    /// Jordan types of the steps of the labelling chain: for each letter
    /// `h ≤ n`, the conjugate of the shape filled by letters `≤ h`.
    pub fn jordan_types(&self, n: usize) -> Vec<Vec<usize>> {
        (1..=n as u16)
            .map(|h| {
                let shape: Vec<usize> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().filter(|&&x| x <= h).count())
                    .filter(|&c| c > 0)
                    .collect();
                conjugate(&shape)
            })
            .collect()
    }

    /// Orbit-closure order on labels: every Jordan type in the chain of
    /// `self` is dominated by the one of `other`. Degenerate points of a
    /// component get labels dominated by the generic one.
    pub fn dominated_by(&self, other: &Tableau) -> bool {
        let n = self
            .reading_word()
            .into_iter()
            .chain(other.reading_word())
            .max()
            .unwrap_or(0) as usize;
        let dominated = |a: &[usize], b: &[usize]| -> bool {
            if a.iter().sum::<usize>() != b.iter().sum::<usize>() {
                return false;
            }
            let (mut sa, mut sb) = (0, 0);
            (0..a.len().max(b.len())).all(|i| {
                sa += a.get(i).copied().unwrap_or(0);
                sb += b.get(i).copied().unwrap_or(0);
                sa <= sb
            })
        };
        self.jordan_types(n)
            .iter()
            .zip(other.jordan_types(n).iter())
            .all(|(a, b)| dominated(a, b))
    }

    /// `\tableau{1&2\\1&2\\3&4\\3&4}`
    pub fn to_latex(&self) -> String {
        let body: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| format!("{x}"))
                    .collect::<Vec<_>>()
                    .join("&")
            })
            .collect();
        format!("\\tableau{{{}}}", body.join("\\\\"))
    }

    pub fn parse_latex(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix("\\tableau{")
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::invalid("expected \\tableau{...}"))?;
        let mut rows = Vec::new();
        for row in inner.split("\\\\") {
            let mut r = Vec::new();
            for cell in row.split('&') {
                let cell = cell.trim();
                if cell.is_empty() {
                    continue;
                }
                r.push(
                    cell.parse::<u16>()
                        .map_err(|_| Error::invalid(format!("bad tableau entry {cell:?}")))?,
                );
            }
            rows.push(r);
        }
        Tableau::new(rows)
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            f.write_str("(")?;
            for x in row {
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A sequence of subsets of `{1..=k}`, each stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetSequence {
    sets: Vec<Vec<u16>>,
}

impl SubsetSequence {
    pub fn new(mut sets: Vec<Vec<u16>>) -> Result<Self> {
        for s in &mut sets {
            s.sort_unstable();
            if s.windows(2).any(|p| p[0] == p[1]) || s.contains(&0) {
                return Err(Error::invalid("subset entries must be distinct and positive"));
            }
        }
        Ok(SubsetSequence { sets })
    }

    pub(crate) fn from_sorted(sets: Vec<Vec<u16>>) -> Self {
        SubsetSequence { sets }
    }

    /// Same sequence with entries `i` and `i + 1` exchanged.
    pub fn swapped(&self, i: usize) -> Self {
        let mut sets = self.sets.clone();
        sets.swap(i, i + 1);
        SubsetSequence { sets }
    }

    pub fn sets(&self) -> &[Vec<u16>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    /// `#{i : a ∈ α_i}` for `a = 1..=k`.
    pub fn content(&self, k: usize) -> Vec<usize> {
        let mut c = vec![0; k];
        for &a in self.sets.iter().flatten() {
            if (a as usize) <= k {
                c[a as usize - 1] += 1;
            }
        }
        c
    }

    /// The tableau whose letter `i` sits in rows `α_i`, if that filling is
    /// a valid tableau.
    pub fn to_tableau(&self) -> Option<Tableau> {
        let mut rows: Vec<Vec<u16>> = Vec::new();
        for (i, s) in self.sets.iter().enumerate() {
            for &a in s {
                let a = a as usize;
                if rows.len() < a {
                    rows.resize(a, Vec::new());
                }
                rows[a - 1].push(i as u16 + 1);
            }
            for (r, row) in rows.iter().enumerate().skip(1) {
                if row.len() > rows[r - 1].len() {
                    return None;
                }
            }
        }
        Tableau::new(rows).ok().filter(|t| phi(t) == *self)
    }

    /// `({1,2},{1,3},{2,4},{3,4})`
    pub fn to_latex(&self) -> String {
        let parts: Vec<String> = self
            .sets
            .iter()
            .map(|s| {
                let inner: Vec<String> = s.iter().map(|x| format!("{x}")).collect();
                format!("\\{{{}\\}}", inner.join(","))
            })
            .collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for SubsetSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, x) in s.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        f.write_str(")")
    }
}

/// `α_i = {rows containing the letter i}`.
pub fn phi(t: &Tableau) -> SubsetSequence {
    let n = t.reading_word().into_iter().max().unwrap_or(0) as usize;
    let mut sets = vec![Vec::new(); n];
    for (r, row) in t.rows.iter().enumerate() {
        for &x in row {
            sets[x as usize - 1].push(r as u16 + 1);
        }
    }
    SubsetSequence { sets }
}

fn combinations(k: usize, size: usize, out: &mut Vec<Vec<u16>>) {
    fn go(start: usize, k: usize, left: usize, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for a in start..=k {
            if k - a + 1 < left {
                break;
            }
            cur.push(a as u16);
            go(a + 1, k, left - 1, cur, out);
            cur.pop();
        }
    }
    go(1, k, size, &mut Vec::new(), out);
}

/// All subset sequences with sizes `m` and content `λ`, in lexicographic
/// order. These index the standard basis.
pub fn enumerate_standard_labels(k: usize, lambda: &[usize], m: &[usize]) -> Vec<SubsetSequence> {
    let mut lam = lambda.to_vec();
    lam.resize(k, 0);
    if lam.len() > k || lam.iter().sum::<usize>() != m.iter().sum::<usize>() {
        return Vec::new();
    }
    let subsets: Vec<Vec<Vec<u16>>> = m
        .iter()
        .map(|&s| {
            let mut v = Vec::new();
            if s <= k {
                combinations(k, s, &mut v);
            }
            v
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut left = lam;
    fn go(
        i: usize,
        subsets: &[Vec<Vec<u16>>],
        m: &[usize],
        left: &mut Vec<usize>,
        cur: &mut Vec<Vec<u16>>,
        out: &mut Vec<SubsetSequence>,
    ) {
        if i == subsets.len() {
            out.push(SubsetSequence { sets: cur.clone() });
            return;
        }
        let rest: usize = m[i + 1..].iter().sum();
        'next: for s in &subsets[i] {
            for &a in s {
                if left[a as usize - 1] == 0 {
                    continue 'next;
                }
            }
            for &a in s {
                left[a as usize - 1] -= 1;
            }
            // every remaining letter must fit in the remaining factors
            let n_rest = subsets.len() - i - 1;
            if left.iter().all(|&x| x <= n_rest) && left.iter().sum::<usize>() == rest {
                cur.push(s.clone());
                go(i + 1, subsets, m, left, cur, out);
                cur.pop();
            }
            for &a in s {
                left[a as usize - 1] += 1;
            }
        }
    }
    go(0, &subsets, m, &mut left, &mut cur, &mut out);
    out
}

/// All tableaux of shape λ and content m, sorted by reading word.
pub fn enumerate_tableaux(lambda: &[usize], m: &[usize]) -> Vec<Tableau> {
    let lam = trim(lambda);
    if lam.windows(2).any(|p| p[0] < p[1]) || lam.iter().sum::<usize>() != m.iter().sum::<usize>()
    {
        return Vec::new();
    }
    let rows = lam.len();
    let mut out = Vec::new();
    let mut shape = vec![0usize; rows];
    let mut seq: Vec<Vec<u16>> = Vec::new();
    fn go(
        i: usize,
        lam: &[usize],
        m: &[usize],
        shape: &mut Vec<usize>,
        seq: &mut Vec<Vec<u16>>,
        out: &mut Vec<Tableau>,
    ) {
        if i == m.len() {
            if shape.as_slice() == lam {
                let s = SubsetSequence { sets: seq.clone() };
                if let Some(t) = s.to_tableau() {
                    out.push(t);
                }
            }
            return;
        }
        let mut cands = Vec::new();
        combinations(lam.len(), m[i], &mut cands);
        for rs in cands {
            // adding one box to each chosen row must stay inside λ and
            // leave a partition
            let ok = rs.iter().all(|&a| {
                let r = a as usize - 1;
                shape[r] < lam[r]
                    && (r == 0 || {
                        let above = shape[r - 1] + usize::from(rs.contains(&(a - 1)));
                        above > shape[r]
                    })
            });
            if !ok {
                continue;
            }
            for &a in &rs {
                shape[a as usize - 1] += 1;
            }
            seq.push(rs.clone());
            go(i + 1, lam, m, shape, seq, out);
            seq.pop();
            for &a in &rs {
                shape[a as usize - 1] -= 1;
            }
        }
    }
    if m.iter().all(|&x| x <= rows) {
        go(0, &lam, m, &mut shape, &mut seq, &mut out);
    }
    out.sort_by_key(Tableau::reading_word);
    out
}

/// Promotion: remove the letters 1, slide the holes out by jeu de taquin,
/// lower every letter by one and put the letter `n` in the vacated cells.
///
/// Works on the transpose, which is a semistandard tableau whose letters 1
/// all sit in its first row.
pub fn promotion(t: &Tableau, n: usize) -> Result<Tableau> {
    if t.content(n).iter().sum::<usize>() != t.reading_word().len() {
        return Err(Error::invalid(format!("tableau uses letters above {n}")));
    }
    let shape = t.shape();
    let cols = conjugate(&shape);
    // s[c][r] = t[r][c]
    let mut s: Vec<Vec<Option<u16>>> = cols
        .iter()
        .enumerate()
        .map(|(c, &h)| (0..h).map(|r| Some(t.rows[r][c])).collect())
        .collect();
    let ones = s.first().map_or(0, |row| {
        row.iter().take_while(|x| **x == Some(1)).count()
    });
    let mut vacated = Vec::new();
    for j in (0..ones).rev() {
        let (mut r, mut c) = (0usize, j);
        s[r][c] = None;
        loop {
            let right = s[r].get(c + 1).copied().flatten();
            let below = s.get(r + 1).and_then(|row| row.get(c)).copied().flatten();
            match (right, below) {
                (None, None) => break,
                (Some(a), Some(b)) if b <= a => {
                    s[r][c] = Some(b);
                    s[r + 1][c] = None;
                    r += 1;
                }
                (Some(a), _) => {
                    s[r][c] = Some(a);
                    s[r][c + 1] = None;
                    c += 1;
                }
                (None, Some(b)) => {
                    s[r][c] = Some(b);
                    s[r + 1][c] = None;
                    r += 1;
                }
            }
        }
        vacated.push((r, c));
    }
    for (r, c) in vacated {
        s[r][c] = Some(n as u16 + 1);
    }
    let mut rows = vec![Vec::new(); shape.len()];
    for row in &s {
        for (r, x) in row.iter().enumerate() {
            rows[r].push(x.expect("holes are refilled") - 1);
        }
    }
    Tableau::new(rows)
}

/// Basis in which Ψ is expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Indexed by all subset sequences (the fixed-point basis).
    Standard,
    /// Indexed by tableaux (component multidegrees).
    Component,
}

/// The operator `v ↦ w` with `w[a] = sign[a] · v[source[a]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    pub source: Vec<usize>,
    pub sign: Vec<i8>,
}

impl SignedPermutation {
    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    /// Reads a square matrix with one entry `±1` per row and column.
    pub fn from_dense(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut source = Vec::with_capacity(n);
        let mut sign = Vec::with_capacity(n);
        for row in rows {
            let nz: Vec<(usize, i64)> =
                row.iter().copied().enumerate().filter(|&(_, x)| x != 0).collect();
            match nz.as_slice() {
                [(c, s)] if row.len() == n && s.abs() == 1 => {
                    source.push(*c);
                    sign.push(*s as i8);
                }
                _ => return Err(Error::invalid("not a signed permutation matrix")),
            }
        }
        let mut seen = source.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != n {
            return Err(Error::invalid("a column of the signed permutation is repeated"));
        }
        Ok(SignedPermutation { source, sign })
    }

    /// Dense matrix form: entry `(a, source[a]) = sign[a]`.
    pub fn to_dense(&self) -> Vec<Vec<i8>> {
        let n = self.len();
        (0..n)
            .map(|a| {
                let mut row = vec![0; n];
                row[self.source[a]] = self.sign[a];
                row
            })
            .collect()
    }

    pub fn compose(&self, o: &SignedPermutation) -> SignedPermutation {
        // (self ∘ o)v [a] = sign[a] (o v)[source[a]]
        let source = self.source.iter().map(|&s| o.source[s]).collect();
        let sign = self
            .source
            .iter()
            .zip(&self.sign)
            .map(|(&s, &g)| g * o.sign[s])
            .collect();
        SignedPermutation { source, sign }
    }

    pub fn is_identity(&self) -> bool {
        self.source.iter().enumerate().all(|(a, &s)| a == s) && self.sign.iter().all(|&g| g == 1)
    }
}

/// The global sign of ρ: `ε^{m_1}` with `ε = (−1)^{M/k − 1}` in the
/// component basis, `((−1)^{M−1})^{m_1}` in the standard basis.
pub fn rotation_sign(q: &QuiverData, basis: Basis) -> i8 {
    let m1 = q.m.first().copied().unwrap_or(0);
    let odd = match basis {
        Basis::Component => (q.m_total / q.k + 1) % 2 == 1,
        Basis::Standard => q.m_total % 2 == 0,
    };
    if odd && m1 % 2 == 1 {
        -1
    } else {
        1
    }
}

/// The rotation operator of the cyclicity relation, mapping the basis for
/// `m` to the basis for `(m_2, …, m_N, m_1)`.
///
/// Only rectangular λ is supported.
pub fn rho(q: &QuiverData, basis: Basis) -> Result<SignedPermutation> {
    if !q.is_rectangular() {
        return Err(Error::Unsupported(format!(
            "the rotation operator is only defined for rectangular λ, got {:?}",
            q.lambda
        )));
    }
    let m1 = *q.m.first().ok_or_else(|| Error::invalid("empty m"))?;
    let mut rotated = q.m[1..].to_vec();
    rotated.push(m1);
    match basis {
        Basis::Component => {
            let sign = rotation_sign(q, basis);
            let from = enumerate_tableaux(&q.lambda, &q.m);
            let to = enumerate_tableaux(&q.lambda, &rotated);
            let mut source = vec![usize::MAX; to.len()];
            for (b, t) in from.iter().enumerate() {
                let p = promotion(t, q.n)?;
                let a = to
                    .iter()
                    .position(|x| *x == p)
                    .ok_or_else(|| Error::invalid("promotion left the tableau set"))?;
                source[a] = b;
            }
            Ok(SignedPermutation {
                sign: vec![sign; source.len()],
                source,
            })
        }
        Basis::Standard => {
            let sign = rotation_sign(q, basis);
            let from = enumerate_standard_labels(q.k, &q.lambda, &q.m);
            let to = enumerate_standard_labels(q.k, &q.lambda, &rotated);
            let source = to
                .iter()
                .map(|l| {
                    let mut sets = Vec::with_capacity(l.len());
                    sets.push(l.sets[l.len() - 1].clone());
                    sets.extend_from_slice(&l.sets[..l.len() - 1]);
                    let pre = SubsetSequence { sets };
                    from.binary_search(&pre)
                        .map_err(|_| Error::invalid("rotated label missing"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SignedPermutation {
                sign: vec![sign; source.len()],
                source,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab(rows: &[&[u16]]) -> Tableau {
        Tableau::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn dominance_chain() {
        let t1 = tab(&[&[1, 2], &[1, 2], &[3, 4], &[3, 4]]);
        let t2 = tab(&[&[1, 2], &[1, 3], &[2, 4], &[3, 4]]);
        let t3 = tab(&[&[1, 3], &[1, 3], &[2, 4], &[2, 4]]);
        assert_eq!(t2.jordan_types(4), vec![vec![2], vec![3, 1], vec![4, 2], vec![4, 4]]);
        assert!(t1.dominated_by(&t2) && t2.dominated_by(&t3) && t1.dominated_by(&t3));
        assert!(!t3.dominated_by(&t1));
        assert!(t2.dominated_by(&t2));
    }

    #[test]
    fn appendix_tableaux() {
        let ts = enumerate_tableaux(&[2, 2, 2, 2], &[2, 2, 2, 2]);
        assert_eq!(
            ts,
            vec![
                tab(&[&[1, 2], &[1, 2], &[3, 4], &[3, 4]]),
                tab(&[&[1, 2], &[1, 3], &[2, 4], &[3, 4]]),
                tab(&[&[1, 3], &[1, 3], &[2, 4], &[2, 4]]),
            ]
        );
        assert_eq!(format!("{}", phi(&ts[1])), "({1,2},{1,3},{2,4},{3,4})");
        assert_eq!(ts[0].to_latex(), "\\tableau{1&2\\\\1&2\\\\3&4\\\\3&4}");
        assert_eq!(Tableau::parse_latex(&ts[2].to_latex()).unwrap(), ts[2]);
    }

    #[test]
    fn promotion_on_appendix() {
        let ts = enumerate_tableaux(&[2, 2, 2, 2], &[2, 2, 2, 2]);
        let p: Vec<Tableau> = ts.iter().map(|t| promotion(t, 4).unwrap()).collect();
        assert_eq!(p, vec![ts[2].clone(), ts[1].clone(), ts[0].clone()]);
    }

    #[test]
    fn catalan_count() {
        assert_eq!(enumerate_tableaux(&[2, 2], &[1, 1, 1, 1]).len(), 2);
        assert_eq!(enumerate_tableaux(&[3, 3], &[1; 6]).len(), 5);
        assert_eq!(enumerate_tableaux(&[1, 1, 1], &[3]).len(), 1);
    }

    #[test]
    fn standard_labels_have_content() {
        let ls = enumerate_standard_labels(2, &[2, 2], &[1, 1, 1, 1]);
        assert_eq!(ls.len(), 6);
        assert!(ls.windows(2).all(|p| p[0] < p[1]));
        for l in &ls {
            assert_eq!(l.content(2), vec![2, 2]);
        }
    }

    #[test]
    fn invalid_tableaux_rejected() {
        assert!(Tableau::new(vec![vec![2, 1]]).is_err());
        assert!(Tableau::new(vec![vec![2, 3], vec![1, 4]]).is_err());
        assert!(Tableau::new(vec![vec![1], vec![2, 3]]).is_err());
    }
}
