//! Integer polynomials in at most 16 variables with byte-sized exponents
//! packed into one `u128`, for the hot loops of the Ψ construction.
//! Arithmetic is checked; `None` means "fall back to [`Polynomial`]".

use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::{Monomial, Polynomial, VarSet, Q};

pub(crate) const MAX_WIDTH: usize = 16;

/// Variable 0 sits in the top byte, so numeric order on keys of equal
/// degree is the lex order of [`Polynomial`].
fn shift(v: usize) -> u32 {
    8 * (MAX_WIDTH - 1 - v) as u32
}

fn exp(m: u128, v: usize) -> u32 {
    ((m >> shift(v)) & 0xff) as u32
}

fn unit(v: usize) -> u128 {
    1u128 << shift(v)
}

fn degree(m: u128) -> u32 {
    m.to_le_bytes().iter().map(|&b| b as u32).sum()
}

/// Terms sorted by key, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PackedPoly {
    width: usize,
    terms: Vec<(u128, i128)>,
}

/// `a + c·(b shifted by s)`. Adding the same monomial to every key keeps
/// the keys sorted, as no byte carries.
fn merge(a: &[(u128, i128)], b: &[(u128, i128)], s: u128, c: i128) -> Option<Vec<(u128, i128)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let kb = b.get(j).map(|t| t.0 + s);
        match (a.get(i), kb) {
            (Some(&(ka, ca)), Some(kb)) if ka == kb => {
                let v = ca.checked_add(b[j].1.checked_mul(c)?)?;
                if v != 0 {
                    out.push((ka, v));
                }
                i += 1;
                j += 1;
            }
            (Some(&(ka, ca)), Some(kb)) if ka < kb => {
                out.push((ka, ca));
                i += 1;
            }
            (None, Some(kb)) | (Some(_), Some(kb)) => {
                out.push((kb, b[j].1.checked_mul(c)?));
                j += 1;
            }
            (Some(&t), None) => {
                out.push(t);
                i += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Some(out)
}

impl PackedPoly {
    /// `Σ c·x_v` plus a constant.
    pub fn linear(width: usize, constant: i128, parts: &[(i128, usize)]) -> Self {
        let mut terms: Vec<(u128, i128)> = parts.iter().map(|&(c, v)| (unit(v), c)).collect();
        terms.push((0, constant));
        terms.retain(|t| t.1 != 0);
        terms.sort_unstable();
        PackedPoly { width, terms }
    }

    pub fn from_poly(p: &Polynomial) -> Option<Self> {
        let width = p.vars().width();
        if width > MAX_WIDTH {
            return None;
        }
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            if !c.is_integer() || m.degree() > 255 {
                return None;
            }
            let mut key = 0u128;
            for (v, &e) in m.exps().iter().enumerate() {
                key |= (e as u128) << shift(v);
            }
            terms.push((key, c.to_integer().to_i128()?));
        }
        terms.sort_unstable();
        Some(PackedPoly { width, terms })
    }

    pub fn to_poly(&self, vars: &VarSet) -> Polynomial {
        assert_eq!(vars.width(), self.width);
        let terms = self.terms.iter().map(|&(m, c)| {
            let e: Vec<u16> = (0..self.width).map(|v| exp(m, v) as u16).collect();
            (Monomial::from_exps(e), Q::from_integer(c.into()))
        });
        Polynomial::from_distinct_terms(vars, terms)
    }

    fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| degree(t.0)).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Option<Self> {
        if self.max_degree() + other.max_degree() > 255 {
            return None;
        }
        let (big, small) = if self.terms.len() >= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc = Vec::new();
        for &(s, c) in &small.terms {
            acc = merge(&acc, &big.terms, s, c)?;
        }
        Some(PackedPoly {
            width: self.width,
            terms: acc,
        })
    }

    pub fn sub(&self, other: &Self) -> Option<Self> {
        Some(PackedPoly {
            width: self.width,
            terms: merge(&self.terms, &other.terms, 0, -1)?,
        })
    }

    pub fn swap(&self, i: usize, j: usize) -> Self {
        let mask = 0xffu128 << shift(i) | 0xffu128 << shift(j);
        let mut terms: Vec<(u128, i128)> = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let (a, b) = (exp(m, i) as u128, exp(m, j) as u128);
                ((m & !mask) | a << shift(j) | b << shift(i), c)
            })
            .collect();
        terms.sort_unstable();
        PackedPoly {
            width: self.width,
            terms,
        }
    }

    /// Exact quotient by `x_i + Σ c·x_v`, where no `v` is `i`. Terms are
    /// reduced from the highest power of `x_i` down; anything left at
    /// power zero is a remainder.
    pub fn div_linear(&self, i: usize, rest: &[(i128, usize)]) -> Option<Self> {
        let top = self.terms.iter().map(|t| exp(t.0, i)).max().unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(u128, i128)>> = vec![Vec::new(); top + 1];
        for &t in &self.terms {
            buckets[exp(t.0, i) as usize].push(t);
        }
        let mut q = Vec::new();
        for e in (1..=top).rev() {
            let part: Vec<(u128, i128)> =
                core::mem::take(&mut buckets[e]).into_iter().map(|(m, c)| (m - unit(i), c)).collect();
            for &(a, v) in rest {
                if part.iter().any(|t| exp(t.0, v) == 255) {
                    return None;
                }
                buckets[e - 1] = merge(&buckets[e - 1], &part, unit(v), a.checked_neg()?)?;
            }
            q = merge(&q, &part, 0, 1)?;
        }
        buckets[0].is_empty().then_some(PackedPoly {
            width: self.width,
            terms: q,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn matches_generic_arithmetic() {
        let vars = VarSet::indexed(3);
        let a = parse_poly("(hb + z1 - z2)(z2 - z3) + 3 z1^2", &vars).unwrap();
        let b = parse_poly("hb + z1 - z3", &vars).unwrap();
        let (pa, pb) = (PackedPoly::from_poly(&a).unwrap(), PackedPoly::from_poly(&b).unwrap());
        assert_eq!(pa.mul(&pb).unwrap().to_poly(&vars), &a * &b);
        assert_eq!(pa.sub(&pb).unwrap().to_poly(&vars), &a - &b);
        assert_eq!(pa.swap(0, 2).to_poly(&vars), a.swap(0, 2));
        let prod = pa.mul(&pb).unwrap();
        // b = z1 + (2h − z3)
        let q = prod.div_linear(0, &[(2, vars.h()), (-1, 2)]).unwrap();
        assert_eq!(q, pa);
        assert!(pa.div_linear(0, &[(2, vars.h()), (-1, 2)]).is_none());
    }

    #[test]
    fn rejects_fractions() {
        let vars = VarSet::indexed(1);
        let a = parse_poly("z1/2", &vars).unwrap();
        assert!(PackedPoly::from_poly(&a).is_none());
        assert_eq!(PackedPoly::from_poly(&Polynomial::zero(&vars)).unwrap(), PackedPoly::linear(2, 0, &[]));
    }
}
