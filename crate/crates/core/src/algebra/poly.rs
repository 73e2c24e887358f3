use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Q;
use crate::error::{Error, Result};

/// Names of the z-like variables of a context. The unit variable `h`
/// (standing for ħ/2) is always present as the last slot and is not named
/// here.
#[derive(Clone, Debug)]
pub struct VarSet {
    names: Arc<[String]>,
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for VarSet {}

impl VarSet {
    /// `z1, …, zn`.
    pub fn indexed(n: usize) -> Self {
        Self::named((1..=n).map(|i| format!("z{i}")))
    }

    /// The one-variable context of a spectral parameter `z`.
    pub fn spectral() -> Self {
        Self::named(["z"])
    }

    pub fn named<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VarSet {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    /// Number of named variables (h excluded).
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Length of exponent vectors, h included.
    pub fn width(&self) -> usize {
        self.names.len() + 1
    }

    /// Slot of the unit variable.
    pub fn h(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        if i == self.names.len() {
            "h"
        } else {
            &self.names[i]
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Exponent vector with cached total degree. The derived ordering compares
/// the degree first and then the exponents lexicographically, which is
/// graded lex with the earlier variables larger.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Vec<u16>,
}

impl Monomial {
    pub fn one(width: usize) -> Self {
        Monomial {
            deg: 0,
            exps: vec![0; width],
        }
    }

    pub fn var(width: usize, i: usize) -> Self {
        let mut m = Self::one(width);
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: Vec<u16>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { deg, exps }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: self.deg + other.deg,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: other.deg - self.deg,
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn swapped(&self, i: usize, j: usize) -> Monomial {
        let mut m = self.clone();
        m.exps.swap(i, j);
        m
    }
}

/// Sparse polynomial with exact rational coefficients.
#[derive(Clone, Debug)]
pub struct Polynomial {
    vars: VarSet,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

fn check_ctx(a: &VarSet, b: &VarSet) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Context(format!(
            "{:?} vs {:?}",
            a.names(),
            b.names()
        )))
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, Q>, m: Monomial, c: Q) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        alloc::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        alloc::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

impl Polynomial {
    pub fn zero(vars: &VarSet) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Q::one())
    }

    pub fn constant(vars: &VarSet, c: Q) -> Self {
        let mut p = Self::zero(vars);
        add_term(&mut p.terms, Monomial::one(vars.width()), c);
        p
    }

    pub fn integer(vars: &VarSet, c: i64) -> Self {
        Self::constant(vars, Q::from_integer(c.into()))
    }

    /// The variable in slot `i` (slot `vars.h()` is h = ħ/2).
    pub fn var(vars: &VarSet, i: usize) -> Self {
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial::var(vars.width(), i), Q::one());
        p
    }

    /// ħ itself, i.e. 2h.
    pub fn hbar(vars: &VarSet) -> Self {
        let mut p = Self::zero(vars);
        p.terms
            .insert(Monomial::var(vars.width(), vars.h()), Q::from_integer(2.into()));
        p
    }

    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, Q)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars.width() {
                return Err(Error::invalid(format!(
                    "exponent vector of length {} in a context of width {}",
                    e.len(),
                    vars.width()
                )));
            }
            add_term(&mut p.terms, Monomial::from_exps(e), c);
        }
        Ok(p)
    }

    /// Terms with distinct monomials and nonzero coefficients, in any
    /// order.
    pub(crate) fn from_distinct_terms(vars: &VarSet, terms: impl Iterator<Item = (Monomial, Q)>) -> Self {
        Polynomial {
            vars: vars.clone(),
            terms: terms.collect(),
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + '_ {
        self.terms.iter().rev()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    /// Maximal total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn min_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).min().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.min_degree()
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.exps[var]).max().unwrap_or(0)
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        check_ctx(&self.vars, &other.vars)?;
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            add_term(&mut big.terms, m.clone(), c.clone());
        }
        Ok(big)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        check_ctx(&self.vars, &other.vars)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_term(&mut out.terms, m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        check_ctx(&self.vars, &other.vars)?;
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                add_term(&mut out.terms, ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(t, x)| (t.mul(m), x * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Division by a single divisor using leading-term elimination. The
    /// remainder is zero exactly when `d` divides `self`.
    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        check_ctx(&self.vars, &d.vars)?;
        let (lm, lc) = d.leading().ok_or(Error::ZeroDivision)?;
        let tail: Vec<(Monomial, Q)> = d
            .terms
            .iter()
            .rev()
            .skip(1)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let mut p = self.terms.clone();
        let mut q = Self::zero(&self.vars);
        let mut r = Self::zero(&self.vars);
        while let Some((m, c)) = p.pop_last() {
            if lm.divides(&m) {
                let t = lm.quotient_of(&m);
                let coef = c / lc;
                for (dm, dc) in &tail {
                    add_term(&mut p, t.mul(dm), -(&coef * dc));
                }
                q.terms.insert(t, coef);
            } else {
                r.terms.insert(m, c);
            }
        }
        Ok((q, r))
    }

    /// Exact quotient, or `Error::NotDivisible` carrying the remainder.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible(alloc::boxed::Box::new(r)))
        }
    }

    /// Exchange the variables in slots `i` and `j`.
    pub fn swap(&self, i: usize, j: usize) -> Polynomial {
        if i == j {
            return self.clone();
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.swapped(i, j), c.clone()))
                .collect(),
        }
    }

    /// Substitute `images[v]` for the variable in slot `v` (h included).
    /// All images must live in one common target context.
    pub fn substitute(&self, sub: &Substitution) -> Result<Polynomial> {
        if sub.images.len() != self.vars.width() {
            return Err(Error::Context(format!(
                "substitution for {} slots applied to a context of width {}",
                sub.images.len(),
                self.vars.width()
            )));
        }
        let mut powers: Vec<Vec<Polynomial>> = sub
            .images
            .iter()
            .map(|img| vec![Polynomial::one(&sub.target), img.clone()])
            .collect();
        for v in 0..self.vars.width() {
            let need = self.degree_in(v) as usize;
            while powers[v].len() <= need {
                let next = &powers[v][powers[v].len() - 1] * &sub.images[v];
                powers[v].push(next);
            }
        }
        let mut out = Polynomial::zero(&sub.target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&sub.target, c.clone());
            for (v, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[v][e as usize];
                }
            }
            for (tm, tc) in t.terms {
                add_term(&mut out.terms, tm, tc);
            }
        }
        Ok(out)
    }

    /// Evaluate at rational values for every slot, h included.
    pub fn eval(&self, values: &[Q]) -> Result<Q> {
        if values.len() != self.vars.width() {
            return Err(Error::invalid("wrong number of values"));
        }
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(values[v].clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Re-express in `target`, sending slot `v` to slot `map[v]`. The h
    /// slot must be mapped as well.
    pub fn embed(&self, target: &VarSet, map: &[usize]) -> Result<Polynomial> {
        if map.len() != self.vars.width() {
            return Err(Error::invalid("embedding map has the wrong length"));
        }
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; target.width()];
            for (v, &x) in m.exps.iter().enumerate() {
                if x > 0 {
                    let slot = *map
                        .get(v)
                        .filter(|&&s| s < target.width())
                        .ok_or_else(|| Error::invalid("embedding target out of range"))?;
                    e[slot] += x;
                }
            }
            add_term(&mut out.terms, Monomial::from_exps(e), c.clone());
        }
        Ok(out)
    }

    /// Group the terms by the exponents of the variables outside `keep`,
    /// returning for each such outer monomial the polynomial in the kept
    /// variables.
    pub fn collect_by(&self, keep: &[usize]) -> BTreeMap<Vec<u16>, Polynomial> {
        let mut groups: BTreeMap<Vec<u16>, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut outer = m.exps.clone();
            let mut inner = vec![0u16; m.exps.len()];
            for &k in keep {
                inner[k] = outer[k];
                outer[k] = 0;
            }
            let entry = groups
                .entry(outer)
                .or_insert_with(|| Polynomial::zero(&self.vars));
            add_term(&mut entry.terms, Monomial::from_exps(inner), c.clone());
        }
        groups
    }

    /// Content of the coefficients: the positive rational `c` such that
    /// `self / c` has coprime integer coefficients with positive leading
    /// coefficient.
    pub fn content(&self) -> Q {
        use num_integer::Integer;
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Q::one();
        }
        let mut q = Q::new(num, den);
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            q = -q;
        }
        q
    }

    /// Terms with coefficients and exponents expressed in ħ rather than h:
    /// the h exponent is kept and the coefficient divided by 2^e.
    pub fn hbar_terms(&self) -> impl Iterator<Item = (Q, &[u16])> + '_ {
        let h = self.vars.h();
        self.terms().map(move |(m, c)| {
            let e = m.exps[h] as usize;
            let scale = Q::from_integer(num_traits::pow(BigInt::from(2), e));
            (c / scale, m.exps())
        })
    }

    /// Inverse of `hbar_terms`.
    pub fn from_hbar_terms<I>(vars: &VarSet, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Q, Vec<u16>)>,
    {
        let h = vars.h();
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            if e.len() != vars.width() {
                return Err(Error::invalid("exponent vector has the wrong length"));
            }
            let scale = Q::from_integer(num_traits::pow(BigInt::from(2), e[h] as usize));
            add_term(&mut p.terms, Monomial::from_exps(e), c * scale);
        }
        Ok(p)
    }
}

/// Images of every slot of a source context, living in a target context.
#[derive(Clone, Debug)]
pub struct Substitution {
    target: VarSet,
    images: Vec<Polynomial>,
}

impl Substitution {
    /// Identity substitution on `vars`.
    pub fn identity(vars: &VarSet) -> Self {
        Substitution {
            target: vars.clone(),
            images: (0..vars.width()).map(|i| Polynomial::var(vars, i)).collect(),
        }
    }

    /// Substitution from a source of width `source.width()` into `target`,
    /// initialised to zero images.
    pub fn into_context(source: &VarSet, target: &VarSet) -> Self {
        Substitution {
            target: target.clone(),
            images: vec![Polynomial::zero(target); source.width()],
        }
    }

    pub fn set(&mut self, slot: usize, image: Polynomial) -> Result<&mut Self> {
        check_ctx(&self.target, &image.vars)?;
        *self
            .images
            .get_mut(slot)
            .ok_or_else(|| Error::invalid("substitution slot out of range"))? = image;
        Ok(self)
    }

    pub fn target(&self) -> &VarSet {
        &self.target
    }

    pub fn image(&self, slot: usize) -> &Polynomial {
        &self.images[slot]
    }

    /// `self` followed by `then`: the result maps each slot to
    /// `then(self(slot))`.
    pub fn then(&self, then: &Substitution) -> Result<Substitution> {
        let images = self
            .images
            .iter()
            .map(|p| p.substitute(then))
            .collect::<Result<Vec<_>>>()?;
        Ok(Substitution {
            target: then.target.clone(),
            images,
        })
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            /// Panics when the operands live in different contexts; use the
            /// `try_` method to get an error instead.
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                self.$f(rhs).expect("polynomial operands in different contexts")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

pub(crate) fn fmt_rational(q: &Q, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text form: terms in descending order, ħ written `hb`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let h = self.vars.h();
        for (idx, (c, exps)) in self.hbar_terms().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let is_one = exps.iter().all(|&e| e == 0);
            if is_one {
                fmt_rational(&a, f)?;
                continue;
            }
            let mut first = true;
            if !a.is_one() {
                fmt_rational(&a, f)?;
                first = false;
            }
            for (v, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                let name = if v == h { "hb" } else { self.vars.name(v) };
                f.write_str(name)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize) -> VarSet {
        VarSet::indexed(n)
    }

    fn z(v: &VarSet, i: usize) -> Polynomial {
        Polynomial::var(v, i - 1)
    }

    #[test]
    fn cancellation() {
        let v = ctx(1);
        let h = Polynomial::var(&v, v.h());
        let p = &(&z(&v, 1) + &h) + &(&z(&v, 1) - &h);
        assert_eq!(p, z(&v, 1).scale(&Q::from_integer(2.into())));
    }

    #[test]
    fn difference_of_squares() {
        let v = ctx(2);
        let p = &(&z(&v, 1) - &z(&v, 2)) * &(&z(&v, 1) + &z(&v, 2));
        let want = &z(&v, 1).pow(2) - &z(&v, 2).pow(2);
        assert_eq!(p, want);
        let q = p.exact_div(&(&z(&v, 1) - &z(&v, 2))).unwrap();
        assert_eq!(q, &z(&v, 1) + &z(&v, 2));
    }

    #[test]
    fn non_divisible_carries_remainder() {
        let v = ctx(2);
        let num = &(&Polynomial::hbar(&v) + &z(&v, 1)) - &z(&v, 2);
        match num.exact_div(&(&z(&v, 1) - &z(&v, 2))) {
            Err(Error::NotDivisible(r)) => assert!(!r.is_zero()),
            other => panic!("expected a remainder, got {other:?}"),
        }
    }

    #[test]
    fn swap_is_an_involution() {
        let v = ctx(2);
        let p = &z(&v, 1) - &z(&v, 2);
        assert_eq!(p.swap(0, 1), -&p);
        let s = &z(&v, 1) + &z(&v, 2);
        assert_eq!(s.swap(0, 1), s);
    }

    #[test]
    fn display_uses_hbar() {
        let v = ctx(2);
        let p = &(&Polynomial::hbar(&v) + &z(&v, 1)) - &z(&v, 2);
        assert_eq!(alloc::format!("{p}"), "z1 - z2 + hb");
        let h = Polynomial::var(&v, v.h());
        assert_eq!(alloc::format!("{}", h.pow(2)), "1/4*hb^2");
    }

    #[test]
    fn substitution_into_spectral_shift() {
        let v = ctx(2);
        let p = &z(&v, 1) - &z(&v, 2);
        let mut s = Substitution::identity(&v);
        s.set(1, &z(&v, 1) + &Polynomial::hbar(&v)).unwrap();
        assert_eq!(p.substitute(&s).unwrap(), -Polynomial::hbar(&v));
    }

    #[test]
    fn mixed_contexts_are_rejected() {
        let a = Polynomial::var(&ctx(1), 0);
        let b = Polynomial::var(&ctx(2), 0);
        assert!(matches!(a.try_add(&b), Err(Error::Context(_))));
    }
}
