use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::univariate::UniPoly;
use super::{LinearForm, Monomial, Polynomial, Substitution, VarSet, Q};
use crate::error::{Error, Result};

/// `num / ∏ form^mult`, kept reduced: no denominator form divides the
/// numerator. Because forms are stored canonically and the scalar lives in
/// the numerator, the reduced representation is unique.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: Polynomial,
    den: BTreeMap<LinearForm, u32>,
}

impl RationalFunction {
    pub fn zero(vars: &VarSet) -> Self {
        Self::from_poly(Polynomial::zero(vars))
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::from_poly(Polynomial::one(vars))
    }

    pub fn constant(vars: &VarSet, c: Q) -> Self {
        Self::from_poly(Polynomial::constant(vars, c))
    }

    pub fn from_poly(num: Polynomial) -> Self {
        RationalFunction {
            num,
            den: BTreeMap::new(),
        }
    }

    /// `num / ∏ forms`, reduced.
    pub fn new(num: Polynomial, den: impl IntoIterator<Item = (LinearForm, u32)>) -> Self {
        let mut r = Self::from_poly(num);
        for (f, e) in den {
            if e > 0 {
                *r.den.entry(f).or_insert(0) += e;
            }
        }
        let forms: Vec<LinearForm> = r.den.keys().copied().collect();
        r.reduce(&forms);
        r
    }

    pub fn vars(&self) -> &VarSet {
        self.num.vars()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<LinearForm, u32> {
        &self.den
    }

    pub fn denominator_poly(&self) -> Polynomial {
        let vars = self.vars();
        let mut d = Polynomial::one(vars);
        for (f, &e) in &self.den {
            d = &d * &f.to_polynomial(vars).pow(e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn reduce(&mut self, forms: &[LinearForm]) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let vars = self.vars().clone();
        for f in forms {
            let Some(e) = self.den.get(f).copied() else {
                continue;
            };
            let fp = f.to_polynomial(&vars);
            let mut left = e;
            while left > 0 {
                match self.num.exact_div(&fp) {
                    Ok(q) => {
                        self.num = q;
                        left -= 1;
                    }
                    Err(_) => break,
                }
            }
            if left == 0 {
                self.den.remove(f);
            } else {
                self.den.insert(*f, left);
            }
        }
    }

    /// Divide by `form`, as stored (canonical) or given with its scalar.
    pub fn div_form(&self, form: &LinearForm) -> Self {
        let mut r = self.clone();
        *r.den.entry(*form).or_insert(0) += 1;
        r.reduce(&[*form]);
        r
    }

    /// Divide by a polynomial that is a scalar multiple of a linear form.
    pub fn div_linear(&self, p: &Polynomial) -> Result<Self> {
        if let Some(c) = p.as_constant() {
            if c.is_zero() {
                return Err(Error::ZeroDivision);
            }
            return Ok(self.scale(&(Q::one() / c)));
        }
        let (s, f) = LinearForm::from_polynomial(p)
            .ok_or_else(|| Error::Unsupported(format!("{p} is not a linear form")))?;
        Ok(self.div_form(&f).scale(&(Q::one() / s)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.vars() != other.vars() {
            return Err(Error::Context("rational function operands".into()));
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            let mut r = RationalFunction {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
            let forms: Vec<LinearForm> = r.den.keys().copied().collect();
            r.reduce(&forms);
            return Ok(r);
        }
        let mut lcm = self.den.clone();
        for (f, &e) in &other.den {
            let x = lcm.entry(*f).or_insert(0);
            *x = (*x).max(e);
        }
        let vars = self.vars();
        let lift = |r: &Self| {
            let mut n = r.num.clone();
            for (f, &e) in &lcm {
                let have = r.den.get(f).copied().unwrap_or(0);
                if e > have {
                    n = &n * &f.to_polynomial(vars).pow(e - have);
                }
            }
            n
        };
        let mut r = RationalFunction {
            num: &lift(self) + &lift(other),
            den: lcm,
        };
        let forms: Vec<LinearForm> = r.den.keys().copied().collect();
        r.reduce(&forms);
        Ok(r)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.vars() != other.vars() {
            return Err(Error::Context("rational function operands".into()));
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.vars()));
        }
        // Cancel crosswise before multiplying out.
        let mut a = self.clone();
        let mut b = other.clone();
        let bf: Vec<LinearForm> = b.den.keys().copied().collect();
        let af: Vec<LinearForm> = a.den.keys().copied().collect();
        let mut moved = RationalFunction::from_poly(a.num.clone());
        moved.den = b.den.clone();
        moved.reduce(&bf);
        a.num = moved.num;
        b.den = moved.den;
        let mut moved = RationalFunction::from_poly(b.num.clone());
        moved.den = a.den.clone();
        moved.reduce(&af);
        b.num = moved.num;
        a.den = moved.den;
        let mut den = a.den;
        for (f, e) in b.den {
            *den.entry(f).or_insert(0) += e;
        }
        Ok(RationalFunction {
            num: &a.num * &b.num,
            den,
        })
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Result<Self> {
        self.try_mul(&Self::from_poly(p.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.vars());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse. The numerator must split into linear forms:
    /// this is checked for constants, single forms, monomials times a form,
    /// and any numerator in a one-variable context.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivision);
        }
        let (c, forms) = split_into_forms(&self.num)?;
        let vars = self.vars();
        let mut num = Polynomial::constant(vars, Q::one() / c);
        for (f, &e) in &self.den {
            num = &num * &f.to_polynomial(vars).pow(e);
        }
        Ok(Self::new(num, forms))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inverse()?)
    }

    /// Apply a substitution that sends every denominator form to a scalar
    /// multiple of a form (or to a nonzero constant).
    pub fn substitute(&self, sub: &Substitution) -> Result<Self> {
        let num = self.num.substitute(sub)?;
        let mut out = Self::from_poly(num);
        for (f, &e) in &self.den {
            let img = f.to_polynomial(self.vars()).substitute(sub)?;
            for _ in 0..e {
                out = out.div_linear(&img).map_err(|err| match err {
                    Error::ZeroDivision => Error::ZeroDivision,
                    _ => Error::Unsupported(format!(
                        "substitution sends the denominator factor {} to {img}",
                        f.render(self.vars())
                    )),
                })?;
            }
        }
        Ok(out)
    }

    pub fn swap(&self, i: usize, j: usize) -> Result<Self> {
        let vars = self.vars().clone();
        let mut sub = Substitution::identity(&vars);
        sub.set(i, Polynomial::var(&vars, j))?;
        sub.set(j, Polynomial::var(&vars, i))?;
        self.substitute(&sub)
    }

    /// Evaluate at rational values (h slot included); fails on a pole.
    pub fn eval(&self, values: &[Q]) -> Result<Q> {
        let mut d = Q::one();
        for (f, &e) in &self.den {
            let v = f.eval(values);
            if v.is_zero() {
                return Err(Error::ZeroDivision);
            }
            d *= num_traits::pow(v, e as usize);
        }
        Ok(self.num.eval(values)? / d)
    }

    /// Equality decided by cross-multiplication.
    pub fn equals(&self, other: &Self) -> bool {
        if self.vars() != other.vars() {
            return false;
        }
        if self.den == other.den {
            return self.num == other.num;
        }
        let l = &self.num * &other.denominator_poly();
        let r = &other.num * &self.denominator_poly();
        l == r
    }

    /// Text `num / (f1)^e1*(f2)…` with ħ written `hb`.
    pub fn render(&self) -> String {
        let mut s = format!("{}", self.num);
        if self.den.is_empty() {
            return s;
        }
        if self.num.len() > 1 {
            s = format!("({s})");
        }
        s.push_str(" / ");
        let parts: Vec<String> = self
            .den
            .iter()
            .map(|(f, &e)| {
                let body = format!("({})", f.render(self.vars()));
                if e > 1 {
                    format!("{body}^{e}")
                } else {
                    body
                }
            })
            .collect();
        if parts.len() > 1 {
            s.push('(');
            s.push_str(&parts.join("*"));
            s.push(')');
        } else {
            s.push_str(&parts[0]);
        }
        s
    }
}

/// Split a polynomial into a scalar times a product of linear forms.
pub fn split_into_forms(p: &Polynomial) -> Result<(Q, Vec<(LinearForm, u32)>)> {
    if let Some(c) = p.as_constant() {
        if c.is_zero() {
            return Err(Error::ZeroDivision);
        }
        return Ok((c, Vec::new()));
    }
    let vars = p.vars().clone();
    let fail = || Error::Unsupported(format!("{p} does not split into linear forms"));
    let mut rest = p.clone();
    let mut forms = Vec::new();
    // Monomial content: variables dividing every term.
    let w = vars.width();
    let mut common = vec![u16::MAX; w];
    for (m, _) in rest.terms() {
        for (c, &e) in common.iter_mut().zip(m.exps()) {
            *c = (*c).min(e);
        }
    }
    if common.iter().any(|&e| e > 0) {
        let m = Monomial::from_exps(common.clone());
        rest = rest.exact_div(&Polynomial::from_terms(&vars, [(m.exps().to_vec(), Q::one())])?)?;
        for (v, &e) in common.iter().enumerate() {
            if e > 0 {
                let (s, f) = if v == vars.h() {
                    LinearForm::new(1, None, None)
                } else {
                    LinearForm::new(0, Some(v), None)
                }
                .expect("nonzero");
                rest = rest.scale(&s.pow(e as i32));
                forms.push((f, e as u32));
            }
        }
    }
    if let Some(c) = rest.as_constant() {
        return Ok((c, forms));
    }
    if let Some((s, f)) = LinearForm::from_polynomial(&rest) {
        forms.push((f, 1));
        return Ok((s, forms));
    }
    // One named variable: factor through integer roots at h = 1.
    if vars.len() == 1 && rest.is_homogeneous() {
        let d = rest.degree() as usize;
        let mut coeffs = vec![Q::zero(); d + 1];
        for (m, c) in rest.terms() {
            coeffs[m.exps()[0] as usize] = c.clone();
        }
        let uni = UniPoly::new(coeffs);
        let (roots, cof) = uni.integer_roots();
        if cof.degree() != Some(0) {
            return Err(fail());
        }
        let mut scale = cof.lead();
        for r in roots {
            let (s, f) = LinearForm::new(-r, Some(0), None).expect("nonzero");
            scale *= s;
            forms.push((f, 1));
        }
        return Ok((scale, forms));
    }
    Err(fail())
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

macro_rules! rf_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            /// Panics on mismatched contexts.
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                let f: fn(&RationalFunction, &RationalFunction) -> Result<RationalFunction> = $body;
                f(self, rhs).expect("rational function operands in different contexts")
            }
        }
    };
}

rf_binop!(Add, add, |a, b| a.try_add(b));
rf_binop!(Sub, sub, |a, b| a.try_add(&-b));
rf_binop!(Mul, mul, |a, b| a.try_mul(b));

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> VarSet {
        VarSet::spectral()
    }

    fn form(a_half: i64, sign: i64) -> Polynomial {
        // a_half·h + sign·z
        let v = ctx();
        let z = Polynomial::var(&v, 0).scale(&Q::from_integer(sign.into()));
        &z + &Polynomial::var(&v, v.h()).scale(&Q::from_integer(a_half.into()))
    }

    #[test]
    fn product_with_inverse_is_one() {
        let v = ctx();
        let r = RationalFunction::from_poly(form(2, -1)).div_linear(&form(2, 1)).unwrap();
        let inv = r.inverse().unwrap();
        assert_eq!(&r * &inv, RationalFunction::one(&v));
        let at0 = r.eval(&[Q::zero(), Q::one()]).unwrap();
        assert_eq!(at0, Q::one());
    }

    #[test]
    fn sums_use_the_lcm() {
        let v = ctx();
        let a = RationalFunction::one(&v).div_linear(&form(2, 1)).unwrap();
        let b = RationalFunction::one(&v).div_linear(&form(-2, 1)).unwrap();
        let s = &a + &b;
        assert_eq!(s.denominator().len(), 2);
        let back = &s - &b;
        assert_eq!(back, a);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn cancellation_on_construction() {
        let p = &form(2, 1) * &form(4, 1);
        let r = RationalFunction::from_poly(p).div_linear(&form(4, 1)).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.numerator(), &form(2, 1));
    }

    #[test]
    fn one_variable_numerators_split() {
        let p = &(&form(2, -1) * &form(4, -1)) * &form(0, 1);
        let (c, forms) = split_into_forms(&p).unwrap();
        assert_eq!(forms.len(), 3);
        let mut back = Polynomial::constant(p.vars(), c);
        for (f, e) in forms {
            back = &back * &f.to_polynomial(p.vars()).pow(e);
        }
        assert_eq!(back, p);
    }
}
