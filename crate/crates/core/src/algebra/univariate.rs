use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Q;
use crate::error::{Error, Result};

/// Dense univariate polynomial over Q, coefficients from degree 0 upwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    c: Vec<Q>,
}

impl UniPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn zero() -> Self {
        UniPoly { c: Vec::new() }
    }

    pub fn constant(q: Q) -> Self {
        Self::new(vec![q])
    }

    /// The variable `u`.
    pub fn x() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, q: &Q) -> Self {
        Self::new(self.c.iter().map(|x| x * q).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&(Q::one() / l))
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d.degree().ok_or(Error::ZeroDivision)?;
        let mut r = self.c.clone();
        let lead = d.lead();
        let mut q = vec![Q::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let t = r[r.len() - 1].clone() / &lead;
            for (i, dc) in d.c.iter().enumerate() {
                r[k + i] -= &t * dc;
            }
            q[k] = t;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Ok((UniPoly::new(q), UniPoly::new(r)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Integer roots with multiplicity, together with the cofactor left
    /// after removing them.
    pub fn integer_roots(&self) -> (Vec<i64>, UniPoly) {
        let mut roots = Vec::new();
        let mut p = self.clone();
        if p.is_zero() {
            return (roots, p);
        }
        while p.c.len() > 1 && p.c[0].is_zero() {
            p.c.remove(0);
            roots.push(0);
        }
        // Cauchy bound on the remaining roots.
        let lead = p.lead().abs();
        let bound = p
            .c
            .iter()
            .take(p.c.len().saturating_sub(1))
            .map(|c| c.abs() / &lead)
            .fold(Q::zero(), |a, b| if b > a { b } else { a });
        let bound = (bound.to_integer() + BigInt::one()).to_i64().unwrap_or(i64::MAX);
        let mut r = 1i64;
        while r <= bound && p.c.len() > 1 {
            let mut progressed = false;
            for cand in [r, -r] {
                let x = Q::from_integer(cand.into());
                while p.c.len() > 1 && p.eval(&x).is_zero() {
                    let lin = UniPoly::new(vec![-x.clone(), Q::one()]);
                    p = p.div_rem(&lin).expect("nonzero").0;
                    roots.push(cand);
                    progressed = true;
                }
            }
            if !progressed {
                r += 1;
            }
        }
        (roots, p)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new(
            (0..n)
                .map(|i| {
                    self.c.get(i).cloned().unwrap_or_else(Q::zero)
                        + o.c.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.c.iter().map(|x| -x.clone()).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        self + &(-o)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Q::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }
}

/// Element of Q(u): reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniRat {
    num: UniPoly,
    den: UniPoly,
}

impl UniRat {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDivision);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g)?.0;
        let den = den.div_rem(&g)?.0;
        let l = den.lead();
        Ok(UniRat {
            num: num.scale(&(Q::one() / &l)),
            den: den.monic(),
        })
    }

    pub fn zero() -> Self {
        UniRat {
            num: UniPoly::zero(),
            den: UniPoly::constant(Q::one()),
        }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        UniRat {
            num: p,
            den: UniPoly::constant(Q::one()),
        }
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &UniRat) -> UniRat {
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::new(num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &UniRat) -> UniRat {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> UniRat {
        UniRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &UniRat) -> UniRat {
        Self::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominators")
    }

    pub fn div(&self, o: &UniRat) -> Result<UniRat> {
        if o.is_zero() {
            return Err(Error::ZeroDivision);
        }
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| Q::from_integer(x.into())).collect())
    }

    #[test]
    fn gcd_and_reduction() {
        // (u-1)(u+2) and (u-1)(u-3)
        let a = &p(&[-1, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[-3, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let r = UniRat::new(a, b).unwrap();
        assert_eq!(r.den(), &p(&[-3, 1]));
    }

    #[test]
    fn integer_roots_with_multiplicity() {
        let a = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &(&p(&[4, 1]) * &p(&[1, 0, 1]));
        let (mut roots, rest) = a.integer_roots();
        roots.sort();
        assert_eq!(roots, alloc::vec![-4, 1, 1]);
        assert_eq!(rest.degree(), Some(2));
    }
}
