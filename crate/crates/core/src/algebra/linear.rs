use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_traits::{One, ToPrimitive, Zero};

use super::{Monomial, Polynomial, VarSet, Q};

/// The form `a·h + z_plus − z_minus` (h = ħ/2) with either index optional.
///
/// Values are always stored in a canonical representative of their line:
/// a positive h-coefficient when there is one, otherwise `plus` before
/// `minus` (an absent index counting as last), and a pure constant form is
/// always `h`. Constructors return the scalar relating the requested form to
/// the stored one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    h: i64,
    plus: Option<u32>,
    minus: Option<u32>,
}

fn key(i: Option<u32>) -> u64 {
    i.map_or(u64::MAX, u64::from)
}

impl LinearForm {
    /// Canonical form of `h_units·h + z_plus − z_minus`, with the scalar `s`
    /// such that the requested form equals `s` times the returned one.
    /// Returns `None` for the zero form.
    pub fn new(h_units: i64, plus: Option<usize>, minus: Option<usize>) -> Option<(Q, LinearForm)> {
        let (mut plus, mut minus) = (plus.map(|i| i as u32), minus.map(|i| i as u32));
        if plus.is_some() && plus == minus {
            plus = None;
            minus = None;
        }
        if plus.is_none() && minus.is_none() {
            if h_units == 0 {
                return None;
            }
            let f = LinearForm {
                h: 1,
                plus: None,
                minus: None,
            };
            return Some((Q::from_integer(h_units.into()), f));
        }
        let flip = h_units < 0 || (h_units == 0 && key(plus) > key(minus));
        if flip {
            let f = LinearForm {
                h: -h_units,
                plus: minus,
                minus: plus,
            };
            Some((-Q::one(), f))
        } else {
            Some((
                Q::one(),
                LinearForm {
                    h: h_units,
                    plus,
                    minus,
                },
            ))
        }
    }

    /// `a·ħ + z_i − z_j` with 0-based indices.
    pub fn hbar_diff(a: i64, i: usize, j: usize) -> (Q, LinearForm) {
        Self::new(2 * a, Some(i), Some(j)).expect("i != j gives a nonzero form")
    }

    /// The spectral form `a·ħ + z` in the one-variable context.
    pub fn spectral(a_half_units: i64) -> (Q, LinearForm) {
        Self::new(a_half_units, Some(0), None).expect("nonzero")
    }

    pub fn h_units(&self) -> i64 {
        self.h
    }

    pub fn plus(&self) -> Option<usize> {
        self.plus.map(|i| i as usize)
    }

    pub fn minus(&self) -> Option<usize> {
        self.minus.map(|i| i as usize)
    }

    pub fn is_constant(&self) -> bool {
        self.plus.is_none() && self.minus.is_none()
    }

    pub fn to_polynomial(&self, vars: &VarSet) -> Polynomial {
        let w = vars.width();
        let mut terms = Vec::with_capacity(3);
        if self.h != 0 {
            terms.push((Monomial::var(w, vars.h()).exps().to_vec(), Q::from_integer(self.h.into())));
        }
        if let Some(i) = self.plus {
            terms.push((Monomial::var(w, i as usize).exps().to_vec(), Q::one()));
        }
        if let Some(j) = self.minus {
            terms.push((Monomial::var(w, j as usize).exps().to_vec(), -Q::one()));
        }
        Polynomial::from_terms(vars, terms).expect("form indices fit the context")
    }

    /// Recognise `p = s·form`. Fails unless `p` is homogeneous linear with at
    /// most two variables carrying opposite coefficients and an h-coefficient
    /// that is an integer multiple of that common coefficient.
    pub fn from_polynomial(p: &Polynomial) -> Option<(Q, LinearForm)> {
        if p.is_zero() || p.degree() != 1 || !p.is_homogeneous() {
            return None;
        }
        let h = p.vars().h();
        let mut hc = Q::zero();
        let mut vs: Vec<(usize, Q)> = Vec::new();
        for (m, c) in p.terms() {
            let v = m.exps().iter().position(|&e| e == 1)?;
            if v == h {
                hc = c.clone();
            } else {
                vs.push((v, c.clone()));
            }
        }
        let (scale, plus, minus) = match vs.as_slice() {
            [] => {
                let (s, f) = Self::new(1, None, None)?;
                return Some((hc * s, f));
            }
            [(v, c)] => (c.clone(), Some(*v), None),
            [(a, ca), (b, cb)] => {
                if ca != &-cb.clone() {
                    return None;
                }
                (ca.clone(), Some(*a), Some(*b))
            }
            _ => return None,
        };
        let units = &hc / &scale;
        if !units.is_integer() {
            return None;
        }
        let (s, f) = Self::new(units.to_integer().to_i64()?, plus, minus)?;
        Some((scale * s, f))
    }

    /// Apply an index map and an h shift: `z_i ↦ z_{map(i)} + shift(i)·h`.
    /// Returns `None` if the image vanishes.
    pub fn relabel(
        &self,
        map: impl Fn(usize) -> (usize, i64),
    ) -> Option<(Q, LinearForm)> {
        let mut h = self.h;
        let plus = self.plus.map(|i| {
            let (j, s) = map(i as usize);
            h += s;
            j
        });
        let minus = self.minus.map(|i| {
            let (j, s) = map(i as usize);
            h -= s;
            j
        });
        Self::new(h, plus, minus)
    }

    pub fn eval(&self, values: &[Q]) -> Q {
        let mut acc = Q::from_integer(self.h.into()) * &values[values.len() - 1];
        if let Some(i) = self.plus {
            acc += &values[i as usize];
        }
        if let Some(j) = self.minus {
            acc -= &values[j as usize];
        }
        acc
    }

    /// Text such as `2hb + z1 - z3` (h-units rendered in ħ).
    pub fn render(&self, vars: &VarSet) -> String {
        let mut s = String::new();
        let a = Q::new(self.h.into(), 2.into());
        if !a.is_zero() {
            if a.is_one() {
                s.push_str("hb");
            } else if a == -Q::one() {
                s.push_str("-hb");
            } else if a.is_integer() {
                let _ = write!(s, "{}hb", a.numer());
            } else {
                let _ = write!(s, "{}/{}*hb", a.numer(), a.denom());
            }
        }
        if let Some(i) = self.plus {
            if !s.is_empty() {
                s.push_str(" + ");
            }
            s.push_str(vars.name(i as usize));
        }
        if let Some(j) = self.minus {
            s.push_str(if s.is_empty() { "-" } else { " - " });
            s.push_str(vars.name(j as usize));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sign_prefers_positive_h() {
        let (s, f) = LinearForm::new(-2, Some(1), Some(0)).unwrap();
        assert_eq!(s, -Q::one());
        assert_eq!((f.h_units(), f.plus(), f.minus()), (2, Some(0), Some(1)));
        let (s, f) = LinearForm::new(0, Some(1), Some(0)).unwrap();
        assert_eq!(s, -Q::one());
        assert_eq!((f.plus(), f.minus()), (Some(0), Some(1)));
        let (s, f) = LinearForm::new(0, None, Some(3)).unwrap();
        assert_eq!(s, -Q::one());
        assert_eq!((f.plus(), f.minus()), (Some(3), None));
    }

    #[test]
    fn constant_forms_collapse_to_h() {
        let (s, f) = LinearForm::new(-6, Some(2), Some(2)).unwrap();
        assert_eq!(s, Q::from_integer((-6).into()));
        assert!(f.is_constant());
        assert!(LinearForm::new(0, None, None).is_none());
    }

    #[test]
    fn polynomial_round_trip() {
        let v = VarSet::indexed(4);
        for (h, p, m) in [(4, Some(0), Some(3)), (-3, Some(2), None), (0, Some(1), Some(2))] {
            let (s, f) = LinearForm::new(h, p, m).unwrap();
            let poly = f.to_polynomial(&v).scale(&s);
            let (s2, f2) = LinearForm::from_polynomial(&poly.scale(&Q::from_integer(7.into()))).unwrap();
            assert_eq!(f2, f);
            assert_eq!(s2, s * Q::from_integer(7.into()));
        }
    }

    #[test]
    fn render_is_readable() {
        let v = VarSet::indexed(4);
        let (_, f) = LinearForm::hbar_diff(3, 0, 3);
        assert_eq!(f.render(&v), "3hb + z1 - z4");
    }
}
