use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use super::SliceModel;
use crate::algebra::{Polynomial, QMatrix, VarSet, Q};
use crate::error::{Error, Result};

/// `var = num / den`, with `num` and `den` free of `var` and of every
/// coordinate eliminated before it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub var: usize,
    pub num: Polynomial,
    pub den: Polynomial,
}

/// A generic point of a locus cut out by constraints, solved one
/// constraint at a time.
#[derive(Clone, Debug)]
pub struct Membership {
    pub eliminations: Vec<Elimination>,
    /// Constraints that reduced to zero once the others were imposed.
    pub implied: Vec<usize>,
    /// Coordinates left free.
    pub free: Vec<usize>,
}

impl Membership {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Clears denominators: `den^d · p(var = num/den)` for each
    /// elimination in turn.
    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        let mut p = p.clone();
        for e in &self.eliminations {
            p = substitute_fraction(&p, e);
        }
        p
    }

    /// Coordinates at the point whose free coordinates take `values`
    /// (indexed like `free`); parameters are fixed by `params`. Returns
    /// `None` when a denominator vanishes there.
    pub fn evaluate(
        &self,
        vars: &VarSet,
        ncoords: usize,
        values: &[Q],
        params: &[Q],
    ) -> Result<Option<Vec<Q>>> {
        if values.len() != self.free.len() {
            return Err(Error::invalid("one value per free coordinate"));
        }
        let mut point = alloc::vec![Q::zero(); vars.width()];
        for (&f, v) in self.free.iter().zip(values) {
            point[f] = v.clone();
        }
        for (a, v) in params.iter().enumerate() {
            point[ncoords + a] = v.clone();
        }
        for e in self.eliminations.iter().rev() {
            let d = e.den.eval(&point)?;
            if d.is_zero() {
                return Ok(None);
            }
            point[e.var] = e.num.eval(&point)? / d;
        }
        point.truncate(ncoords);
        Ok(Some(point))
    }
}

/// The slice matrix `x_m + Y` at the point of the component with free
/// coordinates `values`; `None` when a denominator vanishes there.
pub fn component_point(
    model: &SliceModel,
    membership: &Membership,
    values: &[Q],
    params: &[Q],
) -> Result<Option<QMatrix>> {
    let nc = model.coords.len();
    let Some(point) = membership.evaluate(&model.vars, nc, values, params)? else {
        return Ok(None);
    };
    let size = model.size();
    let mut x = QMatrix::zeros(size, size);
    for (b, &mb) in model.m.iter().enumerate() {
        let o = model.offsets[b];
        for r in 0..mb.saturating_sub(1) {
            x.set(o + r, o + r + 1, Q::from_integer(1.into()));
        }
    }
    for (c, v) in model.coords.iter().zip(point) {
        x.set(c.row_index, c.col_index, v);
    }
    Ok(Some(x))
}

fn substitute_fraction(p: &Polynomial, e: &Elimination) -> Polynomial {
    let d = p.degree_in(e.var);
    if d == 0 {
        return p.clone();
    }
    let vars = p.vars();
    let mut num_pows = alloc::vec![Polynomial::one(vars)];
    let mut den_pows = alloc::vec![Polynomial::one(vars)];
    for k in 1..=usize::from(d) {
        num_pows.push(&num_pows[k - 1] * &e.num);
        den_pows.push(&den_pows[k - 1] * &e.den);
    }
    let mut out = Polynomial::zero(vars);
    for (m, c) in p.terms() {
        let mut rest = m.exps().to_vec();
        let k = usize::from(rest[e.var]);
        rest[e.var] = 0;
        let mono = Polynomial::from_terms(vars, [(rest, c.clone())]).expect("same width");
        out = &out + &(&(&mono * &num_pows[k]) * &den_pows[usize::from(d) - k]);
    }
    out
}

/// Solves the constraints in order, each for a coordinate occurring to the
/// first power (preferring a constant coefficient). The coordinates of the
/// model not eliminated are the free symbols of the generic point.
pub fn verify_component_membership(
    model: &SliceModel,
    constraints: &[Polynomial],
    relations: &[Polynomial],
) -> Result<Membership> {
    let nc = model.coords.len();
    let mut m = Membership {
        eliminations: Vec::new(),
        implied: Vec::new(),
        free: Vec::new(),
    };
    for (ci, c) in constraints.iter().enumerate() {
        let r = m.reduce(c);
        if r.is_zero() {
            m.implied.push(ci);
            continue;
        }
        let mut best: Option<(usize, Polynomial, Polynomial, bool)> = None;
        for v in 0..nc {
            if r.degree_in(v) != 1 {
                continue;
            }
            let (coef, rest) = split_linear(&r, v);
            let constant = coef.as_constant().is_some();
            if best.as_ref().is_none_or(|b| constant && !b.3) {
                best = Some((v, coef, rest, constant));
            }
        }
        let (var, coef, rest, _) = best.ok_or_else(|| {
            Error::Unsupported(format!(
                "constraint {} is not linear in any coordinate: {r}",
                ci + 1
            ))
        })?;
        m.eliminations.push(Elimination {
            var,
            num: -&rest,
            den: coef,
        });
    }
    let gone: Vec<usize> = m.eliminations.iter().map(|e| e.var).collect();
    m.free = (0..nc).filter(|v| !gone.contains(v)).collect();
    for (k, rel) in relations.iter().enumerate() {
        let r = m.reduce(rel);
        if !r.is_zero() {
            return Err(Error::mismatch(
                "membership",
                format!("relation {}", k + 1),
                format!("{r}"),
            ));
        }
    }
    Ok(m)
}

/// `p = coef · x_v + rest` for `p` of degree one in `x_v`.
fn split_linear(p: &Polynomial, v: usize) -> (Polynomial, Polynomial) {
    let vars = p.vars();
    let mut coef = Polynomial::zero(vars);
    let mut rest = Polynomial::zero(vars);
    for (m, c) in p.terms() {
        let mut e = m.exps().to_vec();
        if e[v] == 1 {
            e[v] = 0;
            coef = &coef + &Polynomial::from_terms(vars, [(e, c.clone())]).expect("width");
        } else {
            rest = &rest + &Polynomial::from_terms(vars, [(e, c.clone())]).expect("width");
        }
    }
    (coef, rest)
}

/// Product of the weights of the listed coordinates, in `z1..zN`.
pub fn linear_component_multidegree(model: &SliceModel, vanishing: &[String]) -> Result<Polynomial> {
    let z = VarSet::indexed(model.n());
    let mut p = Polynomial::one(&z);
    for name in vanishing {
        let c = model
            .coordinate(name)
            .ok_or_else(|| Error::invalid(format!("no coordinate {name}")))?;
        p = &p * &model.weight(c, &z);
    }
    Ok(p)
}
