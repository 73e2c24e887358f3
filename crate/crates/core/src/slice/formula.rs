use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};

use num_traits::{One, Zero};

use super::PolyMatrix;
use crate::algebra::{parse_expr, split_juxtaposed, Expr, Polynomial, VarSet, Q};
use crate::error::{Error, Result};

/// Result of evaluating a matrix formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(Polynomial),
    Matrix(PolyMatrix),
}

impl Value {
    pub fn into_matrix(self, n: usize) -> PolyMatrix {
        match self {
            Value::Matrix(m) => m,
            Value::Scalar(s) => PolyMatrix::scalar(s.vars(), n, &s),
        }
    }

    pub fn into_scalar(self) -> Result<Polynomial> {
        match self {
            Value::Scalar(s) => Ok(s),
            Value::Matrix(_) => Err(Error::invalid("expected a scalar, got a matrix")),
        }
    }
}

/// Symbols available to [`eval_formula`]: named square matrices (entries
/// addressed as `A_{i,j}`), named scalars (`t3`, `e2`, …) and the variables
/// of the context.
#[derive(Clone, Debug)]
pub struct FormulaEnv {
    pub vars: VarSet,
    pub size: usize,
    pub matrices: BTreeMap<String, PolyMatrix>,
    pub scalars: BTreeMap<String, Polynomial>,
}

impl FormulaEnv {
    pub fn new(vars: &VarSet, size: usize) -> Self {
        FormulaEnv {
            vars: vars.clone(),
            size,
            matrices: BTreeMap::new(),
            scalars: BTreeMap::new(),
        }
    }

    /// The environment of a slice model: `A`, `B` when every block has
    /// size 2, and `e1, …, ep` of the deformation parameters.
    pub fn for_slice(model: &super::SliceModel) -> Self {
        let mut env = FormulaEnv::new(&model.vars, model.n());
        if let Ok((a, b)) = super::two_block_matrices(model) {
            env.matrices.insert("A".into(), a);
            env.matrices.insert("B".into(), b);
        }
        let t: alloc::vec::Vec<Polynomial> =
            (1..=model.params).filter_map(|a| model.parameter(a)).collect();
        let e = super::elementary_symmetric(&t, &model.vars);
        for (i, ei) in e.into_iter().enumerate().skip(1) {
            env.scalars.insert(format!("e{i}"), ei);
        }
        env
    }

    fn lookup(&self, name: &str, idx: &[usize]) -> Result<Option<Value>> {
        if let Some(m) = self.matrices.get(name) {
            return match idx {
                [] => Ok(Some(Value::Matrix(m.clone()))),
                [i, j] if (1..=m.rows()).contains(i) && (1..=m.cols()).contains(j) => {
                    Ok(Some(Value::Scalar(m.get(i - 1, j - 1).clone())))
                }
                _ => Err(Error::invalid(format!("bad entry {name}{idx:?}"))),
            };
        }
        let mut full = name.to_string();
        for i in idx {
            full.push_str(&i.to_string());
        }
        if let Some(s) = self.scalars.get(&full) {
            return Ok(Some(Value::Scalar(s.clone())));
        }
        if idx.is_empty() && (name == "hb" || name == "hbar") {
            return Ok(Some(Value::Scalar(Polynomial::hbar(&self.vars))));
        }
        Ok(self
            .vars
            .index_of(&full)
            .map(|v| Value::Scalar(Polynomial::var(&self.vars, v))))
    }

    fn add(&self, a: Value, b: Value) -> Result<Value> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
            (a, b) => Value::Matrix(a.into_matrix(self.size).add(&b.into_matrix(self.size))?),
        })
    }

    fn mul(&self, a: Value, b: Value) -> Result<Value> {
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
            (Value::Scalar(x), Value::Matrix(m)) | (Value::Matrix(m), Value::Scalar(x)) => {
                Value::Matrix(m.scale(&x))
            }
            (Value::Matrix(x), Value::Matrix(y)) => Value::Matrix(x.mul(&y)?),
        })
    }

    fn neg(&self, a: Value) -> Value {
        match a {
            Value::Scalar(x) => Value::Scalar(-&x),
            Value::Matrix(m) => Value::Matrix(m.neg()),
        }
    }

    fn eval(&self, e: &Expr) -> Result<Value> {
        match e {
            Expr::Num(n) => Ok(Value::Scalar(Polynomial::constant(
                &self.vars,
                Q::from_integer(n.clone()),
            ))),
            Expr::Sym(name, idx) => {
                if let Some(v) = self.lookup(name, idx)? {
                    return Ok(v);
                }
                let parts = split_juxtaposed(name, idx).ok_or_else(|| unknown(name))?;
                let mut acc = Value::Scalar(Polynomial::one(&self.vars));
                for (n, i) in parts {
                    let v = self.lookup(&n, &i)?.ok_or_else(|| unknown(name))?;
                    acc = self.mul(acc, v)?;
                }
                Ok(acc)
            }
            Expr::Neg(a) => Ok(self.neg(self.eval(a)?)),
            Expr::Add(a, b) => self.add(self.eval(a)?, self.eval(b)?),
            Expr::Sub(a, b) => {
                let b = self.neg(self.eval(b)?);
                self.add(self.eval(a)?, b)
            }
            Expr::Mul(a, b) => self.mul(self.eval(a)?, self.eval(b)?),
            Expr::Div(a, b) => {
                let d = self
                    .eval(b)?
                    .into_scalar()?
                    .as_constant()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| Error::invalid("only division by nonzero numbers"))?;
                self.mul(
                    self.eval(a)?,
                    Value::Scalar(Polynomial::constant(&self.vars, Q::one() / d)),
                )
            }
            Expr::Pow(a, n) => {
                let mut acc = Value::Scalar(Polynomial::one(&self.vars));
                let base = self.eval(a)?;
                for _ in 0..*n {
                    acc = self.mul(acc, base.clone())?;
                }
                Ok(acc)
            }
            Expr::Index(a, idx) => match (self.eval(a)?, idx.as_slice()) {
                (Value::Matrix(m), [i, j])
                    if (1..=m.rows()).contains(i) && (1..=m.cols()).contains(j) =>
                {
                    Ok(Value::Scalar(m.get(i - 1, j - 1).clone()))
                }
                _ => Err(Error::invalid(format!("bad matrix entry {idx:?}"))),
            },
        }
    }
}

fn unknown(name: &str) -> Error {
    Error::Parse {
        pos: 0,
        msg: format!("unknown symbol {name}"),
    }
}

/// Evaluates a formula with matrix and scalar symbols.
pub fn eval_formula(src: &str, env: &FormulaEnv) -> Result<Value> {
    env.eval(&parse_expr(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn matrix_products_and_entries() {
        let v = VarSet::named(["a", "b", "c", "d", "t1"]);
        let p = |s: &str| parse_poly(s, &v).unwrap();
        let mut a = PolyMatrix::zeros(&v, 2, 2);
        a.set(0, 0, p("a"));
        a.set(0, 1, p("b"));
        a.set(1, 0, p("c"));
        a.set(1, 1, p("d"));
        let mut env = FormulaEnv::new(&v, 2);
        env.matrices.insert("A".into(), a.clone());
        env.scalars.insert("e1".into(), p("t1"));
        let sq = eval_formula("A^2 - e_1 A + 1", &env).unwrap().into_matrix(2);
        assert_eq!(sq.get(0, 1), &p("a*b + b*d - t1*b"));
        assert_eq!(sq.get(0, 0), &p("a^2 + b*c - t1*a + 1"));
        let e = eval_formula("(AA)_{2,1} - A_{2,1}", &env).unwrap().into_scalar().unwrap();
        assert_eq!(e, p("c*a + d*c - c"));
    }
}
