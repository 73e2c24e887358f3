//! A small reader for formulas written in plain text or in the LaTeX subset
//! used for matrices and products of linear factors: `\frac{…}{…}`, `\hbar`,
//! subscripts `z_1`, `A_{1,2}`, `(…)_{1,4}`, implicit multiplication.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Polynomial, RationalFunction, VarSet, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    /// Symbol with optional subscripts: `z_1` is `Sym("z", [1])`.
    Sym(String, Vec<usize>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// Entry of a compound matrix expression, `(A^2+B)_{1,4}`.
    Index(Box<Expr>, Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Frac,
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let b: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = b[start..i].iter().collect();
            out.push((start, Tok::Num(s.parse().expect("digits"))));
            continue;
        }
        if c == '\\' {
            i += 1;
            while i < b.len() && b[i].is_ascii_alphabetic() {
                i += 1;
            }
            let cmd: String = b[start + 1..i].iter().collect();
            match cmd.as_str() {
                "hbar" => out.push((start, Tok::Ident("hb".into()))),
                "frac" => out.push((start, Tok::Frac)),
                "cdot" | "times" => out.push((start, Tok::Sym('*'))),
                "left" | "right" => {}
                "" => {
                    // `\,` `\;` and friends are spacing.
                    if i < b.len() && ",;:! ".contains(b[i]) {
                        i += 1;
                    } else {
                        return Err(Error::Parse {
                            pos: start,
                            msg: "stray backslash".into(),
                        });
                    }
                }
                _ => out.push((start, Tok::Ident(cmd))),
            }
            continue;
        }
        if c.is_alphabetic() || c == 'ħ' {
            if c == 'ħ' {
                i += 1;
                out.push((start, Tok::Ident("hb".into())));
                continue;
            }
            while i < b.len() && (b[i].is_ascii_alphanumeric()) {
                i += 1;
            }
            out.push((start, Tok::Ident(b[start..i].iter().collect())));
            continue;
        }
        if "+-*/^(){}[],_".contains(c) {
            out.push((start, Tok::Sym(c)));
            i += 1;
            continue;
        }
        if c == '−' {
            out.push((start, Tok::Sym('-')));
            i += 1;
            continue;
        }
        return Err(Error::Parse {
            pos: start,
            msg: format!("unexpected character {c:?}"),
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.here(),
            msg: msg.to_string(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected {c:?}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_) | Tok::Ident(_) | Tok::Frac | Tok::Sym('(') | Tok::Sym('{'))
        )
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.signed()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.signed()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.signed()?));
            } else if self.starts_atom() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn signed(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.signed()?)));
        }
        if self.eat('+') {
            return self.signed();
        }
        self.power()
    }

    fn int(&mut self) -> Result<usize> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                n.to_usize().ok_or(()).or_else(|_| self.err("integer too large"))
            }
            _ => self.err("expected an integer"),
        }
    }

    fn int_list(&mut self, close: char) -> Result<Vec<usize>> {
        let mut v = alloc::vec![self.int()?];
        while self.eat(',') {
            v.push(self.int()?);
        }
        self.expect(close)?;
        Ok(v)
    }

    fn subscript(&mut self) -> Result<Option<Vec<usize>>> {
        if self.eat('_') {
            if self.eat('{') {
                return self.int_list('}').map(Some);
            }
            return Ok(Some(alloc::vec![self.int()?]));
        }
        if self.eat('[') {
            return self.int_list(']').map(Some);
        }
        Ok(None)
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.postfix()?;
        if self.eat('^') {
            let e = if self.eat('{') {
                let e = self.int()?;
                self.expect('}')?;
                e
            } else {
                self.int()?
            };
            return Ok(Expr::Pow(Box::new(base), e as u32));
        }
        Ok(base)
    }

    fn postfix(&mut self) -> Result<Expr> {
        let bare = matches!(self.peek(), Some(Tok::Ident(_)));
        let mut a = self.atom()?;
        while let Some(idx) = self.subscript()? {
            a = match a {
                Expr::Sym(name, v) if bare && v.is_empty() => Expr::Sym(name, idx),
                other => Expr::Index(Box::new(other), idx),
            };
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Sym(s, Vec::new()))
            }
            Some(Tok::Frac) => {
                self.pos += 1;
                self.expect('{')?;
                let n = self.expr()?;
                self.expect('}')?;
                self.expect('{')?;
                let d = self.expr()?;
                self.expect('}')?;
                Ok(Expr::Div(Box::new(n), Box::new(d)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('{')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect('}')?;
                Ok(e)
            }
            _ => self.err("expected a number, symbol or parenthesis"),
        }
    }
}

/// Parse one formula.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        len: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parse `lhs = rhs` (or a bare expression, read as `expr = 0`) into
/// `lhs − rhs`.
pub fn parse_equation(src: &str) -> Result<Expr> {
    let parts: Vec<&str> = src.split('=').collect();
    match parts.as_slice() {
        [e] => parse_expr(e),
        [l, r] => Ok(Expr::Sub(Box::new(parse_expr(l)?), Box::new(parse_expr(r)?))),
        _ => Err(Error::Parse {
            pos: 0,
            msg: "more than one '='".into(),
        }),
    }
}

/// Resolve `hb`, plain variable names of `vars`, and subscripted names such
/// as `z_3` against `vars`.
pub fn resolve_in(vars: &VarSet, name: &str, idx: &[usize]) -> Option<RationalFunction> {
    if idx.is_empty() && (name == "hb" || name == "hbar") {
        return Some(RationalFunction::from_poly(Polynomial::hbar(vars)));
    }
    let full = if idx.is_empty() {
        name.to_string()
    } else {
        let mut s = name.to_string();
        for i in idx {
            s.push_str(&i.to_string());
        }
        s
    };
    vars.index_of(&full)
        .map(|i| RationalFunction::from_poly(Polynomial::var(vars, i)))
}

fn unknown(name: &str, idx: &[usize]) -> Error {
    Error::Parse {
        pos: 0,
        msg: format!("unknown symbol {name}{idx:?}"),
    }
}

/// Read a run of letters such as `AB` as the product `A·B`; subscripts
/// attach to the last letter.
pub fn split_juxtaposed(name: &str, idx: &[usize]) -> Option<Vec<(String, Vec<usize>)>> {
    if name.chars().count() < 2 || !name.chars().all(|c| c.is_ascii_alphabetic()) {
        return None;
    }
    let n = name.chars().count();
    Some(
        name.chars()
            .enumerate()
            .map(|(k, c)| {
                let i = if k + 1 == n { idx.to_vec() } else { Vec::new() };
                (c.to_string(), i)
            })
            .collect(),
    )
}

type Resolver<'a> = &'a dyn Fn(&str, &[usize]) -> Option<RationalFunction>;

/// Evaluate to a rational function. Divisors must be products of factors
/// that each invert on their own (constants and linear forms).
pub fn eval_rf(e: &Expr, vars: &VarSet, resolve: Resolver<'_>) -> Result<RationalFunction> {
    Ok(match e {
        Expr::Num(n) => RationalFunction::constant(vars, Q::from_integer(n.clone())),
        Expr::Sym(name, idx) => match resolve(name, idx) {
            Some(v) => v,
            None => {
                // `AB` written for a product of single-letter symbols.
                let split = split_juxtaposed(name, idx).ok_or_else(|| unknown(name, idx))?;
                let mut acc = RationalFunction::one(vars);
                for (n, i) in split {
                    let v = resolve(&n, &i).ok_or_else(|| unknown(name, idx))?;
                    acc = acc.try_mul(&v)?;
                }
                acc
            }
        },
        Expr::Neg(a) => -&eval_rf(a, vars, resolve)?,
        Expr::Add(a, b) => eval_rf(a, vars, resolve)?.try_add(&eval_rf(b, vars, resolve)?)?,
        Expr::Sub(a, b) => eval_rf(a, vars, resolve)?.try_add(&-&eval_rf(b, vars, resolve)?)?,
        Expr::Mul(a, b) => eval_rf(a, vars, resolve)?.try_mul(&eval_rf(b, vars, resolve)?)?,
        Expr::Div(a, b) => eval_rf(a, vars, resolve)?.try_mul(&eval_inverse(b, vars, resolve)?)?,
        Expr::Pow(a, n) => eval_rf(a, vars, resolve)?.pow(*n),
        Expr::Index(_, _) => {
            return Err(Error::Parse {
                pos: 0,
                msg: "matrix entry in a scalar formula".into(),
            })
        }
    })
}

fn eval_inverse(e: &Expr, vars: &VarSet, resolve: Resolver<'_>) -> Result<RationalFunction> {
    match e {
        Expr::Mul(a, b) => eval_inverse(a, vars, resolve)?.try_mul(&eval_inverse(b, vars, resolve)?),
        Expr::Pow(a, n) => Ok(eval_inverse(a, vars, resolve)?.pow(*n)),
        Expr::Neg(a) => Ok(-&eval_inverse(a, vars, resolve)?),
        Expr::Div(a, b) => eval_rf(b, vars, resolve)?.try_mul(&eval_inverse(a, vars, resolve)?),
        _ => eval_rf(e, vars, resolve)?.inverse(),
    }
}

/// Parse and evaluate a formula in the variables of `vars`.
pub fn parse_rf(src: &str, vars: &VarSet) -> Result<RationalFunction> {
    let e = parse_expr(src)?;
    eval_rf(&e, vars, &|n, i| resolve_in(vars, n, i))
}

/// Parse a formula that must evaluate to a polynomial.
pub fn parse_poly(src: &str, vars: &VarSet) -> Result<Polynomial> {
    let r = parse_rf(src, vars)?;
    r.as_polynomial()
        .cloned()
        .ok_or_else(|| Error::invalid(format!("{src} is not a polynomial")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latex_products_and_fractions() {
        let v = VarSet::spectral();
        let r = parse_rf(r"\frac{(\hbar-z) (2 \hbar-z)}{(\hbar+z) (2 \hbar+z)}", &v).unwrap();
        assert_eq!(r.denominator().len(), 2);
        let back = parse_rf("(hb - z)*(2*hb - z) / ((hb + z)*(2hb + z))", &v).unwrap();
        assert_eq!(r, back);
        let neg = parse_rf(r"\frac{-z(\hbar-z)}{(\hbar+z) (2 \hbar+z)}", &v).unwrap();
        assert_eq!(neg.numerator().degree(), 2);
    }

    #[test]
    fn subscripts_resolve_to_indexed_names() {
        let v = VarSet::indexed(4);
        let p = parse_poly(r"(\hbar+z_1-z_2)(3\hbar+z_1-z_4)", &v).unwrap();
        let q = parse_poly("(hb + z1 - z2)*(3hb + z1 - z4)", &v).unwrap();
        assert_eq!(p, q);
        assert_eq!(alloc::format!("{}", parse_poly("2*z3 - z3 - z3", &v).unwrap()), "0");
    }

    #[test]
    fn matrix_entries_parse() {
        let e = parse_expr("(A^3+AB+BA)_{1,4}").unwrap();
        assert!(matches!(e, Expr::Index(_, ref i) if i == &alloc::vec![1, 4]));
        let e = parse_expr("A_{1,2}B_{2,3}").unwrap();
        assert!(matches!(e, Expr::Mul(_, _)));
    }

    #[test]
    fn round_trip_through_display() {
        let v = VarSet::indexed(3);
        let p = parse_poly("(z1 - z2 + 3/2*hb)^3 - 1/3*z3*hb", &v).unwrap();
        let again = parse_poly(&alloc::format!("{p}"), &v).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_expr("z1 + ) "), Err(Error::Parse { pos: 5, .. })));
    }
}
