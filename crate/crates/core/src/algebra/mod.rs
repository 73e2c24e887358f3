//! Exact polynomial and rational-function arithmetic.
//!
//! Every polynomial lives in a [`VarSet`]: named variables plus a last slot
//! for `h`, which stands for ħ/2 so that half-integer multiples of ħ have
//! integer exponents and coefficients. Text output renders `h` back as ħ,
//! spelled `hb`.

mod expr;
mod linear;
mod operator;
pub(crate) mod packed;
mod poly;
mod qmatrix;
mod ratfun;
mod univariate;

pub use expr::{
    eval_rf, parse_equation, parse_expr, parse_poly, parse_rf, resolve_in, split_juxtaposed, Expr,
};
pub use linear::LinearForm;
pub use operator::Operator;
pub use poly::{Monomial, Polynomial, Substitution, VarSet};
pub use qmatrix::QMatrix;
pub use ratfun::{split_into_forms, RationalFunction};
pub use univariate::{UniPoly, UniRat};

/// Arbitrary precision rationals.
pub type Q = num_rational::BigRational;

/// Shorthand for an integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}
