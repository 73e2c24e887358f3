use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::algebra::Polynomial;

/// Everything that can go wrong in the core.
///
/// `Mismatch` is what the verification routines return when an identity
/// fails; it names the check, the offending basis label and a rendering of
/// the difference.
#[derive(Clone, Debug)]
pub enum Error {
    /// Operands live in different variable sets.
    Context(String),
    /// Exact division failed; carries the nonzero remainder.
    NotDivisible(Box<Polynomial>),
    /// Inversion or division by zero.
    ZeroDivision,
    Parse { pos: usize, msg: String },
    Invalid(String),
    Unsupported(String),
    Underdetermined(String),
    Inconsistent(String),
    Mismatch {
        check: String,
        label: String,
        detail: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn mismatch(
        check: impl Into<String>,
        label: impl Into<String>,
        detail: impl Into<String>,
    ) -> Self {
        Error::Mismatch {
            check: check.into(),
            label: label.into(),
            detail: detail.into(),
        }
    }

    /// True for failures of an identity, as opposed to bad input.
    pub fn is_mismatch(&self) -> bool {
        matches!(self, Error::Mismatch { .. } | Error::NotDivisible(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Context(m) => write!(f, "variable context mismatch: {m}"),
            Error::NotDivisible(r) => write!(f, "inexact division, remainder {r}"),
            Error::ZeroDivision => f.write_str("division by zero"),
            Error::Parse { pos, msg } => write!(f, "parse error at {pos}: {msg}"),
            Error::Invalid(m) => write!(f, "invalid input: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::Underdetermined(m) => write!(f, "underdetermined system: {m}"),
            Error::Inconsistent(m) => write!(f, "inconsistent system: {m}"),
            Error::Mismatch {
                check,
                label,
                detail,
            } => write!(f, "{check} fails at {label}: {detail}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;
