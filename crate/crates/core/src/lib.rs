//! Exact multidegree vectors, R-matrices and qKZ identities for tensor
//! product quiver varieties of type A.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod algebra;
pub mod combinatorics;
pub mod error;
pub mod report;
pub mod qkz;
pub mod rmatrix;
pub mod slice;

pub use error::{Error, Result};
pub use report::Report;
