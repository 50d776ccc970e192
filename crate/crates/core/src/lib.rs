//! Exact verification kernels for maximal genus-5 curves over finite fields
//! of discriminant -19.

pub mod arith;
pub mod curves;
pub mod dihedral;
pub mod error;
pub mod ff;
pub mod group;
pub mod hermitian;
pub mod mpoly;
pub mod padic;
pub mod sweep;

pub use error::{Error, ErrorKind, Result};
