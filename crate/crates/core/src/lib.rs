//! Exact-arithmetic toolkit for finite-dimensional nonassociative algebras
//! given by structure constants.
//!
//! Builds the Kantor algebra `W(2)` of all multiplications on a 2-dimensional
//! space (and its subalgebras `W_2`, `S_2`), computes derivation spaces by
//! exact elimination, and checks that local and 2-local derivations and
//! automorphisms of these algebras are global ones.

pub mod algebra;
pub mod automorphisms;
pub mod derivations;
pub mod error;
pub mod formats;
pub mod linalg;
pub mod poly;

pub use algebra::{BasisChange, MultiplicationKey, StructureTensor};
pub use error::{Error, Result};
pub use linalg::{QMatrix, QVector, Scalar};
pub use poly::{LaurentPoly, MultiPoly};
