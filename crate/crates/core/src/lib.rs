//! Hankel matrices commuting with the Jacobi matrices of the Askey scheme.
//!
//! The crate builds the Jacobi matrices of the Wilson, continuous dual Hahn,
//! continuous Hahn, Jacobi, Meixner-Pollaczek, Meixner, Laguerre, Charlier
//! and Hermite families (plus the tridiagonal matrix that commutes with the
//! generalized Hilbert matrix), computes their Hankel commutants with two
//! independent solvers, and evaluates the obstruction determinants and
//! asymptotic expansions that decide when a commutant is nontrivial.
//!
//! Every kernel is generic over [`numerics::Real`] and runs in binary64,
//! software floating point of any precision, or exact rational arithmetic.

pub mod commutation;
mod error;
pub mod families;
pub mod laurent;
pub mod numerics;
pub mod obstructions;

pub use error::{Error, Result};
