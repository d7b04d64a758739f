//! Numerical spectral analysis of the Smilansky–Solomyak model whose coupling is
//! a four-parameter contact condition on the line `x = 0`.
//!
//! The crate is organised bottom-up:
//!
//! - [`coupling`]: closed-form invariants of `(alpha, beta, gamma)`: the Pauli
//!   vector `omega`, the matrix `Sigma`, its eigenvectors and the Jacobi couplings
//!   `mu1`, `mu2` (or the single `mu` when `beta = 0`).
//! - [`tridiag`]: Sturm-sequence counting and bisection on real symmetric
//!   tridiagonal matrices, plus a dense cyclic-Jacobi oracle.
//! - [`jacobi_ops`]: truncations of the Jacobi operators attached to the model.
//! - [`recurrence`]: the three-term recurrence behind those operators, its
//!   Birkhoff–Adams asymptotics, the summed identity and the secular defect.
//! - [`hamiltonian`]: quadratic forms, eigenvalues below the threshold `1/2`
//!   and the counting results.
//! - [`cli`]: batch front end used by the `speclab` binary.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coupling;
pub mod error;
pub mod hamiltonian;
pub mod jacobi_ops;
pub mod numfmt;
pub mod recurrence;
pub mod tridiag;

pub use error::{Error, Result};
