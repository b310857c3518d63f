//! Covariance-matrix toolkit for zero-mean n-mode Gaussian states.
//!
//! States are carried as 2n×2n complex Hermitian covariance matrices in the
//! `(a₁, a₁†, a₂, a₂†, …)` ordering with entries
//! `V_ij = (−1)^{i+j} ⟨{v_i, v_j†}⟩ / 2`. On top of that representation the
//! crate provides
//!
//! - [`covmat`]: the matrix type, block decomposition, a Jacobi Hermitian
//!   eigensolver, Schur complements and positivity / uncertainty checks;
//! - [`gaussian_ops`]: vacuum projection, partial trace, parity-conditioned
//!   reduction (two-mode and n-mode), beam splitters and a state factory;
//! - [`parity_wigner`]: average parity, Wigner function at the origin, purity;
//! - [`entanglement`]: local symplectic invariants, their reconstruction from
//!   a parity-conditioned block, the Simon test and entanglement of formation;
//! - [`locc`]: an exact (and finite-ensemble) simulation of the even/odd
//!   grouping protocol that recovers the invariants from local data;
//! - [`fock`]: a truncated Fock-space oracle used to validate every formula
//!   above independently;
//! - [`format`]: the on-disk covariance file format;
//! - [`verify`]: oracle verification suites shared by the CLI and tests.

pub mod covmat;
pub mod entanglement;
pub mod fock;
pub mod format;
pub mod gaussian_ops;
pub mod locc;
pub mod parity_wigner;
pub mod verify;

mod error;

pub use covmat::{BlockDecomposition, CovarianceMatrix, PhysicalityReport};
pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMat = nalgebra::DMatrix<C64>;
