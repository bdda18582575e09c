//! Numerical machinery for Liouville-type rigidity of Hessian operators
//! `L[f] = Σ aᵢ(x)·Sᵢ(Hess f)`.
//!
//! The crate is split the same way the checks are:
//!
//! * [`linalg`]: packed symmetric matrices, Jacobi eigenvalues, PSD and
//!   Loewner-order tests, central finite-difference Hessians.
//! * [`symmfn`]: elementary symmetric functions `Sₖ`, Maclaurin means and
//!   the inequality chain, the `εI` majorization bound.
//! * [`operator`]: Hessian operators with pinched coefficients, residuals,
//!   coefficient validation and the sign split.
//! * [`sigma0`]: the universal lower bound `σ₀`, a brute-force spectral
//!   minimization oracle, and sample verification.
//! * [`families`]: explicit solution families: quadratic polynomials and the
//!   separable quadratic-growth example.
//! * [`harness`]: scenarios, sampling, the touching-paraboloid probe and
//!   JSON/CSV reports used by the `rigidity` CLI.

#![forbid(unsafe_code)]
// `!(x > 0.0)` style guards are how non-finite input gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod families;
pub mod harness;
pub mod linalg;
pub mod minimize;
pub mod operator;
pub mod sigma0;
pub mod symmfn;

pub use error::{Error, Result};
pub use linalg::{FnField, ScalarField, SymmetricMatrix};
pub use operator::{Equation, HessianOperator, LemmaCase, Sign, SignSplit};
pub use sigma0::Sigma0Problem;
pub use symmfn::SymmSpectrum;

/// Version string stamped into every report.
pub const ARTIFACT_VERSION: &str = concat!("rigidity-core ", env!("CARGO_PKG_VERSION"));
