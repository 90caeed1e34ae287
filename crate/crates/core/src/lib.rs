//! Exact zonal polynomials and orthogonal-group moment integrals.
//!
//! The crate is organised bottom-up:
//!
//! - [`partitions`]: integer partitions, dominance order and the scalar
//!   statistics attached to a partition (ρ, Laplace–Beltrami eigenvalue,
//!   `GL(n)` dimension, symmetric-group degree).
//! - [`symfunc`]: homogeneous symmetric polynomials over exact rationals in
//!   the monomial and power-sum bases.
//! - [`zonal`]: zonal polynomials from the triangular recursion on
//!   monomial coefficients, plus the structural checks they must satisfy.
//! - [`haar`]: Haar sampling on `O(n)` from rotation angles and reflections,
//!   with a Gram–Schmidt sampler as an independent oracle.
//! - [`moments`]: closed-form moment integrals over `O(n)` and the matching
//!   Monte Carlo estimators.
//! - [`cli`]: the `zonal` command-line front end.

pub mod cli;
pub mod error;
pub mod golden;
pub mod haar;
pub mod linalg;
pub mod moments;
pub mod partitions;
pub mod stats;
pub mod symfunc;
pub mod zonal;

pub use error::{Error, Result};
pub use partitions::Partition;
pub use symfunc::{Basis, Rational, SymPoly};
pub use zonal::ZonalTable;
