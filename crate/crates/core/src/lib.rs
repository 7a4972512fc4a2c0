//! Finite-section numerics for reproducing kernel Hilbert spaces on the unit
//! ball of `C^d`: weighted Besov spaces, complete Pick kernels, row and
//! column multiplication operators, weak products and Hankel forms.
//!
//! Every infinite-dimensional quantity is approached through truncation to
//! polynomials of bounded degree. Truncated operator norms are lower bounds
//! for the true norms; reports say which kind of bound they carry.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod kernels;
pub mod linalg;
pub mod multops;
pub mod oracle;
pub mod polyring;
pub mod spaces;
pub mod weakprod;

pub use error::{Error, Result};
pub use num_complex::Complex64;
