//! A numerical laboratory for the truncated simplex Hilbert transform
//!
//! ```text
//! Λ_{n,r,R} = ∫_{r ≤ |x_0+…+x_n| ≤ R} Π_i F_i(x_0,…,x̂_i,…,x_n) dx / (x_0+…+x_n)
//! ```
//!
//! and its dyadic (Walsh/Haar) model. The crate is organised by engine:
//!
//! - [`numerics`]: Walsh group, dyadic intervals, Haar functions, cell and
//!   grid functions, norms, summation and quadrature.
//! - [`dyadic`]: exact evaluation of the dyadic form, its supremum over
//!   coefficients, the auxiliary forms, and the dyadic telescoping identity.
//! - [`continuous`]: Gaussian kernels, the residual kernel of the smooth
//!   truncation, and quadrature for the truncated and smooth forms.
//! - [`identities`]: Fourier-side and single-scale checks.
//! - [`experiment`]: alternating maximization, growth sweeps and exponent fits.
//! - [`cli`]: the `simplexht` command line.
//!
//! Runnable walkthroughs live in `examples/`.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod continuous;
pub mod dyadic;
pub mod error;
pub mod experiment;
pub mod identities;
pub mod numerics;

pub use error::{Error, Result};
