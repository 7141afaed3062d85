//! Exact dyadic primitives and sampled continuous functions shared by every
//! engine: the Walsh group, Haar functions, cell and grid functions, L^p
//! norms, summation and quadrature.

pub mod cell;
pub mod grid;
pub mod norm;
pub mod quad;
pub mod sum;
pub mod walsh;

pub use cell::CellFunction;
pub use grid::GridSampledFunction;
pub use norm::{normalize_tuple, norm_product, HoelderExponents, LpExponent, LpNormed, TruncationRange};
pub use walsh::{haar_eval, indicator_eval, interval_oplus, walsh_add, DyadicInterval, IntervalTuple};
