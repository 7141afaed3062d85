//! The continuous model: Gaussian kernels and quadrature evaluation of the
//! truncated and smooth simplex forms on sampled functions.

pub mod forms;
pub mod functions;
pub mod kernels;
pub mod params;

pub use forms::{check_grid_tuple, eval_simplex_truncated, eval_smooth_form, LatticeForm, Marginal};
pub use functions::{FunctionSpec, GaussianBump};
pub use kernels::{
    dilate, gaussian, gaussian_deriv, phi_l1, residual_kernel_phi, smooth_kernel, truncated_cell_average,
    truncated_kernel,
};
pub use params::{DilationParams, QuadratureSpec};
