//! Checks of the analytic identities behind the continuous estimate.

pub mod fourier;
pub mod single_scale;
pub mod spatial;
pub mod suite;

pub use fourier::{check_ftc, check_poly_identity, g_hat, gt_product, h_hat, FrequencyPoint, FtcCheck, PolyCheck, TRule};
pub use single_scale::{check_single_scale, single_scale_bound, SingleScaleCheck};
pub use spatial::{check_convolution, check_domination, check_fourier_pair, domination_denominator, transforms};
pub use suite::{ftc_sweep, poly_identity_sweep, run_analytic_suite, single_scale_sweep, SuiteConfig, SuiteEntry};
