//! The dyadic (Walsh) model of the truncated simplex Hilbert transform.

pub mod aux;
pub mod coefficients;
pub mod form;
pub mod pattern;
pub mod telescoping;
pub mod tuples;

pub use aux::eval_dyadic_aux;
pub use coefficients::{sign_or_plus, CoefficientMap};
pub use form::{
    check_tuple, eval_dyadic_form, eval_dyadic_form_dense, eval_dyadic_sup, haar_pairing, optimal_coefficients,
    optimal_signs, scale_pairings, scale_sups, slot_kernel,
};
pub use pattern::{Factor, ProductPattern, Var};
pub use telescoping::{verify_dyadic_telescoping, verify_parity_rule, TelescopingReport};
pub use tuples::{enumerate_tuples, tuple_count};
