//! Special functions and quadrature kernels.

mod quadrature;
mod rho;
mod special;

pub use quadrature::{
    integrate, neumaier_sum, semi_infinite_quadrature, truncated_integral, Quadrature,
    QuadratureSpec, TruncatedIntegral,
};
pub use rho::{inner_spec, interference_constant, rho, rho_closed_form_alpha4, rho_integral};
pub use special::{beta_fn, feedback_coeffs, gamma_fn, ln_beta, ln_gamma, FeedbackCoefficients};
