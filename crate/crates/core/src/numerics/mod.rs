//! Shared numerical machinery: distribution functions, the simplex optimizer
//! and finite-difference curvature.

mod distributions;
mod hessian;
mod optim;

pub use distributions::{chi_squared_sf, gamma_q, ln_gamma, normal_quantile};
pub use hessian::{numerical_hessian, standard_errors};
pub use optim::{nelder_mead, OptimizerOptions, OptimizerResult};
