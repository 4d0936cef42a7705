//! The stability-index function, its diagnostics, the closed-form
//! characteristic functions and the variable-exponent quasinorm.

mod cf;
mod condition7;
mod function;
mod integrand;
mod quasinorm;

pub use cf::{exponent_integral, integral_cf, lf_n_exponent, li_cf, modular};
pub use condition7::{check_condition7, check_condition7_with, Condition7Report, Trend};
pub use function::{AffinePiece, AlphaFunction, AlphaSpec};
pub use integrand::IntegrandFunction;
pub use quasinorm::quasinorm;
