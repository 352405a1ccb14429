//! Special functions needed by the closed-form scores.
//!
//! Everything here is a pure function of its arguments. Elementary
//! functions (`erfc`, `lgamma`, `tgamma`) come from `libm`; the incomplete
//! gamma and beta functions, the Gauss hypergeometric function, the modified
//! Bessel functions and the exponential integral are evaluated here with
//! series / continued-fraction switching.

mod bessel;
mod beta;
mod expint;
mod gamma;
mod hypergeometric;
mod normal;
pub(crate) mod quadrature;

pub use bessel::{bessel_i, BesselOrder};
pub use beta::{beta_fn, ln_beta, reg_inc_beta};
pub use expint::expint_ei;
pub use gamma::{gamma_fn, ln_gamma, reg_inc_gamma, Tail};
pub use hypergeometric::hyp2f1;
pub use normal::{std_normal_cdf, std_normal_pdf, FRAC_1_SQRT_2PI};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
