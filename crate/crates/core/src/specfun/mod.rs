//! Special functions needed by the turbulence, beam and scintillation models.
//!
//! All routines are pure double-precision implementations with explicit
//! errors for domain violations, poles, overflow and series that fail to
//! converge within 500 terms.

mod bessel;
mod gamma;
mod hypergeometric;
mod lambert;
mod normal;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_k, bessel_k_ln};
pub use gamma::{gamma_fn, ln_gamma};
pub use hypergeometric::{hyp1f1, hyp2f1, hyp2f1_real};
pub use lambert::{lambert_w, lambert_w_of_exp};
pub use normal::std_normal_cdf;
