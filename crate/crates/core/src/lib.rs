//! Atmospheric channel simulation for continuous-variable QKD links:
//! turbulence statistics, Monte Carlo transmittance sampling, beam-wander
//! and phase-noise impairments, and the secret key rate of the
//! Gaussian-modulated coherent-state protocol over the fading channel.

// `!(x > 0.0)` is used on purpose so NaN is rejected as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod cli;
pub mod engine;
pub mod error;
pub mod fading;
pub mod impairments;
pub mod keyrate;
pub mod specfun;

pub use error::{Error, Result};
