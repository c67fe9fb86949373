//! Statistics and sampling of the elliptical-beam random vector
//! (x₀, y₀, Θ₁, Θ₂, φ) for a horizontal link.

use std::f64::consts::FRAC_PI_2;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelParams, Regime};
use crate::error::{Error, Result};

/// Tolerance on a negative Θ-covariance eigenvalue before it is an error.
const PSD_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamStatistics {
    /// ⟨Θ₁⟩ = ⟨Θ₂⟩.
    pub mean_theta: f64,
    /// ⟨Δx₀²⟩, m².
    pub var_x: f64,
    /// ⟨Δy₀²⟩, m².
    pub var_y: f64,
    /// ⟨ΔΘ₁²⟩ = ⟨ΔΘ₂²⟩.
    pub var_theta: f64,
    /// ⟨ΔΘ₁ΔΘ₂⟩.
    pub cov_theta: f64,
}

/// One realisation of the beam at the receiver. W_i² = W₀²·e^Θᵢ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamVector {
    pub x0: f64,
    pub y0: f64,
    pub theta1: f64,
    pub theta2: f64,
    /// Ellipse orientation, [0, π/2).
    pub phi: f64,
}

impl BeamVector {
    pub fn semi_axes(&self, w0: f64) -> (f64, f64) {
        (w0 * (0.5 * self.theta1).exp(), w0 * (0.5 * self.theta2).exp())
    }

    /// Beam-centroid distance r₀ from the aperture centre.
    pub fn r0(&self) -> f64 {
        self.x0.hypot(self.y0)
    }

    /// ζ = φ − φ₀ with φ₀ the centroid direction.
    pub fn zeta(&self) -> f64 {
        self.phi - self.y0.atan2(self.x0)
    }
}

/// Means and covariances of the beam vector for the regime of `params`.
pub fn beam_statistics(params: &ChannelParams, w0: f64) -> BeamStatistics {
    let s2 = params.rytov;
    let om = params.fresnel;
    let w02 = w0 * w0;
    match params.regime {
        Regime::Weak => {
            let x = s2 * om.powf(5.0 / 6.0);
            let q = 1.0 + 2.96 * x;
            let q2 = q * q;
            let var_x = 0.33 * w02 * s2 * om.powf(-7.0 / 6.0);
            BeamStatistics {
                mean_theta: (q2 / (om * om * (q2 + 1.2 * x).sqrt())).ln(),
                var_x,
                var_y: var_x,
                var_theta: (1.2 * x / q2).ln_1p(),
                cov_theta: (-0.8 * x / q2).ln_1p(),
            }
        }
        Regime::StrongOrModerate => {
            let gamma = (1.0 + om * om) / (om * om);
            let s125 = s2.powf(6.0 / 5.0) / om;
            let s85 = s2.powf(4.0 / 5.0) / om;
            let q = gamma + 1.71 * s125 - 2.99 * s85;
            let q2 = q * q;
            let var_x = 0.75 * w02 * s85;
            BeamStatistics {
                mean_theta: (q2 / (q2 + 3.24 * gamma * s125).sqrt()).ln(),
                var_x,
                var_y: var_x,
                var_theta: (13.14 * gamma * s125 / q2).ln_1p(),
                cov_theta: (0.65 * gamma * s125 / q2).ln_1p(),
            }
        }
    }
}

impl BeamStatistics {
    /// Eigenvalue standard deviations (√((v+c)/2), √((v−c)/2)) of the Θ covariance.
    pub fn theta_principal_std(&self) -> Result<(f64, f64)> {
        let plus = 0.5 * (self.var_theta + self.cov_theta);
        let minus = 0.5 * (self.var_theta - self.cov_theta);
        let tol = PSD_TOLERANCE * self.var_theta.abs().max(1.0);
        if plus < -tol || minus < -tol || self.var_x < 0.0 || self.var_y < 0.0 {
            return Err(Error::Numeric {
                context: "beam_statistics",
                detail: format!(
                    "covariance not positive semidefinite: var_theta = {}, cov_theta = {}",
                    self.var_theta, self.cov_theta
                ),
            });
        }
        Ok((plus.max(0.0).sqrt(), minus.max(0.0).sqrt()))
    }
}

/// Draws one beam vector. φ is uniform on [0, π/2) and independent.
pub fn sample_beam_vector<R: Rng + ?Sized>(stats: &BeamStatistics, rng: &mut R) -> Result<BeamVector> {
    let (sp, sm) = stats.theta_principal_std()?;
    Ok(draw(stats, sp, sm, rng))
}

/// Sampling with pre-validated principal standard deviations.
pub(crate) fn draw<R: Rng + ?Sized>(stats: &BeamStatistics, sp: f64, sm: f64, rng: &mut R) -> BeamVector {
    let n = |rng: &mut R| -> f64 { rng.sample(StandardNormal) };
    let x0 = stats.var_x.sqrt() * n(rng);
    let y0 = stats.var_y.sqrt() * n(rng);
    let z1 = n(rng);
    let z2 = n(rng);
    BeamVector {
        x0,
        y0,
        theta1: stats.mean_theta + sp * z1 + sm * z2,
        theta2: stats.mean_theta + sp * z1 - sm * z2,
        phi: rng.random::<f64>() * FRAC_PI_2,
    }
}
