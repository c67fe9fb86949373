//! Transmittance of an elliptical Gaussian beam through a circular aperture.
//!
//! The aperture-integrated power is approximated by a centred-beam value
//! T₀ times a displacement factor exp{−[(r₀/a)/R]^Q}, where the scale R and
//! shape Q functions depend on the beam only through a²ξ².

use crate::error::Result;
use crate::specfun::{bessel_i_scaled, lambert_w_of_exp};

use super::beam::BeamVector;

/// Below this a²ξ² the scale/shape functions are summed as power series.
const SERIES_LIMIT: f64 = 1.0;
const SERIES_TERMS: usize = 80;

/// ln of the bracket shared by the scale and shape functions,
/// L(x) = ln[2(1 − e^(−x/2)) / (1 − e^(−x)I₀(x))], together with its
/// denominator 1 − e^(−x)I₀(x). Both are accurate as x → 0.
fn log_bracket(x: f64) -> Result<(f64, f64)> {
    if x < SERIES_LIMIT {
        // 1 − e^(−x)I₀(x) = −Σ (1/2)ₙ (−2x)ⁿ/(n!)², 2(1 − e^(−x/2)) = −2Σ (−x/2)ⁿ/n!.
        let mut t = 1.0;
        let mut u = 1.0;
        let mut den = 0.0;
        let mut diff = 0.0;
        for n in 0..SERIES_TERMS {
            let nf = n as f64;
            t *= (0.5 + nf) * (-2.0 * x) / ((nf + 1.0) * (nf + 1.0));
            u *= (-0.5 * x) / (nf + 1.0);
            den -= t;
            diff += t - 2.0 * u;
            if t.abs() < 1e-18 * den.abs() && u.abs() < 1e-18 * den.abs() {
                break;
            }
        }
        return Ok(((diff / den).ln_1p(), den));
    }
    let den = 1.0 - bessel_i_scaled(0, x)?;
    let num = -2.0 * (-0.5 * x).exp_m1();
    Ok(((num / den).ln(), den))
}

/// Shape Q(ξ) and ln-bracket L(ξ) at x = a²ξ²; R(ξ) = L^(−1/Q).
fn shape_and_log(x: f64) -> Result<(f64, f64)> {
    let (l, den) = log_bracket(x)?;
    let q = 2.0 * x * bessel_i_scaled(1, x)? / den / l;
    Ok((q, l))
}

/// exp{−[(ρ / R(ξ))]^Q(ξ)} written as exp{−ρ^Q·L} with x = a²ξ².
fn displacement_factor(rho: f64, x: f64) -> Result<f64> {
    if rho == 0.0 {
        return Ok(1.0);
    }
    if x == 0.0 {
        // R → ∞: any finite offset is negligible against the scale.
        return Ok(1.0);
    }
    let (q, l) = shape_and_log(x)?;
    Ok((-(q * rho.ln() + l.ln()).exp()).exp())
}

/// Effective spot radius W_eff(ζ) from the Lambert-W expression.
pub fn effective_spot_radius(a: f64, w1: f64, w2: f64, zeta: f64) -> Result<f64> {
    let a2 = a * a;
    let (c2, s2) = (zeta.cos().powi(2), zeta.sin().powi(2));
    let log_arg = a2 / (w1 * w1) * (1.0 + 2.0 * c2)
        + a2 / (w2 * w2) * (1.0 + 2.0 * s2)
        + (4.0 * a2 / (w1 * w2)).ln();
    let w = lambert_w_of_exp(log_arg)?;
    Ok(2.0 * a / w.sqrt())
}

/// Transmittance of the centred (r₀ = 0) elliptical beam.
pub fn centered_transmittance(a: f64, w1: f64, w2: f64) -> Result<f64> {
    let a2 = a * a;
    let (i1, i2) = (1.0 / (w1 * w1), 1.0 / (w2 * w2));
    let d = (a2 * (i1 - i2)).abs();
    let s = a2 * (i1 + i2);
    let bessel_term = bessel_i_scaled(0, d)? * (d - s).exp();

    let xi = 1.0 / w1 - 1.0 / w2;
    let x = a2 * xi * xi;
    if x == 0.0 {
        return Ok(1.0 - bessel_term);
    }
    // The axis-ratio bracket takes |W₁² − W₂²| so the model is symmetric in
    // the two semi-axes.
    let ratio = (w1 + w2) / (w1 - w2).abs();
    let prefactor = -2.0 * (-0.5 * x).exp_m1();
    let tail = displacement_factor(ratio, x)?;
    Ok(1.0 - bessel_term - prefactor * tail)
}

/// Unclamped model value; may leave [0, 1] by a small approximation error.
pub fn elliptical_transmittance_raw(v: &BeamVector, a: f64, w0: f64) -> Result<f64> {
    let (w1, w2) = v.semi_axes(w0);
    let t0 = centered_transmittance(a, w1, w2)?;
    let r0 = v.r0();
    if r0 == 0.0 {
        return Ok(t0);
    }
    let w_eff = effective_spot_radius(a, w1, w2, v.zeta())?;
    let x = 4.0 * a * a / (w_eff * w_eff);
    Ok(t0 * displacement_factor(r0 / a, x)?)
}

/// Elliptical-beam transmittance clamped to [0, 1].
pub fn elliptical_transmittance(v: &BeamVector, a: f64, w0: f64) -> Result<f64> {
    Ok(elliptical_transmittance_raw(v, a, w0)?.clamp(0.0, 1.0))
}
