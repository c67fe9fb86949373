//! Scintillation index, mean irradiance and the aperture-integrated
//! scintillation transmittance.
//!
//! Weak fluctuations use lognormal irradiance; strong (and moderate)
//! fluctuations use gamma-gamma irradiance built as a product of two
//! unit-mean gamma variates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelParams, LinkScenario, Regime};
use crate::error::{Error, Result};
use crate::specfun::{hyp1f1, hyp2f1, ln_gamma, bessel_k_ln};

fn require(params: &ChannelParams, regime: Regime, operation: &'static str) -> Result<()> {
    if params.regime != regime {
        return Err(Error::Regime {
            operation,
            expected: regime.as_str(),
            rytov: params.rytov,
        });
    }
    Ok(())
}

/// Longitudinal (on-axis) weak-fluctuation scintillation index σ_I²(0, L).
pub fn weak_longitudinal_index(params: &ChannelParams) -> Result<f64> {
    let s2 = params.rytov;
    if s2 == 0.0 {
        return Ok(0.0);
    }
    let z = Complex64::new(params.theta_bar, params.lambda);
    let f = hyp2f1(-5.0 / 6.0, 11.0 / 6.0, 17.0 / 6.0, z)?;
    let phase = Complex64::from_polar(1.0, 5.0 * PI / 12.0);
    Ok(3.86 * s2 * (-11.0 / 16.0 * params.lambda.powf(5.0 / 6.0) + (phase * f).re))
}

/// Radial weak-fluctuation component σ_I,r²(r, L).
pub fn weak_radial_index(r: f64, params: &ChannelParams) -> Result<f64> {
    let s2 = params.rytov;
    if r == 0.0 || s2 == 0.0 {
        return Ok(0.0);
    }
    let w = params.beam_radius;
    let f = hyp1f1(-5.0 / 6.0, 1.0, 2.0 * r * r / (w * w))?;
    Ok(2.65 * s2 * params.lambda.powf(5.0 / 6.0) * (1.0 - f))
}

/// Weak-fluctuation scintillation index σ_I²(r, L).
pub fn scintillation_index_weak(r: f64, params: &ChannelParams) -> Result<f64> {
    require(params, Regime::Weak, "scintillation_index_weak")?;
    if r < 0.0 {
        return Err(Error::invalid("r", "radius must be >= 0"));
    }
    Ok(weak_radial_index(r, params)? + weak_longitudinal_index(params)?)
}

/// Cosine approximation of the weak-fluctuation index.
pub fn scintillation_index_weak_approx(r: f64, params: &ChannelParams) -> f64 {
    let (s2, th, la) = (params.rytov, params.theta, params.lambda);
    let w = params.beam_radius;
    let radial = 4.42 * s2 * la.powf(5.0 / 6.0) * r * r / (w * w);
    let u = 1.0 + 2.0 * th;
    radial
        + 3.86
            * s2
            * (-11.0 / 16.0 * la.powf(5.0 / 6.0)
                + 0.4 * (u * u + 4.0 * la * la).powf(5.0 / 12.0) * (5.0 / 6.0 * (u / (2.0 * la)).atan()).cos())
}

/// Effective spot radius W_e of the mean irradiance profile.
pub fn effective_waist(params: &ChannelParams) -> f64 {
    let (s2, la, w) = (params.rytov, params.lambda, params.beam_radius);
    match params.regime {
        Regime::Weak => w * (1.0 + 1.33 * s2 * la.powf(5.0 / 6.0)).sqrt(),
        Regime::StrongOrModerate => w * (1.0 + 1.63 * s2.powf(6.0 / 5.0) * la).sqrt(),
    }
}

/// Normalised mean irradiance ⟨I(r, L)⟩ = (W₀²/W_e²)·exp(−2r²/W_e²).
pub fn mean_irradiance(r: f64, w0: f64, effective_waist: f64) -> f64 {
    let we2 = effective_waist * effective_waist;
    w0 * w0 / we2 * (-2.0 * r * r / we2).exp()
}

/// α = 1/(e^σ²ₗₙₓ − 1), β = 1/(e^σ²ₗₙᵧ − 1).
pub fn gamma_gamma_shapes(sigma_lnx2: f64, sigma_lny2: f64) -> (f64, f64) {
    (1.0 / sigma_lnx2.exp_m1(), 1.0 / sigma_lny2.exp_m1())
}

/// Strong-fluctuation scintillation parameters with inner- and outer-scale
/// corrections. The radial component is `radial_coefficient·r²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScintillationParams {
    pub sigma_i2_longitudinal: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Net large-scale log-irradiance variance σ²ₗₙₓ(l₀) − σ²ₗₙₓ(L₀).
    pub sigma_lnx2: f64,
    pub sigma_lny2: f64,
    pub effective_waist: f64,
    pub effective_lambda: f64,
    pub radial_coefficient: f64,
    pub q_l: f64,
    pub q_0: f64,
    pub eta_x: f64,
    pub eta_x0: f64,
    pub sigma_lnx2_inner: f64,
    pub sigma_lnx2_outer: f64,
    pub sigma_g2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl ScintillationParams {
    pub fn radial_index(&self, r: f64) -> f64 {
        self.radial_coefficient * r * r
    }

    pub fn index(&self, r: f64) -> f64 {
        self.radial_index(r) + self.sigma_i2_longitudinal
    }
}

pub fn scintillation_index_strong(params: &ChannelParams, scenario: &LinkScenario) -> Result<ScintillationParams> {
    require(params, Regime::StrongOrModerate, "scintillation_index_strong")?;
    let s2 = params.rytov;
    let k = params.wavenumber;
    let l = scenario.distance;
    let (th, tb, la) = (params.theta, params.theta_bar, params.lambda);

    let q_l = 10.89 * l / (k * scenario.inner_scale.powi(2));
    let q_0 = 64.0 * PI * PI * l / (k * scenario.outer_scale.powi(2));
    let poly = 1.0 / 3.0 - 0.5 * tb + 0.2 * tb * tb;
    let eta_inv = 0.38 / (1.0 - 3.21 * tb + 5.29 * tb * tb)
        + 0.47 * s2 * q_l.powf(1.0 / 6.0) * (poly / (1.0 + 2.2 * tb)).powf(6.0 / 7.0);
    let eta_x = 1.0 / eta_inv;
    let eta_x0 = eta_x * q_0 / (eta_x + q_0);
    let large_scale = |e: f64| {
        let f = e / (e + q_l);
        0.49 * s2 * poly * (e * q_l / (e + q_l)).powf(7.0 / 6.0) * (1.0 + 1.75 * f.sqrt() - 0.25 * f.powf(7.0 / 12.0))
    };
    let sigma_lnx2_inner = large_scale(eta_x);
    let sigma_lnx2_outer = large_scale(eta_x0);

    let u = 1.0 + 2.0 * th;
    let phi1 = (2.0 * la / u).atan();
    let phi2 = (u * q_l / (3.0 + 2.0 * la * q_l)).atan();
    let b = u * u * q_l * q_l + (3.0 + 2.0 * la * q_l).powi(2);
    let u2l2 = u * u + 4.0 * la * la;
    let ql56 = q_l.powf(5.0 / 6.0);
    let sigma_g2 = 3.86
        * s2
        * (0.4 * (u * u + (2.0 * la + 3.0 / q_l).powi(2)).powf(11.0 / 12.0) / u2l2.sqrt()
            * (2.61 / b.powf(0.25) * (4.0 / 3.0 * phi2 + phi1).sin()
                - 0.52 / b.powf(7.0 / 24.0) * (1.25 * phi2 + phi1).sin()
                + (11.0 / 6.0 * phi2 + phi1).sin())
            - 13.4 * la / (q_l.powf(11.0 / 6.0) * u2l2)
            - 11.0 / 6.0
                * (((1.0 + 0.31 * la * q_l) / q_l).powf(5.0 / 6.0) + 1.1 * (1.0 + 0.27 * la * q_l).powf(1.0 / 3.0) / ql56
                    - 0.19 * (1.0 + 0.24 * la * q_l).powf(0.25) / ql56));
    let sigma_lny2 = 0.51 * sigma_g2 / (1.0 + 0.69 * sigma_g2.powf(6.0 / 5.0)).powf(5.0 / 6.0);
    let sigma_lnx2 = sigma_lnx2_inner - sigma_lnx2_outer;
    let sigma_i2_longitudinal = (sigma_lnx2 + sigma_lny2).exp_m1();
    let (alpha, beta) = gamma_gamma_shapes(sigma_lnx2, sigma_lny2);

    let we = effective_waist(params);
    let lae = 2.0 * l / (k * we * we);
    let outer = (1.0 - 1.15 * (lae * l / (k * scenario.outer_scale.powi(2))).powf(1.0 / 6.0)).max(0.0);
    let radial_coefficient = 4.42 * s2 * lae.powf(5.0 / 6.0) * outer / (we * we);

    Ok(ScintillationParams {
        sigma_i2_longitudinal,
        alpha,
        beta,
        sigma_lnx2,
        sigma_lny2,
        effective_waist: we,
        effective_lambda: lae,
        radial_coefficient,
        q_l,
        q_0,
        eta_x,
        eta_x0,
        sigma_lnx2_inner,
        sigma_lnx2_outer,
        sigma_g2,
        phi1,
        phi2,
    })
}

/// Gamma-gamma irradiance density for unit mean irradiance.
pub fn gamma_gamma_pdf(i: f64, alpha: f64, beta: f64) -> Result<f64> {
    if i <= 0.0 {
        return Ok(0.0);
    }
    let ab = alpha * beta;
    let ln_p = std::f64::consts::LN_2 + 0.5 * (alpha + beta) * ab.ln() - ln_gamma(alpha)? - ln_gamma(beta)?
        + (0.5 * (alpha + beta) - 1.0) * i.ln()
        + bessel_k_ln(alpha - beta, 2.0 * (ab * i).sqrt())?;
    Ok(ln_p.exp())
}

/// Lognormal irradiance: ln I ~ N(ln⟨I⟩ − σ²/2, σ²) with σ² = σ_I².
pub fn sample_lognormal<R: Rng + ?Sized>(mean: f64, sigma_i2: f64, rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    mean * (sigma_i2.sqrt() * z - 0.5 * sigma_i2).exp()
}

/// Unit-mean gamma-gamma irradiance as a product of two gamma variates.
pub fn sample_gamma_gamma<R: Rng + ?Sized>(alpha: f64, beta: f64, rng: &mut R) -> Result<f64> {
    Ok(unit_gamma(alpha)?.map_or(1.0, |g| g.sample(rng)) * unit_gamma(beta)?.map_or(1.0, |g| g.sample(rng)))
}

/// Gamma(k, 1/k); `None` for an infinite shape (no fluctuation).
fn unit_gamma(shape: f64) -> Result<Option<Gamma<f64>>> {
    if shape.is_infinite() {
        return Ok(None);
    }
    Gamma::new(shape, 1.0 / shape).map(Some).map_err(|e| Error::Numeric {
        context: "gamma_gamma",
        detail: format!("shape {shape}: {e}"),
    })
}

/// Regime-specific irradiance statistics across the aperture.
#[derive(Debug, Clone)]
pub enum ScintillationModel {
    Weak { params: ChannelParams, longitudinal: f64, effective_waist: f64 },
    Strong(ScintillationParams),
}

impl ScintillationModel {
    pub fn new(params: &ChannelParams, scenario: &LinkScenario) -> Result<Self> {
        Ok(match params.regime {
            Regime::Weak => ScintillationModel::Weak {
                params: *params,
                longitudinal: weak_longitudinal_index(params)?,
                effective_waist: effective_waist(params),
            },
            Regime::StrongOrModerate => ScintillationModel::Strong(scintillation_index_strong(params, scenario)?),
        })
    }

    pub fn effective_waist(&self) -> f64 {
        match self {
            ScintillationModel::Weak { effective_waist, .. } => *effective_waist,
            ScintillationModel::Strong(s) => s.effective_waist,
        }
    }

    /// σ_I²(r, L).
    pub fn index(&self, r: f64) -> Result<f64> {
        match self {
            ScintillationModel::Weak { params, longitudinal, .. } => Ok(weak_radial_index(r, params)? + longitudinal),
            ScintillationModel::Strong(s) => Ok(s.index(r)),
        }
    }
}

/// Random multiplicative factor of one annulus; unit mean.
#[derive(Debug, Clone)]
enum CellFactor {
    Lognormal { sigma: f64 },
    GammaGamma { large: Option<Gamma<f64>>, small: Option<Gamma<f64>> },
}

impl CellFactor {
    #[inline]
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            CellFactor::Lognormal { sigma } => {
                if *sigma == 0.0 {
                    return 1.0;
                }
                let z: f64 = rng.sample(StandardNormal);
                (sigma * z - 0.5 * sigma * sigma).exp()
            }
            CellFactor::GammaGamma { large, small } => {
                let x = large.as_ref().map_or(1.0, |g| g.sample(rng));
                let y = small.as_ref().map_or(1.0, |g| g.sample(rng));
                x * y
            }
        }
    }
}

/// Receiver-aperture partition into annular sectors. Each cell carries its
/// exact share of the mean received power (normalised by πW₀²/2) and the
/// fluctuation statistics at its representative radius.
#[derive(Debug, Clone)]
pub struct ApertureCells {
    sectors: usize,
    weights: Vec<f64>,
    factors: Vec<CellFactor>,
}

impl ApertureCells {
    pub fn new(model: &ScintillationModel, aperture_radius: f64, annuli: usize, sectors: usize) -> Result<Self> {
        if annuli == 0 || sectors == 0 {
            return Err(Error::invalid("cells", "annuli and sectors must be >= 1"));
        }
        let we2 = model.effective_waist().powi(2);
        let mut weights = Vec::with_capacity(annuli);
        let mut factors = Vec::with_capacity(annuli);
        for i in 0..annuli {
            let r_in = aperture_radius * i as f64 / annuli as f64;
            let r_out = aperture_radius * (i + 1) as f64 / annuli as f64;
            // ∫ e^(−2r²/W_e²) over the annulus, relative to the full plane.
            let share = (-2.0 * r_in * r_in / we2).exp() - (-2.0 * r_out * r_out / we2).exp();
            weights.push(share / sectors as f64);
            let r_c = (0.5 * (r_in * r_in + r_out * r_out)).sqrt();
            let s2 = model.index(r_c)?.max(0.0);
            factors.push(match model {
                ScintillationModel::Weak { .. } => CellFactor::Lognormal { sigma: s2.sqrt() },
                ScintillationModel::Strong(p) => {
                    let large = s2.ln_1p() - p.sigma_lny2;
                    let alpha = if large > 0.0 { 1.0 / large.exp_m1() } else { f64::INFINITY };
                    CellFactor::GammaGamma {
                        large: unit_gamma(alpha)?,
                        small: unit_gamma(p.beta)?,
                    }
                }
            });
        }
        Ok(Self { sectors, weights, factors })
    }

    /// Σ cell weights: the deterministic (fluctuation-free) value of T_sci.
    pub fn mean_transmittance(&self) -> f64 {
        self.weights.iter().sum::<f64>() * self.sectors as f64
    }

    pub fn cell_count(&self) -> usize {
        self.weights.len() * self.sectors
    }

    /// Unclamped aperture-integrated transmittance of one realisation.
    pub fn sample_raw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let mut total = 0.0;
        for (w, f) in self.weights.iter().zip(&self.factors) {
            let mut ring = 0.0;
            for _ in 0..self.sectors {
                ring += f.sample(rng);
            }
            total += w * ring;
        }
        total
    }
}

/// One realisation of the scintillation transmittance, clamped to [0, 1].
pub fn sample_scintillation_transmittance<R: Rng + ?Sized>(cells: &ApertureCells, rng: &mut R) -> f64 {
    cells.sample_raw(rng).clamp(0.0, 1.0)
}
