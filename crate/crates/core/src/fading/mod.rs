//! Fading transmittance: extinction, beam wandering/broadening/deformation,
//! scintillation and (optionally) temporal pulse broadening.

pub mod beam;
pub mod elliptical;
pub mod pulse;
pub mod scintillation;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use beam::{beam_statistics, sample_beam_vector, BeamStatistics, BeamVector};
pub use elliptical::{centered_transmittance, effective_spot_radius, elliptical_transmittance, elliptical_transmittance_raw};
pub use pulse::{broadened_half_width, mean_broadening_transmittance, pulse_half_width, BroadeningTransmittance, PulseShape};
pub use scintillation::{
    effective_waist, gamma_gamma_pdf, gamma_gamma_shapes, mean_irradiance, sample_gamma_gamma, sample_lognormal,
    sample_scintillation_transmittance, scintillation_index_strong, scintillation_index_weak,
    scintillation_index_weak_approx, ApertureCells, ScintillationModel, ScintillationParams,
};

use crate::channel::{derive_params, extinction_transmittance, ChannelParams, LinkScenario};
use crate::error::Result;

/// One transmittance realisation. `clamped` is set when the model value
/// fell outside [0, 1] and was pulled back.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub value: f64,
    pub clamped: bool,
}

impl Draw {
    pub fn from_raw(raw: f64) -> Self {
        let value = raw.clamp(0.0, 1.0);
        Self { value, clamped: value != raw }
    }
}

/// Source of independent transmittance draws.
pub trait TransmittanceSampler: Sync {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Draw>;
}

impl<F> TransmittanceSampler for F
where
    F: Fn(&mut ChaCha8Rng) -> Result<Draw> + Sync,
{
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Draw> {
        self(rng)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingOptions {
    /// Radial rings of the aperture partition.
    pub annuli: usize,
    /// Angular sectors per ring.
    pub sectors: usize,
    /// Multiply ⟨T_bro⟩ into every draw.
    pub include_broadening: bool,
}

impl Default for FadingOptions {
    fn default() -> Self {
        Self {
            annuli: 64,
            sectors: 16,
            include_broadening: false,
        }
    }
}

/// Precomputed per-scenario state for T = T_ext·T_ell·T_sci (·⟨T_bro⟩).
#[derive(Debug, Clone)]
pub struct FadingChannel {
    pub params: ChannelParams,
    pub beam: BeamStatistics,
    pub extinction: f64,
    pub pulse: PulseShape,
    pub broadening: BroadeningTransmittance,
    pub scintillation: ScintillationModel,
    cells: ApertureCells,
    theta_std: (f64, f64),
    aperture_radius: f64,
    beam_waist: f64,
    deterministic_factor: f64,
}

impl FadingChannel {
    pub fn new(scenario: &LinkScenario, options: &FadingOptions) -> Result<Self> {
        scenario.validate()?;
        let params = derive_params(scenario);
        let beam = beam_statistics(&params, scenario.beam_waist);
        let theta_std = beam.theta_principal_std()?;
        let extinction = extinction_transmittance(&scenario.extinction, scenario.distance);
        let pulse = broadened_half_width(pulse_half_width(scenario.prf, scenario.duty_ratio)?, scenario);
        let broadening = mean_broadening_transmittance(&pulse);
        let scintillation = ScintillationModel::new(&params, scenario)?;
        let cells = ApertureCells::new(&scintillation, scenario.aperture_radius, options.annuli, options.sectors)?;
        let deterministic_factor = if options.include_broadening {
            extinction * broadening.mean
        } else {
            extinction
        };
        Ok(Self {
            params,
            beam,
            extinction,
            pulse,
            broadening,
            scintillation,
            cells,
            theta_std,
            aperture_radius: scenario.aperture_radius,
            beam_waist: scenario.beam_waist,
            deterministic_factor,
        })
    }

    pub fn cells(&self) -> &ApertureCells {
        &self.cells
    }

    /// One draw of the beam vector.
    pub fn sample_beam<R: Rng + ?Sized>(&self, rng: &mut R) -> BeamVector {
        beam::draw(&self.beam, self.theta_std.0, self.theta_std.1, rng)
    }

    /// Unclamped elliptical-beam and scintillation factors of one realisation.
    pub fn sample_factors<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(f64, f64)> {
        let v = self.sample_beam(rng);
        let t_ell = elliptical_transmittance_raw(&v, self.aperture_radius, self.beam_waist)?;
        let t_sci = self.cells.sample_raw(rng);
        Ok((t_ell, t_sci))
    }
}

impl TransmittanceSampler for FadingChannel {
    fn sample(&self, rng: &mut ChaCha8Rng) -> Result<Draw> {
        let (t_ell, t_sci) = self.sample_factors(rng)?;
        let clamp_ell = !(0.0..=1.0).contains(&t_ell);
        let clamp_sci = !(0.0..=1.0).contains(&t_sci);
        let mut d = Draw::from_raw(self.deterministic_factor * t_ell.clamp(0.0, 1.0) * t_sci.clamp(0.0, 1.0));
        d.clamped |= clamp_ell || clamp_sci;
        Ok(d)
    }
}

/// One total-transmittance sample for a scenario. Convenience wrapper; the
/// engine reuses a [`FadingChannel`] instead of rebuilding it per draw.
pub fn total_transmittance_sample(scenario: &LinkScenario, rng: &mut ChaCha8Rng) -> Result<f64> {
    Ok(FadingChannel::new(scenario, &FadingOptions::default())?.sample(rng)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ExtinctionCoeffs, Season};
    use rand::SeedableRng;

    #[test]
    fn zero_turbulence_summer_ten_km() {
        let mut s = LinkScenario::reference(Season::Summer, 10e3);
        s.cn2 = 0.0;
        let ch = FadingChannel::new(&s, &FadingOptions::default()).unwrap();
        let a2 = s.aperture_radius.powi(2);
        // The beam model's vacuum spot is the far-field W₀/Ω; the mean
        // irradiance profile uses the full diffraction radius W.
        let far = s.beam_waist / ch.params.fresnel;
        let ell = 1.0 - (-2.0 * a2 / (far * far)).exp();
        let w = ch.params.beam_radius;
        let sci = 1.0 - (-2.0 * a2 / (w * w)).exp();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = ch.sample(&mut rng).unwrap();
        assert!(!d.clamped);
        assert!((d.value - 0.710_319_791_349_259_87 * ell * sci).abs() < 1e-12);
        let (t_ell, t_sci) = ch.sample_factors(&mut rng).unwrap();
        assert!((t_ell - ell).abs() < 1e-12);
        assert!((t_sci - sci).abs() < 1e-12);
    }

    #[test]
    fn vacuum_wide_aperture_passes_everything() {
        let mut s = LinkScenario::reference(Season::Summer, 100.0);
        s.cn2 = 0.0;
        s.extinction = ExtinctionCoeffs::from_per_km(0.0, 0.0, 0.0, 0.0);
        s.aperture_radius = 1.0;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((total_transmittance_sample(&s, &mut rng).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn draws_stay_in_unit_interval() {
        for season in [Season::Summer, Season::Winter] {
            for l in [1e3, 5e3, 15e3] {
                let ch = FadingChannel::new(&LinkScenario::reference(season, l), &FadingOptions::default()).unwrap();
                let mut rng = ChaCha8Rng::seed_from_u64(5);
                for _ in 0..200 {
                    let v = ch.sample(&mut rng).unwrap().value;
                    assert!((0.0..=1.0).contains(&v));
                }
            }
        }
    }

    #[test]
    fn broadening_flag_scales_draws() {
        let s = LinkScenario::reference(Season::Winter, 10e3);
        let plain = FadingChannel::new(&s, &FadingOptions::default()).unwrap();
        let opts = FadingOptions {
            include_broadening: true,
            ..FadingOptions::default()
        };
        let with = FadingChannel::new(&s, &opts).unwrap();
        let a = plain.sample(&mut ChaCha8Rng::seed_from_u64(2)).unwrap().value;
        let b = with.sample(&mut ChaCha8Rng::seed_from_u64(2)).unwrap().value;
        assert!((b - a * plain.broadening.mean).abs() < 1e-15);
    }
}
