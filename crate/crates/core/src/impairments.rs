//! Link outages from angle-of-arrival fluctuations and phase excess noise
//! from LO/signal arrival-time jitter.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channel::{rytov_variance, LinkScenario, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::fading::{BeamStatistics, PulseShape};
use crate::specfun::std_normal_cdf;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterruptionResult {
    /// ⟨β_a²⟩ = ⟨Δx₀²⟩/L², rad².
    pub aoa_variance: f64,
    /// L_dis = f·√⟨β_a²⟩, m.
    pub rms_displacement: f64,
    pub probability: f64,
}

/// Probability that the focal spot leaves the fiber core, using the
/// one-axis wander variance: P = 2[1 − Φ(d_cor / 2L_dis)].
pub fn interruption_probability(scenario: &LinkScenario, stats: &BeamStatistics) -> Result<InterruptionResult> {
    if !(scenario.distance > 0.0) {
        return Err(Error::invalid("distance", "must be > 0"));
    }
    if stats.var_x < 0.0 {
        return Err(Error::invalid("var_x", "wander variance must be >= 0"));
    }
    let aoa_variance = stats.var_x / (scenario.distance * scenario.distance);
    let rms_displacement = scenario.focal_length * aoa_variance.sqrt();
    let probability = if rms_displacement == 0.0 {
        0.0
    } else {
        2.0 * std_normal_cdf(-scenario.fiber_core_diameter / (2.0 * rms_displacement))
    };
    Ok(InterruptionResult {
        aoa_variance,
        rms_displacement,
        probability,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseNoiseResult {
    /// ⟨t_a⟩ = L/c, s.
    pub mean_arrival: f64,
    /// σ_ta² = T₁²/4, s².
    pub arrival_variance: f64,
    /// σ_Δt² = 2(1 − ρ_ta)σ_ta², s².
    pub delta_t_variance: f64,
    /// σ_θ² = ω²σ_Δt², rad².
    pub phase_variance: f64,
    /// ε_θ = V_A σ_θ², SNU.
    pub excess_noise: f64,
    /// ω = 2πc/λ, rad/s.
    pub omega: f64,
    /// The arrival-time variance formula is a weak-turbulence result.
    pub outside_validity: bool,
}

pub fn phase_excess_noise(scenario: &LinkScenario, pulse: &PulseShape) -> PhaseNoiseResult {
    let omega = 2.0 * PI * SPEED_OF_LIGHT / scenario.wavelength;
    let arrival_variance = 0.25 * pulse.broadened_half_width * pulse.broadened_half_width;
    let delta_t_variance = 2.0 * scenario.lo_decorrelation * arrival_variance;
    let phase_variance = omega * omega * delta_t_variance;
    PhaseNoiseResult {
        mean_arrival: scenario.distance / SPEED_OF_LIGHT,
        arrival_variance,
        delta_t_variance,
        phase_variance,
        excess_noise: scenario.modulation_variance * phase_variance,
        omega,
        outside_validity: rytov_variance(scenario) >= 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{derive_params, Season};
    use crate::fading::{beam_statistics, broadened_half_width, pulse_half_width};

    fn pulse(s: &LinkScenario) -> PulseShape {
        broadened_half_width(pulse_half_width(s.prf, s.duty_ratio).unwrap(), s)
    }

    #[test]
    fn summer_ten_km_outage() {
        let s = LinkScenario::reference(Season::Summer, 10e3);
        let stats = beam_statistics(&derive_params(&s), s.beam_waist);
        let r = interruption_probability(&s, &stats).unwrap();
        assert!((r.aoa_variance / 8.614_448_763_441_878_9e-11 - 1.0).abs() < 1e-10);
        assert!((r.rms_displacement / 2.041_909_205_010_318_1e-6 - 1.0).abs() < 1e-10);
        assert!((r.probability - 0.027_537_017_318_923_264).abs() < 1e-12);
    }

    #[test]
    fn no_wander_no_outage() {
        let mut s = LinkScenario::reference(Season::Summer, 10e3);
        s.cn2 = 0.0;
        let stats = beam_statistics(&derive_params(&s), s.beam_waist);
        assert_eq!(interruption_probability(&s, &stats).unwrap().probability, 0.0);
        let s = LinkScenario {
            fiber_core_diameter: 1e3,
            ..LinkScenario::reference(Season::Winter, 10e3)
        };
        let stats = beam_statistics(&derive_params(&s), s.beam_waist);
        assert!(interruption_probability(&s, &stats).unwrap().probability < 1e-300);
    }

    #[test]
    fn reference_phase_noise() {
        let s = LinkScenario::reference(Season::Summer, 10e3);
        let r = phase_excess_noise(&s, &pulse(&s));
        assert!((r.phase_variance / 0.018_460_682_762_877_728 - 1.0).abs() < 1e-8);
        assert!((r.excess_noise / 0.036_921_365_525_755_457 - 1.0).abs() < 1e-8);
        assert_eq!(r.mean_arrival, 10e3 / SPEED_OF_LIGHT);
        assert!(r.outside_validity);
    }

    #[test]
    fn vacuum_phase_noise_matches_pulse_only_value() {
        let mut s = LinkScenario::reference(Season::Summer, 10e3);
        s.cn2 = 0.0;
        let r = phase_excess_noise(&s, &pulse(&s));
        assert!((r.phase_variance / 0.018_460_682_762_877_728 - 1.0).abs() < 1e-15);
        assert!(!r.outside_validity);
    }

    #[test]
    fn perfect_correlation_or_no_modulation_is_noiseless() {
        let mut s = LinkScenario::reference(Season::Winter, 10e3);
        s.lo_decorrelation = 0.0;
        assert_eq!(phase_excess_noise(&s, &pulse(&s)).excess_noise, 0.0);
        let mut s = LinkScenario::reference(Season::Winter, 10e3);
        s.modulation_variance = 0.0;
        assert_eq!(phase_excess_noise(&s, &pulse(&s)).excess_noise, 0.0);
    }
}
