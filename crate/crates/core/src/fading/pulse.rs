//! Temporal pulse broadening by turbulence.

use serde::{Deserialize, Serialize};

use crate::channel::{LinkScenario, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseShape {
    /// Transmitted half-width T₀, s.
    pub half_width: f64,
    /// Received half-width T₁, s.
    pub broadened_half_width: f64,
    /// Turbulence broadening parameter a₁, s².
    pub a1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BroadeningTransmittance {
    /// ⟨T_bro⟩ = T₀/T₁.
    pub mean: f64,
    /// (T₁ − T₀)/T₀.
    pub ratio: f64,
}

/// T₀ = R_dut / (2 f_PRF).
pub fn pulse_half_width(prf: f64, duty_ratio: f64) -> Result<f64> {
    if !(prf > 0.0) {
        return Err(Error::invalid("prf", "must be > 0"));
    }
    if !(duty_ratio > 0.0 && duty_ratio <= 1.0) {
        return Err(Error::invalid("duty_ratio", "must lie in (0, 1]"));
    }
    Ok(duty_ratio / (2.0 * prf))
}

/// T₁ = √(T₀² + 8a₁) with a₁ = 0.39 C_n² L L₀^(5/3) / c².
pub fn broadened_half_width(t0: f64, scenario: &LinkScenario) -> PulseShape {
    let a1 = 0.39 * scenario.cn2 * scenario.distance * scenario.outer_scale.powf(5.0 / 3.0)
        / (SPEED_OF_LIGHT * SPEED_OF_LIGHT);
    PulseShape {
        half_width: t0,
        broadened_half_width: (t0 * t0 + 8.0 * a1).sqrt(),
        a1,
    }
}

pub fn mean_broadening_transmittance(pulse: &PulseShape) -> BroadeningTransmittance {
    let (t0, t1) = (pulse.half_width, pulse.broadened_half_width);
    // T₁ − T₀ = 8a₁/(T₁ + T₀) avoids cancellation for long pulses.
    BroadeningTransmittance {
        mean: t0 / t1,
        ratio: 8.0 * pulse.a1 / ((t1 + t0) * t0),
    }
}
