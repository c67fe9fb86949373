//! Link scenario description and the turbulence / extinction parameters
//! derived from it for a horizontal path.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::keyrate::Detector;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Extinction coefficients, stored per metre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtinctionCoeffs {
    pub mol_scatter: f64,
    pub mol_absorb: f64,
    pub aer_scatter: f64,
    pub aer_absorb: f64,
}

impl ExtinctionCoeffs {
    pub const ZERO: Self = Self {
        mol_scatter: 0.0,
        mol_absorb: 0.0,
        aer_scatter: 0.0,
        aer_absorb: 0.0,
    };

    /// Builds coefficients from values given in km⁻¹.
    pub fn from_per_km(mol_scatter: f64, mol_absorb: f64, aer_scatter: f64, aer_absorb: f64) -> Self {
        Self {
            mol_scatter: mol_scatter * 1e-3,
            mol_absorb: mol_absorb * 1e-3,
            aer_scatter: aer_scatter * 1e-3,
            aer_absorb: aer_absorb * 1e-3,
        }
    }

    /// Total extinction coefficient α, m⁻¹.
    pub fn total(&self) -> f64 {
        self.mol_scatter + self.mol_absorb + self.aer_scatter + self.aer_absorb
    }

    fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("extinction.mol_scatter", self.mol_scatter),
            ("extinction.mol_absorb", self.mol_absorb),
            ("extinction.aer_scatter", self.aer_scatter),
            ("extinction.aer_absorb", self.aer_absorb),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(key, format!("must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Seasonal presets for a boundary-layer horizontal link (median C_n² and,
/// where measured, extinction coefficients at 1550 nm).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Season {
    Spring,
    Summer,
    Autumn,
    Winter,
}

impl Season {
    pub const ALL: [Season; 4] = [Season::Spring, Season::Summer, Season::Autumn, Season::Winter];

    /// Median C_n², m^(-2/3).
    pub fn cn2(self) -> f64 {
        match self {
            Season::Spring => 2.03e-15,
            Season::Summer => 2.12e-15,
            Season::Autumn => 5.56e-15,
            Season::Winter => 7.46e-15,
        }
    }

    /// Measured extinction coefficients; only summer and winter have them.
    pub fn extinction(self) -> Option<ExtinctionCoeffs> {
        match self {
            Season::Summer => Some(ExtinctionCoeffs::from_per_km(1.64e-4, 3.35e-3, 2.52e-2, 5.49e-3)),
            Season::Winter => Some(ExtinctionCoeffs::from_per_km(1.77e-4, 8.56e-4, 2.52e-2, 5.49e-3)),
            Season::Spring | Season::Autumn => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Season::Spring => "spring",
            Season::Summer => "summer",
            Season::Autumn => "autumn",
            Season::Winter => "winter",
        }
    }
}

impl fmt::Display for Season {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Season {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spring" => Ok(Season::Spring),
            "summer" => Ok(Season::Summer),
            "autumn" | "fall" => Ok(Season::Autumn),
            "winter" => Ok(Season::Winter),
            other => Err(Error::invalid(
                "season",
                format!("unknown season `{other}` (expected spring, summer, autumn or winter)"),
            )),
        }
    }
}

/// Full physical and system parameter set for one link. All quantities SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkScenario {
    /// Optical wavelength λ, m.
    pub wavelength: f64,
    /// Horizontal propagation distance L, m.
    pub distance: f64,
    /// Refractive-index structure parameter C_n², m^(-2/3).
    pub cn2: f64,
    /// Transmitter beam-spot radius W₀, m.
    pub beam_waist: f64,
    /// Receiving aperture radius a, m.
    pub aperture_radius: f64,
    /// Focal length of the receiving lens, m.
    pub focal_length: f64,
    /// Fiber core diameter, m.
    pub fiber_core_diameter: f64,
    /// Turbulence inner scale l₀, m.
    pub inner_scale: f64,
    /// Turbulence outer scale L₀, m.
    pub outer_scale: f64,
    pub extinction: ExtinctionCoeffs,
    /// Pulse repetition frequency, Hz.
    pub prf: f64,
    /// Pulse duty ratio in (0, 1].
    pub duty_ratio: f64,
    /// 1 − ρ_ta, the decorrelation of LO and signal arrival-time jitter.
    /// Kept as the complement so values like 1e-13 survive in f64.
    pub lo_decorrelation: f64,
    /// Alice's modulation variance V_A, SNU.
    pub modulation_variance: f64,
    pub detector: Detector,
    /// Detector efficiency η in (0, 1].
    pub detection_efficiency: f64,
    /// Electronic noise υ_el, SNU.
    pub electronic_noise: f64,
    /// Reconciliation efficiency β in (0, 1].
    pub reconciliation_efficiency: f64,
    /// Fixed channel excess noise ε, SNU.
    pub excess_noise: f64,
}

impl LinkScenario {
    /// The reference parameter set used for the performance analysis
    /// (110 mm aperture, 80 mm waist, 1550 nm, V_A = 2, η = 0.6, ...),
    /// with the season's C_n² and extinction. Seasons without measured
    /// extinction borrow summer's coefficients.
    pub fn reference(season: Season, distance: f64) -> Self {
        Self {
            wavelength: 1550e-9,
            distance,
            cn2: season.cn2(),
            beam_waist: 0.080,
            aperture_radius: 0.110,
            focal_length: 0.220,
            fiber_core_diameter: 9e-6,
            inner_scale: 4e-3,
            outer_scale: 0.4,
            extinction: season
                .extinction()
                .unwrap_or_else(|| Season::Summer.extinction().expect("summer preset")),
            prf: 100e6,
            duty_ratio: 0.10,
            lo_decorrelation: 1e-13,
            modulation_variance: 2.0,
            detector: Detector::Homodyne,
            detection_efficiency: 0.6,
            electronic_noise: 0.01,
            reconciliation_efficiency: 0.9,
            excess_noise: 0.01,
        }
    }

    pub fn with_distance(&self, distance: f64) -> Self {
        Self {
            distance,
            ..self.clone()
        }
    }

    pub fn with_detector(&self, detector: Detector) -> Self {
        Self {
            detector,
            ..self.clone()
        }
    }

    /// LO/signal arrival-time correlation coefficient ρ_ta.
    pub fn lo_correlation(&self) -> f64 {
        1.0 - self.lo_decorrelation
    }

    /// Optical wavenumber k = 2π/λ.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Checks every documented constraint; the error names the offending key.
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("wavelength", self.wavelength),
            ("distance", self.distance),
            ("beam_waist", self.beam_waist),
            ("aperture_radius", self.aperture_radius),
            ("focal_length", self.focal_length),
            ("fiber_core_diameter", self.fiber_core_diameter),
            ("inner_scale", self.inner_scale),
            ("outer_scale", self.outer_scale),
            ("prf", self.prf),
        ];
        for (key, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(key, format!("must be finite and > 0, got {v}")));
            }
        }
        let nonneg = [
            ("cn2", self.cn2),
            ("modulation_variance", self.modulation_variance),
            ("electronic_noise", self.electronic_noise),
            ("excess_noise", self.excess_noise),
        ];
        for (key, v) in nonneg {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::invalid(key, format!("must be finite and >= 0, got {v}")));
            }
        }
        let unit_interval = [
            ("duty_ratio", self.duty_ratio),
            ("detection_efficiency", self.detection_efficiency),
            ("reconciliation_efficiency", self.reconciliation_efficiency),
        ];
        for (key, v) in unit_interval {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(key, format!("must lie in (0, 1], got {v}")));
            }
        }
        if !(self.lo_decorrelation >= 0.0 && self.lo_decorrelation <= 1.0) {
            return Err(Error::invalid(
                "lo_correlation",
                format!("must lie in [0, 1], got {}", self.lo_correlation()),
            ));
        }
        if self.fiber_core_diameter >= 2.0 * self.aperture_radius {
            return Err(Error::invalid(
                "fiber_core_diameter",
                format!(
                    "must be smaller than the aperture diameter 2a = {} m, got {} m",
                    2.0 * self.aperture_radius,
                    self.fiber_core_diameter
                ),
            ));
        }
        self.extinction.validate()
    }
}

/// Turbulence regime used to select weak or strong formula sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Weak,
    StrongOrModerate,
}

impl Regime {
    pub fn from_rytov(rytov: f64) -> Self {
        if rytov < 1.0 {
            Regime::Weak
        } else {
            Regime::StrongOrModerate
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Weak => "weak",
            Regime::StrongOrModerate => "strong",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether σ1² falls in the moderate band 1 ≤ σ1² ≤ 10, where the strong
/// formulas are used without validation.
pub fn is_moderate(rytov: f64) -> bool {
    (1.0..=10.0).contains(&rytov)
}

/// Derived turbulence and beam parameters for a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams {
    /// k = 2π/λ, rad/m.
    pub wavenumber: f64,
    /// Rytov variance σ1².
    pub rytov: f64,
    /// Fresnel parameter Ω = kW₀²/2L.
    pub fresnel: f64,
    /// Θ = Ω²/(1+Ω²).
    pub theta: f64,
    /// Λ = Ω/(1+Ω²).
    pub lambda: f64,
    /// Θ̄ = 1 − Θ.
    pub theta_bar: f64,
    /// Free-space spot radius W at the receiver, m.
    pub beam_radius: f64,
    pub regime: Regime,
}

/// σ1² = 1.23 C_n² k^(7/6) L^(11/6).
pub fn rytov_variance(scenario: &LinkScenario) -> f64 {
    let k = scenario.wavenumber();
    1.23 * scenario.cn2 * k.powf(7.0 / 6.0) * scenario.distance.powf(11.0 / 6.0)
}

pub fn derive_params(scenario: &LinkScenario) -> ChannelParams {
    let k = scenario.wavenumber();
    let rytov = rytov_variance(scenario);
    let omega = k * scenario.beam_waist.powi(2) / (2.0 * scenario.distance);
    let omega2 = omega * omega;
    let theta = omega2 / (1.0 + omega2);
    let theta_bar = 1.0 / (1.0 + omega2);
    let lambda = omega / (1.0 + omega2);
    // W² = W₀²(1 + Ω⁻²), which keeps Λ = 2L/(kW²).
    let beam_radius = scenario.beam_waist * (1.0 + 1.0 / omega2).sqrt();
    ChannelParams {
        wavenumber: k,
        rytov,
        fresnel: omega,
        theta,
        lambda,
        theta_bar,
        beam_radius,
        regime: Regime::from_rytov(rytov),
    }
}

/// T_ext = exp(−αL) with α the sum of the four extinction coefficients.
pub fn extinction_transmittance(coeffs: &ExtinctionCoeffs, distance: f64) -> f64 {
    (-coeffs.total() * distance).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summer(distance: f64) -> LinkScenario {
        LinkScenario::reference(Season::Summer, distance)
    }

    #[test]
    fn rytov_values() {
        let mut s = summer(1000.0);
        // mpmath evaluation of 1.23 Cn² k^(7/6) L^(11/6)
        assert!((rytov_variance(&s) - 0.042_208_232_964_389_296).abs() < 1e-14);
        s.cn2 = 0.0;
        assert_eq!(rytov_variance(&s), 0.0);
        let w = LinkScenario::reference(Season::Winter, 10_000.0);
        assert!((rytov_variance(&w) - 10.118_903_885_953_569).abs() < 1e-11);
    }

    #[test]
    fn rytov_scales_with_distance() {
        let a = rytov_variance(&summer(3_000.0));
        let b = rytov_variance(&summer(6_000.0));
        assert!((b / a / 2f64.powf(11.0 / 6.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn beam_parameters() {
        let p = derive_params(&summer(10_000.0));
        assert!((p.fresnel - 1.297_173_740_837_075_9).abs() < 1e-12);
        assert_eq!(p.regime, Regime::StrongOrModerate);
        let p = derive_params(&summer(1_000.0));
        assert!((p.fresnel - 12.971_737_408_370_759).abs() < 1e-11);
        assert!((p.theta - 0.994_092_138_001_643_93).abs() < 1e-14);
        assert!((p.lambda - 0.076_635_234_487_567_474).abs() < 1e-14);
        assert!((p.beam_radius - 0.080_237_366_746_754_825).abs() < 1e-14);
        assert_eq!(p.theta + p.theta_bar, 1.0);
        assert_eq!(p.regime, Regime::Weak);
    }

    #[test]
    fn near_field_limit() {
        let p = derive_params(&summer(1e-3));
        assert!((p.theta - 1.0).abs() < 1e-12);
        assert!(p.lambda < 1e-6);
        assert!((p.beam_radius - 0.08).abs() < 1e-12);
    }

    #[test]
    fn extinction_reference_values() {
        let s = Season::Summer.extinction().unwrap();
        let w = Season::Winter.extinction().unwrap();
        assert_eq!(extinction_transmittance(&s, 0.0), 1.0);
        assert!((extinction_transmittance(&s, 10_000.0) - 0.710_319_791_349_259_87).abs() < 1e-12);
        assert!((extinction_transmittance(&w, 10_000.0) - 0.728_163_258_314_894_43).abs() < 1e-12);
    }

    #[test]
    fn validation_names_the_key() {
        let mut s = summer(1000.0);
        s.fiber_core_diameter = 0.3;
        match s.validate() {
            Err(Error::Invalid { key, .. }) => assert_eq!(key, "fiber_core_diameter"),
            other => panic!("unexpected {other:?}"),
        }
        let mut s = summer(1000.0);
        s.detection_efficiency = 0.0;
        assert!(matches!(s.validate(), Err(Error::Invalid { key, .. }) if key == "detection_efficiency"));
        assert!(summer(1000.0).validate().is_ok());
    }

    #[test]
    fn season_parsing() {
        assert_eq!("Winter".parse::<Season>().unwrap(), Season::Winter);
        assert!("monsoon".parse::<Season>().is_err());
    }
}
