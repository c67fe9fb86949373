//! Asymptotic secret key rate over a fading channel with imperfect
//! homodyne or heterodyne detection.
//!
//! The fading channel only enters through ⟨T⟩ and ⟨√T⟩: after the channel
//! the Alice–Bob covariance matrix is
//!
//! ```text
//! ⎡ V·I             ⟨√T⟩√(V²−1)·σz ⎤
//! ⎣ ⟨√T⟩√(V²−1)·σz  c·I            ⎦     c = ⟨T⟩(V + 1/⟨T⟩ − 1 + ε)
//! ```
//!
//! Eve's information is bounded by the Holevo quantity built from five
//! symplectic eigenvalues: λ₁,₂ of the two-mode state and λ₃,₄,₅ of the
//! conditional state after Bob's (noisy, lossy) measurement. λ₅ is always 1.
//! λ₃,₄ are evaluated from their closed forms, which stay finite at η = 1.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rounding slack for quantities that must be non-negative.
pub const NEGATIVE_TOLERANCE: f64 = 1e-9;

/// Accepted shortfall of a symplectic eigenvalue below 1.
pub const SYMPLECTIC_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detector {
    Homodyne,
    Heterodyne,
}

impl Detector {
    pub fn as_str(self) -> &'static str {
        match self {
            Detector::Homodyne => "homodyne",
            Detector::Heterodyne => "heterodyne",
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Detector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "homodyne" | "hom" => Ok(Detector::Homodyne),
            "heterodyne" | "het" => Ok(Detector::Heterodyne),
            other => Err(Error::invalid(
                "detector",
                format!("unknown detector `{other}` (expected homodyne or heterodyne)"),
            )),
        }
    }
}

/// First two moments of √T that fix the post-channel Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingMoments {
    pub mean_t: f64,
    pub mean_sqrt_t: f64,
    /// var(√T) = ⟨T⟩ − ⟨√T⟩².
    pub var_sqrt_t: f64,
}

impl FadingMoments {
    /// Checks ⟨√T⟩² ≤ ⟨T⟩ ≤ ⟨√T⟩ ≤ 1 up to rounding.
    pub fn new(mean_t: f64, mean_sqrt_t: f64) -> Result<Self> {
        let tol = NEGATIVE_TOLERANCE;
        if !(0.0..=1.0 + tol).contains(&mean_t) || !(0.0..=1.0 + tol).contains(&mean_sqrt_t) {
            return Err(Error::invalid(
                "fading_moments",
                format!("moments must lie in [0, 1]: <T> = {mean_t}, <sqrtT> = {mean_sqrt_t}"),
            ));
        }
        let var = mean_t - mean_sqrt_t * mean_sqrt_t;
        if var < -tol || mean_t > mean_sqrt_t + tol {
            return Err(Error::invalid(
                "fading_moments",
                format!("violates <sqrtT>^2 <= <T> <= <sqrtT>: <T> = {mean_t}, <sqrtT> = {mean_sqrt_t}"),
            ));
        }
        Ok(Self {
            mean_t,
            mean_sqrt_t,
            var_sqrt_t: var.max(0.0),
        })
    }

    /// A non-fading channel of transmittance `t`.
    pub fn fixed(t: f64) -> Self {
        Self {
            mean_t: t,
            mean_sqrt_t: t.sqrt(),
            var_sqrt_t: 0.0,
        }
    }
}

/// Protocol and detector parameters in shot-noise units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    /// EPR variance V = V_A + 1.
    pub variance: f64,
    pub excess_noise: f64,
    pub efficiency: f64,
    pub electronic_noise: f64,
    pub reconciliation: f64,
    pub detector: Detector,
}

impl ProtocolParams {
    pub fn from_scenario(s: &crate::channel::LinkScenario) -> Self {
        Self {
            variance: s.modulation_variance + 1.0,
            excess_noise: s.excess_noise,
            efficiency: s.detection_efficiency,
            electronic_noise: s.electronic_noise,
            reconciliation: s.reconciliation_efficiency,
            detector: s.detector,
        }
    }

    /// Detection-added noise χ_hom = (1−η+υ)/η or χ_het = (2−η+2υ)/η.
    pub fn detection_noise(&self) -> f64 {
        let (eta, v) = (self.efficiency, self.electronic_noise);
        match self.detector {
            Detector::Homodyne => (1.0 - eta + v) / eta,
            Detector::Heterodyne => (2.0 - eta + 2.0 * v) / eta,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.variance >= 1.0) {
            return Err(Error::invalid("modulation_variance", "V = V_A + 1 must be >= 1"));
        }
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::invalid("detection_efficiency", "must lie in (0, 1]"));
        }
        if !(self.electronic_noise >= 0.0) {
            return Err(Error::invalid("electronic_noise", "must be >= 0"));
        }
        if !(self.excess_noise >= 0.0) {
            return Err(Error::invalid("excess_noise", "must be >= 0"));
        }
        Ok(())
    }
}

/// G(x) = (x+1)log₂(x+1) − x·log₂x, with G(0) = 0.
pub fn g_function(x: f64) -> Result<f64> {
    if x < -NEGATIVE_TOLERANCE || x.is_nan() {
        return Err(Error::Domain {
            function: "g_function",
            arg: x,
            constraint: "x >= 0",
        });
    }
    let x = x.max(0.0);
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((x + 1.0) * (x + 1.0).log2() - x * x.log2())
}

/// Shannon mutual information I_AB between Alice and Bob, bits per use.
pub fn mutual_information(m: &FadingMoments, p: &ProtocolParams) -> Result<f64> {
    p.validate()?;
    if !(m.mean_t > 0.0) {
        return Err(Error::invalid("fading_moments", "<T> must be > 0"));
    }
    let v = p.variance;
    let (factor, chi_f) = match p.detector {
        Detector::Homodyne => (
            0.5,
            (1.0 + p.electronic_noise) / (p.efficiency * m.mean_t) - 1.0 + p.excess_noise,
        ),
        Detector::Heterodyne => (
            1.0,
            2.0 * (1.0 + p.electronic_noise) / (p.efficiency * m.mean_t) - 1.0 + p.excess_noise,
        ),
    };
    let ratio = m.mean_sqrt_t.powi(2) * (v - 1.0) / (m.mean_t * (v + chi_f));
    let arg = 1.0 - ratio;
    if !(arg > 0.0) {
        return Err(Error::Numeric {
            context: "mutual_information",
            detail: format!("log argument 1 - {ratio} is not positive"),
        });
    }
    Ok(-factor * arg.log2())
}

/// Intermediate quantities of the symplectic-eigenvalue evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolevoDiagnostics {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Covariance-matrix entries a = V, b = ⟨√T⟩√(V²−1), c = ⟨T⟩(V+1/⟨T⟩−1+ε).
    pub cm_a: f64,
    pub cm_b: f64,
    pub cm_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolevoResult {
    pub chi_be: f64,
    /// λ₁ … λ₅.
    pub eigenvalues: [f64; 5],
    pub diagnostics: HolevoDiagnostics,
}

/// Larger root of x² − s·x + q = 0 with a rounding-tolerant discriminant.
fn larger_root(s: f64, q: f64, context: &'static str) -> Result<f64> {
    let disc = s * s - 4.0 * q;
    if disc < -NEGATIVE_TOLERANCE {
        return Err(Error::Numeric {
            context,
            detail: format!("negative discriminant {disc:e}"),
        });
    }
    Ok(0.5 * (s + disc.max(0.0).sqrt()))
}

/// Rounds eigenvalues a hair below 1 (double roots lose ~√ε) up to 1.
fn physical_eigenvalue(l: f64, context: &'static str) -> Result<f64> {
    if l >= 1.0 {
        Ok(l)
    } else if l >= 1.0 - SYMPLECTIC_TOLERANCE {
        Ok(1.0)
    } else {
        Err(Error::Numeric {
            context,
            detail: format!("symplectic eigenvalue {l} below 1"),
        })
    }
}

/// Holevo bound χ_BE and the five symplectic eigenvalues.
pub fn holevo_bound(m: &FadingMoments, p: &ProtocolParams) -> Result<HolevoResult> {
    p.validate()?;
    if !(m.mean_t > 0.0) {
        return Err(Error::invalid("fading_moments", "<T> must be > 0"));
    }
    let v = p.variance;
    let t = m.mean_t;
    let st2 = m.mean_sqrt_t * m.mean_sqrt_t;
    let eps = p.excess_noise;

    let cm_a = v;
    let cm_b = m.mean_sqrt_t * (v * v - 1.0).sqrt();
    let cm_c = t * v + 1.0 - t + t * eps;

    let a_coef = v * v * (1.0 - 2.0 * st2) + 2.0 * st2 + cm_c * cm_c;
    let sqrt_b = v * v * m.var_sqrt_t + st2 + v * (1.0 - t + t * eps);
    let b_coef = sqrt_b * sqrt_b;

    // A ± 2√B = (λ₁ ± λ₂)², and A − 2√B collapses to a perfect square,
    // so both eigenvalues follow without the cancelling discriminant.
    let sum = (a_coef + 2.0 * sqrt_b).sqrt();
    let diff = ((v - 1.0) * (1.0 - t) - t * eps).abs();
    let l1 = 0.5 * (sum + diff);
    let l2 = if l1 > 0.0 { sqrt_b / l1 } else { 0.0 };

    let chi = p.detection_noise();
    let (c_coef, d_coef) = match p.detector {
        Detector::Homodyne => {
            let den = cm_c + chi;
            (
                (a_coef * chi + cm_a * sqrt_b + cm_c) / den,
                sqrt_b * (cm_a + sqrt_b * chi) / den,
            )
        }
        Detector::Heterodyne => {
            let den = cm_c + chi;
            let num = a_coef * chi * chi
                + 2.0 * chi * (cm_a * sqrt_b + cm_c)
                + b_coef
                + 2.0 * cm_b * cm_b
                + 1.0;
            (num / (den * den), ((cm_a + sqrt_b * chi) / den).powi(2))
        }
    };
    let l3_sq = larger_root(c_coef, d_coef, "holevo_bound: lambda_3,4")?;
    let l3 = l3_sq.sqrt();
    let l4 = if l3 > 0.0 { d_coef.sqrt() / l3 } else { 0.0 };

    let eigenvalues = [
        physical_eigenvalue(l1, "holevo_bound: lambda_1")?,
        physical_eigenvalue(l2, "holevo_bound: lambda_2")?,
        physical_eigenvalue(l3, "holevo_bound: lambda_3")?,
        physical_eigenvalue(l4, "holevo_bound: lambda_4")?,
        1.0,
    ];
    let g = |l: f64| g_function((l - 1.0) / 2.0);
    let chi_be = g(eigenvalues[0])? + g(eigenvalues[1])?
        - g(eigenvalues[2])?
        - g(eigenvalues[3])?
        - g(eigenvalues[4])?;

    Ok(HolevoResult {
        chi_be,
        eigenvalues,
        diagnostics: HolevoDiagnostics {
            a: a_coef,
            b: b_coef,
            c: c_coef,
            d: d_coef,
            cm_a,
            cm_b,
            cm_c,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyRateResult {
    pub i_ab: f64,
    pub chi_be: f64,
    pub eigenvalues: [f64; 5],
    /// β·I_AB − χ_BE, possibly negative.
    pub k: f64,
    /// Interruption probability P.
    pub interruption: f64,
    /// (1−P)·K, possibly negative.
    pub k_atm: f64,
    pub diagnostics: HolevoDiagnostics,
}

impl KeyRateResult {
    pub fn k_clamped(&self) -> f64 {
        self.k.max(0.0)
    }

    pub fn k_atm_clamped(&self) -> f64 {
        self.k_atm.max(0.0)
    }
}

/// K = β·I_AB − χ_BE and K_atm = (1−P)·K.
pub fn secret_key_rate(m: &FadingMoments, p: &ProtocolParams, interruption: f64) -> Result<KeyRateResult> {
    if !(0.0..=1.0).contains(&interruption) {
        return Err(Error::invalid(
            "interruption_probability",
            format!("must lie in [0, 1], got {interruption}"),
        ));
    }
    if !(p.reconciliation > 0.0 && p.reconciliation <= 1.0) {
        return Err(Error::invalid("reconciliation_efficiency", "must lie in (0, 1]"));
    }
    let i_ab = mutual_information(m, p)?;
    let holevo = holevo_bound(m, p)?;
    let k = p.reconciliation * i_ab - holevo.chi_be;
    Ok(KeyRateResult {
        i_ab,
        chi_be: holevo.chi_be,
        eigenvalues: holevo.eigenvalues,
        k,
        interruption,
        k_atm: (1.0 - interruption) * k,
        diagnostics: holevo.diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(detector: Detector, v: f64) -> ProtocolParams {
        ProtocolParams {
            variance: v,
            excess_noise: 0.0,
            efficiency: 1.0,
            electronic_noise: 0.0,
            reconciliation: 1.0,
            detector,
        }
    }

    #[test]
    fn g_function_values() {
        assert_eq!(g_function(0.0).unwrap(), 0.0);
        assert!((g_function(1.0).unwrap() - 2.0).abs() < 1e-15);
        let x: f64 = 0.5;
        let direct = 1.5 * 1.5f64.log2() - x * x.log2();
        assert!((g_function(0.5).unwrap() - direct).abs() < 1e-15);
        assert!((g_function(0.5).unwrap() - 1.377_443_751_081_734_4).abs() < 1e-12);
        assert_eq!(g_function(-1e-12).unwrap(), 0.0);
        assert!(g_function(-1e-3).is_err());
    }

    #[test]
    fn identity_channel_mutual_information() {
        let m = FadingMoments::fixed(1.0);
        let hom = mutual_information(&m, &ideal(Detector::Homodyne, 2.0)).unwrap();
        let het = mutual_information(&m, &ideal(Detector::Heterodyne, 2.0)).unwrap();
        assert!((hom - 0.5).abs() < 1e-15);
        assert!((het - 1.5f64.log2()).abs() < 1e-15);
        assert_eq!(mutual_information(&m, &ideal(Detector::Homodyne, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn identity_channel_leaks_nothing() {
        let m = FadingMoments::fixed(1.0);
        for v in [1.5, 2.0, 5.0, 40.0] {
            for det in [Detector::Homodyne, Detector::Heterodyne] {
                let h = holevo_bound(&m, &ideal(det, v)).unwrap();
                assert!((h.diagnostics.a - 2.0).abs() < 1e-12);
                assert!((h.diagnostics.b - 1.0).abs() < 1e-12);
                for l in h.eigenvalues {
                    assert!((l - 1.0).abs() < 1e-6, "{det} V={v}: {:?}", h.eigenvalues);
                }
                // λ₃ = λ₄ is a double root, resolved only to ~√ε.
                assert!(h.chi_be.abs() < 1e-5, "{det} V={v}: {}", h.chi_be);
            }
        }
    }

    #[test]
    fn vacuum_through_pure_loss_leaks_nothing() {
        let m = FadingMoments::new(0.4, 0.6).unwrap();
        let p = ProtocolParams {
            variance: 1.0,
            excess_noise: 0.0,
            efficiency: 0.6,
            electronic_noise: 0.01,
            reconciliation: 0.9,
            detector: Detector::Homodyne,
        };
        assert!(holevo_bound(&m, &p).unwrap().chi_be.abs() < 1e-9);
    }

    #[test]
    fn key_rate_examples() {
        let m = FadingMoments::fixed(1.0);
        let r = secret_key_rate(&m, &ideal(Detector::Homodyne, 2.0), 0.0).unwrap();
        assert!((r.k_atm - 0.5).abs() < 1e-9);
        let r = secret_key_rate(&m, &ideal(Detector::Homodyne, 2.0), 1.0).unwrap();
        assert_eq!(r.k_atm, 0.0);
        let mut p = ideal(Detector::Homodyne, 3.0);
        p.efficiency = 0.6;
        p.electronic_noise = 0.01;
        p.excess_noise = 0.2;
        p.reconciliation = 0.9;
        let r = secret_key_rate(&FadingMoments::fixed(0.01), &p, 0.3).unwrap();
        assert!((r.k - -0.004_498_157_472_141_487_5).abs() < 1e-12, "{}", r.k);
        assert!((r.k_atm - 0.7 * r.k).abs() < 1e-15);
        assert_eq!(r.k_atm_clamped(), 0.0);
    }

    #[test]
    fn moment_validation() {
        assert!(FadingMoments::new(0.5, 0.5).is_ok());
        assert!(FadingMoments::new(0.5, 0.9).is_err());
        assert!(FadingMoments::new(0.9, 0.5).is_err());
        assert!(secret_key_rate(&FadingMoments::fixed(0.5), &ideal(Detector::Homodyne, 2.0), 1.5).is_err());
    }

    #[test]
    fn detector_parsing() {
        assert_eq!("het".parse::<Detector>().unwrap(), Detector::Heterodyne);
        assert!("photon-counter".parse::<Detector>().is_err());
    }
}
