//! Run configuration: TOML text → validated [`RunConfig`].
//!
//! Physical quantities may be given as bare numbers (SI) or as strings with
//! a unit suffix, e.g. `"80 mm"`, `"9 um"`, `"1550 nm"`, `"10 km"`,
//! `"100 MHz"`. Extinction coefficients are per km.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{ExtinctionCoeffs, LinkScenario, Season};
use crate::engine::EngineOptions;
use crate::error::{Error, Result};
use crate::fading::FadingOptions;
use crate::keyrate::Detector;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Quantity {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, Copy)]
enum Dimension {
    Length,
    Frequency,
}

fn length_scale(unit: &str) -> Option<f64> {
    Some(match unit {
        "m" => 1.0,
        "km" => 1e3,
        "cm" => 1e-2,
        "mm" => 1e-3,
        "um" | "µm" | "μm" => 1e-6,
        "nm" => 1e-9,
        _ => return None,
    })
}

fn frequency_scale(unit: &str) -> Option<f64> {
    Some(match unit {
        "Hz" => 1.0,
        "kHz" => 1e3,
        "MHz" => 1e6,
        "GHz" => 1e9,
        _ => return None,
    })
}

impl Quantity {
    fn resolve(&self, key: &str, dim: Dimension) -> Result<f64> {
        let text = match self {
            Quantity::Number(v) => return Ok(*v),
            Quantity::Text(t) => t.trim(),
        };
        let split = text
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
            .unwrap_or(text.len());
        let (num, unit) = text.split_at(split);
        let value: f64 = num
            .trim()
            .parse()
            .map_err(|_| Error::invalid(key, format!("cannot parse number in `{text}`")))?;
        let unit = unit.trim();
        if unit.is_empty() {
            return Ok(value);
        }
        let scale = match dim {
            Dimension::Length => length_scale(unit),
            Dimension::Frequency => frequency_scale(unit),
        };
        scale
            .map(|s| value * s)
            .ok_or_else(|| Error::invalid(key, format!("unknown unit `{unit}` for a {dim:?} quantity").to_lowercase()))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T> OneOrMany<T> {
    fn into_vec(self) -> Vec<T> {
        match self {
            OneOrMany::One(t) => vec![t],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtinction {
    mol_scatter: f64,
    mol_absorb: f64,
    aer_scatter: f64,
    aer_absorb: f64,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    season: Option<OneOrMany<String>>,
    wavelength: Option<Quantity>,
    cn2: Option<f64>,
    beam_waist: Option<Quantity>,
    aperture_radius: Option<Quantity>,
    focal_length: Option<Quantity>,
    fiber_core_diameter: Option<Quantity>,
    inner_scale: Option<Quantity>,
    outer_scale: Option<Quantity>,
    extinction: Option<RawExtinction>,
    prf: Option<Quantity>,
    duty_ratio: Option<f64>,
    lo_correlation: Option<f64>,
    lo_decorrelation: Option<f64>,
    modulation_variance: Option<f64>,
    detection_efficiency: Option<f64>,
    electronic_noise: Option<f64>,
    reconciliation_efficiency: Option<f64>,
    excess_noise: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRange {
    start: Quantity,
    stop: Quantity,
    step: Quantity,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    distances: Option<Vec<Quantity>>,
    range: Option<RawRange>,
    samples: Option<usize>,
    seed: Option<u64>,
    detectors: Option<Vec<String>>,
    workers: Option<usize>,
    bins: Option<usize>,
    annuli: Option<usize>,
    sectors: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    directory: Option<PathBuf>,
    formats: Option<Vec<String>>,
    histograms: Option<bool>,
    include_phase_noise: Option<bool>,
    include_broadening: Option<bool>,
    rate_multiplier: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    scenario: RawScenario,
    #[serde(default)]
    sweep: RawSweep,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub csv: bool,
    pub json: bool,
    pub histograms: bool,
    /// Scales K_atm (bits/use) into an extra rate column, e.g. the PRF.
    pub rate_multiplier: Option<f64>,
}

/// A link scenario with the label used in output file names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelledScenario {
    pub label: String,
    pub scenario: LinkScenario,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenarios: Vec<LabelledScenario>,
    /// Sorted, strictly positive, metres.
    pub distances: Vec<f64>,
    pub detectors: Vec<Detector>,
    pub engine: EngineOptions,
    pub output: OutputConfig,
    /// Notes raised while expanding presets.
    pub warnings: Vec<String>,
}

pub fn parse_config_file(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut warnings = Vec::new();

    let seasons: Vec<Option<Season>> = match raw.scenario.season.clone() {
        None => vec![None],
        Some(names) => {
            let names = names.into_vec();
            if names.is_empty() {
                return Err(Error::invalid("scenario.season", "must name at least one season"));
            }
            names
                .iter()
                .map(|n| n.parse::<Season>().map(Some).map_err(|e| rekey(e, "scenario.season")))
                .collect::<Result<_>>()?
        }
    };

    let distances = resolve_distances(&raw.sweep)?;
    let mut scenarios = Vec::with_capacity(seasons.len());
    for season in seasons {
        let scenario = build_scenario(&raw.scenario, season, distances[0], &mut warnings)?;
        let label = season.map_or_else(|| "custom".to_string(), |s| s.name().to_string());
        if scenarios.iter().any(|s: &LabelledScenario| s.label == label) {
            return Err(Error::invalid("scenario.season", format!("`{label}` listed twice")));
        }
        scenarios.push(LabelledScenario { label, scenario });
    }

    let detectors = match &raw.sweep.detectors {
        None => vec![scenarios[0].scenario.detector],
        Some(list) if list.is_empty() => return Err(Error::invalid("sweep.detectors", "must not be empty")),
        Some(list) => {
            let mut out = Vec::new();
            for d in list {
                let d: Detector = d.parse().map_err(|e| rekey(e, "sweep.detectors"))?;
                if !out.contains(&d) {
                    out.push(d);
                }
            }
            out
        }
    };

    let defaults = EngineOptions::default();
    let fading_defaults = FadingOptions::default();
    let engine = EngineOptions {
        samples: positive_count("sweep.samples", raw.sweep.samples.unwrap_or(defaults.samples))?,
        seed: raw.sweep.seed.unwrap_or(defaults.seed),
        workers: raw.sweep.workers.unwrap_or(defaults.workers),
        bins: positive_count("sweep.bins", raw.sweep.bins.unwrap_or(defaults.bins))?,
        retain_samples: false,
        include_phase_noise: raw.output.include_phase_noise.unwrap_or(false),
        fading: FadingOptions {
            annuli: positive_count("sweep.annuli", raw.sweep.annuli.unwrap_or(fading_defaults.annuli))?,
            sectors: positive_count("sweep.sectors", raw.sweep.sectors.unwrap_or(fading_defaults.sectors))?,
            include_broadening: raw.output.include_broadening.unwrap_or(false),
        },
    };

    let formats = raw.output.formats.clone().unwrap_or_else(|| vec!["csv".into(), "json".into()]);
    let mut csv = false;
    let mut json = false;
    for f in &formats {
        match f.to_ascii_lowercase().as_str() {
            "csv" => csv = true,
            "json" => json = true,
            other => return Err(Error::invalid("output.formats", format!("unknown format `{other}` (csv, json)"))),
        }
    }
    if let Some(m) = raw.output.rate_multiplier {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::invalid("output.rate_multiplier", format!("must be finite and > 0, got {m}")));
        }
    }
    let output = OutputConfig {
        directory: raw.output.directory.clone().unwrap_or_else(|| PathBuf::from("atmoqkd-out")),
        csv,
        json,
        histograms: raw.output.histograms.unwrap_or(true),
        rate_multiplier: raw.output.rate_multiplier,
    };

    Ok(RunConfig {
        scenarios,
        distances,
        detectors,
        engine,
        output,
        warnings,
    })
}

fn rekey(e: Error, key: &str) -> Error {
    match e {
        Error::Invalid { reason, .. } => Error::invalid(key, reason),
        other => other,
    }
}

fn positive_count(key: &str, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::invalid(key, "must be >= 1"));
    }
    Ok(n)
}

fn resolve_distances(sweep: &RawSweep) -> Result<Vec<f64>> {
    let mut out = match (&sweep.distances, &sweep.range) {
        (Some(_), Some(_)) => {
            return Err(Error::invalid("sweep.range", "give either sweep.distances or sweep.range, not both"))
        }
        (None, None) => return Err(Error::invalid("sweep.distances", "no distances given")),
        (Some(list), None) => list
            .iter()
            .map(|q| q.resolve("sweep.distances", Dimension::Length))
            .collect::<Result<Vec<f64>>>()?,
        (None, Some(r)) => {
            let start = r.start.resolve("sweep.range.start", Dimension::Length)?;
            let stop = r.stop.resolve("sweep.range.stop", Dimension::Length)?;
            let step = r.step.resolve("sweep.range.step", Dimension::Length)?;
            if !(step > 0.0) {
                return Err(Error::invalid("sweep.range.step", "must be > 0"));
            }
            if !(stop >= start) {
                return Err(Error::invalid("sweep.range.stop", "must be >= start"));
            }
            let n = ((stop - start) / step * (1.0 + 1e-12)).floor() as usize;
            (0..=n).map(|i| start + i as f64 * step).collect()
        }
    };
    if out.is_empty() {
        return Err(Error::invalid("sweep.distances", "must not be empty"));
    }
    if let Some(bad) = out.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(Error::invalid("sweep.distances", format!("distances must be finite and > 0, got {bad}")));
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

fn build_scenario(
    raw: &RawScenario,
    season: Option<Season>,
    distance: f64,
    warnings: &mut Vec<String>,
) -> Result<LinkScenario> {
    let mut s = LinkScenario::reference(season.unwrap_or(Season::Summer), distance);
    match (season, &raw.extinction, raw.cn2) {
        (Some(season), None, _) if season.extinction().is_none() => warnings.push(format!(
            "{season}: no measured extinction coefficients; using summer values"
        )),
        (None, None, _) | (None, _, None) => {
            return Err(Error::invalid(
                "scenario.season",
                "without a season preset both scenario.cn2 and scenario.extinction are required",
            ))
        }
        _ => {}
    }

    let length = |key: &str, q: &Option<Quantity>, slot: &mut f64| -> Result<()> {
        if let Some(q) = q {
            *slot = q.resolve(&format!("scenario.{key}"), Dimension::Length)?;
        }
        Ok(())
    };
    length("wavelength", &raw.wavelength, &mut s.wavelength)?;
    length("beam_waist", &raw.beam_waist, &mut s.beam_waist)?;
    length("aperture_radius", &raw.aperture_radius, &mut s.aperture_radius)?;
    length("focal_length", &raw.focal_length, &mut s.focal_length)?;
    length("fiber_core_diameter", &raw.fiber_core_diameter, &mut s.fiber_core_diameter)?;
    length("inner_scale", &raw.inner_scale, &mut s.inner_scale)?;
    length("outer_scale", &raw.outer_scale, &mut s.outer_scale)?;
    if let Some(q) = &raw.prf {
        s.prf = q.resolve("scenario.prf", Dimension::Frequency)?;
    }
    if let Some(e) = &raw.extinction {
        s.extinction = ExtinctionCoeffs::from_per_km(e.mol_scatter, e.mol_absorb, e.aer_scatter, e.aer_absorb);
    }
    let scalars = [
        (raw.cn2, &mut s.cn2),
        (raw.duty_ratio, &mut s.duty_ratio),
        (raw.modulation_variance, &mut s.modulation_variance),
        (raw.detection_efficiency, &mut s.detection_efficiency),
        (raw.electronic_noise, &mut s.electronic_noise),
        (raw.reconciliation_efficiency, &mut s.reconciliation_efficiency),
        (raw.excess_noise, &mut s.excess_noise),
    ];
    for (value, slot) in scalars {
        if let Some(v) = value {
            *slot = v;
        }
    }
    match (raw.lo_correlation, raw.lo_decorrelation) {
        (Some(_), Some(_)) => {
            return Err(Error::invalid(
                "scenario.lo_correlation",
                "give either lo_correlation or lo_decorrelation, not both",
            ))
        }
        (Some(rho), None) => s.lo_decorrelation = 1.0 - rho,
        (None, Some(d)) => s.lo_decorrelation = d,
        (None, None) => {}
    }
    s.validate().map_err(|e| match e {
        Error::Invalid { key, reason } if !key.starts_with("scenario.") => {
            Error::invalid(format!("scenario.{key}"), reason)
        }
        other => other,
    })?;
    Ok(s)
}

/// Seasonal presets as printable rows.
pub fn preset_table() -> Vec<(Season, f64, Option<ExtinctionCoeffs>)> {
    Season::ALL.iter().map(|&s| (s, s.cn2(), s.extinction())).collect()
}
