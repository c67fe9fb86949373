//! Seeded, worker-count-independent Monte Carlo over the fading channel,
//! and assembly of per-distance key-rate results.
//!
//! Samples are grouped into fixed blocks; block `j` draws from ChaCha8
//! stream `j` of the master seed. Blocks may run on any worker, and their
//! accumulators are merged in block order, so results are bit-identical
//! for every worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{derive_params, is_moderate, LinkScenario, Regime};
use crate::error::{Error, Result};
use crate::fading::{FadingChannel, FadingOptions, TransmittanceSampler};
use crate::impairments::{interruption_probability, phase_excess_noise, InterruptionResult, PhaseNoiseResult};
use crate::keyrate::{secret_key_rate, Detector, FadingMoments, KeyRateResult, ProtocolParams};

/// Samples per RNG stream / reduction block.
pub const BLOCK_SIZE: usize = 4096;

/// Name of the generator recorded in run metadata.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha), stream = block index";

/// Clamped draws above this fraction of a run raise a warning.
pub const CLAMP_WARNING_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineOptions {
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; 0 uses rayon's global pool.
    pub workers: usize,
    pub bins: usize,
    /// Keep every draw (debug mode) for moment cross-checks.
    pub retain_samples: bool,
    /// Add ε_θ to the fixed excess noise in the key rate.
    pub include_phase_noise: bool,
    pub fading: FadingOptions,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0,
            workers: 0,
            bins: 200,
            retain_samples: false,
            include_phase_noise: false,
            fading: FadingOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` uniform edges partitioning [0, 1].
    pub edges: Vec<f64>,
    pub densities: Vec<f64>,
}

impl Histogram {
    pub fn bin_width(&self, i: usize) -> f64 {
        self.edges[i + 1] - self.edges[i]
    }

    /// Σ density·width; 1 up to rounding.
    pub fn mass(&self) -> f64 {
        (0..self.densities.len()).map(|i| self.densities[i] * self.bin_width(i)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmittanceStats {
    pub n_samples: usize,
    pub mean_t: f64,
    pub mean_sqrt_t: f64,
    pub var_sqrt_t: f64,
    pub histogram: Histogram,
    pub clamp_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
}

impl TransmittanceStats {
    pub fn moments(&self) -> Result<FadingMoments> {
        FadingMoments::new(self.mean_t, self.mean_sqrt_t)
    }

    pub fn clamp_fraction(&self) -> f64 {
        self.clamp_count as f64 / self.n_samples as f64
    }
}

#[derive(Debug, Clone)]
struct Accumulator {
    sum_t: f64,
    sum_sqrt_t: f64,
    counts: Vec<u64>,
    clamped: usize,
    samples: Option<Vec<f64>>,
}

impl Accumulator {
    fn new(bins: usize, retain: bool) -> Self {
        Self {
            sum_t: 0.0,
            sum_sqrt_t: 0.0,
            counts: vec![0; bins],
            clamped: 0,
            samples: retain.then(Vec::new),
        }
    }

    fn push(&mut self, t: f64, clamped: bool) {
        self.sum_t += t;
        self.sum_sqrt_t += t.sqrt();
        let bins = self.counts.len();
        let idx = ((t * bins as f64) as usize).min(bins - 1);
        self.counts[idx] += 1;
        self.clamped += clamped as usize;
        if let Some(s) = &mut self.samples {
            s.push(t);
        }
    }

    fn merge(mut self, other: Accumulator) -> Self {
        self.sum_t += other.sum_t;
        self.sum_sqrt_t += other.sum_sqrt_t;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.clamped += other.clamped;
        if let (Some(a), Some(b)) = (&mut self.samples, other.samples) {
            a.extend(b);
        }
        self
    }
}

fn run_block<S: TransmittanceSampler + ?Sized>(
    sampler: &S,
    block: usize,
    n: usize,
    opts: &EngineOptions,
) -> Result<Accumulator> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(block as u64);
    let start = block * BLOCK_SIZE;
    let end = (start + BLOCK_SIZE).min(n);
    let mut acc = Accumulator::new(opts.bins, opts.retain_samples);
    for _ in start..end {
        let d = sampler.sample(&mut rng)?;
        acc.push(d.value, d.clamped);
    }
    Ok(acc)
}

/// Moments and histogram of `opts.samples` draws from any sampler.
pub fn estimate_with<S: TransmittanceSampler + ?Sized>(sampler: &S, opts: &EngineOptions) -> Result<TransmittanceStats> {
    let n = opts.samples;
    if n == 0 {
        return Err(Error::invalid("n_samples", "must be >= 1"));
    }
    if opts.bins == 0 {
        return Err(Error::invalid("bins", "must be >= 1"));
    }
    let blocks = n.div_ceil(BLOCK_SIZE);
    let compute = || -> Vec<Result<Accumulator>> {
        (0..blocks).into_par_iter().map(|b| run_block(sampler, b, n, opts)).collect()
    };
    let parts = if opts.workers == 0 {
        compute()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::Numeric {
                context: "worker_pool",
                detail: e.to_string(),
            })?
            .install(compute)
    };
    let mut total = Accumulator::new(opts.bins, opts.retain_samples);
    for part in parts {
        total = total.merge(part?);
    }

    let nf = n as f64;
    let mean_t = total.sum_t / nf;
    let mean_sqrt_t = total.sum_sqrt_t / nf;
    let width = 1.0 / opts.bins as f64;
    let edges = (0..=opts.bins).map(|i| i as f64 * width).collect();
    let densities = total.counts.iter().map(|&c| c as f64 / (nf * width)).collect();
    Ok(TransmittanceStats {
        n_samples: n,
        mean_t,
        mean_sqrt_t,
        var_sqrt_t: (mean_t - mean_sqrt_t * mean_sqrt_t).max(0.0),
        histogram: Histogram { edges, densities },
        clamp_count: total.clamped,
        samples: total.samples,
    })
}

/// Monte Carlo statistics of the total fading transmittance.
pub fn estimate_transmittance(scenario: &LinkScenario, opts: &EngineOptions) -> Result<TransmittanceStats> {
    let channel = FadingChannel::new(scenario, &opts.fading)?;
    estimate_with(&channel, opts)
}

/// Everything computed for one scenario point apart from the key rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelEvaluation {
    pub distance: f64,
    pub rytov: f64,
    pub regime: Regime,
    pub stats: TransmittanceStats,
    pub interruption: InterruptionResult,
    pub phase_noise: PhaseNoiseResult,
    pub broadening_mean: f64,
    pub broadening_ratio: f64,
    pub warnings: Vec<String>,
}

/// Transmittance statistics and impairments; independent of the detector.
pub fn evaluate_channel(scenario: &LinkScenario, opts: &EngineOptions) -> Result<ChannelEvaluation> {
    let channel = FadingChannel::new(scenario, &opts.fading)?;
    let stats = estimate_with(&channel, opts)?;
    let interruption = interruption_probability(scenario, &channel.beam)?;
    let phase_noise = phase_excess_noise(scenario, &channel.pulse);
    let params = derive_params(scenario);

    let mut warnings = Vec::new();
    let at = format!("L = {} m", scenario.distance);
    if is_moderate(params.rytov) {
        warnings.push(format!(
            "{at}: rytov variance {:.4} lies in the moderate regime; strong-fluctuation formulas applied",
            params.rytov
        ));
    }
    if phase_noise.outside_validity {
        warnings.push(format!(
            "{at}: arrival-time variance T1^2/4 is a weak-turbulence result (rytov variance {:.4})",
            params.rytov
        ));
    }
    if stats.clamp_fraction() >= CLAMP_WARNING_FRACTION {
        warnings.push(format!(
            "{at}: {} of {} transmittance draws were clamped to [0, 1]",
            stats.clamp_count, stats.n_samples
        ));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(ChannelEvaluation {
        distance: scenario.distance,
        rytov: params.rytov,
        regime: params.regime,
        stats,
        interruption,
        phase_noise,
        broadening_mean: channel.broadening.mean,
        broadening_ratio: channel.broadening.ratio,
        warnings,
    })
}

/// Key rate for one detector given the channel evaluation.
pub fn key_rate_for(
    scenario: &LinkScenario,
    channel: &ChannelEvaluation,
    detector: Detector,
    opts: &EngineOptions,
) -> Result<KeyRateResult> {
    let mut protocol = ProtocolParams::from_scenario(scenario);
    protocol.detector = detector;
    if opts.include_phase_noise {
        protocol.excess_noise += channel.phase_noise.excess_noise;
    }
    secret_key_rate(&channel.stats.moments()?, &protocol, channel.interruption.probability)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub channel: ChannelEvaluation,
    pub key_rate: KeyRateResult,
}

/// Full pipeline for one scenario with its own detector.
pub fn evaluate_point(scenario: &LinkScenario, opts: &EngineOptions) -> Result<PointResult> {
    let channel = evaluate_channel(scenario, opts)?;
    let key_rate = key_rate_for(scenario, &channel, scenario.detector, opts)?;
    Ok(PointResult { channel, key_rate })
}

/// Seed of sweep row `index`, derived from the master seed by a
/// SplitMix64 step so neighbouring rows get unrelated streams.
pub fn row_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub distance: f64,
    pub detector: Detector,
    pub seed: u64,
    /// Shared by every detector at this distance.
    pub channel: Option<ChannelEvaluation>,
    pub key_rate: Option<KeyRateResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub warnings: Vec<String>,
}

impl SweepResult {
    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }
}

/// One row per distance per detector, sorted by distance. Each distance
/// uses `row_seed(opts.seed, i)` where `i` is its position in the sorted
/// list. Row errors are recorded and the sweep continues.
pub fn sweep(
    template: &LinkScenario,
    distances: &[f64],
    detectors: &[Detector],
    opts: &EngineOptions,
) -> Result<SweepResult> {
    if distances.is_empty() {
        return Err(Error::invalid("distances", "must not be empty"));
    }
    if detectors.is_empty() {
        return Err(Error::invalid("detectors", "must not be empty"));
    }
    let mut sorted = distances.to_vec();
    sorted.sort_by(f64::total_cmp);

    let mut rows = Vec::with_capacity(sorted.len() * detectors.len());
    let mut warnings = Vec::new();
    for (i, &distance) in sorted.iter().enumerate() {
        let scenario = template.with_distance(distance);
        let row_opts = EngineOptions {
            seed: row_seed(opts.seed, i),
            ..opts.clone()
        };
        match evaluate_channel(&scenario, &row_opts) {
            Ok(channel) => {
                warnings.extend(channel.warnings.iter().cloned());
                for &detector in detectors {
                    let outcome = key_rate_for(&scenario, &channel, detector, &row_opts);
                    if let Err(e) = &outcome {
                        warnings.push(format!("L = {distance} m, {detector}: {e}"));
                    }
                    rows.push(SweepRow {
                        distance,
                        detector,
                        seed: row_opts.seed,
                        channel: Some(channel.clone()),
                        key_rate: outcome.as_ref().ok().copied(),
                        error: outcome.err().map(|e| e.to_string()),
                    });
                }
            }
            Err(e) => {
                warnings.push(format!("L = {distance} m: {e}"));
                for &detector in detectors {
                    rows.push(SweepRow {
                        distance,
                        detector,
                        seed: row_opts.seed,
                        channel: None,
                        key_rate: None,
                        error: Some(e.to_string()),
                    });
                }
            }
        }
    }
    Ok(SweepResult { rows, warnings })
}
