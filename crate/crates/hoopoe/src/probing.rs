//! Ground-probing intensification: sample neighbors uniformly in a ball
//! around the current point, estimate the success probability of finding an
//! improvement, and dig — an iterated, contracting local search — where that
//! probability clears the dig threshold.
//!
//! The probe geometry generalizes circle probing to an n-dimensional
//! Euclidean ball. Probe points may leave the box and are repaired before
//! evaluation.

use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::core::{repair, Bounds, Candidate, Evaluator, RunRng};

/// Default probe radius as a fraction of the mean domain width.
pub const DEFAULT_RADIUS_FRACTION: f64 = 0.1;

/// Default probes drawn per region.
pub const DEFAULT_PROBES_PER_REGION: usize = 10;

/// Default success-probability threshold above which a dig fires.
pub const DEFAULT_DIG_THRESHOLD: f64 = 0.3;

/// Default dig budget in evaluations per search-space dimension.
pub const DEFAULT_DIG_EVALS_PER_DIM: u64 = 50;

/// Default radius contraction applied when a dig round fails to improve.
pub const DEFAULT_SHRINK_FACTOR: f64 = 0.5;

/// A dig stops once its radius has contracted below this fraction of the
/// starting radius; further rounds cannot resolve anything new.
const RADIUS_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbeError {
    #[error("probe radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("probes per region must be at least 1")]
    NoProbes,
    #[error("dig threshold must lie in [0, 1], got {0}")]
    InvalidThreshold(f64),
    #[error("shrink factor must lie in (0, 1), got {0}")]
    InvalidShrink(f64),
}

/// Tunables of the probing/digging intensification step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeParams {
    /// Ball radius around the region center; fixed at the region level.
    pub radius: f64,
    /// Probes drawn per region (k); the success probability is a multiple
    /// of 1/k.
    pub probes_per_region: usize,
    /// Strict lower bound on the success probability for a dig to fire.
    pub dig_threshold: f64,
    /// Evaluations allotted to one dig.
    pub dig_budget: u64,
    /// Radius contraction applied when a dig round finds no improvement.
    pub shrink_factor: f64,
}

impl ProbeParams {
    pub fn new(
        radius: f64,
        probes_per_region: usize,
        dig_threshold: f64,
        dig_budget: u64,
        shrink_factor: f64,
    ) -> Result<Self, ProbeError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(ProbeError::InvalidRadius(radius));
        }
        if probes_per_region == 0 {
            return Err(ProbeError::NoProbes);
        }
        if !(0.0..=1.0).contains(&dig_threshold) {
            return Err(ProbeError::InvalidThreshold(dig_threshold));
        }
        if !(shrink_factor > 0.0 && shrink_factor < 1.0) {
            return Err(ProbeError::InvalidShrink(shrink_factor));
        }
        Ok(Self {
            radius,
            probes_per_region,
            dig_threshold,
            dig_budget,
            shrink_factor,
        })
    }

    /// Defaults scaled to a domain: radius [`DEFAULT_RADIUS_FRACTION`] of the
    /// mean width, dig budget [`DEFAULT_DIG_EVALS_PER_DIM`] per dimension.
    pub fn scaled_to(bounds: &Bounds) -> Self {
        Self::new(
            DEFAULT_RADIUS_FRACTION * bounds.mean_width(),
            DEFAULT_PROBES_PER_REGION,
            DEFAULT_DIG_THRESHOLD,
            DEFAULT_DIG_EVALS_PER_DIM * bounds.dim() as u64,
            DEFAULT_SHRINK_FACTOR,
        )
        .expect("default parameters are valid")
    }
}

/// Source of raw probe points in the ball around a center. Points may leave
/// the bounds; the caller repairs them before evaluation.
///
/// The production source is [`UniformBall`]; tests inject deterministic
/// sources (fixed points, exhaustive grids) through the same seam.
pub trait PointSource {
    fn sample_batch(
        &mut self,
        center: &[f64],
        radius: f64,
        count: usize,
        rng: &mut RunRng,
    ) -> Vec<Vec<f64>>;
}

/// Uniform sampling in the closed Euclidean ball: a normalized Gaussian
/// direction scaled by `radius * U^(1/n)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformBall;

impl PointSource for UniformBall {
    fn sample_batch(
        &mut self,
        center: &[f64],
        radius: f64,
        count: usize,
        rng: &mut RunRng,
    ) -> Vec<Vec<f64>> {
        let dim = center.len();
        (0..count)
            .map(|_| {
                let direction: Vec<f64> = loop {
                    let d: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                    let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm > 0.0 {
                        break d.iter().map(|x| x / norm).collect();
                    }
                };
                let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
                center
                    .iter()
                    .zip(&direction)
                    .map(|(&c, &d)| c + r * d)
                    .collect()
            })
            .collect()
    }
}

/// Outcome of probing one region.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub center: Candidate,
    pub samples: Vec<Candidate>,
    /// Fraction of samples strictly improving on the center, exactly a
    /// multiple of 1 / probes_per_region.
    pub success_probability: f64,
    pub best_sample: Candidate,
}

/// The evaluation budget ran out mid-probe; carries the partial draw.
#[derive(Debug, Clone, Error)]
#[error("budget exhausted during probe after {} of {requested} samples", samples.len())]
pub struct ProbeExhausted {
    pub center: Candidate,
    pub samples: Vec<Candidate>,
    pub requested: usize,
}

/// Draws `probes_per_region` points in the ball around `center`, evaluates
/// them, and reports the improving fraction and the best sample.
pub fn probe_region<S: PointSource>(
    center: &Candidate,
    params: &ProbeParams,
    evaluator: &mut Evaluator<'_>,
    source: &mut S,
    rng: &mut RunRng,
) -> Result<ProbeReport, ProbeExhausted> {
    let k = params.probes_per_region;
    let points = source.sample_batch(&center.position, params.radius, k, rng);
    let mut samples = Vec::with_capacity(k);
    for point in points {
        let repaired = repair(&point, evaluator.bounds()).expect("source preserves dimension");
        match evaluator.evaluate(repaired) {
            Ok(candidate) => samples.push(candidate),
            Err(_) => {
                return Err(ProbeExhausted {
                    center: center.clone(),
                    samples,
                    requested: k,
                })
            }
        }
    }
    let improving = samples.iter().filter(|s| s.value < center.value).count();
    let best_sample = samples
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("k >= 1")
        .clone();
    Ok(ProbeReport {
        center: center.clone(),
        samples,
        success_probability: improving as f64 / k as f64,
        best_sample,
    })
}

/// True iff the report's success probability strictly exceeds the dig
/// threshold.
pub fn should_dig(report: &ProbeReport, params: &ProbeParams) -> bool {
    report.success_probability > params.dig_threshold
}

/// Iterated local refinement: probe rounds in a ball around the working
/// point, moving to the best sample whenever it improves and contracting the
/// radius whenever a round fails to improve, until the dig budget is spent,
/// the radius floors out, or the run's budget or target cuts it short.
///
/// The returned candidate never has a higher value than `center`; with
/// `dig_budget` 0 the center is returned unchanged.
pub fn dig<S: PointSource>(
    center: &Candidate,
    params: &ProbeParams,
    evaluator: &mut Evaluator<'_>,
    source: &mut S,
    rng: &mut RunRng,
) -> Candidate {
    let mut current = center.clone();
    let mut radius = params.radius;
    let floor = params.radius * RADIUS_FLOOR;
    let mut spent: u64 = 0;
    while spent < params.dig_budget && radius > floor && !evaluator.target_reached() {
        let batch = (params.probes_per_region as u64)
            .min(params.dig_budget - spent)
            .min(evaluator.remaining()) as usize;
        if batch == 0 {
            break;
        }
        let points = source.sample_batch(&current.position, radius, batch, rng);
        let mut round_best: Option<Candidate> = None;
        for point in points {
            let repaired = repair(&point, evaluator.bounds()).expect("source preserves dimension");
            match evaluator.evaluate(repaired) {
                Ok(candidate) => {
                    spent += 1;
                    if round_best
                        .as_ref()
                        .is_none_or(|b| candidate.value < b.value)
                    {
                        round_best = Some(candidate);
                    }
                }
                Err(_) => break,
            }
        }
        match round_best {
            Some(best) if best.value < current.value => current = best,
            _ => radius *= params.shrink_factor,
        }
    }
    current
}
