//! Heavy-tailed step generation: the diversification half of the hoopoe
//! engine and the flight engine of the cuckoo baseline.
//!
//! Steps come from Mantegna's algorithm for symmetric alpha-stable deviates.
//! The tail exponent `lambda` of the step-length law maps to the stability
//! index `beta = lambda - 1`, so `lambda` in (1, 3] spans beta in (0, 2],
//! with beta = 2 the Gaussian limit. The survival function of |step| decays
//! like `u^(1 - lambda)` for large `u`.

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::function::gamma::gamma;
use thiserror::Error;

use crate::core::{repair, Bounds, CoreError, RunRng};

/// Tail exponent used when none is configured.
pub const DEFAULT_TAIL_EXPONENT: f64 = 1.5;

/// Default step scale as a fraction of the mean domain width.
pub const DEFAULT_SCALE_FRACTION: f64 = 0.01;

/// Per-coordinate displacements are capped at this many domain widths; the
/// step law has infinite variance and a finite implementation has to cap it
/// somewhere. Whether the cap fired is reported on [`LevyMove`] and recorded
/// in the run trace.
pub const TRUNCATION_WIDTHS: f64 = 10.0;

/// Stability indexes at or above this are treated as the Gaussian limit,
/// where the Mantegna scale formula degenerates (sin(pi beta / 2) -> 0).
const GAUSSIAN_LIMIT: f64 = 2.0 - 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LevyError {
    #[error("step scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("tail exponent must lie in (1, 3], got {0}")]
    InvalidTailExponent(f64),
}

/// Parameters of the Lévy step law: the step-size scale and the tail
/// exponent of the step-length distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyParams {
    step_scale: f64,
    tail_exponent: f64,
    // Mantegna numerator scale, fixed by the tail exponent.
    sigma_u: f64,
}

impl LevyParams {
    pub fn new(step_scale: f64, tail_exponent: f64) -> Result<Self, LevyError> {
        if !(step_scale > 0.0) || !step_scale.is_finite() {
            return Err(LevyError::InvalidScale(step_scale));
        }
        if !(tail_exponent > 1.0 && tail_exponent <= 3.0) {
            return Err(LevyError::InvalidTailExponent(tail_exponent));
        }
        let beta = tail_exponent - 1.0;
        let sigma_u = if beta >= GAUSSIAN_LIMIT {
            0.0
        } else {
            mantegna_sigma(beta)
        };
        Ok(Self {
            step_scale,
            tail_exponent,
            sigma_u,
        })
    }

    /// Default parameters scaled to a domain: step scale
    /// [`DEFAULT_SCALE_FRACTION`] of the mean width, tail exponent
    /// [`DEFAULT_TAIL_EXPONENT`].
    pub fn scaled_to(bounds: &Bounds) -> Self {
        Self::new(
            DEFAULT_SCALE_FRACTION * bounds.mean_width(),
            DEFAULT_TAIL_EXPONENT,
        )
        .expect("default parameters are valid")
    }

    pub fn step_scale(&self) -> f64 {
        self.step_scale
    }

    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }

    /// Stability index of the generated deviates.
    pub fn stability_index(&self) -> f64 {
        self.tail_exponent - 1.0
    }
}

/// Mantegna's scale for the numerator normal:
/// sigma_u^beta = Gamma(1+beta) sin(pi beta/2) / (Gamma((1+beta)/2) beta 2^((beta-1)/2)).
fn mantegna_sigma(beta: f64) -> f64 {
    let numerator = gamma(1.0 + beta) * (std::f64::consts::PI * beta / 2.0).sin();
    let denominator = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (numerator / denominator).powf(1.0 / beta)
}

/// One symmetric heavy-tailed deviate.
fn stable_deviate(params: &LevyParams, rng: &mut RunRng) -> f64 {
    let beta = params.stability_index();
    if beta >= GAUSSIAN_LIMIT {
        // Gaussian limit of the stable family at unit scale.
        let z: f64 = rng.sample(StandardNormal);
        return std::f64::consts::SQRT_2 * z;
    }
    let u: f64 = params.sigma_u * rng.sample::<f64, _>(StandardNormal);
    let v: f64 = loop {
        let v: f64 = rng.sample(StandardNormal);
        if v != 0.0 {
            break v;
        }
    };
    u / v.abs().powf(1.0 / beta)
}

/// Draws a vector of `dim` independent heavy-tailed deviates, sign-symmetric
/// about 0, unscaled by the step size.
pub fn sample_step(params: &LevyParams, dim: usize, rng: &mut RunRng) -> Vec<f64> {
    (0..dim).map(|_| stable_deviate(params, rng)).collect()
}

/// A Lévy move: the repaired destination plus whether any coordinate's
/// displacement hit the truncation cap.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyMove {
    pub position: Vec<f64>,
    pub truncated: bool,
}

/// Moves `current` by an entry-wise scaled heavy-tailed step and repairs the
/// result into the bounds.
pub fn levy_move(
    current: &[f64],
    params: &LevyParams,
    bounds: &Bounds,
    rng: &mut RunRng,
) -> Result<LevyMove, CoreError> {
    let step = sample_step(params, bounds.dim(), rng);
    levy_move_with_step(current, params, bounds, &step)
}

/// [`levy_move`] with an injected step vector; the deterministic seam used
/// by both the production path and tests.
pub fn levy_move_with_step(
    current: &[f64],
    params: &LevyParams,
    bounds: &Bounds,
    step: &[f64],
) -> Result<LevyMove, CoreError> {
    if step.len() != current.len() {
        return Err(CoreError::DimensionMismatch {
            expected: current.len(),
            actual: step.len(),
        });
    }
    let displacement: Vec<f64> = step.iter().map(|&s| params.step_scale * s).collect();
    apply_displacement(current, &displacement, bounds)
}

/// Applies a raw displacement vector to `current` under the shared movement
/// policy: per-coordinate truncation at [`TRUNCATION_WIDTHS`] domain widths,
/// then repair into the bounds.
pub fn apply_displacement(
    current: &[f64],
    displacement: &[f64],
    bounds: &Bounds,
) -> Result<LevyMove, CoreError> {
    if current.len() != bounds.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: bounds.dim(),
            actual: current.len(),
        });
    }
    if displacement.len() != current.len() {
        return Err(CoreError::DimensionMismatch {
            expected: current.len(),
            actual: displacement.len(),
        });
    }
    let mut truncated = false;
    let proposed: Vec<f64> = current
        .iter()
        .zip(displacement)
        .enumerate()
        .map(|(i, (&x, &d))| {
            let cap = TRUNCATION_WIDTHS * bounds.width(i);
            let mut d = d;
            if d.abs() > cap {
                d = cap.copysign(d);
                truncated = true;
            }
            x + d
        })
        .collect();
    let position = repair(&proposed, bounds)?;
    Ok(LevyMove {
        position,
        truncated,
    })
}
