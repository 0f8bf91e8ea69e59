//! Shared domain types: box bounds, evaluated candidates, objectives, the
//! seeded RNG contract, and the budgeted evaluator every algorithm draws
//! evaluations from.
//!
//! Everything here minimizes. The global evaluation counter lives in
//! [`Evaluator`] and is the budget unit for all algorithms; iteration counts
//! are bookkeeping only.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Errors from bounds construction and malformed vector inputs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("bounds must have at least one dimension")]
    EmptyBounds,
    #[error("lower bound must be strictly below upper bound at index {index}: {lower} >= {upper}")]
    InvertedBound { index: usize, lower: f64, upper: f64 },
}

/// Errors from algorithm configuration validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("population size must be at least 1")]
    EmptyPopulation,
    #[error("intensification threshold must lie in [0, 1], got {0}")]
    ThresholdOutOfRange(f64),
    #[error("abandonment fraction must lie in [0, 1], got {0}")]
    AbandonFractionOutOfRange(f64),
    #[error("budget of {budget} evaluations cannot cover the initial population of {population}")]
    BudgetBelowPopulation { budget: u64, population: usize },
    #[error("target tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
}

/// Per-dimension box constraints defining the search space.
///
/// Invariant: `lower[i] < upper[i]` for every dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, CoreError> {
        if lower.is_empty() {
            return Err(CoreError::EmptyBounds);
        }
        if lower.len() != upper.len() {
            return Err(CoreError::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        for (index, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(CoreError::InvertedBound {
                    index,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper })
    }

    /// The box `[lower, upper]^dim`.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self, CoreError> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    /// The box `[-half_width, half_width]^dim`.
    pub fn symmetric(dim: usize, half_width: f64) -> Result<Self, CoreError> {
        Self::uniform(dim, -half_width, half_width)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, index: usize) -> f64 {
        self.upper[index] - self.lower[index]
    }

    /// Average per-dimension width; the reference scale for radius and step
    /// defaults (equals the common width on isotropic boxes).
    pub fn mean_width(&self) -> f64 {
        let total: f64 = (0..self.dim()).map(|i| self.width(i)).sum();
        total / self.dim() as f64
    }

    pub fn contains(&self, position: &[f64]) -> bool {
        position.len() == self.dim()
            && position
                .iter()
                .zip(&self.lower)
                .zip(&self.upper)
                .all(|((&x, &lo), &hi)| x >= lo && x <= hi)
    }
}

/// A point in the search space paired with its objective value and the
/// global evaluation index (0-based) at which it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub position: Vec<f64>,
    pub value: f64,
    pub eval_index: u64,
}

/// A minimization objective over a box domain.
///
/// `evaluate` must be deterministic: the same position always yields the
/// same value.
pub struct Objective {
    name: String,
    bounds: Bounds,
    known_optimum_value: Option<f64>,
    function: Box<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl Objective {
    pub fn new(
        name: impl Into<String>,
        bounds: Bounds,
        function: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            bounds,
            known_optimum_value: None,
            function: Box::new(function),
        }
    }

    pub fn with_known_optimum(mut self, value: f64) -> Self {
        self.known_optimum_value = Some(value);
        self
    }

    pub fn evaluate(&self, position: &[f64]) -> f64 {
        (self.function)(position)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn known_optimum_value(&self) -> Option<f64> {
        self.known_optimum_value
    }
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("name", &self.name)
            .field("dim", &self.bounds.dim())
            .field("known_optimum_value", &self.known_optimum_value)
            .finish()
    }
}

/// The run RNG. Two generators built from the same seed produce identical
/// streams on every platform, which is what makes whole runs replayable.
pub type RunRng = ChaCha8Rng;

/// Builds the deterministic RNG for a seed.
pub fn seeded_rng(seed: u64) -> RunRng {
    RunRng::seed_from_u64(seed)
}

/// Clamps every coordinate of `position` into the box.
///
/// Coordinates already inside are returned unchanged; the operation is
/// idempotent.
pub fn repair(position: &[f64], bounds: &Bounds) -> Result<Vec<f64>, CoreError> {
    if position.len() != bounds.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: bounds.dim(),
            actual: position.len(),
        });
    }
    Ok(position
        .iter()
        .enumerate()
        .map(|(i, &x)| x.clamp(bounds.lower[i], bounds.upper[i]))
        .collect())
}

/// Draws a point with each coordinate independently uniform on its interval.
pub fn uniform_point(bounds: &Bounds, rng: &mut RunRng) -> Vec<f64> {
    (0..bounds.dim())
        .map(|i| rng.random_range(bounds.lower[i]..=bounds.upper[i]))
        .collect()
}

/// Signal that the evaluation budget ran out before a requested evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("evaluation budget of {budget} exhausted")]
pub struct BudgetExhausted {
    pub budget: u64,
}

/// Budgeted evaluation counter with best-so-far tracking.
///
/// All objective evaluations of a run go through one `Evaluator`, so the
/// global counter is the single budget unit and the tracked best is by
/// construction the minimum over everything the run ever evaluated. The
/// evaluator also records the counter value at which the target was first
/// reached, so success runs report evaluations-to-target exactly, no matter
/// at what granularity the calling loop checks for termination.
pub struct Evaluator<'a> {
    objective: &'a Objective,
    budget: u64,
    evaluations: u64,
    target: f64,
    target_hit_at: Option<u64>,
    best: Option<Candidate>,
}

impl<'a> Evaluator<'a> {
    /// An evaluator with a budget and no target (never "reached").
    pub fn new(objective: &'a Objective, budget: u64) -> Self {
        Self::with_target(objective, budget, f64::NEG_INFINITY)
    }

    /// An evaluator that also watches for `value <= target`.
    pub fn with_target(objective: &'a Objective, budget: u64, target: f64) -> Self {
        Self {
            objective,
            budget,
            evaluations: 0,
            target,
            target_hit_at: None,
            best: None,
        }
    }

    pub fn evaluate(&mut self, position: Vec<f64>) -> Result<Candidate, BudgetExhausted> {
        if self.evaluations >= self.budget {
            return Err(BudgetExhausted {
                budget: self.budget,
            });
        }
        debug_assert_eq!(position.len(), self.objective.bounds().dim());
        let value = self.objective.evaluate(&position);
        let candidate = Candidate {
            position,
            value,
            eval_index: self.evaluations,
        };
        self.evaluations += 1;
        if self.best.as_ref().is_none_or(|b| value < b.value) {
            self.best = Some(candidate.clone());
        }
        if value <= self.target && self.target_hit_at.is_none() {
            self.target_hit_at = Some(self.evaluations);
        }
        Ok(candidate)
    }

    pub fn objective(&self) -> &Objective {
        self.objective
    }

    pub fn bounds(&self) -> &Bounds {
        self.objective.bounds()
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn remaining(&self) -> u64 {
        self.budget - self.evaluations
    }

    pub fn exhausted(&self) -> bool {
        self.evaluations >= self.budget
    }

    pub fn best(&self) -> Option<&Candidate> {
        self.best.as_ref()
    }

    pub fn target_reached(&self) -> bool {
        self.target_hit_at.is_some()
    }

    /// Evaluation count at which the target was first reached.
    pub fn evaluations_to_target(&self) -> Option<u64> {
        self.target_hit_at
    }
}

/// Which branch of the search produced a trace entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Init,
    Diversify,
    Probe,
    Dig,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Init => "init",
            Mode::Diversify => "diversify",
            Mode::Probe => "probe",
            Mode::Dig => "dig",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One row of a run trace: fixed-order fields consumed by the harness.
///
/// `truncated` records whether a Lévy displacement hit the truncation cap
/// during the step; it is diagnostic state and not part of the emitted CSV
/// schema.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iteration: u64,
    pub evaluations: u64,
    pub best_value: f64,
    pub mode: Mode,
    pub truncated: bool,
}

/// Outcome of a single optimization run, shared by every algorithm so any
/// harness statistic computes identically over all of them.
///
/// `evaluations_used` is the evaluation count at which the target was first
/// reached for successful runs, and the total consumed (budget-censored)
/// otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub best: Candidate,
    pub evaluations_used: u64,
    pub success: bool,
    pub mode_switch_iteration: Option<u64>,
    pub trace: Vec<TraceRecord>,
}
