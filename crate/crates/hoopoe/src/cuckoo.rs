//! Cuckoo-search baseline in the original Yang–Deb formulation: per
//! generation, every nest spawns one cuckoo by a Lévy flight whose step is
//! scaled entrywise by the nest's distance to the current best nest; the
//! cuckoo replaces a uniformly random nest when better, then the worst
//! fraction of nests is abandoned and re-initialized uniformly.
//!
//! The distance scaling is what lets the flights anneal: steps shrink as the
//! population converges, so the search refines to arbitrary tolerance while
//! the heavy tail and the abandonment keep injecting large moves. The
//! baseline shares the Lévy sampler, repair/truncation policy, RNG
//! construction and termination rules with the hoopoe engine so comparisons
//! between the two isolate the algorithmic difference, and it emits the same
//! trace layout (all search entries carry the diversify tag).

use rand::Rng;

use crate::core::{
    seeded_rng, uniform_point, Candidate, ConfigError, Evaluator, Mode, Objective, RunResult,
    RunRng, TraceRecord,
};
use crate::levy::{self, LevyParams};

/// Default number of nests.
pub const DEFAULT_NESTS: usize = 25;

/// Default abandonment fraction p_a: the probability that a nest coordinate
/// is discovered and walked during the abandonment phase.
pub const DEFAULT_ABANDON_FRACTION: f64 = 0.75;

/// Default flight scale. Cuckoo steps are `scale * step * (nest - best)`
/// per coordinate, so the scale is dimensionless.
pub const DEFAULT_FLIGHT_SCALE: f64 = 0.01;

/// All tunables of one cuckoo-search run.
#[derive(Debug, Clone, PartialEq)]
pub struct CuckooConfig {
    pub nests: usize,
    /// Fraction of worst nests abandoned per generation; the count is
    /// `ceil(abandon_fraction * nests)`.
    pub abandon_fraction: f64,
    /// Step law of the flights. The scale is dimensionless here: the
    /// entrywise distance to the best nest carries the length unit.
    pub levy: LevyParams,
    pub max_evaluations: u64,
    pub target_value: f64,
    pub target_tolerance: f64,
    pub seed: u64,
}

impl CuckooConfig {
    /// The tuned defaults.
    pub fn recommended(
        _objective: &Objective,
        max_evaluations: u64,
        target_value: f64,
        target_tolerance: f64,
        seed: u64,
    ) -> Self {
        Self {
            nests: DEFAULT_NESTS,
            abandon_fraction: DEFAULT_ABANDON_FRACTION,
            levy: LevyParams::new(DEFAULT_FLIGHT_SCALE, levy::DEFAULT_TAIL_EXPONENT)
                .expect("default parameters are valid"),
            max_evaluations,
            target_value,
            target_tolerance,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.nests == 0 {
            return Err(ConfigError::EmptyPopulation);
        }
        if !(0.0..=1.0).contains(&self.abandon_fraction) {
            return Err(ConfigError::AbandonFractionOutOfRange(
                self.abandon_fraction,
            ));
        }
        if self.max_evaluations < self.nests as u64 {
            return Err(ConfigError::BudgetBelowPopulation {
                budget: self.max_evaluations,
                population: self.nests,
            });
        }
        if !(self.target_tolerance > 0.0) || !self.target_tolerance.is_finite() {
            return Err(ConfigError::InvalidTolerance(self.target_tolerance));
        }
        Ok(())
    }

    fn target(&self) -> f64 {
        self.target_value + self.target_tolerance
    }
}

/// One cuckoo-search run in progress.
pub struct CuckooRun<'a> {
    config: &'a CuckooConfig,
    objective: &'a Objective,
    evaluator: Evaluator<'a>,
    rng: RunRng,
    nests: Vec<Candidate>,
    generation: u64,
    trace: Vec<TraceRecord>,
}

impl<'a> CuckooRun<'a> {
    pub fn new(config: &'a CuckooConfig, objective: &'a Objective) -> Result<Self, ConfigError> {
        config.validate()?;
        let mut rng = seeded_rng(config.seed);
        let mut evaluator =
            Evaluator::with_target(objective, config.max_evaluations, config.target());
        let nests: Vec<Candidate> = (0..config.nests)
            .map(|_| {
                let point = uniform_point(objective.bounds(), &mut rng);
                evaluator
                    .evaluate(point)
                    .expect("budget covers the initial nests")
            })
            .collect();
        let trace = vec![TraceRecord {
            iteration: 0,
            evaluations: evaluator.evaluations(),
            best_value: evaluator.best().expect("nests are non-empty").value,
            mode: Mode::Init,
            truncated: false,
        }];
        Ok(Self {
            config,
            objective,
            evaluator,
            rng,
            nests,
            generation: 0,
            trace,
        })
    }

    pub fn nests(&self) -> &[Candidate] {
        &self.nests
    }

    /// Uniform random permutation of `0..n`, Fisher-Yates on the run RNG.
    fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.rng.random_range(0..=i);
            perm.swap(i, j);
        }
        perm
    }

    pub fn finished(&self) -> bool {
        self.evaluator.exhausted() || self.evaluator.target_reached()
    }

    /// Advances one generation; does nothing on a finished run.
    pub fn step(&mut self) {
        if self.finished() {
            return;
        }
        self.generation += 1;
        let n = self.config.nests;
        let bounds = self.objective.bounds();
        let mut truncated = false;

        // One cuckoo per nest, competing against a random nest. The flight
        // displacement is scale * step * (nest - best), entrywise.
        for i in 0..n {
            if self.finished() {
                break;
            }
            let best_position = self.evaluator.best().expect("initialized").position.clone();
            let nest = &self.nests[i].position;
            let step = levy::sample_step(&self.config.levy, bounds.dim(), &mut self.rng);
            let displacement: Vec<f64> = nest
                .iter()
                .zip(&best_position)
                .zip(&step)
                .map(|((&x, &b), &s)| self.config.levy.step_scale() * s * (x - b))
                .collect();
            let mv = levy::apply_displacement(nest, &displacement, bounds)
                .expect("nest positions match the bounds dimension");
            truncated |= mv.truncated;
            match self.evaluator.evaluate(mv.position) {
                Ok(cuckoo) => {
                    if cuckoo.value < self.nests[i].value {
                        self.nests[i] = cuckoo;
                    }
                }
                Err(_) => break,
            }
        }

        // Abandonment: each nest coordinate is discovered with probability
        // p_a and walked along a scaled difference of two random nests; the
        // walked nest replaces the original only when better. Unchanged
        // nests are not re-evaluated.
        if !self.finished() && self.config.abandon_fraction > 0.0 {
            let scale: f64 = self.rng.random::<f64>();
            let perm_a = self.permutation(n);
            let perm_b = self.permutation(n);
            for j in 0..n {
                if self.finished() {
                    break;
                }
                let displacement: Vec<f64> = (0..bounds.dim())
                    .map(|i| {
                        if self.rng.random::<f64>() < self.config.abandon_fraction {
                            scale
                                * (self.nests[perm_a[j]].position[i]
                                    - self.nests[perm_b[j]].position[i])
                        } else {
                            0.0
                        }
                    })
                    .collect();
                if displacement.iter().all(|&d| d == 0.0) {
                    continue;
                }
                let mv = levy::apply_displacement(&self.nests[j].position, &displacement, bounds)
                    .expect("nest positions match the bounds dimension");
                truncated |= mv.truncated;
                match self.evaluator.evaluate(mv.position) {
                    Ok(walked) => {
                        if walked.value < self.nests[j].value {
                            self.nests[j] = walked;
                        }
                    }
                    Err(_) => break,
                }
            }
        }

        self.trace.push(TraceRecord {
            iteration: self.generation,
            evaluations: self.evaluator.evaluations(),
            best_value: self.evaluator.best().expect("initialized").value,
            mode: Mode::Diversify,
            truncated,
        });
    }

    /// Runs to termination and reports the outcome in the shared format.
    pub fn run(mut self) -> RunResult {
        while !self.finished() {
            self.step();
        }
        let success = self.evaluator.target_reached();
        let evaluations_used = self
            .evaluator
            .evaluations_to_target()
            .unwrap_or_else(|| self.evaluator.evaluations());
        RunResult {
            best: self.evaluator.best().expect("initialized").clone(),
            evaluations_used,
            success,
            mode_switch_iteration: None,
            trace: self.trace,
        }
    }
}

/// Runs cuckoo search to termination.
pub fn run(config: &CuckooConfig, objective: &Objective) -> Result<RunResult, ConfigError> {
    Ok(CuckooRun::new(config, objective)?.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchfns::registry;
    use crate::core::Bounds;

    fn sphere(dim: usize) -> Objective {
        Objective::new(
            "sphere",
            Bounds::symmetric(dim, 5.12).unwrap(),
            |x| x.iter().map(|v| v * v).sum(),
        )
        .with_known_optimum(0.0)
    }

    #[test]
    fn config_validation_matches_hoopoe_rules() {
        let obj = sphere(2);
        let mut c = CuckooConfig::recommended(&obj, 1000, 0.0, 1e-6, 0);
        assert!(c.validate().is_ok());
        c.abandon_fraction = 1.5;
        assert!(matches!(
            c.validate(),
            Err(ConfigError::AbandonFractionOutOfRange(_))
        ));
        c.abandon_fraction = 0.25;
        c.nests = 0;
        assert_eq!(c.validate(), Err(ConfigError::EmptyPopulation));
        c.nests = 2000;
        assert!(matches!(
            c.validate(),
            Err(ConfigError::BudgetBelowPopulation { .. })
        ));
    }

    #[test]
    fn slots_are_monotone_under_greedy_acceptance() {
        let obj = sphere(3);
        for p_a in [0.0, 0.25, 1.0] {
            let mut c = CuckooConfig::recommended(&obj, 5_000, 0.0, 1e-6, 21);
            c.abandon_fraction = p_a;
            c.target_tolerance = 1e-30;
            let mut run = CuckooRun::new(&c, &obj).unwrap();
            let mut last: Vec<f64> = run.nests().iter().map(|n| n.value).collect();
            while !run.finished() {
                run.step();
                let now: Vec<f64> = run.nests().iter().map(|n| n.value).collect();
                for (slot, (&before, &after)) in last.iter().zip(&now).enumerate() {
                    assert!(after <= before, "slot {slot} worsened at p_a {p_a}");
                }
                last = now;
            }
        }
    }

    #[test]
    fn generation_accounting_is_flights_plus_walked_nests() {
        let obj = sphere(2);

        // No abandonment: exactly one flight per nest per generation.
        let mut c = CuckooConfig::recommended(&obj, 100_000, 0.0, 1e-6, 22);
        c.target_tolerance = 1e-30;
        c.nests = 10;
        c.abandon_fraction = 0.0;
        let mut run = CuckooRun::new(&c, &obj).unwrap();
        for generation in 1..=20u64 {
            run.step();
            assert_eq!(
                run.trace.last().unwrap().evaluations,
                10 + generation * 10
            );
        }

        // With abandonment each generation adds at most one walk per nest.
        c.abandon_fraction = 0.25;
        let mut run = CuckooRun::new(&c, &obj).unwrap();
        let mut previous = 10;
        for _ in 1..=20u64 {
            run.step();
            let now = run.trace.last().unwrap().evaluations;
            let consumed = now - previous;
            assert!((10..=20).contains(&consumed), "generation used {consumed}");
            previous = now;
        }
    }

    #[test]
    fn identical_seeds_replay_bit_identically() {
        let spec = registry("ackley", Some(3)).unwrap();
        let c = CuckooConfig::recommended(&spec.objective, 4_000, 0.0, 1e-3, 77);
        let a = run(&c, &spec.objective).unwrap();
        let b = run(&c, &spec.objective).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn global_best_never_worsens() {
        let spec = registry("rastrigin", Some(3)).unwrap();
        for seed in 0..10 {
            let mut c = CuckooConfig::recommended(&spec.objective, 3_000, 0.0, 1e-6, seed);
            c.target_tolerance = 1e-30;
            let result = run(&c, &spec.objective).unwrap();
            let mut running = f64::INFINITY;
            for record in &result.trace {
                assert!(record.best_value <= running);
                running = record.best_value;
            }
        }
    }

    #[test]
    fn budget_is_hard_capped() {
        let obj = sphere(4);
        let mut c = CuckooConfig::recommended(&obj, 500, 0.0, 1e-6, 3);
        c.target_tolerance = 1e-30;
        let result = run(&c, &obj).unwrap();
        assert_eq!(result.evaluations_used, 500);
        assert_eq!(result.trace.last().unwrap().evaluations, 500);
        assert!(!result.success);
    }
}
