//! The Hoopoe Heuristic engine: random start, Lévy-flight diversification
//! while the explored fraction of the region archive is at or below the
//! intensification threshold, ground-probing intensification afterwards,
//! best-so-far tracking, and budget/target termination.
//!
//! A region is one archive member plus the fixed probe radius. Each step
//! first closes the current region (set semantics: closing an already closed
//! slot changes nothing), then either takes a Lévy move (diversify) or
//! probes the region and possibly digs (intensify). The new point replaces
//! the worst archive member and becomes the current region center. Because
//! the closed count never decreases, a run has exactly one diversification
//! phase followed by one intensification phase.

use rand::Rng;

use crate::core::{
    seeded_rng, uniform_point, Candidate, ConfigError, Evaluator, Mode, Objective, RunResult,
    RunRng, TraceRecord,
};
use crate::levy::{self, LevyParams};
use crate::probing::{self, ProbeParams, UniformBall};

/// Default region-archive size.
pub const DEFAULT_POPULATION_SIZE: usize = 25;

/// Default intensification threshold on the closed fraction.
pub const DEFAULT_INTENSIFY_THRESHOLD: f64 = 0.2;

/// All tunables of one hoopoe run.
#[derive(Debug, Clone, PartialEq)]
pub struct HoopoeConfig {
    pub population_size: usize,
    /// Threshold theta on the closed fraction; the run intensifies once
    /// `closed / population > theta` (strictly).
    pub intensify_threshold: f64,
    pub levy: LevyParams,
    pub probe: ProbeParams,
    pub max_evaluations: u64,
    pub target_value: f64,
    pub target_tolerance: f64,
    pub seed: u64,
}

impl HoopoeConfig {
    /// The tuned defaults, scaled to the objective's domain.
    pub fn recommended(
        objective: &Objective,
        max_evaluations: u64,
        target_value: f64,
        target_tolerance: f64,
        seed: u64,
    ) -> Self {
        let bounds = objective.bounds();
        Self {
            population_size: DEFAULT_POPULATION_SIZE,
            intensify_threshold: DEFAULT_INTENSIFY_THRESHOLD,
            levy: LevyParams::scaled_to(bounds),
            probe: ProbeParams::scaled_to(bounds),
            max_evaluations,
            target_value,
            target_tolerance,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.population_size == 0 {
            return Err(ConfigError::EmptyPopulation);
        }
        if !(0.0..=1.0).contains(&self.intensify_threshold) {
            return Err(ConfigError::ThresholdOutOfRange(self.intensify_threshold));
        }
        if self.max_evaluations < self.population_size as u64 {
            return Err(ConfigError::BudgetBelowPopulation {
                budget: self.max_evaluations,
                population: self.population_size,
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

/// Index of the archive member anchoring the current region, plus the probe
/// radius attached to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionHandle {
    pub index: usize,
    pub radius: f64,
}

/// Live state of one hoopoe run.
#[derive(Debug, Clone, PartialEq)]
pub struct HoopoeState {
    /// The fixed-size archive; new points replace the worst member.
    pub population: Vec<Candidate>,
    /// Sticky per-slot closure marks; replacement does not reopen a slot.
    pub closed: Vec<bool>,
    pub closed_count: usize,
    pub current: RegionHandle,
    pub best: Candidate,
    pub evaluations: u64,
    pub iteration: u64,
    /// First iteration at which intensification fired.
    pub mode_switch_iteration: Option<u64>,
    pub trace: Vec<TraceRecord>,
}

impl HoopoeState {
    pub fn best_value(&self) -> f64 {
        self.best.value
    }
}

/// True iff the closed fraction strictly exceeds the threshold.
pub fn should_intensify(closed_count: usize, population_size: usize, threshold: f64) -> bool {
    closed_count as f64 / population_size as f64 > threshold
}

/// One hoopoe run in progress. Create with [`HoopoeRun::new`], then either
/// drive it step by step or let [`HoopoeRun::run`] finish it.
pub struct HoopoeRun<'a> {
    config: &'a HoopoeConfig,
    evaluator: Evaluator<'a>,
    rng: RunRng,
    state: HoopoeState,
}

impl<'a> HoopoeRun<'a> {
    /// Draws and evaluates the initial archive, picks a random member as the
    /// current region, and records the init trace entry.
    pub fn new(config: &'a HoopoeConfig, objective: &'a Objective) -> Result<Self, ConfigError> {
        config.validate()?;
        let mut rng = seeded_rng(config.seed);
        let mut evaluator =
            Evaluator::with_target(objective, config.max_evaluations, config.target());
        let population: Vec<Candidate> = (0..config.population_size)
            .map(|_| {
                let point = uniform_point(objective.bounds(), &mut rng);
                evaluator
                    .evaluate(point)
                    .expect("budget covers the initial population")
            })
            .collect();
        let current = RegionHandle {
            index: rng.random_range(0..config.population_size),
            radius: config.probe.radius,
        };
        let best = evaluator.best().expect("population is non-empty").clone();
        let trace = vec![TraceRecord {
            iteration: 0,
            evaluations: evaluator.evaluations(),
            best_value: best.value,
            mode: Mode::Init,
            truncated: false,
        }];
        let state = HoopoeState {
            closed: vec![false; config.population_size],
            closed_count: 0,
            current,
            evaluations: evaluator.evaluations(),
            iteration: 0,
            mode_switch_iteration: None,
            best,
            population,
            trace,
        };
        Ok(Self {
            config,
            evaluator,
            rng,
            state,
        })
    }

    pub fn state(&self) -> &HoopoeState {
        &self.state
    }

    /// The run is over once the budget is spent or the target is reached.
    pub fn finished(&self) -> bool {
        self.evaluator.exhausted() || self.evaluator.target_reached()
    }

    /// Advances one iteration; does nothing on a finished run.
    pub fn step(&mut self) {
        self.step_inner(None);
    }

    /// [`HoopoeRun::step`] with an injected Lévy step vector, the
    /// deterministic test seam. The injection applies only if the step
    /// diversifies; an intensifying step ignores it.
    pub fn step_with_levy_step(&mut self, step: &[f64]) {
        self.step_inner(Some(step));
    }

    fn step_inner(&mut self, injected_step: Option<&[f64]>) {
        if self.finished() {
            return;
        }
        let state = &mut self.state;
        state.iteration += 1;

        // closed <- closed U current
        let slot = state.current.index;
        if !state.closed[slot] {
            state.closed[slot] = true;
            state.closed_count += 1;
        }

        let mode;
        let mut truncated = false;
        if should_intensify(
            state.closed_count,
            self.config.population_size,
            self.config.intensify_threshold,
        ) {
            if state.mode_switch_iteration.is_none() {
                state.mode_switch_iteration = Some(state.iteration);
            }
            let center = state.population[slot].clone();
            match probing::probe_region(
                &center,
                &self.config.probe,
                &mut self.evaluator,
                &mut UniformBall,
                &mut self.rng,
            ) {
                Ok(report) => {
                    if probing::should_dig(&report, &self.config.probe) {
                        mode = Mode::Dig;
                        let dug = probing::dig(
                            &report.best_sample,
                            &self.config.probe,
                            &mut self.evaluator,
                            &mut UniformBall,
                            &mut self.rng,
                        );
                        Self::replace_worst(state, dug);
                    } else if report.best_sample.value < center.value {
                        // Consume the probes' information even without a
                        // dig: an improving sample becomes the new center.
                        mode = Mode::Probe;
                        Self::replace_worst(state, report.best_sample);
                    } else {
                        // The region is exhausted (nothing improved).
                        // Adopting a worse sample just homes back into the
                        // same attractor, so relocate to another archive
                        // region instead: the best unclosed slot, or a
                        // random one once everything is closed.
                        mode = Mode::Probe;
                        state.current.index = Self::relocation_slot(state, &mut self.rng);
                    }
                }
                Err(_) => {
                    // Budget died mid-probe; the evaluator already counted
                    // what it managed, so only the bookkeeping remains.
                    mode = Mode::Probe;
                }
            }
        } else {
            mode = Mode::Diversify;
            let current_position = &state.population[slot].position;
            let bounds = self.evaluator.bounds();
            let mv = match injected_step {
                Some(step) => {
                    levy::levy_move_with_step(current_position, &self.config.levy, bounds, step)
                }
                None => levy::levy_move(current_position, &self.config.levy, bounds, &mut self.rng),
            }
            .expect("archive positions match the bounds dimension");
            truncated = mv.truncated;
            if let Ok(candidate) = self.evaluator.evaluate(mv.position) {
                Self::replace_worst(state, candidate);
            }
        }

        state.evaluations = self.evaluator.evaluations();
        state.best = self.evaluator.best().expect("initialized").clone();
        state.trace.push(TraceRecord {
            iteration: state.iteration,
            evaluations: state.evaluations,
            best_value: state.best.value,
            mode,
            truncated,
        });
    }

    /// Where to continue after an exhausted region: the best unclosed
    /// archive slot, or a uniformly random slot once all are closed.
    fn relocation_slot(state: &HoopoeState, rng: &mut RunRng) -> usize {
        state
            .population
            .iter()
            .enumerate()
            .filter(|(i, _)| !state.closed[*i])
            .min_by(|(_, a), (_, b)| a.value.total_cmp(&b.value))
            .map(|(i, _)| i)
            .unwrap_or_else(|| rng.random_range(0..state.population.len()))
    }

    /// Replaces the worst archive member with `candidate` and makes that
    /// slot the current region center.
    fn replace_worst(state: &mut HoopoeState, candidate: Candidate) {
        let worst = state
            .population
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.value.total_cmp(&b.value))
            .map(|(i, _)| i)
            .expect("population is non-empty");
        state.population[worst] = candidate;
        state.current.index = worst;
    }

    /// Runs to termination and reports the outcome.
    pub fn run(mut self) -> RunResult {
        while !self.finished() {
            self.step();
        }
        self.into_result()
    }

    fn into_result(self) -> RunResult {
        let success = self.evaluator.target_reached();
        let evaluations_used = self
            .evaluator
            .evaluations_to_target()
            .unwrap_or_else(|| self.evaluator.evaluations());
        RunResult {
            best: self.evaluator.best().expect("initialized").clone(),
            evaluations_used,
            success,
            mode_switch_iteration: self.state.mode_switch_iteration,
            trace: self.state.trace,
        }
    }
}

/// Runs the Hoopoe Heuristic to termination.
pub fn run(config: &HoopoeConfig, objective: &Objective) -> Result<RunResult, ConfigError> {
    Ok(HoopoeRun::new(config, objective)?.run())
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

    fn config(objective: &Objective, budget: u64, seed: u64) -> HoopoeConfig {
        HoopoeConfig::recommended(objective, budget, 0.0, 1e-6, seed)
    }

    #[test]
    fn config_validation_catches_bad_settings() {
        let obj = sphere(2);
        let mut c = config(&obj, 1000, 0);
        c.population_size = 0;
        assert_eq!(c.validate(), Err(ConfigError::EmptyPopulation));

        let mut c = config(&obj, 10, 0);
        c.population_size = 25;
        assert!(matches!(
            c.validate(),
            Err(ConfigError::BudgetBelowPopulation { .. })
        ));

        let mut c = config(&obj, 1000, 0);
        c.intensify_threshold = 1.5;
        assert!(matches!(c.validate(), Err(ConfigError::ThresholdOutOfRange(_))));

        let mut c = config(&obj, 1000, 0);
        c.target_tolerance = 0.0;
        assert!(matches!(c.validate(), Err(ConfigError::InvalidTolerance(_))));
    }

    #[test]
    fn initialize_evaluates_the_whole_archive() {
        let obj = sphere(3);
        let mut c = config(&obj, 10_000, 7);
        c.population_size = 25;
        let run = HoopoeRun::new(&c, &obj).unwrap();
        let state = run.state();
        assert_eq!(state.evaluations, 25);
        assert_eq!(state.population.len(), 25);
        assert_eq!(state.closed_count, 0);
        let archive_min = state
            .population
            .iter()
            .map(|c| c.value)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(state.best.value, archive_min);

        let again = HoopoeRun::new(&c, &obj).unwrap();
        assert_eq!(state.population, again.state().population);
        assert_eq!(state.current, again.state().current);
    }

    #[test]
    fn should_intensify_is_a_strict_ratio_test() {
        assert!(!should_intensify(5, 10, 0.5));
        assert!(should_intensify(6, 10, 0.5));
        assert!(!should_intensify(10, 10, 1.0));
        assert!(!should_intensify(0, 10, 0.0));
        assert!(should_intensify(1, 10, 0.0));
    }

    #[test]
    fn theta_zero_intensifies_from_the_first_closure() {
        let obj = sphere(2);
        let mut c = config(&obj, 2_000, 3);
        c.intensify_threshold = 0.0;
        c.target_tolerance = 1e-30; // keep it running
        let mut run = HoopoeRun::new(&c, &obj).unwrap();
        for _ in 0..20 {
            run.step();
        }
        let diversify_steps = run
            .state()
            .trace
            .iter()
            .filter(|r| r.mode == Mode::Diversify)
            .count();
        assert_eq!(diversify_steps, 0);
        assert_eq!(run.state().mode_switch_iteration, Some(1));
    }

    #[test]
    fn theta_one_never_intensifies() {
        let obj = sphere(2);
        let mut c = config(&obj, 500, 3);
        c.intensify_threshold = 1.0;
        c.target_tolerance = 1e-30;
        let result = HoopoeRun::new(&c, &obj).unwrap().run();
        assert!(result
            .trace
            .iter()
            .all(|r| matches!(r.mode, Mode::Init | Mode::Diversify)));
        assert_eq!(result.mode_switch_iteration, None);
    }

    #[test]
    fn injected_zero_step_keeps_the_center_in_place() {
        let obj = sphere(2);
        let mut c = config(&obj, 10_000, 11);
        c.intensify_threshold = 1.0; // stay in diversification
        c.target_tolerance = 1e-30;
        let mut run = HoopoeRun::new(&c, &obj).unwrap();
        let before_evals = run.state().evaluations;
        let center_before = run.state().population[run.state().current.index]
            .position
            .clone();
        run.step_with_levy_step(&[0.0, 0.0]);
        let state = run.state();
        assert_eq!(state.evaluations, before_evals + 1);
        let center_after = &state.population[state.current.index].position;
        assert_eq!(center_after, &center_before);
        assert_eq!(state.trace.last().unwrap().mode, Mode::Diversify);
    }

    #[test]
    fn budget_equal_to_population_terminates_after_init() {
        let obj = sphere(2);
        let mut c = config(&obj, 25, 5);
        c.population_size = 25;
        c.target_tolerance = 1e-30;
        let result = run(&c, &obj).unwrap();
        assert_eq!(result.trace.len(), 1);
        assert_eq!(result.evaluations_used, 25);
        assert!(!result.success);
    }

    #[test]
    fn identical_seeds_replay_bit_identically() {
        let spec = registry("rastrigin", Some(4)).unwrap();
        let c = HoopoeConfig::recommended(&spec.objective, 3_000, 0.0, 1e-3, 99);
        let a = run(&c, &spec.objective).unwrap();
        let b = run(&c, &spec.objective).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn best_value_is_the_running_minimum_of_the_trace() {
        let spec = registry("rastrigin", Some(3)).unwrap();
        for seed in 0..20 {
            let mut c = HoopoeConfig::recommended(&spec.objective, 2_000, 0.0, 1e-6, seed);
            c.target_tolerance = 1e-30;
            let result = run(&c, &spec.objective).unwrap();
            let mut running = f64::INFINITY;
            for record in &result.trace {
                running = running.min(record.best_value);
                assert_eq!(record.best_value, running, "best regressed in trace");
            }
            assert_eq!(result.best.value, running);
        }
    }

    #[test]
    fn trace_modes_are_sorted_diversify_before_intensify() {
        let spec = registry("dejong", Some(4)).unwrap();
        for seed in 0..20 {
            let mut c = HoopoeConfig::recommended(&spec.objective, 5_000, 0.0, 1e-6, seed);
            c.target_tolerance = 1e-30;
            let result = run(&c, &spec.objective).unwrap();
            let mut seen_intensify = false;
            for record in &result.trace {
                match record.mode {
                    Mode::Init => {}
                    Mode::Diversify => {
                        assert!(!seen_intensify, "diversify after intensify at seed {seed}")
                    }
                    Mode::Probe | Mode::Dig => seen_intensify = true,
                }
            }
        }
    }

    #[test]
    fn closed_count_is_monotone_and_bounded() {
        let obj = sphere(3);
        let mut c = config(&obj, 2_000, 13);
        c.target_tolerance = 1e-30;
        let mut run = HoopoeRun::new(&c, &obj).unwrap();
        let mut last = run.state().closed_count;
        while !run.finished() {
            run.step();
            let now = run.state().closed_count;
            assert!(now >= last);
            assert!(now <= c.population_size);
            last = now;
        }
    }

    #[test]
    fn evaluations_never_exceed_the_budget() {
        let spec = registry("ackley", Some(4)).unwrap();
        for seed in 0..10 {
            let mut c = HoopoeConfig::recommended(&spec.objective, 700, 0.0, 1e-6, seed);
            c.target_tolerance = 1e-30;
            let result = run(&c, &spec.objective).unwrap();
            assert!(result.evaluations_used <= 700);
            assert!(result.trace.last().unwrap().evaluations <= 700);
        }
    }

    #[test]
    fn early_stop_reports_evaluations_to_target() {
        let obj = sphere(2);
        let mut c = config(&obj, 100_000, 17);
        c.target_tolerance = 1e-3;
        let result = run(&c, &obj).unwrap();
        assert!(result.success);
        assert!(result.evaluations_used < c.max_evaluations);
        assert!(result.best.value <= 1e-3);
    }
}
