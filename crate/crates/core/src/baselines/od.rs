use std::time::Instant;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Coverage, SimulationTrace, Simulator};
use crate::signal::{sample_test_case, InputSpec, TestCase};
use crate::TestSuite;

pub const SIGMA_MAX: f64 = 0.5;
pub const SIGMA_MIN: f64 = 0.01;
/// Iterations without new coverage before the piece count grows.
pub const PLATEAU_WINDOW: usize = 3;

/// How elapsed time is measured against the timeout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OdClock {
    Wall,
    /// Every simulation advances the clock by this many seconds.
    PerSimulation(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdConfig {
    pub k: usize,
    pub timeout_secs: f64,
    pub clock: OdClock,
    pub max_iterations: Option<usize>,
}

impl Default for OdConfig {
    fn default() -> Self {
        Self {
            k: 4,
            timeout_secs: 600.0,
            clock: OdClock::Wall,
            max_iterations: None,
        }
    }
}

/// Search state carried between iterations.
#[derive(Debug, Clone)]
pub struct OdState {
    pub pieces: usize,
    pub sigma: f64,
    pub best_suite: TestSuite,
    pub best_objective: f64,
    pub coverage: Coverage,
    pub elapsed_secs: f64,
    stale: usize,
}

impl OdState {
    pub fn new(universe: usize) -> Self {
        Self {
            pieces: 1,
            sigma: SIGMA_MAX,
            best_suite: Vec::new(),
            best_objective: f64::NEG_INFINITY,
            coverage: Coverage::empty(universe),
            elapsed_secs: 0.0,
            stale: 0,
        }
    }

    /// Folds one evaluated candidate suite into the state.
    ///
    /// New coverage resets the plateau counter and moves sigma toward its
    /// floor in proportion to the covered fraction; after
    /// [`PLATEAU_WINDOW`] iterations without new coverage below full
    /// coverage the piece count grows by one, up to `max_pieces`.
    pub fn observe(
        &mut self,
        suite: TestSuite,
        objective: f64,
        coverage: &Coverage,
        max_pieces: usize,
    ) {
        if objective > self.best_objective || self.best_suite.is_empty() {
            self.best_objective = self.best_objective.max(objective);
            self.best_suite = suite;
        }
        let gained = self.coverage.merge(coverage);
        if gained > 0 {
            self.stale = 0;
            let frac = self.coverage.fraction();
            self.sigma = (SIGMA_MAX - (SIGMA_MAX - SIGMA_MIN) * frac).clamp(SIGMA_MIN, SIGMA_MAX);
        } else {
            self.stale += 1;
            if self.stale >= PLATEAU_WINDOW && self.coverage.fraction() < 1.0 {
                if self.pieces < max_pieces {
                    self.pieces += 1;
                }
                self.stale = 0;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct OdOutcome {
    pub suite: TestSuite,
    pub best_objective: f64,
    pub iterations: usize,
    pub simulations: usize,
    /// `(pieces, sigma, best_objective)` after every iteration, initial suite included.
    pub trace: Vec<(usize, f64, f64)>,
    pub coverage: Coverage,
}

/// Groups each input's control points into `pieces` consecutive runs and
/// gives every point its run's first value.
pub fn apply_pieces(test: &mut TestCase, pieces: usize) {
    let pieces = pieces.max(1);
    for input in &mut test.inputs {
        let c = input.points.len();
        if pieces >= c {
            continue;
        }
        let mut head = input.points[0];
        let mut current = 0;
        for i in 0..c {
            let piece = i * pieces / c;
            if piece != current || i == 0 {
                current = piece;
                head = input.points[i];
            }
            input.points[i] = head;
        }
    }
}

/// Mean pairwise Euclidean distance between the suite's output signals,
/// each output min-max normalized across the whole suite and concatenated.
pub fn output_diversity(traces: &[SimulationTrace]) -> f64 {
    if traces.len() < 2 {
        return 0.0;
    }
    let outputs = traces[0].outputs.len();
    let mut vectors: Vec<Vec<f64>> = vec![Vec::new(); traces.len()];
    for o in 0..outputs {
        let (lo, hi) = traces
            .iter()
            .flat_map(|t| t.outputs[o].values().iter().copied())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
        let width = hi - lo;
        for (v, t) in vectors.iter_mut().zip(traces) {
            v.extend(t.outputs[o].values().iter().map(|x| {
                if width > 0.0 {
                    (x - lo) / width
                } else {
                    0.0
                }
            }));
        }
    }
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            total += vectors[i]
                .iter()
                .zip(&vectors[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            pairs += 1;
        }
    }
    total / pairs as f64
}

fn tweak<R: Rng + ?Sized>(
    test: &TestCase,
    specs: &[InputSpec],
    sigma: f64,
    rng: &mut R,
) -> TestCase {
    let mut out = test.clone();
    for (input, spec) in out.inputs.iter_mut().zip(specs) {
        let width = spec.range.width();
        if width <= 0.0 {
            continue;
        }
        let noise = Normal::new(0.0, sigma * width).expect("positive finite std");
        for p in &mut input.points {
            *p = spec.range.clamp(*p + noise.sample(rng));
        }
    }
    out
}

fn evaluate<S: Simulator + ?Sized>(sim: &S, suite: &[TestCase]) -> Result<(f64, Coverage)> {
    let traces = suite
        .par_iter()
        .map(|t| sim.run(t))
        .collect::<Result<Vec<_>>>()?;
    let mut cov = Coverage::empty(sim.branch_count());
    for t in &traces {
        cov.merge(&t.coverage);
    }
    Ok((output_diversity(&traces), cov))
}

/// Output-diversity search: perturbs the best suite found so far, keeps
/// candidates that spread the output signals further apart and trades
/// exploration for exploitation as coverage grows.
pub fn od_suite<S, R>(sim: &S, config: &OdConfig, rng: &mut R) -> Result<OdOutcome>
where
    S: Simulator + ?Sized,
    R: Rng + ?Sized,
{
    if config.k == 0 {
        return Err(Error::Config("suite size must be at least 1".into()));
    }
    if !(config.timeout_secs >= 0.0) {
        return Err(Error::Config("timeout must be non-negative".into()));
    }
    let specs = sim.specs();
    if !specs.iter().any(InputSpec::is_time_varying) {
        return Err(Error::Capability(
            "output diversity search needs at least one time-varying input".into(),
        ));
    }
    let max_pieces = specs.iter().map(|s| s.control_points).max().unwrap_or(1);
    let start = Instant::now();
    let base_calls = sim.invocations();
    let elapsed = |sims: usize| match config.clock {
        OdClock::Wall => start.elapsed().as_secs_f64(),
        OdClock::PerSimulation(secs) => sims as f64 * secs,
    };

    let mut state = OdState::new(sim.branch_count());
    let mut suite = (0..config.k)
        .map(|_| sample_test_case(specs, rng))
        .collect::<Result<TestSuite>>()?;
    for t in &mut suite {
        apply_pieces(t, state.pieces);
    }
    let (objective, cov) = evaluate(sim, &suite)?;
    state.observe(suite, objective, &cov, max_pieces);
    state.elapsed_secs = elapsed(sim.invocations() - base_calls);
    let mut trace = vec![(state.pieces, state.sigma, state.best_objective)];

    let mut iterations = 0;
    while state.elapsed_secs < config.timeout_secs
        && config.max_iterations.is_none_or(|m| iterations < m)
    {
        let candidate: TestSuite = state
            .best_suite
            .iter()
            .map(|t| {
                let mut next = tweak(t, specs, state.sigma, rng);
                apply_pieces(&mut next, state.pieces);
                next
            })
            .collect();
        let (objective, cov) = evaluate(sim, &candidate)?;
        state.observe(candidate, objective, &cov, max_pieces);
        state.elapsed_secs = elapsed(sim.invocations() - base_calls);
        iterations += 1;
        trace.push((state.pieces, state.sigma, state.best_objective));
    }
    log::debug!(
        "od: {iterations} iterations, P={}, sigma={:.3}, O={:.4}",
        state.pieces,
        state.sigma,
        state.best_objective
    );
    Ok(OdOutcome {
        suite: state.best_suite,
        best_objective: state.best_objective,
        iterations,
        simulations: sim.invocations() - base_calls,
        trace,
        coverage: state.coverage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{InputPoints, Signal};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::atomic::{AtomicUsize, Ordering};

    fn case(points: Vec<f64>) -> TestCase {
        TestCase {
            inputs: vec![InputPoints {
                name: "u".into(),
                points,
            }],
        }
    }

    #[test]
    fn pieces_hold_the_first_value_of_each_run() {
        let mut t = case(vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        apply_pieces(&mut t, 1);
        assert_eq!(t.points(0), &[1.0; 5]);
        let mut t = case(vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        apply_pieces(&mut t, 2);
        assert_eq!(t.points(0), &[1.0, 1.0, 1.0, 4.0, 4.0]);
        let mut t = case(vec![1.0, 2.0, 3.0]);
        apply_pieces(&mut t, 7);
        assert_eq!(t.points(0), &[1.0, 2.0, 3.0]);
    }

    fn trace(values: Vec<f64>) -> SimulationTrace {
        SimulationTrace {
            outputs: vec![Signal::from_samples(values, 1.0).unwrap()],
            coverage: Coverage::empty(0),
            fault: None,
        }
    }

    #[test]
    fn diversity_of_normalized_outputs() {
        assert_eq!(output_diversity(&[trace(vec![0.0, 1.0])]), 0.0);
        // Normalized to [0,0], [1,1], [0.5,0.5]: distances sqrt2, sqrt2/2, sqrt2/2.
        let d = output_diversity(&[
            trace(vec![0.0, 0.0]),
            trace(vec![10.0, 10.0]),
            trace(vec![5.0, 5.0]),
        ]);
        assert!((d - 2.0f64.sqrt() * 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(
            output_diversity(&[trace(vec![3.0; 2]), trace(vec![3.0; 2])]),
            0.0
        );
    }

    #[test]
    fn tweak_stays_in_range() {
        let specs = vec![InputSpec::numeric("u", -1.0, 2.0, 6)];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut t = case(vec![2.0, -1.0, 0.0, 1.9, -0.9, 0.5]);
        for _ in 0..200 {
            t = tweak(&t, &specs, SIGMA_MAX, &mut rng);
            assert!(t.points(0).iter().all(|p| (-1.0..=2.0).contains(p)));
        }
    }

    /// Replays a scripted coverage bit per call and returns a constant output.
    struct Scripted {
        specs: Vec<InputSpec>,
        script: Vec<Vec<usize>>,
        calls: AtomicUsize,
    }

    impl Simulator for Scripted {
        fn specs(&self) -> &[InputSpec] {
            &self.specs
        }
        fn branch_count(&self) -> usize {
            4
        }
        fn run(&self, test: &TestCase) -> Result<SimulationTrace> {
            let n = self.calls.fetch_add(1, Ordering::SeqCst);
            let mut cov = Coverage::empty(4);
            for &b in self.script.get(n).map_or(&[][..], Vec::as_slice) {
                cov.mark(b);
            }
            Ok(SimulationTrace {
                outputs: vec![Signal::from_samples(test.points(0).to_vec(), 1.0)?],
                coverage: cov,
                fault: None,
            })
        }
        fn invocations(&self) -> usize {
            self.calls.load(Ordering::SeqCst)
        }
    }

    #[test]
    fn plateau_grows_pieces_and_coverage_decays_sigma() {
        // k = 1: one call per iteration. Call 0 covers branch 0, calls 1..=3
        // add nothing (plateau), call 4 covers branch 1.
        let script = vec![
            vec![0],
            vec![],
            vec![],
            vec![],
            vec![1],
            vec![],
            vec![],
            vec![],
        ];
        let sim = Scripted {
            specs: vec![InputSpec::numeric("u", 0.0, 1.0, 4)],
            script,
            calls: AtomicUsize::new(0),
        };
        let config = OdConfig {
            k: 1,
            timeout_secs: 1e9,
            clock: OdClock::PerSimulation(1.0),
            max_iterations: Some(7),
        };
        let out = od_suite(&sim, &config, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let pieces: Vec<usize> = out.trace.iter().map(|s| s.0).collect();
        assert_eq!(pieces, vec![1, 1, 1, 2, 2, 2, 2, 3]);
        let sigmas: Vec<f64> = out.trace.iter().map(|s| s.1).collect();
        assert!((sigmas[0] - (0.5 - 0.49 * 0.25)).abs() < 1e-12);
        assert!((sigmas[4] - (0.5 - 0.49 * 0.5)).abs() < 1e-12);
        assert!(sigmas.iter().all(|s| (SIGMA_MIN..=SIGMA_MAX).contains(s)));
        assert_eq!(out.simulations, 8);
        assert_eq!(sim.invocations(), 8);
    }

    #[test]
    fn full_coverage_never_grows_pieces() {
        let script = vec![vec![0, 1, 2, 3]; 10];
        let sim = Scripted {
            specs: vec![InputSpec::numeric("u", 0.0, 1.0, 4)],
            script,
            calls: AtomicUsize::new(0),
        };
        let config = OdConfig {
            k: 1,
            timeout_secs: 1e9,
            clock: OdClock::PerSimulation(1.0),
            max_iterations: Some(9),
        };
        let out = od_suite(&sim, &config, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert!(out.trace.iter().all(|s| s.0 == 1));
        assert!(out.trace.iter().all(|s| (s.1 - SIGMA_MIN).abs() < 1e-12));
    }

    #[test]
    fn simulated_clock_stops_the_search() {
        let sim = Scripted {
            specs: vec![InputSpec::numeric("u", 0.0, 1.0, 4)],
            script: vec![],
            calls: AtomicUsize::new(0),
        };
        let config = OdConfig {
            k: 2,
            timeout_secs: 10.0,
            clock: OdClock::PerSimulation(1.0),
            max_iterations: None,
        };
        let out = od_suite(&sim, &config, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(out.simulations, 10);
        assert_eq!(out.iterations, 4);
        assert!(out.trace.windows(2).all(|w| w[1].2 >= w[0].2));
    }

    #[test]
    fn constant_inputs_are_rejected() {
        let sim = Scripted {
            specs: vec![InputSpec::constant("u", 0.0, 1.0)],
            script: vec![],
            calls: AtomicUsize::new(0),
        };
        let err = od_suite(
            &sim,
            &OdConfig::default(),
            &mut ChaCha8Rng::seed_from_u64(0),
        );
        assert!(matches!(err, Err(Error::Capability(_))));
    }
}
