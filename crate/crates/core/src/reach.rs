//! Interval reachability methods built on the parallel RK4 engine.
//!
//! * [`growth_bound`]: integrates the center of the initial box under `f` and
//!   its half-width under the growth dynamics `ṙ = g(t, r, w)`.
//! * [`mixed_monotonicity`]: integrates the `2n` embedding system once from
//!   `(lower, upper)`.
//! * [`monte_carlo`]: hull of `m` sampled trajectories, with `m` from the
//!   scenario bound [`sample_count`] unless overridden.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{IntervalVector, RunningHull};
use crate::rk4::{IntegrationJob, Rk4Engine, TimeGrid, ENGINE_VECTORS};
use crate::system::SystemModel;

/// Largest negative half-width treated as round-off and clamped to zero.
pub const RADIUS_CLAMP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    GrowthBound,
    MixedMonotonicity,
    MonteCarlo,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::GrowthBound, Method::MixedMonotonicity, Method::MonteCarlo];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::GrowthBound => "growth-bound",
            Method::MixedMonotonicity => "mixed-monotonicity",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                format!("unknown method '{s}' (expected growth-bound, mixed-monotonicity or monte-carlo)")
            })
    }
}

/// A reachability query: system, initial box, input box and time grid.
#[derive(Clone, Debug)]
pub struct ReachProblem {
    pub model: SystemModel,
    pub initial: IntervalVector,
    pub inputs: IntervalVector,
    pub t0: f64,
    pub t1: f64,
    pub h: f64,
    /// 0 keeps the final box only; `k > 0` also keeps `t0` and every `k`-th step.
    pub tube_stride: usize,
}

impl ReachProblem {
    pub fn new(
        model: SystemModel,
        initial: IntervalVector,
        inputs: IntervalVector,
        t0: f64,
        t1: f64,
        h: f64,
    ) -> Result<Self> {
        if initial.dim() != model.dim() {
            return Err(Error::InvalidProblem(format!(
                "initial box has dimension {} but model '{}' has dimension {}",
                initial.dim(),
                model.name(),
                model.dim()
            )));
        }
        if inputs.dim() != model.input_dim() {
            return Err(Error::InvalidProblem(format!(
                "input box has dimension {} but model '{}' has {} inputs",
                inputs.dim(),
                model.name(),
                model.input_dim()
            )));
        }
        TimeGrid::new(t0, t1, h)?;
        Ok(ReachProblem {
            model,
            initial,
            inputs,
            t0,
            t1,
            h,
            tube_stride: 0,
        })
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.tube_stride = stride;
        self
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::new(self.t0, self.t1, self.h)
    }
}

/// Parameters of the Monte Carlo method.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloSpec {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub samples_override: Option<usize>,
}

impl Default for MonteCarloSpec {
    fn default() -> Self {
        MonteCarloSpec {
            epsilon: 0.05,
            delta: 0.01,
            seed: 0,
            samples_override: None,
        }
    }
}

impl MonteCarloSpec {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Self {
        MonteCarloSpec {
            epsilon,
            delta,
            seed,
            samples_override: None,
        }
    }

    pub fn with_samples(mut self, m: usize) -> Self {
        self.samples_override = Some(m);
        self
    }

    /// Number of samples to draw for an `n`-dimensional system.
    pub fn samples_for(&self, n: usize) -> Result<usize> {
        let bound = sample_count(n, self.epsilon, self.delta)?;
        match self.samples_override {
            Some(0) => Err(Error::InvalidParameter("sample override must be positive".into())),
            Some(m) => Ok(m),
            None => Ok(bound),
        }
    }
}

/// Scenario bound `ceil((2n / ε) ln(2n / δ))`.
pub fn sample_count(n: usize, epsilon: f64, delta: f64) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} must lie in (0, 1)")));
    }
    let two_n = 2.0 * n as f64;
    Ok(((two_n / epsilon) * (two_n / delta).ln()).ceil() as usize)
}

/// Timings and sizes of one method run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub method: String,
    pub n: usize,
    pub samples: Option<usize>,
    pub workers: usize,
    pub steps: usize,
    pub setup_seconds: f64,
    pub integration_seconds: f64,
    pub reduction_seconds: f64,
    /// Analytic estimate of integrator state memory, 8 bytes per stored value.
    pub state_memory_bytes: u64,
}

impl RunReport {
    pub fn total_seconds(&self) -> f64 {
        self.setup_seconds + self.integration_seconds + self.reduction_seconds
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Analytic peak state memory of a method run in bytes.
///
/// Counts the integrator vectors alive at once: one `n`-dimensional job for
/// the growth bound (center and radius runs are sequential), one
/// `2n`-dimensional job for mixed monotonicity, and one job plus a running
/// min/max pair per concurrently simulated Monte Carlo sample.
pub fn state_memory_bytes(method: Method, n: usize, samples: usize, workers: usize) -> u64 {
    let n = n as u64;
    let engine = ENGINE_VECTORS as u64;
    let values = match method {
        Method::GrowthBound => engine * n,
        Method::MixedMonotonicity => engine * 2 * n,
        Method::MonteCarlo => {
            let concurrent = if samples >= workers { workers.max(1) } else { 1 } as u64;
            concurrent * (engine * n + 2 * n)
        }
    };
    values.saturating_mul(8)
}

/// Time-indexed sequence of boxes produced by a method.
#[derive(Clone, Debug, PartialEq)]
pub struct ReachTube {
    pub method: Method,
    pub times: Vec<f64>,
    pub boxes: Vec<IntervalVector>,
    pub report: RunReport,
}

#[derive(Serialize)]
struct TubeFile<'a> {
    method: Method,
    times: &'a [f64],
    boxes: &'a [IntervalVector],
    report: TubeSummary,
}

/// Run-independent part of the report stored inside tube files, so that the
/// same problem always serializes to the same bytes.
#[derive(Serialize)]
struct TubeSummary {
    n: usize,
    steps: usize,
    samples: Option<usize>,
}

impl ReachTube {
    pub fn final_box(&self) -> &IntervalVector {
        self.boxes.last().expect("reach tube always holds the final box")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("reach tube always holds the final time")
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = TubeFile {
            method: self.method,
            times: &self.times,
            boxes: &self.boxes,
            report: TubeSummary {
                n: self.report.n,
                steps: self.report.steps,
                samples: self.report.samples,
            },
        };
        Ok(serde_json::to_string(&file)?)
    }

    /// CSV with header `t,lower0,upper0,lower1,upper1,...`.
    pub fn to_csv(&self) -> String {
        let n = self.boxes.first().map_or(0, IntervalVector::dim);
        let mut out = String::from("t");
        for i in 0..n {
            let _ = write!(out, ",lower{i},upper{i}");
        }
        out.push('\n');
        for (t, b) in self.times.iter().zip(&self.boxes) {
            let _ = write!(out, "{t}");
            for (lo, hi) in b.lower().iter().zip(b.upper()) {
                let _ = write!(out, ",{lo},{hi}");
            }
            out.push('\n');
        }
        out
    }
}

fn seconds_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}

/// Growth-bound (contraction) over-approximation.
pub fn growth_bound(problem: &ReachProblem, workers: usize) -> Result<ReachTube> {
    let start = Instant::now();
    let model = &problem.model;
    let growth = model
        .growth()
        .ok_or_else(|| Error::MissingGrowth(model.name().to_string()))?;
    if !model.is_input_affine() && !problem.inputs.is_degenerate() {
        return Err(Error::NotInputAffine(model.name().to_string()));
    }
    let grid = problem.grid()?;
    let engine = Rk4Engine::new(workers)?;
    let c0 = problem.initial.center();
    let r0 = problem.initial.half_width();
    let p_center = problem.inputs.center();
    let p_radius = problem.inputs.half_width();
    let setup_seconds = seconds_since(start);

    let start = Instant::now();
    let mut times = Vec::with_capacity(grid.recorded_len(problem.tube_stride));
    let mut centers = Vec::with_capacity(times.capacity());
    let job = IntegrationJob::new(model.rhs(), &c0, &p_center, problem.t0, problem.t1, problem.h)
        .with_stride(problem.tube_stride);
    engine.integrate_with(&job, |t, c| {
        times.push(t);
        centers.push(c.to_vec());
        Ok(())
    })?;
    let mut radii = Vec::with_capacity(times.len());
    let job = IntegrationJob::new(growth, &r0, &p_radius, problem.t0, problem.t1, problem.h)
        .with_stride(problem.tube_stride);
    engine.integrate_with(&job, |t, r| {
        let mut r = r.to_vec();
        clamp_radius(t, &mut r)?;
        radii.push(r);
        Ok(())
    })?;
    let integration_seconds = seconds_since(start);

    let start = Instant::now();
    let boxes = centers
        .iter()
        .zip(&radii)
        .map(|(c, r)| IntervalVector::from_center_radius(c, r))
        .collect::<Result<Vec<_>>>()?;
    let reduction_seconds = seconds_since(start);

    Ok(ReachTube {
        method: Method::GrowthBound,
        times,
        boxes,
        report: RunReport {
            method: Method::GrowthBound.to_string(),
            n: model.dim(),
            samples: None,
            workers,
            steps: grid.steps(),
            setup_seconds,
            integration_seconds,
            reduction_seconds,
            state_memory_bytes: state_memory_bytes(Method::GrowthBound, model.dim(), 0, workers),
        },
    })
}

fn clamp_radius(time: f64, r: &mut [f64]) -> Result<()> {
    for (component, v) in r.iter_mut().enumerate() {
        if *v < 0.0 {
            if *v >= -RADIUS_CLAMP_TOL {
                *v = 0.0;
            } else {
                return Err(Error::NegativeRadius {
                    time,
                    component,
                    value: *v,
                });
            }
        }
    }
    Ok(())
}

/// Mixed-monotonicity over-approximation via the embedding system.
pub fn mixed_monotonicity(problem: &ReachProblem, workers: usize) -> Result<ReachTube> {
    let start = Instant::now();
    let model = &problem.model;
    let embedded = model.embed()?;
    let n = model.dim();
    let grid = problem.grid()?;
    let engine = Rk4Engine::new(workers)?;
    let x0: Vec<f64> = [problem.initial.lower(), problem.initial.upper()].concat();
    let p: Vec<f64> = [problem.inputs.lower(), problem.inputs.upper()].concat();
    let setup_seconds = seconds_since(start);

    let start = Instant::now();
    let mut times = Vec::with_capacity(grid.recorded_len(problem.tube_stride));
    let mut boxes = Vec::with_capacity(times.capacity());
    let job = IntegrationJob::new(embedded.rhs(), &x0, &p, problem.t0, problem.t1, problem.h)
        .with_stride(problem.tube_stride);
    engine.integrate_with(&job, |t, z| {
        let (lo, hi) = z.split_at(n);
        if let Some(component) = (0..n).find(|&i| !(lo[i] <= hi[i])) {
            return Err(Error::OrderViolation { time: t, component });
        }
        times.push(t);
        boxes.push(IntervalVector::new(lo.to_vec(), hi.to_vec())?);
        Ok(())
    })?;
    let integration_seconds = seconds_since(start);

    Ok(ReachTube {
        method: Method::MixedMonotonicity,
        times,
        boxes,
        report: RunReport {
            method: Method::MixedMonotonicity.to_string(),
            n,
            samples: None,
            workers,
            steps: grid.steps(),
            setup_seconds,
            integration_seconds,
            reduction_seconds: 0.0,
            state_memory_bytes: state_memory_bytes(Method::MixedMonotonicity, n, 0, workers),
        },
    })
}

/// Draws sample `index` of stream `seed` uniformly from the initial and input
/// boxes. Each sample has its own ChaCha stream and consumes one draw per
/// dimension, states first, so samples are independent of evaluation order.
pub fn draw_sample(
    seed: u64,
    index: u64,
    initial: &IntervalVector,
    inputs: &IntervalVector,
    x: &mut [f64],
    p: &mut [f64],
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    fill(&mut rng, initial, x);
    fill(&mut rng, inputs, p);
}

fn fill(rng: &mut ChaCha8Rng, b: &IntervalVector, out: &mut [f64]) {
    for ((o, &lo), &hi) in out.iter_mut().zip(b.lower()).zip(b.upper()) {
        let u: f64 = rng.random();
        *o = if lo == hi { lo } else { lo + u * (hi - lo) };
    }
}

/// Per-sample final states are folded into `hulls` (one per recorded time).
fn simulate_range(
    problem: &ReachProblem,
    seed: u64,
    samples: std::ops::Range<usize>,
    engine: &Rk4Engine,
    stride: usize,
    mut visit: impl FnMut(usize, usize, &[f64]) -> Result<()>,
) -> Result<()> {
    let mut x0 = vec![0.0; problem.model.dim()];
    let mut p = vec![0.0; problem.model.input_dim()];
    for s in samples {
        draw_sample(seed, s as u64, &problem.initial, &problem.inputs, &mut x0, &mut p);
        let job = IntegrationJob::new(problem.model.rhs(), &x0, &p, problem.t0, problem.t1, problem.h)
            .with_stride(stride);
        let mut entry = 0;
        engine
            .integrate_with(&job, |_, x| {
                visit(s, entry, x)?;
                entry += 1;
                Ok(())
            })
            .map_err(|e| Error::Sample {
                sample: s,
                source: Box::new(e),
            })?;
    }
    Ok(())
}

/// Splits `m` samples into per-worker ranges, or a single range integrated
/// across space when there are fewer samples than workers.
fn sample_ranges(m: usize, workers: usize) -> Vec<std::ops::Range<usize>> {
    if m < workers {
        return vec![0..m];
    }
    let chunk = m.div_ceil(workers);
    (0..workers)
        .map(|w| (w * chunk).min(m)..((w + 1) * chunk).min(m))
        .filter(|r| !r.is_empty())
        .collect()
}

fn first_error<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    // Ranges are disjoint and ordered, so the first failing range holds the
    // lowest failing sample index.
    results.into_iter().collect()
}

fn tree_merge(mut parts: Vec<Vec<RunningHull>>) -> Option<Vec<RunningHull>> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (x, y) in a.iter_mut().zip(&b) {
                    x.merge(y);
                }
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop()
}

/// Probabilistic box from the hull of sampled trajectories.
pub fn monte_carlo(problem: &ReachProblem, spec: &MonteCarloSpec, workers: usize) -> Result<ReachTube> {
    let start = Instant::now();
    let n = problem.model.dim();
    let m = spec.samples_for(n)?;
    let grid = problem.grid()?;
    let engine = Rk4Engine::new(workers)?;
    let ranges = sample_ranges(m, workers);
    let stride = problem.tube_stride;
    let times = recorded_times(&grid, stride);
    let setup_seconds = seconds_since(start);

    let start = Instant::now();
    let simulate = |range: std::ops::Range<usize>, engine: &Rk4Engine| -> Result<Vec<RunningHull>> {
        let mut hulls: Vec<RunningHull> = Vec::with_capacity(times.len());
        simulate_range(problem, spec.seed, range, engine, stride, |_, entry, x| {
            match hulls.get_mut(entry) {
                Some(h) => h.include(x),
                None => hulls.push(RunningHull::new(x)),
            }
            Ok(())
        })?;
        Ok(hulls)
    };
    let partials = if ranges.len() == 1 {
        vec![simulate(ranges[0].clone(), &engine)]
    } else {
        let serial = Rk4Engine::serial();
        engine.install(|| {
            ranges
                .par_iter()
                .map(|r| simulate(r.clone(), &serial))
                .collect::<Vec<_>>()
        })
    };
    let partials = first_error(partials)?;
    let integration_seconds = seconds_since(start);

    let start = Instant::now();
    let merged = tree_merge(partials).expect("at least one sample");
    let boxes = merged
        .into_iter()
        .map(RunningHull::finish)
        .collect::<Result<Vec<_>>>()?;
    let reduction_seconds = seconds_since(start);

    Ok(ReachTube {
        method: Method::MonteCarlo,
        times,
        boxes,
        report: RunReport {
            method: Method::MonteCarlo.to_string(),
            n,
            samples: Some(m),
            workers,
            steps: grid.steps(),
            setup_seconds,
            integration_seconds,
            reduction_seconds,
            state_memory_bytes: state_memory_bytes(Method::MonteCarlo, n, m, workers),
        },
    })
}

fn recorded_times(grid: &TimeGrid, stride: usize) -> Vec<f64> {
    let mut times = Vec::with_capacity(grid.recorded_len(stride));
    if stride > 0 {
        times.push(grid.t0());
    }
    times.extend(
        (0..grid.steps())
            .filter(|&k| grid.records_after(k, stride))
            .map(|k| grid.time_after(k)),
    );
    times
}

/// Fraction of `fresh_samples` new trajectories whose final state falls
/// outside the tube's final box.
pub fn coverage_estimate(
    problem: &ReachProblem,
    tube: &ReachTube,
    fresh_samples: usize,
    seed: u64,
    workers: usize,
) -> Result<f64> {
    if fresh_samples == 0 {
        return Err(Error::InvalidParameter("fresh sample count must be positive".into()));
    }
    let target = tube.final_box();
    if target.dim() != problem.model.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.model.dim(),
            found: target.dim(),
        });
    }
    let engine = Rk4Engine::new(workers)?;
    let ranges = sample_ranges(fresh_samples, workers);
    let count = |range: std::ops::Range<usize>, engine: &Rk4Engine| -> Result<usize> {
        let mut outside = 0;
        simulate_range(problem, seed, range, engine, 0, |_, _, x| {
            if target.first_violation(x)?.is_some() {
                outside += 1;
            }
            Ok(())
        })?;
        Ok(outside)
    };
    let counts = if ranges.len() == 1 {
        vec![count(ranges[0].clone(), &engine)]
    } else {
        let serial = Rk4Engine::serial();
        engine.install(|| ranges.par_iter().map(|r| count(r.clone(), &serial)).collect::<Vec<_>>())
    };
    let outside: usize = first_error(counts)?.into_iter().sum();
    Ok(outside as f64 / fresh_samples as f64)
}

/// Dispatches to the selected method.
pub fn run_method(
    method: Method,
    problem: &ReachProblem,
    mc: &MonteCarloSpec,
    workers: usize,
) -> Result<ReachTube> {
    match method {
        Method::GrowthBound => growth_bound(problem, workers),
        Method::MixedMonotonicity => mixed_monotonicity(problem, workers),
        Method::MonteCarlo => monte_carlo(problem, mc, workers),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::DenseGrowth;
    use std::f64::consts::E;

    fn iv(lo: &[f64], hi: &[f64]) -> IntervalVector {
        IntervalVector::new(lo.to_vec(), hi.to_vec()).unwrap()
    }

    fn zero_model(n: usize) -> SystemModel {
        SystemModel::from_fn("zero", n, 0, |_, _, _, _| 0.0)
            .unwrap()
            .with_growth_fn(|_, _, _, _| 0.0)
            .unwrap()
            .with_decomposition_fn(|_, _, _, _, _, _| 0.0)
            .input_affine(true)
    }

    fn exp_model() -> SystemModel {
        SystemModel::from_fn("exp", 1, 0, |_, _, x, _| x[0])
            .unwrap()
            .with_decomposition_fn(|_, _, x, _, _, _| x[0])
    }

    #[test]
    fn sample_count_examples() {
        // Independent evaluation of ceil((2n/ε) ln(2n/δ)):
        // 80 ln 400 = 479.317..., 4 ln 4 = 5.545...
        assert_eq!(sample_count(2, 0.05, 0.01).unwrap(), 480);
        assert_eq!(sample_count(1, 0.5, 0.5).unwrap(), 6);
        assert!(sample_count(2, 0.0, 0.5).is_err());
        assert!(sample_count(2, 0.5, 1.0).is_err());
        assert!(sample_count(0, 0.5, 0.5).is_err());
        let mut last = 0;
        for eps in [0.5, 0.2, 0.1, 0.05, 0.01] {
            let m = sample_count(3, eps, 0.1).unwrap();
            assert!(m >= last);
            last = m;
        }
        let mut last = 0;
        for delta in [0.5, 0.2, 0.1, 0.05, 0.01] {
            let m = sample_count(3, 0.1, delta).unwrap();
            assert!(m >= last);
            last = m;
        }
    }

    #[test]
    fn zero_dynamics_tubes_are_constant() {
        let initial = iv(&[0.0, 1.0], &[2.0, 4.0]);
        let problem = ReachProblem::new(zero_model(2), initial.clone(), IntervalVector::empty_dims(), 0.0, 1.0, 0.1)
            .unwrap()
            .with_stride(3);
        for tube in [growth_bound(&problem, 1).unwrap(), mixed_monotonicity(&problem, 2).unwrap()] {
            assert!(tube.boxes.iter().all(|b| b == &initial), "{:?}", tube.method);
            assert_eq!(tube.final_time(), 1.0);
        }
        let mc = monte_carlo(&problem, &MonteCarloSpec::default().with_samples(50), 1).unwrap();
        assert!(mc.final_box().subset_of(&initial).unwrap());
        let mut hull = crate::interval::PointSet::new(2);
        for s in 0..50 {
            let mut x = vec![0.0; 2];
            draw_sample(0, s, &initial, &IntervalVector::empty_dims(), &mut x, &mut []);
            hull.push(x).unwrap();
        }
        assert_eq!(mc.final_box(), &hull.hull().unwrap());
    }

    #[test]
    fn growth_bound_scalar_decay_matches_closed_form() {
        let model = SystemModel::from_fn("decay", 1, 1, |_, _, x, p| -x[0] + p[0])
            .unwrap()
            .with_growth(DenseGrowth::with_identity_input(1, vec![-1.0]).unwrap())
            .unwrap()
            .input_affine(true);
        let problem = ReachProblem::new(model, iv(&[-0.1], &[0.1]), iv(&[0.0], &[0.0]), 0.0, 1.0, 1e-3).unwrap();
        let tube = growth_bound(&problem, 1).unwrap();
        let b = tube.final_box();
        assert!(b.center()[0].abs() < 1e-15);
        assert!((b.half_width()[0] - 0.1 * (-1.0f64).exp()).abs() < 1e-5);
    }

    #[test]
    fn growth_bound_requires_growth_and_affine_inputs() {
        let plain = SystemModel::from_fn("plain", 1, 1, |_, _, x, p| x[0] * p[0]).unwrap();
        let problem = ReachProblem::new(plain.clone(), iv(&[0.0], &[1.0]), iv(&[0.0], &[1.0]), 0.0, 1.0, 0.1).unwrap();
        assert!(matches!(growth_bound(&problem, 1), Err(Error::MissingGrowth(_))));

        let with_growth = plain.with_growth_fn(|_, _, r, _| r[0]).unwrap();
        let problem = ReachProblem::new(with_growth.clone(), iv(&[0.0], &[1.0]), iv(&[0.0], &[1.0]), 0.0, 1.0, 0.1).unwrap();
        assert!(matches!(growth_bound(&problem, 1), Err(Error::NotInputAffine(_))));
        // A point input box makes the system trivially input-affine.
        let problem = ReachProblem::new(with_growth, iv(&[0.0], &[1.0]), iv(&[0.5], &[0.5]), 0.0, 1.0, 0.1).unwrap();
        assert!(growth_bound(&problem, 1).is_ok());
    }

    #[test]
    fn growth_bound_rejects_large_negative_radius() {
        let model = SystemModel::from_fn("m", 1, 0, |_, _, _, _| 0.0)
            .unwrap()
            .with_growth_fn(|_, _, _, _| -1.0)
            .unwrap()
            .input_affine(true);
        let problem = ReachProblem::new(model, iv(&[0.0], &[1.0]), IntervalVector::empty_dims(), 0.0, 1.0, 0.1).unwrap();
        assert!(matches!(growth_bound(&problem, 1), Err(Error::NegativeRadius { .. })));

        let mut r = vec![-1e-13, 0.5];
        clamp_radius(0.0, &mut r).unwrap();
        assert_eq!(r, vec![0.0, 0.5]);
    }

    #[test]
    fn mixed_monotonicity_scalar_exponential() {
        let problem = ReachProblem::new(exp_model(), iv(&[1.0], &[2.0]), IntervalVector::empty_dims(), 0.0, 1.0, 1e-3).unwrap();
        let tube = mixed_monotonicity(&problem, 1).unwrap();
        let b = tube.final_box();
        assert!((b.lower()[0] - E).abs() < 1e-4);
        assert!((b.upper()[0] - 2.0 * E).abs() < 1e-4);
        assert_eq!(tube.report.state_memory_bytes, 2 * growth_bound_memory(1));
    }

    fn growth_bound_memory(n: usize) -> u64 {
        state_memory_bytes(Method::GrowthBound, n, 0, 1)
    }

    #[test]
    fn mixed_monotonicity_detects_bad_decomposition() {
        // d_0 increases in x̂_1, so the width of component 0 shrinks at rate
        // 2 and the bounds cross at t = 0.5.
        let model = SystemModel::from_fn("bad", 2, 0, |_, _, _, _| 0.0)
            .unwrap()
            .with_decomposition_fn(|i, _, x, _, xh, _| if i == 0 { xh[1] - x[1] } else { 0.0 });
        let problem = ReachProblem::new(model, iv(&[1.0, 0.0], &[2.0, 1.0]), IntervalVector::empty_dims(), 0.0, 1.0, 0.1).unwrap();
        assert!(matches!(mixed_monotonicity(&problem, 1), Err(Error::OrderViolation { .. })));
        let plain = SystemModel::from_fn("plain", 1, 0, |_, _, _, _| 0.0).unwrap();
        let problem = ReachProblem::new(plain, iv(&[1.0], &[2.0]), IntervalVector::empty_dims(), 0.0, 1.0, 0.1).unwrap();
        assert!(matches!(mixed_monotonicity(&problem, 1), Err(Error::MissingDecomposition(_))));
    }

    #[test]
    fn monte_carlo_exponential_hull_within_two_percent() {
        let problem = ReachProblem::new(exp_model(), iv(&[1.0], &[2.0]), IntervalVector::empty_dims(), 0.0, 1.0, 1e-3).unwrap();
        let tube = monte_carlo(&problem, &MonteCarloSpec::new(0.05, 0.01, 7).with_samples(1000), 1).unwrap();
        let b = tube.final_box();
        // RK4 at h = 1e-3 is within 1e-12 relative of the exact flow.
        let exact = iv(&[E * (1.0 - 1e-12)], &[2.0 * E * (1.0 + 1e-12)]);
        assert!(b.subset_of(&exact).unwrap(), "{b:?}");
        assert!((b.lower()[0] - E).abs() <= 0.02 * E);
        assert!((b.upper()[0] - 2.0 * E).abs() <= 0.02 * 2.0 * E);
    }

    #[test]
    fn monte_carlo_is_worker_independent() {
        let model = SystemModel::from_fn("rot", 2, 1, |i, _, x, p| if i == 0 { x[1] + p[0] } else { -x[0] })
            .unwrap();
        let problem = ReachProblem::new(model, iv(&[-1.0, 0.0], &[1.0, 0.5]), iv(&[-0.1], &[0.1]), 0.0, 2.0, 0.05)
            .unwrap()
            .with_stride(5);
        let spec = MonteCarloSpec::new(0.1, 0.1, 99).with_samples(37);
        let a = monte_carlo(&problem, &spec, 1).unwrap();
        for w in [2, 3, 8, 64] {
            let b = monte_carlo(&problem, &spec, w).unwrap();
            assert_eq!(a.boxes, b.boxes);
            assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        }
    }

    #[test]
    fn monte_carlo_reports_failing_sample() {
        let model = SystemModel::from_fn("blow", 1, 0, |_, _, x, _| x[0] * x[0]).unwrap();
        let problem = ReachProblem::new(model, iv(&[1.0], &[100.0]), IntervalVector::empty_dims(), 0.0, 2.0, 0.01).unwrap();
        let err = monte_carlo(&problem, &MonteCarloSpec::default().with_samples(4), 2).unwrap_err();
        assert!(matches!(err, Error::Sample { sample: 0, .. }), "{err}");
    }

    #[test]
    fn coverage_examples() {
        let initial = iv(&[0.0], &[1.0]);
        let problem = ReachProblem::new(zero_model(1), initial.clone(), IntervalVector::empty_dims(), 0.0, 1.0, 0.5).unwrap();
        let exact = growth_bound(&problem, 1).unwrap();
        assert_eq!(coverage_estimate(&problem, &exact, 1000, 3, 1).unwrap(), 0.0);

        let mut shrunk = exact.clone();
        *shrunk.boxes.last_mut().unwrap() = iv(&[0.25], &[0.75]);
        let outside = coverage_estimate(&problem, &shrunk, 10_000, 3, 2).unwrap();
        assert!(outside >= 0.4, "{outside}");
    }

    #[test]
    fn tube_exports() {
        let tube = ReachTube {
            method: Method::GrowthBound,
            times: vec![0.0, 1.0],
            boxes: vec![iv(&[0.0, 1.0], &[1.0, 2.0]), iv(&[-0.5, 1.0], &[1.5, 2.5])],
            report: RunReport {
                n: 2,
                steps: 10,
                workers: 4,
                setup_seconds: 0.25,
                ..RunReport::default()
            },
        };
        assert_eq!(
            tube.to_json().unwrap(),
            r#"{"method":"growth-bound","times":[0.0,1.0],"boxes":[{"lower":[0.0,1.0],"upper":[1.0,2.0]},{"lower":[-0.5,1.0],"upper":[1.5,2.5]}],"report":{"n":2,"steps":10,"samples":null}}"#
        );
        assert_eq!(tube.to_csv(), "t,lower0,upper0,lower1,upper1\n0,0,1,1,2\n1,-0.5,1.5,1,2.5\n");
    }

    #[test]
    fn final_entry_matches_final_only_run() {
        let model = SystemModel::from_fn("rot", 2, 0, |i, _, x, _| if i == 0 { x[1] } else { -x[0] })
            .unwrap()
            .with_growth(DenseGrowth::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap())
            .unwrap()
            .input_affine(true);
        let base = ReachProblem::new(model, iv(&[0.9, -0.1], &[1.1, 0.1]), IntervalVector::empty_dims(), 0.0, 1.3, 0.05).unwrap();
        let strided = base.clone().with_stride(4);
        let a = growth_bound(&base, 1).unwrap();
        let b = growth_bound(&strided, 2).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(b.times[0], 0.0);
        assert_eq!(a.final_box(), b.final_box());
        assert!(b.times.windows(2).all(|w| w[0] < w[1]));
        let spec = MonteCarloSpec::default().with_samples(20);
        assert_eq!(
            monte_carlo(&base, &spec, 1).unwrap().final_box(),
            monte_carlo(&strided, &spec, 3).unwrap().final_box()
        );
    }

    #[test]
    fn memory_estimates() {
        let n = 1_000_000;
        let gb = state_memory_bytes(Method::GrowthBound, n, 0, 8);
        let mm = state_memory_bytes(Method::MixedMonotonicity, n, 0, 8);
        assert_eq!(mm, 2 * gb);
        let one = state_memory_bytes(Method::MonteCarlo, n, 1000, 1);
        let many = state_memory_bytes(Method::MonteCarlo, n, 100_000, 1);
        assert_eq!(one, many);
    }
}
