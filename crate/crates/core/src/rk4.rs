//! Fixed-step classical Runge-Kutta integration, parallel across state
//! components.
//!
//! Each step runs four parallel sections separated by barriers. Within a
//! section every worker owns one contiguous block of component indices and
//! writes only its own slice of the stage buffers, so the result does not
//! depend on the number of workers.
//!
//! Two scratch states are alternated between stages so that no section reads
//! a buffer it is also writing.

use std::fmt::Write as _;

use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::Dynamics;

/// Number of `n`-vectors the engine keeps alive while integrating an
/// `n`-dimensional system: the state plus [`StageBuffers`].
pub const ENGINE_VECTORS: usize = 5;

/// Relative slack used to decide whether `(t1 - t0) / h` is an integer.
const DIVISIBILITY_TOL: f64 = 1e-9;

/// Uniform time grid `t0, t0 + h, ...` closed by a shortened step onto `t1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    t1: f64,
    h: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, h: f64) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite() && h.is_finite()) {
            return Err(Error::InvalidProblem("time window and step must be finite".into()));
        }
        if !(t1 > t0) {
            return Err(Error::InvalidProblem(format!("t1 = {t1} must exceed t0 = {t0}")));
        }
        if !(h > 0.0) {
            return Err(Error::InvalidProblem(format!("step size h = {h} must be positive")));
        }
        Ok(TimeGrid {
            t0,
            t1,
            h,
            steps: step_count(t0, t1, h),
        })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    /// Start time and length of step `k`; the last step ends exactly at `t1`.
    pub fn step(&self, k: usize) -> (f64, f64) {
        let t = self.t0 + k as f64 * self.h;
        if k + 1 == self.steps {
            (t, self.t1 - t)
        } else {
            (t, self.h)
        }
    }

    /// Time reached after step `k`.
    pub fn time_after(&self, k: usize) -> f64 {
        if k + 1 == self.steps {
            self.t1
        } else {
            self.t0 + (k + 1) as f64 * self.h
        }
    }

    /// Whether the state after step `k` is recorded for the given stride.
    /// Stride 0 keeps only the final state.
    pub fn records_after(&self, k: usize, stride: usize) -> bool {
        k + 1 == self.steps || (stride > 0 && (k + 1).is_multiple_of(stride))
    }

    /// Number of recorded states, including `t0` when `stride > 0`.
    pub fn recorded_len(&self, stride: usize) -> usize {
        if stride == 0 {
            1
        } else {
            let hits = self.steps / stride;
            1 + hits + usize::from(self.steps % stride != 0)
        }
    }
}

/// Full steps `floor((t1 - t0) / h)` plus one shortened step for any remainder.
pub fn step_count(t0: f64, t1: f64, h: f64) -> usize {
    let q = (t1 - t0) / h;
    let nearest = q.round();
    if nearest >= 1.0 && (q - nearest).abs() <= DIVISIBILITY_TOL * nearest {
        nearest as usize
    } else {
        q.floor() as usize + 1
    }
}

/// Inputs of one integration run.
#[derive(Clone, Copy)]
pub struct IntegrationJob<'a> {
    pub dynamics: &'a dyn Dynamics,
    pub x0: &'a [f64],
    pub p: &'a [f64],
    pub t0: f64,
    pub t1: f64,
    pub h: f64,
    /// 0 records the final state only; `k > 0` records `t0`, every `k`-th
    /// step and the final state.
    pub record_stride: usize,
}

impl<'a> IntegrationJob<'a> {
    pub fn new(dynamics: &'a dyn Dynamics, x0: &'a [f64], p: &'a [f64], t0: f64, t1: f64, h: f64) -> Self {
        IntegrationJob {
            dynamics,
            x0,
            p,
            t0,
            t1,
            h,
            record_stride: 0,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    fn grid(&self) -> Result<TimeGrid> {
        if self.x0.len() != self.dynamics.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dynamics.dim(),
                found: self.x0.len(),
            });
        }
        if self.p.len() != self.dynamics.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dynamics.input_dim(),
                found: self.p.len(),
            });
        }
        TimeGrid::new(self.t0, self.t1, self.h)
    }
}

/// Recorded states of one integration run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct TrajectoryRow<'a> {
    t: f64,
    x: &'a [f64],
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn final_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(f64::NAN)
    }

    /// CSV with header `t,x0,x1,...`.
    pub fn to_csv(&self) -> String {
        let n = self.states.first().map_or(0, Vec::len);
        let mut out = String::from("t");
        for i in 0..n {
            let _ = write!(out, ",x{i}");
        }
        out.push('\n');
        for (t, x) in self.times.iter().zip(&self.states) {
            let _ = write!(out, "{t}");
            for v in x {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    /// JSON array of `{"t": .., "x": [..]}` rows.
    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<TrajectoryRow<'_>> = self
            .times
            .iter()
            .zip(&self.states)
            .map(|(&t, x)| TrajectoryRow { t, x })
            .collect();
        Ok(serde_json::to_string(&rows)?)
    }
}

/// Per-component scratch shared by the four stages of a step.
#[derive(Clone, Debug)]
pub struct StageBuffers {
    k: Vec<f64>,
    acc: Vec<f64>,
    tmp_a: Vec<f64>,
    tmp_b: Vec<f64>,
}

impl StageBuffers {
    pub fn new(n: usize) -> Result<Self> {
        Ok(StageBuffers {
            k: zeroed(n)?,
            acc: zeroed(n)?,
            tmp_a: zeroed(n)?,
            tmp_b: zeroed(n)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.k.len()
    }
}

/// Allocates `n` zeros, reporting allocation failure instead of aborting.
pub(crate) fn zeroed(n: usize) -> Result<Vec<f64>> {
    let mut v = Vec::new();
    v.try_reserve_exact(n).map_err(|_| Error::OutOfMemory {
        bytes: (n as u64).saturating_mul(8),
    })?;
    v.resize(n, 0.0);
    Ok(v)
}

#[derive(Clone, Copy)]
enum Stage {
    First,
    Second,
    Third,
    Last,
}

/// Fixed-step RK4 integrator owning a pool of `workers` threads.
pub struct Rk4Engine {
    workers: usize,
    pool: Option<ThreadPool>,
}

impl Rk4Engine {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::InvalidProblem("worker count must be at least 1".into()));
        }
        let pool = if workers > 1 {
            Some(
                ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| Error::ThreadPool(e.to_string()))?,
            )
        } else {
            None
        };
        Ok(Rk4Engine { workers, pool })
    }

    /// Single-threaded engine.
    pub fn serial() -> Self {
        Rk4Engine {
            workers: 1,
            pool: None,
        }
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Runs `f` inside the engine's pool so that rayon iterators started from
    /// it use the engine's workers.
    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(f),
            None => f(),
        }
    }

    /// Advances `x` by one step of size `h` from time `t`.
    ///
    /// On a non-finite stage value returns the offending component index.
    pub fn step(
        &self,
        dynamics: &dyn Dynamics,
        t: f64,
        h: f64,
        x: &mut [f64],
        p: &[f64],
        scratch: &mut StageBuffers,
    ) -> std::result::Result<(), usize> {
        let StageBuffers { k, acc, tmp_a, tmp_b } = scratch;
        let mid = t + 0.5 * h;
        self.stage(Stage::First, dynamics, t, h, x, p, k, acc, tmp_a, Some(x))?;
        self.stage(Stage::Second, dynamics, mid, h, tmp_a, p, k, acc, tmp_b, Some(x))?;
        self.stage(Stage::Third, dynamics, mid, h, tmp_b, p, k, acc, tmp_a, Some(x))?;
        self.stage(Stage::Last, dynamics, t + h, h, tmp_a, p, k, acc, x, None)
    }

    // Every section writes `k`, `acc` and `out` only inside the worker's own
    // block; `input` and `base` are read-only for the whole section.
    #[allow(clippy::too_many_arguments)]
    fn stage(
        &self,
        stage: Stage,
        dynamics: &dyn Dynamics,
        t: f64,
        h: f64,
        input: &[f64],
        p: &[f64],
        k: &mut [f64],
        acc: &mut [f64],
        out: &mut [f64],
        base: Option<&[f64]>,
    ) -> std::result::Result<(), usize> {
        let half = 0.5 * h;
        let sixth = h / 6.0;
        let body = |start: usize, k: &mut [f64], acc: &mut [f64], out: &mut [f64]| -> Option<usize> {
            let end = start + k.len();
            dynamics.eval_block(start..end, t, input, p, k);
            match stage {
                Stage::First => {
                    let base = &base.expect("base state")[start..end];
                    for j in 0..k.len() {
                        acc[j] = k[j];
                        out[j] = base[j] + half * k[j];
                    }
                }
                Stage::Second => {
                    let base = &base.expect("base state")[start..end];
                    for j in 0..k.len() {
                        acc[j] += 2.0 * k[j];
                        out[j] = base[j] + half * k[j];
                    }
                }
                Stage::Third => {
                    let base = &base.expect("base state")[start..end];
                    for j in 0..k.len() {
                        acc[j] += 2.0 * k[j];
                        out[j] = base[j] + h * k[j];
                    }
                }
                Stage::Last => {
                    for j in 0..k.len() {
                        out[j] += sixth * (acc[j] + k[j]);
                    }
                }
            }
            (0..k.len())
                .find(|&j| !(k[j].is_finite() && out[j].is_finite()))
                .map(|j| start + j)
        };

        let n = k.len();
        let bad = match &self.pool {
            None => body(0, k, acc, out),
            Some(pool) => {
                let block = n.div_ceil(self.workers).max(1);
                pool.install(|| {
                    k.par_chunks_mut(block)
                        .zip(acc.par_chunks_mut(block))
                        .zip(out.par_chunks_mut(block))
                        .enumerate()
                        .filter_map(|(b, ((k, acc), out))| body(b * block, k, acc, out))
                        .min()
                })
            }
        };
        match bad {
            Some(i) => Err(i),
            None => Ok(()),
        }
    }

    /// Integrates `job`, calling `on_record(t, x)` for every recorded state.
    pub fn integrate_with<F>(&self, job: &IntegrationJob<'_>, mut on_record: F) -> Result<TimeGrid>
    where
        F: FnMut(f64, &[f64]) -> Result<()>,
    {
        let grid = job.grid()?;
        let n = job.dynamics.dim();
        let mut x = zeroed(n)?;
        x.copy_from_slice(job.x0);
        let mut scratch = StageBuffers::new(n)?;
        if job.record_stride > 0 {
            on_record(grid.t0(), &x)?;
        }
        for k in 0..grid.steps() {
            let (t, h) = grid.step(k);
            self.step(job.dynamics, t, h, &mut x, job.p, &mut scratch)
                .map_err(|component| Error::NonFinite { step: k, component })?;
            if grid.records_after(k, job.record_stride) {
                on_record(grid.time_after(k), &x)?;
            }
        }
        Ok(grid)
    }

    pub fn integrate(&self, job: &IntegrationJob<'_>) -> Result<Trajectory> {
        let mut traj = Trajectory {
            times: Vec::new(),
            states: Vec::new(),
        };
        self.integrate_with(job, |t, x| {
            traj.times.push(t);
            traj.states.push(x.to_vec());
            Ok(())
        })?;
        Ok(traj)
    }
}

/// Integrates `job` on a fresh engine with `workers` threads.
pub fn integrate(job: &IntegrationJob<'_>, workers: usize) -> Result<Trajectory> {
    Rk4Engine::new(workers)?.integrate(job)
}

/// One RK4 step on a fresh engine with `workers` threads.
pub fn integrate_step(
    dynamics: &dyn Dynamics,
    t: f64,
    h: f64,
    x: &mut [f64],
    p: &[f64],
    scratch: &mut StageBuffers,
    workers: usize,
) -> Result<()> {
    if x.len() != dynamics.dim() || scratch.dim() != dynamics.dim() {
        return Err(Error::DimensionMismatch {
            expected: dynamics.dim(),
            found: x.len().min(scratch.dim()),
        });
    }
    if !(h >= 0.0) {
        return Err(Error::InvalidProblem(format!("step size h = {h} must be non-negative")));
    }
    Rk4Engine::new(workers)?
        .step(dynamics, t, h, x, p, scratch)
        .map_err(|component| Error::NonFinite { step: 0, component })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::FnDynamics;

    fn exp() -> FnDynamics<impl Fn(usize, f64, &[f64], &[f64]) -> f64 + Send + Sync> {
        FnDynamics::new(1, 0, |_, _, x: &[f64], _: &[f64]| x[0])
    }

    #[test]
    fn step_counts() {
        assert_eq!(step_count(0.0, 1.0, 0.1), 10);
        assert_eq!(step_count(0.0, 0.3, 0.1), 3);
        assert_eq!(step_count(0.0, 1.0, 0.3), 4);
        assert_eq!(step_count(0.0, 0.05, 0.1), 1);
        assert_eq!(step_count(0.0, 6.5, 0.005), 1300);
        let g = TimeGrid::new(0.0, 1.0, 0.3).unwrap();
        assert_eq!(g.step(3), (0.8999999999999999, 1.0 - 0.8999999999999999));
        assert_eq!(g.time_after(3), 1.0);
    }

    #[test]
    fn recorded_len_matches_records() {
        for (steps_t1, stride) in [(1.0, 0), (1.0, 1), (1.0, 3), (1.0, 10), (1.05, 4)] {
            let g = TimeGrid::new(0.0, steps_t1, 0.1).unwrap();
            let hits = (0..g.steps()).filter(|&k| g.records_after(k, stride)).count();
            assert_eq!(g.recorded_len(stride), hits + usize::from(stride > 0));
        }
    }

    #[test]
    fn one_step_of_exponential() {
        let f = exp();
        let mut x = vec![1.0];
        let mut s = StageBuffers::new(1).unwrap();
        integrate_step(&f, 0.0, 0.1, &mut x, &[], &mut s, 1).unwrap();
        let expected = 1.0 + 0.1 + 0.01 / 2.0 + 0.001 / 6.0 + 0.0001 / 24.0;
        assert!((x[0] - expected).abs() < 1e-15, "{}", x[0]);
    }

    #[test]
    fn zero_dynamics_and_zero_step_leave_state_unchanged() {
        let zero = FnDynamics::new(3, 0, |_, _, _: &[f64], _: &[f64]| 0.0);
        let mut x = vec![1.0, -2.0, 3.5];
        let mut s = StageBuffers::new(3).unwrap();
        integrate_step(&zero, 0.0, 0.1, &mut x, &[], &mut s, 2).unwrap();
        assert_eq!(x, vec![1.0, -2.0, 3.5]);

        let f = exp();
        let mut x = vec![1.25];
        let mut s = StageBuffers::new(1).unwrap();
        integrate_step(&f, 0.7, 0.0, &mut x, &[], &mut s, 1).unwrap();
        assert_eq!(x, vec![1.25]);

        let job = IntegrationJob::new(&zero, &[1.0, -2.0, 3.5], &[], 0.0, 2.0, 0.3).with_stride(2);
        let traj = integrate(&job, 1).unwrap();
        assert!(traj.states.iter().all(|s| s == &vec![1.0, -2.0, 3.5]));
        assert_eq!(traj.final_time(), 2.0);
    }

    #[test]
    fn non_finite_is_reported_with_step_and_component() {
        let blow = FnDynamics::new(2, 0, |i, _, x: &[f64], _: &[f64]| if i == 1 { x[1] * x[1] } else { 0.0 });
        let job = IntegrationJob::new(&blow, &[0.0, 10.0], &[], 0.0, 10.0, 0.1);
        match integrate(&job, 2) {
            Err(Error::NonFinite { component, .. }) => assert_eq!(component, 1),
            other => panic!("expected non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn exports() {
        let traj = Trajectory {
            times: vec![0.0, 0.5],
            states: vec![vec![1.0, 2.0], vec![0.25, -1.0]],
        };
        assert_eq!(traj.to_csv(), "t,x0,x1\n0,1,2\n0.5,0.25,-1\n");
        assert_eq!(traj.to_json().unwrap(), r#"[{"t":0.0,"x":[1.0,2.0]},{"t":0.5,"x":[0.25,-1.0]}]"#);
    }

    #[test]
    fn invalid_jobs() {
        let f = exp();
        assert!(integrate(&IntegrationJob::new(&f, &[1.0], &[], 1.0, 1.0, 0.1), 1).is_err());
        assert!(integrate(&IntegrationJob::new(&f, &[1.0], &[], 0.0, 1.0, 0.0), 1).is_err());
        assert!(integrate(&IntegrationJob::new(&f, &[1.0, 2.0], &[], 0.0, 1.0, 0.1), 1).is_err());
        assert!(Rk4Engine::new(0).is_err());
    }
}
