#![allow(dead_code)]

use std::path::{Path, PathBuf};

use interval_reach::{IntervalVector, RunConfig, SystemModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn config_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

pub fn example_config(name: &str) -> RunConfig {
    let text = std::fs::read_to_string(config_dir().join(name)).unwrap();
    RunConfig::from_text(&text).unwrap()
}

/// Plain serial RK4 over `eval_rhs`, sharing no code with the engine.
/// `visit` sees every state including the initial one.
pub fn reference_rk4(
    model: &SystemModel,
    x0: &[f64],
    p: &[f64],
    t0: f64,
    t1: f64,
    h: f64,
    mut visit: impl FnMut(f64, &[f64]),
) -> Vec<f64> {
    let f = |t: f64, x: &[f64]| model.eval_rhs(t, x, p).unwrap();
    let axpy = |x: &[f64], a: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(x, k)| x + a * k).collect() };
    let mut x = x0.to_vec();
    let mut t = t0;
    visit(t, &x);
    while t < t1 - 1e-12 * (1.0 + t1.abs()) {
        let step = h.min(t1 - t);
        let k1 = f(t, &x);
        let k2 = f(t + step / 2.0, &axpy(&x, step / 2.0, &k1));
        let k3 = f(t + step / 2.0, &axpy(&x, step / 2.0, &k2));
        let k4 = f(t + step, &axpy(&x, step, &k3));
        for i in 0..x.len() {
            x[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += step;
        visit(t, &x);
    }
    x
}

pub fn uniform_in(b: &IntervalVector, rng: &mut impl Rng) -> Vec<f64> {
    b.lower()
        .iter()
        .zip(b.upper())
        .map(|(&lo, &hi)| if hi > lo { rng.random_range(lo..=hi) } else { lo })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integrates `count` uniform samples from the config's initial and input
/// boxes with the reference integrator at `h / refine`, returning final states.
pub fn sampled_finals(config: &RunConfig, count: usize, refine: usize, seed: u64) -> Vec<Vec<f64>> {
    let model = config.build_model().unwrap();
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let x0 = uniform_in(&config.initial, &mut rng);
            let p = uniform_in(&config.inputs, &mut rng);
            reference_rk4(&model, &x0, &p, config.t0, config.t1, config.h / refine as f64, |_, _| {})
        })
        .collect()
}

pub fn violations(b: &IntervalVector, points: &[Vec<f64>]) -> usize {
    points.iter().filter(|x| !b.contains(x).unwrap()).count()
}
