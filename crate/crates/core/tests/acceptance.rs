//! Acceptance suite: one PASS/FAIL/SKIP line per criterion.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use interval_reach::models::{make_scalar_linear, make_single_track, SingleTrackParams};
use interval_reach::reach::state_memory_bytes;
use interval_reach::runner::{self, BenchSpec, BenchStatus};
use interval_reach::{
    coverage_estimate, growth_bound, mixed_monotonicity, monte_carlo, sample_count, IntegrationJob, IntervalVector,
    Method, MonteCarloSpec, ReachProblem, Rk4Engine, RunConfig, SystemModel,
};
use tempfile::TempDir;

use common::{config_dir, example_config, sampled_finals, violations};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn all() -> usize {
    interval_reach::config::resolve_workers(0)
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn scalar(a: f64, x: (f64, f64), p: (f64, f64), t1: f64, h: f64) -> ReachProblem {
    ReachProblem::new(
        make_scalar_linear(a).unwrap(),
        IntervalVector::new(vec![x.0], vec![x.1]).unwrap(),
        IntervalVector::new(vec![p.0], vec![p.1]).unwrap(),
        0.0,
        t1,
        h,
    )
    .unwrap()
}

fn ac1_rk4() -> Outcome {
    let start = Instant::now();
    let model = SystemModel::from_fn("exp", 1, 0, |_, _, x, _| x[0]).unwrap();
    let engine = Rk4Engine::new(1).unwrap();
    let error_at = |h: f64| {
        let job = IntegrationJob::new(model.rhs(), &[1.0], &[], 0.0, 1.0, h);
        (engine.integrate(&job).unwrap().final_state()[0] - std::f64::consts::E).abs()
    };
    let fine = error_at(0.001);
    let errors: Vec<f64> = [0.1, 0.05, 0.025, 0.0125].iter().map(|&h| error_at(h)).collect();
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let secs = start.elapsed().as_secs_f64();
    let ok = fine <= 1e-8 && ratios.iter().all(|r| (12.0..=20.0).contains(r)) && secs < 1.0;
    verdict(ok, format!("|x(1) - e| = {fine:.2e} at h = 0.001; halving ratios {ratios:.2?}; {secs:.2} s"))
}

fn ac2_worker_determinism() -> Outcome {
    let start = Instant::now();
    let base = runner::scaled_config(&example_config("traffic.cfg"), 100_000).unwrap();
    let dir = TempDir::new().unwrap();
    let mut files = Vec::new();
    for workers in [1, 2, 8] {
        let mut cfg = base.clone();
        cfg.workers = workers;
        cfg.tube_stride = 10;
        cfg.output = Some(format!("traffic-{workers}.json").into());
        let outcome = runner::run(&cfg, dir.path()).unwrap();
        files.push(std::fs::read(outcome.tube_path).unwrap());
    }
    let secs = start.elapsed().as_secs_f64();
    let identical = files.iter().all(|f| f == &files[0]);
    verdict(
        identical && secs < 30.0,
        format!("n = 100000, workers 1/2/8, tube files identical: {identical}; {secs:.1} s"),
    )
}

/// Example configurations of the soundness suite.
const SUITE: &[&str] = &[
    "vdp.cfg",
    "traffic.cfg",
    "heat3d.cfg",
    "single-track.cfg",
    "laub-loomis.cfg",
    "arch-quadrotor.cfg",
];

fn ac3_soundness() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut total = 0;
    for name in SUITE {
        let cfg = example_config(name);
        let problem = cfg.problem().unwrap();
        let finals = sampled_finals(&cfg, 10_000, 10, 0xAC3);
        let gb = growth_bound(&problem, all()).unwrap();
        let v = violations(gb.final_box(), &finals);
        total += v;
        details.push(format!("{} GB {v}", cfg.model));
        if interval_reach::models::entry(&cfg.model).unwrap().supports(Method::MixedMonotonicity) {
            let mm = mixed_monotonicity(&problem, all()).unwrap();
            let v = violations(mm.final_box(), &finals);
            total += v;
            details.push(format!("{} MM {v}", cfg.model));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        total == 0 && secs < 600.0,
        format!("violations of 10^4 samples: {}; {secs:.1} s", details.join(", ")),
    )
}

fn ac4_closed_form_growth_bound() -> Outcome {
    let tube = growth_bound(&scalar(-1.0, (0.9, 1.1), (0.5, 0.5), 1.0, 0.001), 1).unwrap();
    let r = tube.final_box().half_width()[0];
    let exact = 0.1 * (-1.0f64).exp();
    verdict((r - exact).abs() <= 1e-5, format!("half-width {r:.10} vs 0.1/e = {exact:.10}"))
}

fn ac5_mixed_monotonicity_exact() -> Outcome {
    let tube = mixed_monotonicity(&scalar(1.0, (1.0, 2.0), (0.0, 0.0), 1.0, 0.001), 1).unwrap();
    let b = tube.final_box();
    let e = std::f64::consts::E;
    let err = (b.lower()[0] - e).abs().max((b.upper()[0] - 2.0 * e).abs());
    verdict(err <= 1e-4, format!("[{:.8}, {:.8}], max error {err:.2e}", b.lower()[0], b.upper()[0]))
}

fn ac6_sample_count() -> Outcome {
    // m is the least integer with exp(m ε / 2n) >= 2n/δ.
    let oracle = (1..)
        .find(|&m: &usize| (m as f64 * 0.05 / 4.0).exp() >= 400.0)
        .unwrap();
    let m = sample_count(2, 0.05, 0.01).unwrap();
    verdict(m == 480 && oracle == 480, format!("sample_count = {m}, oracle = {oracle}"))
}

fn ac7_monte_carlo_guarantee() -> Outcome {
    let start = Instant::now();
    let problem = scalar(1.0, (1.0, 2.0), (0.0, 0.0), 1.0, 0.01);
    let mut covered = 0;
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let spec = MonteCarloSpec::new(0.05, 0.01, seed).with_samples(480);
        let tube = monte_carlo(&problem, &spec, all()).unwrap();
        let outside = coverage_estimate(&problem, &tube, 10_000, 1_000_000 + seed, all()).unwrap();
        worst = worst.max(outside);
        if outside <= 0.05 {
            covered += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        covered >= 99 && secs < 120.0,
        format!("{covered}/100 seeds with outside fraction <= 0.05 (worst {worst:.4}); {secs:.1} s"),
    )
}

fn ac8_cross_method() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for name in SUITE {
        let cfg = example_config(name);
        let problem = cfg.problem().unwrap();
        let gb = growth_bound(&problem, all()).unwrap();
        let mc = monte_carlo(&problem, &cfg.monte_carlo_spec(), all()).unwrap();
        let inside = mc.final_box().subset_of(gb.final_box()).unwrap();
        ok &= inside;
        details.push(format!("{} (m = {}) {}", cfg.model, mc.report.samples.unwrap(), if inside { "ok" } else { "ESCAPES" }));
    }
    verdict(ok, details.join(", "))
}

fn ac9_scaling() -> Vec<(String, Outcome)> {
    let start = Instant::now();
    let mut cfg: RunConfig = example_config("traffic.cfg");
    cfg.t1 = 100.0;
    cfg.h = 1.0;
    let dims = vec![10_000, 100_000, 1_000_000];
    let rows = runner::bench(
        &cfg,
        &BenchSpec {
            dims: dims.clone(),
            workers: vec![1],
            repetitions: 3,
        },
    )
    .unwrap();
    let times: Vec<Option<f64>> = rows
        .iter()
        .map(|r| match r.status {
            BenchStatus::Ok => r.median_seconds,
            _ => None,
        })
        .collect();
    let linear = match times.iter().copied().collect::<Option<Vec<f64>>>() {
        Some(t) => {
            let per_state: Vec<f64> = t.iter().zip(&dims).map(|(t, &n)| t / n as f64).collect();
            let ratios: Vec<f64> = per_state.iter().map(|p| p / per_state[0]).collect();
            let ok = ratios.iter().all(|r| (1.0 / 3.0..=3.0).contains(r)) && rows.iter().all(|r| r.steps == 100);
            verdict(
                ok,
                format!(
                    "median seconds {t:.4?} for n = {dims:?}; per-state cost relative to n = 10^4 {ratios:.2?}; {:.1} s",
                    start.elapsed().as_secs_f64()
                ),
            )
        }
        None => Outcome::Fail(format!("bench rows not ok: {rows:?}")),
    };
    let cores = std::thread::available_parallelism().map_or(1, |c| c.get());
    let speedup = if cores < 4 {
        Outcome::Skip(format!("host has {cores} core(s); the speedup check needs at least 4"))
    } else {
        let rows = runner::bench(
            &cfg,
            &BenchSpec {
                dims: vec![1_000_000],
                workers: vec![1, cores],
                repetitions: 3,
            },
        )
        .unwrap();
        match (rows[0].median_seconds, rows[1].median_seconds) {
            (Some(serial), Some(parallel)) => {
                let s = serial / parallel;
                verdict(s >= 2.0, format!("speedup {s:.2} with {cores} workers at n = 10^6"))
            }
            _ => Outcome::Fail(format!("bench rows not ok: {rows:?}")),
        }
    };
    vec![("AC9a".into(), linear), ("AC9b".into(), speedup)]
}

fn ac10_memory() -> Outcome {
    let n = 1_000_000;
    let gb = state_memory_bytes(Method::GrowthBound, n, 0, 1);
    let mm = state_memory_bytes(Method::MixedMonotonicity, n, 0, 1);
    let ratio = mm as f64 / gb as f64;
    verdict((ratio - 2.0).abs() <= 0.2, format!("MM {mm} B, GB {gb} B, ratio {ratio:.3}"))
}

fn ac11_regime_switch() -> Outcome {
    let model = make_single_track(SingleTrackParams::default()).unwrap();
    let q = SingleTrackParams::default();
    let u = [0.05, 1.0];
    let at = |v: f64| {
        let x = [0.0, 0.0, 0.1, v, 0.0, 0.2, 0.0];
        model.eval_rhs(0.0, &x, &u).unwrap()[5]
    };
    let kinematic = |v: f64| 1.0 / q.l_wb * 0.1f64.tan() + v / (q.l_wb * 0.1f64.cos().powi(2)) * 0.05;
    let (slow, fast) = (at(0.0999), at(0.1001));
    let ok = (slow - kinematic(0.0999)).abs() < 1e-12 && (fast - kinematic(0.1001)).abs() > 1e-3;
    verdict(
        ok,
        format!(
            "x6' = {slow:.6} at x4 = 0.0999 (kinematic {:.6}), {fast:.6} at x4 = 0.1001",
            kinematic(0.0999)
        ),
    )
}

fn reach_cli(args: &[&str], cwd: &Path) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_reach"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap();
    (out.status.success(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn ac12_cli() -> Outcome {
    let dir = TempDir::new().unwrap();
    let valid = "model = vdp\nmethod = growth-bound\ninitial.lower = 1.25, 2.35\ninitial.upper = 1.55, 2.45\nt1 = 0.5\nh = 0.01\n";
    let malformed = [
        ("unknown key", valid.replace("h = 0.01", "h = 0.01\nstep = 3"), "line 7"),
        ("bad dims", valid.replace("1.25, 2.35", "1, 2, 3"), "line 3"),
        ("bad method", valid.replace("growth-bound", "zonotope"), "line 2"),
    ];
    let mut problems = Vec::new();
    for (what, text, line) in &malformed {
        let path = dir.path().join("bad.cfg");
        std::fs::write(&path, text).unwrap();
        let (ok, stderr) = reach_cli(&["run", path.to_str().unwrap()], dir.path());
        if ok || !stderr.starts_with("error[config]: ") || !stderr.contains(line) {
            problems.push(format!("{what}: {}", stderr.trim()));
        }
    }
    let mut ran = 0;
    let mut models = std::collections::BTreeSet::new();
    for e in std::fs::read_dir(config_dir()).unwrap() {
        let src = e.unwrap().path();
        if src.extension().is_none_or(|x| x != "cfg") {
            continue;
        }
        let dest = dir.path().join(src.file_name().unwrap());
        std::fs::copy(&src, &dest).unwrap();
        models.insert(runner::load_config(&dest).unwrap().model);
        let (ok, stderr) = reach_cli(&["run", dest.to_str().unwrap()], dir.path());
        if ok {
            ran += 1;
        } else {
            problems.push(format!("{}: {}", src.display(), stderr.trim()));
        }
    }
    for entry in interval_reach::models::catalog() {
        if !models.contains(entry.name) {
            problems.push(format!("no example config for {}", entry.name));
        }
    }
    verdict(
        problems.is_empty(),
        format!(
            "3 malformed configs rejected with line numbers; {ran} example configs covering {} models exit 0{}",
            models.len(),
            if problems.is_empty() { String::new() } else { format!("; problems: {problems:?}") }
        ),
    )
}

fn main() {
    let mut results: Vec<(String, Outcome)> = vec![
        ("AC1".into(), ac1_rk4()),
        ("AC2".into(), ac2_worker_determinism()),
        ("AC3".into(), ac3_soundness()),
        ("AC4".into(), ac4_closed_form_growth_bound()),
        ("AC5".into(), ac5_mixed_monotonicity_exact()),
        ("AC6".into(), ac6_sample_count()),
        ("AC7".into(), ac7_monte_carlo_guarantee()),
        ("AC8".into(), ac8_cross_method()),
    ];
    results.extend(ac9_scaling());
    results.push(("AC10".into(), ac10_memory()));
    results.push(("AC11".into(), ac11_regime_switch()));
    results.push(("AC12".into(), ac12_cli()));

    let mut failed = 0;
    for (id, outcome) in &results {
        match outcome {
            Outcome::Pass(d) => println!("{id:<5} PASS  {d}"),
            Outcome::Skip(d) => println!("{id:<5} SKIP  {d}"),
            Outcome::Fail(d) => {
                failed += 1;
                println!("{id:<5} FAIL  {d}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
