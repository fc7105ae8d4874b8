//! Config-driven runs, the dimension/worker benchmark sweep and the model
//! listing behind the `reach` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{parse_config, resolve_workers, OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::interval::IntervalVector;
use crate::models;
use crate::reach::{run_method, state_memory_bytes, ReachTube};

/// Runs the method selected by `config` without touching the file system.
pub fn execute(config: &RunConfig) -> Result<ReachTube> {
    let ctx = |phase: &str| format!("model '{}', method '{}', phase {phase}", config.model, config.method);
    let problem = config.problem().map_err(|e| e.with_context(ctx("setup")))?;
    run_method(config.method, &problem, &config.monte_carlo_spec(), config.resolved_workers())
        .map_err(|e| e.with_context(ctx("integration")))
}

/// Files written by [`run`].
#[derive(Debug)]
pub struct RunOutcome {
    pub tube: ReachTube,
    pub tube_path: PathBuf,
    pub report_path: PathBuf,
}

/// Path of the tube file: `output` resolved against `base_dir`, or
/// `<base_dir>/<model>-<method>.<format>`.
pub fn tube_path(config: &RunConfig, base_dir: &Path) -> PathBuf {
    match &config.output {
        Some(p) if p.is_absolute() => p.clone(),
        Some(p) => base_dir.join(p),
        None => base_dir.join(format!("{}-{}.{}", config.model, config.method, config.format.as_str())),
    }
}

/// The report sits next to the tube as `<stem>.report.json`.
pub fn report_path(tube: &Path) -> PathBuf {
    let stem = tube.file_stem().map_or_else(|| "tube".into(), |s| s.to_string_lossy().into_owned());
    tube.with_file_name(format!("{stem}.report.json"))
}

/// Runs `config` and writes the tube and the report.
pub fn run(config: &RunConfig, base_dir: &Path) -> Result<RunOutcome> {
    let tube = execute(config)?;
    let tube_path = tube_path(config, base_dir);
    let report_path = report_path(&tube_path);
    let body = match config.format {
        OutputFormat::Json => tube.to_json()?,
        OutputFormat::Csv => tube.to_csv(),
    };
    let write = |path: &Path, text: &str| -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, text).map_err(|e| Error::from(e).with_context(format!("writing {}", path.display())))
    };
    write(&tube_path, &body)?;
    write(&report_path, &tube.report.to_json()?)?;
    Ok(RunOutcome {
        tube,
        tube_path,
        report_path,
    })
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::from(e).with_context(format!("reading {}", path.display())))?;
    parse_config(&text).map_err(|e| e.with_context(path.display().to_string()))
}

/// Loads a config file and runs it, resolving relative outputs against the
/// file's directory.
pub fn run_file(path: &Path) -> Result<RunOutcome> {
    let config = load_config(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    run(&config, base)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSpec {
    pub dims: Vec<usize>,
    pub workers: Vec<usize>,
    pub repetitions: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BenchStatus {
    Ok,
    OutOfMemory,
    Error(String),
}

impl BenchStatus {
    pub fn as_str(&self) -> &str {
        match self {
            BenchStatus::Ok => "ok",
            BenchStatus::OutOfMemory => "out-of-memory",
            BenchStatus::Error(_) => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    /// Requested dimension.
    pub n: usize,
    pub workers: usize,
    pub median_seconds: Option<f64>,
    pub steps: usize,
    pub status: BenchStatus,
}

/// Copies `b` cyclically to dimension `n`.
pub fn tile_box(b: &IntervalVector, n: usize) -> Result<IntervalVector> {
    if n == 0 {
        return Ok(IntervalVector::empty_dims());
    }
    if b.dim() == 0 {
        return Err(Error::InvalidProblem("cannot tile an empty box".into()));
    }
    let lo = b.lower().iter().cycle().take(n).copied().collect();
    let hi = b.upper().iter().cycle().take(n).copied().collect();
    IntervalVector::new(lo, hi)
}

/// Config rescaled to state dimension `n`: the model's size parameter is set
/// from `n` and the boxes are tiled to the resulting dimensions.
pub fn scaled_config(config: &RunConfig, n: usize) -> Result<RunConfig> {
    let entry = models::entry(&config.model)?;
    let scaling = entry
        .scaling
        .ok_or_else(|| Error::InvalidModel(format!("model '{}' has no dimension parameter", entry.name)))?;
    let mut scaled = config.clone();
    scaled.params.insert(scaling.param.to_string(), (scaling.from_dim)(n) as f64);
    scaled.tube_stride = 0;
    let model = scaled.build_model()?;
    scaled.initial = tile_box(&config.initial, model.dim())?;
    scaled.inputs = tile_box(&config.inputs, model.input_dim())?;
    Ok(scaled)
}

/// Bytes available to new allocations, when the platform says.
pub fn available_memory() -> Option<u64> {
    let text = fs::read_to_string("/proc/meminfo").ok()?;
    let line = text.lines().find(|l| l.starts_with("MemAvailable:"))?;
    let kib: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib * 1024)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Median wall time of the configured method over a grid of dimensions and
/// worker counts. Every pair yields exactly one row, failures included.
pub fn bench(config: &RunConfig, spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    bench_with_memory(config, spec, available_memory())
}

/// [`bench`] with an explicit memory budget for the pre-check.
pub fn bench_with_memory(config: &RunConfig, spec: &BenchSpec, budget: Option<u64>) -> Result<Vec<BenchRow>> {
    if spec.repetitions == 0 {
        return Err(Error::InvalidParameter("bench needs at least one repetition".into()));
    }
    if spec.dims.is_empty() || spec.workers.is_empty() {
        return Err(Error::InvalidParameter("bench needs at least one dimension and one worker count".into()));
    }
    // Repeated entries, including 0 next to the core count it resolves to,
    // would produce duplicate rows.
    let mut dims = spec.dims.clone();
    dedup_in_order(&mut dims);
    let mut worker_counts: Vec<usize> = spec.workers.iter().map(|&w| resolve_workers(w)).collect();
    dedup_in_order(&mut worker_counts);
    let mut rows = Vec::with_capacity(dims.len() * worker_counts.len());
    for &n in &dims {
        for &workers in &worker_counts {
            let row = |median_seconds, steps, status| BenchRow {
                n,
                workers,
                median_seconds,
                steps,
                status,
            };
            let scaled = match scaled_config(config, n) {
                Ok(c) => c,
                Err(e) => {
                    rows.push(row(None, 0, BenchStatus::Error(e.to_string())));
                    continue;
                }
            };
            let steps = crate::rk4::step_count(scaled.t0, scaled.t1, scaled.h);
            let dim = scaled.initial.dim();
            let samples = scaled.monte_carlo_spec().samples_for(dim).unwrap_or(0);
            let need = state_memory_bytes(scaled.method, dim, samples, workers);
            if budget.is_some_and(|b| need > b) {
                rows.push(row(None, steps, BenchStatus::OutOfMemory));
                continue;
            }
            let mut scaled = scaled;
            scaled.workers = workers;
            let mut times = Vec::with_capacity(spec.repetitions);
            let mut status = BenchStatus::Ok;
            for _ in 0..spec.repetitions {
                let start = Instant::now();
                match execute(&scaled) {
                    Ok(_) => times.push(start.elapsed().as_secs_f64()),
                    Err(e) => {
                        status = if matches!(root(&e), Error::OutOfMemory { .. }) {
                            BenchStatus::OutOfMemory
                        } else {
                            BenchStatus::Error(e.to_string())
                        };
                        break;
                    }
                }
            }
            let med = (status == BenchStatus::Ok).then(|| median(times));
            rows.push(row(med, steps, status));
        }
    }
    Ok(rows)
}

fn root(e: &Error) -> &Error {
    match e {
        Error::Context { source, .. } | Error::Sample { source, .. } => root(source),
        other => other,
    }
}

/// CSV with columns `n,workers,median_seconds,steps,status`.
fn dedup_in_order(v: &mut Vec<usize>) {
    let mut seen = std::collections::HashSet::new();
    v.retain(|x| seen.insert(*x));
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,workers,median_seconds,steps,status\n");
    for r in rows {
        let t = r.median_seconds.map_or(String::new(), |t| format!("{t:.6}"));
        let _ = writeln!(out, "{},{},{},{},{}", r.n, r.workers, t, r.steps, r.status.as_str());
    }
    out
}

/// Human-readable catalog listing.
pub fn list_models() -> String {
    let mut out = String::new();
    for e in models::catalog() {
        let methods: Vec<&str> = e.methods.iter().map(|m| m.as_str()).collect();
        let _ = writeln!(out, "{}", e.name);
        let _ = writeln!(out, "  dimension: {}", e.dimension);
        let _ = writeln!(out, "  inputs: {}", e.inputs);
        let _ = writeln!(out, "  methods: {}", methods.join(", "));
        let _ = writeln!(out, "  operating box: {}", e.operating_box);
        if let Some(s) = e.scaling {
            let _ = writeln!(out, "  bench scales: {}", s.param);
        }
        if e.params.is_empty() {
            let _ = writeln!(out, "  parameters: none");
        } else {
            let _ = writeln!(out, "  parameters:");
            for p in e.params {
                let _ = writeln!(out, "    {} = {} ({}; {})", p.name, p.default, p.provenance, p.description);
            }
        }
    }
    out
}
