//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! model = traffic
//! param.n = 50
//! method = growth-bound
//! initial.lower = 20*50
//! initial.upper = 40*50
//! input.lower = 30
//! input.upper = 40
//! t1 = 60
//! h = 1
//! ```
//!
//! Lists are comma separated; `value*count` repeats a value.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interval::IntervalVector;
use crate::models;
use crate::reach::{Method, MonteCarloSpec, ReachProblem};
use crate::system::SystemModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(format!("unknown format '{s}' (expected json or csv)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: String,
    pub params: BTreeMap<String, f64>,
    pub method: Method,
    pub initial: IntervalVector,
    pub inputs: IntervalVector,
    pub t0: f64,
    pub t1: f64,
    pub h: f64,
    pub tube_stride: usize,
    /// 0 uses every available core.
    pub workers: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub samples: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

const KEYS: &[&str] = &[
    "model",
    "method",
    "initial.lower",
    "initial.upper",
    "input.lower",
    "input.upper",
    "t0",
    "t1",
    "h",
    "tube_stride",
    "workers",
    "epsilon",
    "delta",
    "seed",
    "samples",
    "output",
    "format",
];

struct Entry {
    line: usize,
    value: String,
}

struct Raw {
    entries: BTreeMap<String, Entry>,
    /// Line reported for missing keys: the end of the file.
    end: usize,
}

impl Raw {
    fn parse(text: &str) -> Result<Raw> {
        let mut entries = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw_line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::config(line, format!("expected 'key = value', found '{content}'")))?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(Error::config(line, "missing key before '='"));
            }
            let is_param = key.strip_prefix("param.").is_some_and(|p| !p.is_empty());
            if !is_param && !KEYS.contains(&key) {
                return Err(Error::config(line, format!("unknown key '{key}'")));
            }
            if let Some(prev) = entries.get(key) {
                let prev: &Entry = prev;
                return Err(Error::config(
                    line,
                    format!("duplicate key '{key}' (first set on line {})", prev.line),
                ));
            }
            entries.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }
        Ok(Raw {
            entries,
            end: text.lines().count().max(1),
        })
    }

    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn require(&self, key: &str) -> Result<&Entry> {
        self.get(key)
            .ok_or_else(|| Error::config(self.end, format!("missing required key '{key}'")))
    }

    fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(default),
            Some(e) => parse_value(e, key),
        }
    }
}

fn parse_value<T: FromStr>(e: &Entry, key: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    e.value
        .parse()
        .map_err(|err| Error::config(e.line, format!("invalid value for '{key}': {err}")))
}

fn parse_number(s: &str, line: usize, key: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::config(line, format!("'{}' in '{key}' is not a number", s.trim())))?;
    if !v.is_finite() {
        return Err(Error::config(line, format!("'{key}' must be finite")));
    }
    Ok(v)
}

/// Parses `a, b, c*3` into a vector.
pub fn parse_list(s: &str, line: usize, key: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for item in s.split(',') {
        match item.split_once('*') {
            Some((v, count)) => {
                let v = parse_number(v, line, key)?;
                let count: usize = count
                    .trim()
                    .parse()
                    .map_err(|_| Error::config(line, format!("bad repeat count '{}' in '{key}'", count.trim())))?;
                out.extend(std::iter::repeat_n(v, count));
            }
            None => out.push(parse_number(item, line, key)?),
        }
    }
    Ok(out)
}

fn parse_box(raw: &Raw, prefix: &str, dim: usize, what: &str) -> Result<IntervalVector> {
    let lo_key = format!("{prefix}.lower");
    let hi_key = format!("{prefix}.upper");
    let (lo, hi) = match (raw.get(&lo_key), raw.get(&hi_key)) {
        (None, None) if dim == 0 => return Ok(IntervalVector::empty_dims()),
        (Some(lo), Some(hi)) => (lo, hi),
        (Some(e), None) | (None, Some(e)) => {
            return Err(Error::config(e.line, format!("'{lo_key}' and '{hi_key}' must be given together")))
        }
        (None, None) => {
            return Err(Error::config(
                raw.end,
                format!("missing required keys '{lo_key}' and '{hi_key}' ({what} has dimension {dim})"),
            ))
        }
    };
    let lower = parse_list(&lo.value, lo.line, &lo_key)?;
    let upper = parse_list(&hi.value, hi.line, &hi_key)?;
    for (e, v, key) in [(lo, &lower, &lo_key), (hi, &upper, &hi_key)] {
        if v.len() != dim {
            return Err(Error::config(
                e.line,
                format!("'{key}' has {} entries but {what} has dimension {dim}", v.len()),
            ));
        }
    }
    IntervalVector::new(lower, upper).map_err(|err| Error::config(hi.line, err.to_string()))
}

/// Parses a configuration and checks it against the model library.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw = Raw::parse(text)?;
    let model_entry = raw.require("model")?;
    let catalog_entry = models::entry(&model_entry.value).map_err(|e| Error::config(model_entry.line, e.to_string()))?;

    let mut params = BTreeMap::new();
    for (key, e) in &raw.entries {
        if let Some(name) = key.strip_prefix("param.") {
            if catalog_entry.param(name).is_none() {
                return Err(Error::config(
                    e.line,
                    format!("model '{}' has no parameter '{name}'", catalog_entry.name),
                ));
            }
            params.insert(name.to_string(), parse_number(&e.value, e.line, key)?);
        }
    }
    let model = catalog_entry.build(&params).map_err(|err| {
        let line = raw
            .entries
            .iter()
            .find(|(k, _)| k.starts_with("param."))
            .map_or(model_entry.line, |(_, e)| e.line);
        Error::config(line, err.to_string())
    })?;

    let method_entry = raw.require("method")?;
    let method: Method = parse_value(method_entry, "method")?;
    if !catalog_entry.supports(method) {
        return Err(Error::config(
            method_entry.line,
            format!("model '{}' does not support method '{method}'", catalog_entry.name),
        ));
    }

    let initial = parse_box(&raw, "initial", model.dim(), "the state")?;
    let inputs = parse_box(&raw, "input", model.input_dim(), "the input")?;

    let t1_entry = raw.require("t1")?;
    let h_entry = raw.require("h")?;
    let t0 = match raw.get("t0") {
        Some(e) => parse_number(&e.value, e.line, "t0")?,
        None => 0.0,
    };
    let t1 = parse_number(&t1_entry.value, t1_entry.line, "t1")?;
    let h = parse_number(&h_entry.value, h_entry.line, "h")?;
    if !(t1 > t0) {
        return Err(Error::config(t1_entry.line, format!("t1 = {t1} must exceed t0 = {t0}")));
    }
    if !(h > 0.0) {
        return Err(Error::config(h_entry.line, format!("h = {h} must be positive")));
    }

    let samples = match raw.get("samples") {
        Some(e) => {
            let m: usize = parse_value(e, "samples")?;
            if m == 0 {
                return Err(Error::config(e.line, "'samples' must be positive"));
            }
            Some(m)
        }
        None => None,
    };
    let config = RunConfig {
        model: catalog_entry.name.to_string(),
        params,
        method,
        initial,
        inputs,
        t0,
        t1,
        h,
        tube_stride: raw.parsed("tube_stride", 0)?,
        workers: raw.parsed("workers", 0)?,
        epsilon: raw.parsed("epsilon", 0.05)?,
        delta: raw.parsed("delta", 0.01)?,
        seed: raw.parsed("seed", 0)?,
        samples,
        output: raw.get("output").map(|e| PathBuf::from(&e.value)),
        format: raw.parsed("format", OutputFormat::Json)?,
    };
    for key in ["epsilon", "delta"] {
        let v = if key == "epsilon" { config.epsilon } else { config.delta };
        if !(v > 0.0 && v < 1.0) {
            let line = raw.get(key).map_or(raw.end, |e| e.line);
            return Err(Error::config(line, format!("{key} = {v} must lie in (0, 1)")));
        }
    }
    Ok(config)
}

fn write_list(out: &mut String, values: &[f64]) {
    let mut first = true;
    let mut i = 0;
    while i < values.len() {
        let v = values[i];
        let run = values[i..].iter().take_while(|w| w.to_bits() == v.to_bits()).count();
        if !first {
            out.push_str(", ");
        }
        first = false;
        if run > 1 {
            let _ = write!(out, "{v:?}*{run}");
        } else {
            let _ = write!(out, "{v:?}");
        }
        i += run;
    }
}

impl RunConfig {
    pub fn from_text(text: &str) -> Result<RunConfig> {
        parse_config(text)
    }

    /// Serializes back to the configuration format; parsing the result
    /// yields an equal config.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model = {}", self.model);
        for (k, v) in &self.params {
            let _ = writeln!(out, "param.{k} = {v:?}");
        }
        let _ = writeln!(out, "method = {}", self.method);
        for (key, values) in [
            ("initial.lower", self.initial.lower()),
            ("initial.upper", self.initial.upper()),
            ("input.lower", self.inputs.lower()),
            ("input.upper", self.inputs.upper()),
        ] {
            if key.starts_with("input") && self.inputs.dim() == 0 {
                continue;
            }
            out.push_str(key);
            out.push_str(" = ");
            write_list(&mut out, values);
            out.push('\n');
        }
        let _ = writeln!(out, "t0 = {:?}", self.t0);
        let _ = writeln!(out, "t1 = {:?}", self.t1);
        let _ = writeln!(out, "h = {:?}", self.h);
        let _ = writeln!(out, "tube_stride = {}", self.tube_stride);
        let _ = writeln!(out, "workers = {}", self.workers);
        let _ = writeln!(out, "epsilon = {:?}", self.epsilon);
        let _ = writeln!(out, "delta = {:?}", self.delta);
        let _ = writeln!(out, "seed = {}", self.seed);
        if let Some(m) = self.samples {
            let _ = writeln!(out, "samples = {m}");
        }
        if let Some(path) = &self.output {
            let _ = writeln!(out, "output = {}", path.display());
        }
        let _ = writeln!(out, "format = {}", self.format.as_str());
        out
    }

    pub fn build_model(&self) -> Result<SystemModel> {
        models::build_model(&self.model, &self.params)
    }

    pub fn problem(&self) -> Result<ReachProblem> {
        Ok(ReachProblem::new(
            self.build_model()?,
            self.initial.clone(),
            self.inputs.clone(),
            self.t0,
            self.t1,
            self.h,
        )?
        .with_stride(self.tube_stride))
    }

    pub fn monte_carlo_spec(&self) -> MonteCarloSpec {
        MonteCarloSpec {
            epsilon: self.epsilon,
            delta: self.delta,
            seed: self.seed,
            samples_override: self.samples,
        }
    }

    /// Worker count with 0 resolved to the available parallelism.
    pub fn resolved_workers(&self) -> usize {
        resolve_workers(self.workers)
    }
}

pub fn resolve_workers(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }
}
