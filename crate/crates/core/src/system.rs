//! Dynamical systems `ẋ = f(t, x, p)` evaluated one component at a time.
//!
//! Every right-hand side is exposed per component so that the integrator can
//! hand contiguous index blocks to different workers. A [`SystemModel`] bundles
//! the vector field with the optional extras the reachability methods need:
//! growth dynamics `ṙ = g(t, r, w)` for the growth-bound method and a
//! decomposition function `d(t, x, p, x̂, p̂)` for mixed monotonicity.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::interval::IntervalVector;

/// A vector field evaluated component-wise.
///
/// Implementations must be deterministic and free of side effects: the same
/// `(i, t, x, p)` always yields the same value, whichever thread asks.
pub trait Dynamics: Send + Sync {
    fn dim(&self) -> usize;

    fn input_dim(&self) -> usize;

    /// Value of component `i` of the vector field.
    fn component(&self, i: usize, t: f64, x: &[f64], p: &[f64]) -> f64;

    /// Writes `out[k] = component(range.start + k, ..)`.
    fn eval_block(&self, range: Range<usize>, t: f64, x: &[f64], p: &[f64], out: &mut [f64]) {
        for (o, i) in out.iter_mut().zip(range) {
            *o = self.component(i, t, x, p);
        }
    }
}

/// Decomposition function of a mixed-monotone system.
///
/// `component(i, t, x, p, x, p)` must equal component `i` of the vector field.
pub trait Decomposition: Send + Sync {
    fn component(
        &self,
        i: usize,
        t: f64,
        x: &[f64],
        p: &[f64],
        x_hat: &[f64],
        p_hat: &[f64],
    ) -> f64;
}

/// [`Dynamics`] backed by a closure.
pub struct FnDynamics<F> {
    dim: usize,
    input_dim: usize,
    f: F,
}

impl<F> FnDynamics<F>
where
    F: Fn(usize, f64, &[f64], &[f64]) -> f64 + Send + Sync,
{
    pub fn new(dim: usize, input_dim: usize, f: F) -> Self {
        FnDynamics { dim, input_dim, f }
    }
}

impl<F> Dynamics for FnDynamics<F>
where
    F: Fn(usize, f64, &[f64], &[f64]) -> f64 + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn input_dim(&self) -> usize {
        self.input_dim
    }

    fn component(&self, i: usize, t: f64, x: &[f64], p: &[f64]) -> f64 {
        (self.f)(i, t, x, p)
    }
}

/// [`Decomposition`] backed by a closure.
pub struct FnDecomposition<F>(pub F);

impl<F> Decomposition for FnDecomposition<F>
where
    F: Fn(usize, f64, &[f64], &[f64], &[f64], &[f64]) -> f64 + Send + Sync,
{
    fn component(
        &self,
        i: usize,
        t: f64,
        x: &[f64],
        p: &[f64],
        x_hat: &[f64],
        p_hat: &[f64],
    ) -> f64 {
        (self.0)(i, t, x, p, x_hat, p_hat)
    }
}

/// Linear growth dynamics `ṙ = C r + |B| w` from an explicit dense matrix.
///
/// Intended for small systems; `C` is `n × n` and `B` is `n × m`, both row-major.
/// Entries of `B` enter through their absolute values.
#[derive(Clone, Debug)]
pub struct DenseGrowth {
    n: usize,
    m: usize,
    c: Vec<f64>,
    b: Vec<f64>,
}

impl DenseGrowth {
    pub fn new(n: usize, c: Vec<f64>) -> Result<Self> {
        DenseGrowth::with_input_gain(n, 0, c, Vec::new())
    }

    pub fn with_input_gain(n: usize, m: usize, c: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if c.len() != n * n {
            return Err(Error::InvalidModel(format!(
                "contraction matrix has {} entries, expected {}",
                c.len(),
                n * n
            )));
        }
        if b.len() != n * m {
            return Err(Error::InvalidModel(format!(
                "input gain has {} entries, expected {}",
                b.len(),
                n * m
            )));
        }
        if let Some(k) = (0..n * n).find(|&k| k / n != k % n && c[k] < 0.0) {
            return Err(Error::InvalidModel(format!(
                "off-diagonal contraction entry ({}, {}) is negative",
                k / n,
                k % n
            )));
        }
        let b = b.into_iter().map(f64::abs).collect();
        Ok(DenseGrowth { n, m, c, b })
    }

    /// Growth dynamics with `B = I`, for systems of the form `ẋ = f(t, x) + p`.
    pub fn with_identity_input(n: usize, c: Vec<f64>) -> Result<Self> {
        let mut b = vec![0.0; n * n];
        for i in 0..n {
            b[i * n + i] = 1.0;
        }
        DenseGrowth::with_input_gain(n, n, c, b)
    }

    pub fn matrix(&self) -> &[f64] {
        &self.c
    }
}

impl Dynamics for DenseGrowth {
    fn dim(&self) -> usize {
        self.n
    }

    fn input_dim(&self) -> usize {
        self.m
    }

    fn component(&self, i: usize, _t: f64, r: &[f64], w: &[f64]) -> f64 {
        let row = &self.c[i * self.n..(i + 1) * self.n];
        let mut acc = 0.0;
        for (c, r) in row.iter().zip(r) {
            acc += c * r;
        }
        let gain = &self.b[i * self.m..(i + 1) * self.m];
        for (b, w) in gain.iter().zip(w) {
            acc += b * w;
        }
        acc
    }
}

/// A dynamical system together with the data each reachability method needs.
#[derive(Clone)]
pub struct SystemModel {
    name: String,
    rhs: Arc<dyn Dynamics>,
    growth: Option<Arc<dyn Dynamics>>,
    decomposition: Option<Arc<dyn Decomposition>>,
    input_affine: bool,
    sparsity_note: String,
}

impl fmt::Debug for SystemModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemModel")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("input_dim", &self.input_dim())
            .field("growth", &self.growth.is_some())
            .field("decomposition", &self.decomposition.is_some())
            .field("input_affine", &self.input_affine)
            .finish()
    }
}

impl SystemModel {
    pub fn new(name: impl Into<String>, rhs: impl Dynamics + 'static) -> Result<Self> {
        SystemModel::from_arc(name, Arc::new(rhs))
    }

    pub fn from_arc(name: impl Into<String>, rhs: Arc<dyn Dynamics>) -> Result<Self> {
        let name = name.into();
        if rhs.dim() == 0 {
            return Err(Error::InvalidModel(format!("model '{name}' has dimension 0")));
        }
        Ok(SystemModel {
            name,
            rhs,
            growth: None,
            decomposition: None,
            input_affine: false,
            sparsity_note: String::new(),
        })
    }

    /// Model from a closure `f(i, t, x, p)`.
    pub fn from_fn<F>(name: impl Into<String>, dim: usize, input_dim: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, f64, &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        SystemModel::new(name, FnDynamics::new(dim, input_dim, f))
    }

    /// Attaches growth dynamics `g(t, r, w)`; they must have the model's state
    /// and input dimensions.
    pub fn with_growth(mut self, growth: impl Dynamics + 'static) -> Result<Self> {
        if growth.dim() != self.dim() || growth.input_dim() != self.input_dim() {
            return Err(Error::InvalidModel(format!(
                "growth dynamics of '{}' have shape ({}, {}), expected ({}, {})",
                self.name,
                growth.dim(),
                growth.input_dim(),
                self.dim(),
                self.input_dim()
            )));
        }
        self.growth = Some(Arc::new(growth));
        Ok(self)
    }

    pub fn with_growth_fn<F>(self, g: F) -> Result<Self>
    where
        F: Fn(usize, f64, &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        let (n, m) = (self.dim(), self.input_dim());
        self.with_growth(FnDynamics::new(n, m, g))
    }

    pub fn with_decomposition(mut self, d: impl Decomposition + 'static) -> Self {
        self.decomposition = Some(Arc::new(d));
        self
    }

    pub fn with_decomposition_fn<F>(self, d: F) -> Self
    where
        F: Fn(usize, f64, &[f64], &[f64], &[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        self.with_decomposition(FnDecomposition(d))
    }

    /// Declares the form `ẋ = f(t, x) + B p`.
    pub fn input_affine(mut self, yes: bool) -> Self {
        self.input_affine = yes;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.sparsity_note = note.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.rhs.dim()
    }

    pub fn input_dim(&self) -> usize {
        self.rhs.input_dim()
    }

    pub fn is_input_affine(&self) -> bool {
        self.input_affine
    }

    pub fn sparsity_note(&self) -> &str {
        &self.sparsity_note
    }

    pub fn rhs(&self) -> &dyn Dynamics {
        &*self.rhs
    }

    pub fn growth(&self) -> Option<&dyn Dynamics> {
        self.growth.as_deref()
    }

    pub fn decomposition(&self) -> Option<&dyn Decomposition> {
        self.decomposition.as_deref()
    }

    pub fn has_growth(&self) -> bool {
        self.growth.is_some()
    }

    pub fn has_decomposition(&self) -> bool {
        self.decomposition.is_some()
    }

    /// Evaluates `out[k] = f_{range.start + k}(t, x, p)`.
    pub fn eval_rhs_block(
        &self,
        range: Range<usize>,
        t: f64,
        x: &[f64],
        p: &[f64],
        out: &mut [f64],
    ) -> Result<()> {
        if range.start > range.end || range.end > self.dim() {
            return Err(Error::InvalidProblem(format!(
                "index range {}..{} outside 0..{}",
                range.start,
                range.end,
                self.dim()
            )));
        }
        check_len(x.len(), self.dim())?;
        check_len(p.len(), self.input_dim())?;
        check_len(out.len(), range.len())?;
        self.rhs.eval_block(range, t, x, p, out);
        Ok(())
    }

    /// Full right-hand side `f(t, x, p)`.
    pub fn eval_rhs(&self, t: f64, x: &[f64], p: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.eval_rhs_block(0..self.dim(), t, x, p, &mut out)?;
        Ok(out)
    }

    /// The `2n`-dimensional embedding system built from the decomposition
    /// function. State is `(x, x̂)` and input is `(p, p̂)`, both concatenated.
    pub fn embed(&self) -> Result<SystemModel> {
        let d = self
            .decomposition
            .clone()
            .ok_or_else(|| Error::MissingDecomposition(self.name.clone()))?;
        let embedded = Embedding {
            d,
            n: self.dim(),
            m: self.input_dim(),
        };
        Ok(SystemModel::new(format!("{}-embedding", self.name), embedded)?
            .with_note(format!("embedding of {}", self.name)))
    }

    /// Samples `(t, x, p)` uniformly from `domain` and checks the decomposition
    /// diagonal property `|d(t,x,p,x,p) - f(t,x,p)| <= 1e-9 (1 + |f|)`.
    pub fn check_decomposition(
        &self,
        samples: usize,
        seed: u64,
        domain: &SamplingDomain,
    ) -> Result<bool> {
        let d = self
            .decomposition()
            .ok_or_else(|| Error::MissingDecomposition(self.name.clone()))?;
        check_len(domain.states.dim(), self.dim())?;
        check_len(domain.inputs.dim(), self.input_dim())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = vec![0.0; self.dim()];
        let mut p = vec![0.0; self.input_dim()];
        for _ in 0..samples {
            let t = uniform(&mut rng, domain.time.0, domain.time.1);
            fill_uniform(&mut rng, &domain.states, &mut x);
            fill_uniform(&mut rng, &domain.inputs, &mut p);
            for i in 0..self.dim() {
                let f = self.rhs.component(i, t, &x, &p);
                let dv = d.component(i, t, &x, &p, &x, &p);
                if !((dv - f).abs() <= 1e-9 * (1.0 + f.abs())) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Region from which [`SystemModel::check_decomposition`] draws its points.
#[derive(Clone, Debug)]
pub struct SamplingDomain {
    pub time: (f64, f64),
    pub states: IntervalVector,
    pub inputs: IntervalVector,
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        lo + rng.random::<f64>() * (hi - lo)
    }
}

fn fill_uniform(rng: &mut ChaCha8Rng, b: &IntervalVector, out: &mut [f64]) {
    for (o, (&lo, &hi)) in out.iter_mut().zip(b.lower().iter().zip(b.upper())) {
        *o = uniform(rng, lo, hi);
    }
}

fn check_len(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

struct Embedding {
    d: Arc<dyn Decomposition>,
    n: usize,
    m: usize,
}

impl Dynamics for Embedding {
    fn dim(&self) -> usize {
        2 * self.n
    }

    fn input_dim(&self) -> usize {
        2 * self.m
    }

    fn component(&self, i: usize, t: f64, x: &[f64], p: &[f64]) -> f64 {
        let (lo, hi) = x.split_at(self.n);
        let (p_lo, p_hi) = p.split_at(self.m);
        if i < self.n {
            self.d.component(i, t, lo, p_lo, hi, p_hi)
        } else {
            self.d.component(i - self.n, t, hi, p_hi, lo, p_lo)
        }
    }
}
