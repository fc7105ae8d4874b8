//! Heat diffusion in the unit cube on an `ℓ × ℓ × ℓ` grid.
//!
//! Node `(i, j, k)` has index `i + ℓ(j + ℓk)` and grid spacing is
//! `Δ = 1/(ℓ − 1)`. Five faces are insulated: a missing neighbor is replaced
//! by the node itself, so no heat crosses. On the top face `k = ℓ − 1` heat
//! leaves into a zero-temperature environment at rate `α h_exchange / Δ`.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::system::{Decomposition, Dynamics, SystemModel};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatParams {
    /// Grid points per axis.
    pub l: usize,
    /// Diffusivity.
    pub alpha: f64,
    pub h_exchange: f64,
}

impl Default for HeatParams {
    fn default() -> Self {
        HeatParams {
            l: 8,
            alpha: 1.0,
            h_exchange: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Heat {
    l: usize,
    /// `α / Δ²`
    gain: f64,
    /// `α h_exchange / Δ`
    exchange: f64,
}

impl Heat {
    #[inline]
    fn eval(&self, idx: usize, u: &[f64]) -> f64 {
        let l = self.l;
        let plane = l * l;
        let i = idx % l;
        let j = (idx / l) % l;
        let k = idx / plane;
        let c = u[idx];
        let mut acc = 0.0;
        if i > 0 {
            acc += u[idx - 1] - c;
        }
        if i + 1 < l {
            acc += u[idx + 1] - c;
        }
        if j > 0 {
            acc += u[idx - l] - c;
        }
        if j + 1 < l {
            acc += u[idx + l] - c;
        }
        if k > 0 {
            acc += u[idx - plane] - c;
        }
        let mut out = self.gain * acc;
        if k + 1 < l {
            out += self.gain * (u[idx + plane] - c);
        } else {
            out -= self.exchange * c;
        }
        out
    }
}

impl Dynamics for Heat {
    fn dim(&self) -> usize {
        self.l * self.l * self.l
    }

    fn input_dim(&self) -> usize {
        0
    }

    fn component(&self, i: usize, _t: f64, x: &[f64], _p: &[f64]) -> f64 {
        self.eval(i, x)
    }

    fn eval_block(&self, range: Range<usize>, _t: f64, x: &[f64], _p: &[f64], out: &mut [f64]) {
        for (o, i) in out.iter_mut().zip(range) {
            *o = self.eval(i, x);
        }
    }
}

impl Decomposition for Heat {
    fn component(&self, i: usize, _t: f64, x: &[f64], _p: &[f64], _x_hat: &[f64], _p_hat: &[f64]) -> f64 {
        self.eval(i, x)
    }
}

/// The system is linear with nonnegative off-diagonal entries, so its own
/// matrix is a contraction matrix and `d = f`.
pub fn make_heat3d(params: HeatParams) -> Result<SystemModel> {
    if params.l < 2 {
        return Err(Error::InvalidParameter(format!("heat needs l >= 2, got {}", params.l)));
    }
    params
        .l
        .checked_pow(3)
        .ok_or_else(|| Error::InvalidParameter(format!("l = {} overflows the state dimension", params.l)))?;
    for (name, v) in [("alpha", params.alpha), ("h_exchange", params.h_exchange)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("heat parameter {name} = {v} must be nonnegative")));
        }
    }
    let delta = 1.0 / (params.l - 1) as f64;
    let heat = Heat {
        l: params.l,
        gain: params.alpha / (delta * delta),
        exchange: params.alpha * params.h_exchange / delta,
    };
    Ok(SystemModel::new("heat3d", heat)?
        .with_growth(heat)?
        .with_decomposition(heat)
        .input_affine(true)
        .with_note("7-point stencil"))
}
