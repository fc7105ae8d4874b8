//! Swarms of `K` identical quadrotors, optionally coupled by an artificial
//! potential field.
//!
//! Each quadrotor owns 12 consecutive states
//! `[p_n, p_e, h, φ, θ, ψ, v_n, v_e, v_h, ω_φ, ω_θ, ω_ψ]` and 3 consecutive
//! inputs `[τ_φ, τ_θ, τ_ψ]`. Thrust `F` is a fixed parameter, which keeps the
//! system input-affine; its default `m g` is the hover thrust.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::system::{Dynamics, SystemModel};

pub const QUAD_STATES: usize = 12;
pub const QUAD_INPUTS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadrotorParams {
    pub k: usize,
    pub thrust: f64,
    pub mass: f64,
    pub g: f64,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl Default for QuadrotorParams {
    fn default() -> Self {
        QuadrotorParams {
            k: 1,
            thrust: 1.4 * 9.81,
            mass: 1.4,
            g: 9.81,
            jx: 0.054,
            jy: 0.054,
            jz: 0.104,
        }
    }
}

impl QuadrotorParams {
    fn validate(&self, min_k: usize) -> Result<()> {
        if self.k < min_k {
            return Err(Error::InvalidParameter(format!("swarm needs K >= {min_k}, got {}", self.k)));
        }
        self.k
            .checked_mul(QUAD_STATES)
            .ok_or_else(|| Error::InvalidParameter(format!("K = {} overflows the state dimension", self.k)))?;
        for (name, v) in [
            ("F", self.thrust),
            ("m", self.mass),
            ("g", self.g),
            ("Jx", self.jx),
            ("Jy", self.jy),
            ("Jz", self.jz),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("quadrotor parameter {name} = {v} must be positive")));
            }
        }
        Ok(())
    }
}

/// Potential-field gains: repulsion `F_r` and attraction `F_a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ApfParams {
    pub f_r: f64,
    pub f_a: f64,
}

impl Default for ApfParams {
    fn default() -> Self {
        ApfParams { f_r: 1.0, f_a: 0.1 }
    }
}

#[derive(Clone, Copy, Debug)]
struct Quad {
    p: QuadrotorParams,
    apf: Option<ApfParams>,
}

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Potential-field force on quadrotor `q` along position axis `axis`.
/// The nearest other quadrotor wins; ties go to the lowest index.
pub fn apf_force(x: &[f64], k: usize, q: usize, axis: usize, apf: ApfParams) -> f64 {
    let own = x[q * QUAD_STATES + axis];
    let mut best = f64::INFINITY;
    let mut diff = 0.0;
    for j in (0..k).filter(|&j| j != q) {
        let d = own - x[j * QUAD_STATES + axis];
        if d.abs() < best {
            best = d.abs();
            diff = d;
        }
    }
    apf.f_r * sgn(diff) * (-diff.abs()).exp() - apf.f_a * sgn(own)
}

impl Quad {
    #[inline]
    fn eval(&self, idx: usize, x: &[f64], p: &[f64]) -> f64 {
        let q = idx / QUAD_STATES;
        let s = &x[q * QUAD_STATES..(q + 1) * QUAD_STATES];
        let u = &p[q * QUAD_INPUTS..(q + 1) * QUAD_INPUTS];
        let a = self.p.thrust / self.p.mass;
        let local = idx % QUAD_STATES;
        let base = match local {
            0..=5 => s[local + 6],
            6 => {
                let (sphi, cphi) = s[3].sin_cos();
                let (spsi, cpsi) = s[5].sin_cos();
                a * (-cphi * s[4].sin() * cpsi - sphi * spsi)
            }
            7 => {
                let (sphi, cphi) = s[3].sin_cos();
                let (spsi, cpsi) = s[5].sin_cos();
                a * (-cphi * s[4].sin() * spsi + sphi * cpsi)
            }
            8 => self.p.g - a * s[3].cos() * s[4].cos(),
            9 => u[0] / self.p.jx,
            10 => u[1] / self.p.jy,
            _ => u[2] / self.p.jz,
        };
        match (self.apf, local) {
            (Some(apf), 6..=8) => base + apf_force(x, self.p.k, q, local - 6, apf),
            _ => base,
        }
    }
}

impl Dynamics for Quad {
    fn dim(&self) -> usize {
        self.p.k * QUAD_STATES
    }

    fn input_dim(&self) -> usize {
        self.p.k * QUAD_INPUTS
    }

    fn component(&self, i: usize, _t: f64, x: &[f64], p: &[f64]) -> f64 {
        self.eval(i, x, p)
    }

    fn eval_block(&self, range: Range<usize>, _t: f64, x: &[f64], p: &[f64], out: &mut [f64]) {
        for (o, i) in out.iter_mut().zip(range) {
            *o = self.eval(i, x, p);
        }
    }
}

/// Growth dynamics valid on the whole state space.
///
/// Every partial derivative of the translational accelerations with respect
/// to an angle is an entry of a rotation matrix times `F/m`, so it is bounded
/// by `F/m`. With the potential field, every position on the same axis
/// contributes at most `F_r`. The field jumps where a position difference to
/// the nearest neighbor or a quadrotor's own position crosses zero, so with
/// `F_r > 0` or `F_a > 0` the bound only covers tubes that stay clear of
/// those crossings.
#[derive(Clone, Copy, Debug)]
struct QuadGrowth {
    k: usize,
    accel: f64,
    inv_j: [f64; 3],
    f_r: Option<f64>,
}

impl QuadGrowth {
    #[inline]
    fn eval(&self, idx: usize, r: &[f64], w: &[f64], axis_sums: &[f64; 3]) -> f64 {
        let q = idx / QUAD_STATES;
        let s = &r[q * QUAD_STATES..(q + 1) * QUAD_STATES];
        let local = idx % QUAD_STATES;
        match local {
            0..=5 => s[local + 6],
            6..=8 => {
                let angles = if local == 8 { s[3] + s[4] } else { s[3] + s[4] + s[5] };
                let mut g = self.accel * angles;
                if let Some(f_r) = self.f_r {
                    g += f_r * axis_sums[local - 6];
                }
                g
            }
            _ => self.inv_j[local - 9] * w[q * QUAD_INPUTS + local - 9],
        }
    }

    fn axis_sums(&self, r: &[f64]) -> [f64; 3] {
        let mut sums = [0.0; 3];
        if self.f_r.is_some() {
            for block in r.chunks_exact(QUAD_STATES) {
                for (s, v) in sums.iter_mut().zip(&block[..3]) {
                    *s += v;
                }
            }
        }
        sums
    }
}

impl Dynamics for QuadGrowth {
    fn dim(&self) -> usize {
        self.k * QUAD_STATES
    }

    fn input_dim(&self) -> usize {
        self.k * QUAD_INPUTS
    }

    fn component(&self, i: usize, _t: f64, r: &[f64], w: &[f64]) -> f64 {
        self.eval(i, r, w, &self.axis_sums(r))
    }

    fn eval_block(&self, range: Range<usize>, _t: f64, r: &[f64], w: &[f64], out: &mut [f64]) {
        let sums = self.axis_sums(r);
        for (o, i) in out.iter_mut().zip(range) {
            *o = self.eval(i, r, w, &sums);
        }
    }
}

fn build(name: &str, p: QuadrotorParams, apf: Option<ApfParams>, note: &str) -> Result<SystemModel> {
    let growth = QuadGrowth {
        k: p.k,
        accel: p.thrust / p.mass,
        inv_j: [1.0 / p.jx, 1.0 / p.jy, 1.0 / p.jz],
        f_r: apf.map(|a| a.f_r),
    };
    Ok(SystemModel::new(name, Quad { p, apf })?
        .with_growth(growth)?
        .input_affine(true)
        .with_note(note))
}

/// `K` decoupled quadrotors, `n = 12K`.
pub fn make_quadrotor_swarm(params: QuadrotorParams) -> Result<SystemModel> {
    params.validate(1)?;
    build("quadrotor-swarm", params, None, "block diagonal, 12x12 blocks")
}

/// `K` quadrotors pushed apart and toward the origin by potential-field forces.
pub fn make_quadrotor_apf(params: QuadrotorParams, apf: ApfParams) -> Result<SystemModel> {
    params.validate(2)?;
    for (name, v) in [("F_r", apf.f_r), ("F_a", apf.f_a)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!("potential gain {name} = {v} must be nonnegative")));
        }
    }
    build("quadrotor-apf", params, Some(apf), "dense position coupling")
}
