//! Cell transmission model of a highway split into `n` segments.
//!
//! State `x_i` is the car density of segment `i`. Flow from segment `i` to
//! `i + 1` is `min(c, v x_i, w (x̄ − x_{i+1}) / β)` and a fraction `β` of it
//! stays on the road. The inflow into segment 0 is the input `p`; the last
//! segment drains freely with outflow `min(c, v x_{n−1})`.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::system::{Decomposition, Dynamics, SystemModel};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrafficParams {
    pub n: usize,
    /// Free-flow speed.
    pub v: f64,
    /// Congestion wave speed.
    pub w: f64,
    /// Segment capacity.
    pub c: f64,
    /// Jam density.
    pub x_bar: f64,
    /// Time constant.
    pub t_c: f64,
    /// Fraction of the flow that stays on the highway.
    pub beta: f64,
}

impl Default for TrafficParams {
    fn default() -> Self {
        TrafficParams {
            n: 50,
            v: 0.5,
            w: 1.0 / 6.0,
            c: 40.0,
            x_bar: 320.0,
            t_c: 30.0,
            beta: 0.75,
        }
    }
}

impl TrafficParams {
    fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidParameter(format!("traffic needs n >= 3, got {}", self.n)));
        }
        for (name, v) in [
            ("v", self.v),
            ("w", self.w),
            ("c", self.c),
            ("x_bar", self.x_bar),
            ("T", self.t_c),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("traffic parameter {name} = {v} must be positive")));
            }
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::InvalidParameter(format!("beta = {} must lie in (0, 1]", self.beta)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
struct Traffic {
    p: TrafficParams,
}

impl Traffic {
    /// Flow out of segment `i` given its density and the next segment's.
    #[inline]
    fn flow(&self, xi: f64, next: f64) -> f64 {
        let q = &self.p;
        q.c.min(q.v * xi).min(q.w * (q.x_bar - next) / q.beta)
    }

    #[inline]
    fn last_flow(&self, xi: f64) -> f64 {
        self.p.c.min(self.p.v * xi)
    }

    #[inline]
    fn eval(&self, i: usize, x: &[f64], inflow: f64) -> f64 {
        let n = self.p.n;
        let into = if i == 0 {
            inflow
        } else {
            self.p.beta * self.flow(x[i - 1], x[i])
        };
        let out = if i + 1 == n {
            self.last_flow(x[i])
        } else {
            self.flow(x[i], x[i + 1])
        };
        (into - out) / self.p.t_c
    }
}

impl Dynamics for Traffic {
    fn dim(&self) -> usize {
        self.p.n
    }

    fn input_dim(&self) -> usize {
        1
    }

    fn component(&self, i: usize, _t: f64, x: &[f64], p: &[f64]) -> f64 {
        self.eval(i, x, p[0])
    }

    fn eval_block(&self, range: Range<usize>, _t: f64, x: &[f64], p: &[f64], out: &mut [f64]) {
        for (o, i) in out.iter_mut().zip(range) {
            *o = self.eval(i, x, p[0]);
        }
    }
}

/// Every off-diagonal Jacobian entry is nonnegative, so `d(x, p, x̂, p̂) = f(x, p)`.
impl Decomposition for Traffic {
    fn component(&self, i: usize, _t: f64, x: &[f64], p: &[f64], _x_hat: &[f64], _p_hat: &[f64]) -> f64 {
        self.eval(i, x, p[0])
    }
}

/// Tridiagonal growth dynamics: the inflow term has slope at most `βv/T` in
/// `x_{i−1}`, the outflow supply term at most `w/(βT)` in `x_{i+1}`, and the
/// diagonal slopes are all nonpositive.
#[derive(Clone, Copy, Debug)]
struct TrafficGrowth {
    n: usize,
    lower: f64,
    upper: f64,
    input: f64,
}

impl TrafficGrowth {
    #[inline]
    fn eval(&self, i: usize, r: &[f64], w: f64) -> f64 {
        let mut g = if i == 0 { self.input * w } else { self.lower * r[i - 1] };
        if i + 1 < self.n {
            g += self.upper * r[i + 1];
        }
        g
    }
}

impl Dynamics for TrafficGrowth {
    fn dim(&self) -> usize {
        self.n
    }

    fn input_dim(&self) -> usize {
        1
    }

    fn component(&self, i: usize, _t: f64, r: &[f64], w: &[f64]) -> f64 {
        self.eval(i, r, w[0])
    }

    fn eval_block(&self, range: Range<usize>, _t: f64, r: &[f64], w: &[f64], out: &mut [f64]) {
        for (o, i) in out.iter_mut().zip(range) {
            *o = self.eval(i, r, w[0]);
        }
    }
}

pub fn make_traffic(params: TrafficParams) -> Result<SystemModel> {
    params.validate()?;
    let model = Traffic { p: params };
    let growth = TrafficGrowth {
        n: params.n,
        lower: params.beta * params.v / params.t_c,
        upper: params.w / (params.beta * params.t_c),
        input: 1.0 / params.t_c,
    };
    Ok(SystemModel::new("traffic", model)?
        .with_growth(growth)?
        .with_decomposition(model)
        .input_affine(true)
        .with_note("tridiagonal"))
}
