//! Single-track vehicle model with tire slip, BMW 320i parameters.
//!
//! States: `x1, x2` position, `x3` steering angle, `x4` velocity, `x5` yaw
//! angle, `x6` yaw rate, `x7` slip angle (stored zero-based as `x[0..7]`).
//! Inputs: `p1` steering rate, `p2` longitudinal acceleration, both passed
//! through the steering and acceleration saturation functions. Below
//! `|x4| < 0.1` the kinematic equations apply, otherwise the dynamic ones.

use crate::error::{Error, Result};
use crate::interval::IntervalVector;
use crate::models::bounds::{contraction, Iv};
use crate::models::simple::check_box;
use crate::system::{Dynamics, DenseGrowth, SystemModel};

/// Speed below which the kinematic equations are used.
pub const KINEMATIC_SPEED: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleTrackParams {
    pub l_wb: f64,
    pub m: f64,
    pub mu: f64,
    pub l_f: f64,
    pub l_r: f64,
    pub h_cg: f64,
    pub i_z: f64,
    pub c_sf: f64,
    pub c_sr: f64,
    pub g: f64,
    pub steer_min: f64,
    pub steer_max: f64,
    pub steer_rate_min: f64,
    pub steer_rate_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub v_switch: f64,
    pub a_max: f64,
}

impl Default for SingleTrackParams {
    fn default() -> Self {
        SingleTrackParams {
            l_wb: 2.5789,
            m: 1093.3,
            mu: 1.0489,
            l_f: 1.156,
            l_r: 1.422,
            h_cg: 0.6137,
            i_z: 1791.6,
            c_sf: 20.89,
            c_sr: 20.89,
            g: 9.81,
            steer_min: -0.910,
            steer_max: 0.910,
            steer_rate_min: -0.4,
            steer_rate_max: 0.4,
            v_min: -13.6,
            v_max: 50.8,
            v_switch: 7.319,
            a_max: 11.5,
        }
    }
}

impl SingleTrackParams {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("l_wb", self.l_wb),
            ("m", self.m),
            ("mu", self.mu),
            ("l_f", self.l_f),
            ("l_r", self.l_r),
            ("h_cg", self.h_cg),
            ("I_z", self.i_z),
            ("C_Sf", self.c_sf),
            ("C_Sr", self.c_sr),
            ("g", self.g),
            ("v_switch", self.v_switch),
            ("a_max", self.a_max),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("single-track parameter {name} = {v} must be positive")));
            }
        }
        if !(self.steer_min < self.steer_max
            && self.steer_rate_min < self.steer_rate_max
            && self.v_min < self.v_max)
        {
            return Err(Error::InvalidParameter("single-track limits must satisfy min < max".into()));
        }
        Ok(())
    }

    /// Steering-rate saturation.
    pub fn sat_steering(&self, steer: f64, rate: f64) -> f64 {
        if (steer <= self.steer_min && rate <= 0.0) || (steer >= self.steer_max && rate >= 0.0) {
            0.0
        } else {
            rate.clamp(self.steer_rate_min, self.steer_rate_max)
        }
    }

    /// Acceleration saturation; the positive limit drops as `1/v` above `v_switch`.
    pub fn sat_accel(&self, v: f64, a: f64) -> f64 {
        let limit = if v > self.v_switch {
            self.a_max * self.v_switch / v
        } else {
            self.a_max
        };
        if (v <= self.v_min && a <= 0.0) || (v >= self.v_max && a >= 0.0) {
            0.0
        } else if a <= -self.a_max {
            -self.a_max
        } else if a >= limit {
            limit
        } else {
            a
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct SingleTrack {
    p: SingleTrackParams,
}

impl SingleTrack {
    fn eval(&self, i: usize, x: &[f64], u: &[f64]) -> f64 {
        let q = &self.p;
        let steer_rate = q.sat_steering(x[2], u[0]);
        let a = q.sat_accel(x[3], u[1]);
        match i {
            2 => return steer_rate,
            3 => return a,
            _ => {}
        }
        if x[3].abs() < KINEMATIC_SPEED {
            match i {
                0 => x[3] * x[4].cos(),
                1 => x[3] * x[4].sin(),
                4 => x[3] / q.l_wb * x[2].tan(),
                5 => {
                    let c = x[2].cos();
                    a / q.l_wb * x[2].tan() + x[3] / (q.l_wb * c * c) * steer_rate
                }
                _ => 0.0,
            }
        } else {
            let lsum = q.l_r + q.l_f;
            let front = q.g * q.l_r - a * q.h_cg;
            let rear = q.g * q.l_f + a * q.h_cg;
            match i {
                0 => x[3] * (x[4] + x[6]).cos(),
                1 => x[3] * (x[4] + x[6]).sin(),
                4 => x[5],
                5 => {
                    q.mu * q.m / (q.i_z * lsum)
                        * (q.l_f * q.c_sf * front * x[2]
                            + (q.l_r * q.c_sr * rear - q.l_f * q.c_sf * front) * x[6]
                            - (q.l_f * q.l_f * q.c_sf * front + q.l_r * q.l_r * q.c_sr * rear) * x[5] / x[3])
                }
                _ => {
                    q.mu / (x[3] * lsum)
                        * (q.c_sf * front * x[2]
                            - (q.c_sr * rear + q.c_sf * front) * x[6]
                            + (q.c_sr * rear * q.l_r - q.c_sf * front * q.l_f) * x[5] / x[3])
                        - x[5]
                }
            }
        }
    }
}

impl Dynamics for SingleTrack {
    fn dim(&self) -> usize {
        7
    }

    fn input_dim(&self) -> usize {
        2
    }

    fn component(&self, i: usize, _t: f64, x: &[f64], p: &[f64]) -> f64 {
        self.eval(i, x, p)
    }
}

/// Default operating box, covering every trajectory of the example
/// configuration over one second.
pub fn single_track_operating_box() -> (IntervalVector, IntervalVector) {
    let states = IntervalVector::new(
        vec![-1.0, -1.0, -0.05, 14.0, -0.1, -0.1, -0.05],
        vec![20.0, 5.0, 0.05, 16.5, 0.2, 0.25, 0.05],
    )
    .expect("valid constant box");
    let inputs = IntervalVector::new(vec![-0.1, -1.0], vec![0.1, 1.0]).expect("valid constant box");
    (states, inputs)
}

pub fn make_single_track(params: SingleTrackParams) -> Result<SystemModel> {
    let (states, inputs) = single_track_operating_box();
    make_single_track_on(params, &states, &inputs)
}

/// Builds the model with a contraction matrix valid over `states × inputs`.
///
/// The box must stay in the dynamic regime and away from every saturation
/// limit, where the input-to-state coupling of the saturations vanishes.
pub fn make_single_track_on(
    params: SingleTrackParams,
    states: &IntervalVector,
    inputs: &IntervalVector,
) -> Result<SystemModel> {
    params.validate()?;
    check_box(states, 7)?;
    check_box(inputs, 2)?;
    let iv = |b: &IntervalVector, k: usize| Iv::new(b.lower()[k], b.upper()[k]);
    let [x3, x4, x5, x6, x7] = [2, 3, 4, 5, 6].map(|k| iv(states, k));
    let (p1, p2) = (iv(inputs, 0), iv(inputs, 1));
    if !(x4.lo >= KINEMATIC_SPEED) {
        return Err(Error::InvalidModel(
            "single-track operating box must keep x4 >= 0.1 (dynamic regime)".into(),
        ));
    }
    let q = params;
    let accel_limit = if x4.hi > q.v_switch { q.a_max * q.v_switch / x4.hi } else { q.a_max };
    let saturation_free = x3.lo > q.steer_min
        && x3.hi < q.steer_max
        && p1.lo >= q.steer_rate_min
        && p1.hi <= q.steer_rate_max
        && x4.lo > q.v_min
        && x4.hi < q.v_max
        && p2.lo > -q.a_max
        && p2.hi < accel_limit;
    if !saturation_free {
        return Err(Error::InvalidModel(
            "single-track operating box reaches an input saturation limit".into(),
        ));
    }

    let lsum = q.l_r + q.l_f;
    let front = q.g * q.l_r - p2 * q.h_cg;
    let rear = q.g * q.l_f + p2 * q.h_cg;
    let k6 = q.mu * q.m / (q.i_z * lsum);
    let a6 = q.l_f * q.c_sf * front;
    let b6 = q.l_r * q.c_sr * rear - q.l_f * q.c_sf * front;
    let d6 = q.l_f * q.l_f * q.c_sf * front + q.l_r * q.l_r * q.c_sr * rear;
    let m7 = q.mu / lsum;
    let a7 = q.c_sf * front;
    let b7 = q.c_sr * rear + q.c_sf * front;
    let e7 = q.c_sf * front * q.l_f - q.c_sr * rear * q.l_r;
    let heading = x5 + x7;

    let zero = Iv::point(0.0);
    let jac = |i: usize, j: usize| -> Iv {
        match (i, j) {
            (0, 3) => heading.cos(),
            (0, 4) | (0, 6) => -(x4 * heading.sin()),
            (1, 3) => heading.sin(),
            (1, 4) | (1, 6) => x4 * heading.cos(),
            (4, 5) => Iv::point(1.0),
            (5, 2) => k6 * a6,
            (5, 3) => k6 * d6 * x6 / x4.sqr(),
            (5, 5) => -(k6 * d6 / x4),
            (5, 6) => k6 * b6,
            (6, 2) => m7 * a7 / x4,
            (6, 3) => -(m7 * (a7 * x3 - b7 * x7)) / x4.sqr() + 2.0 * m7 * e7 * x6 / x4.powi(3),
            (6, 5) => -(m7 * e7) / x4.sqr() - 1.0,
            (6, 6) => -(m7 * b7 / x4),
            _ => zero,
        }
    };
    let c = contraction(7, jac);
    Ok(SystemModel::new("single-track", SingleTrack { p: params })?
        .with_growth(DenseGrowth::with_input_gain(7, 2, c, vec![0.0; 14])?)?
        .input_affine(false)
        .with_note("dense 7x7, hybrid"))
}
