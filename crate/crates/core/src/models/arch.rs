//! Laub-Loomis and the 12-state quadrotor from the ARCH nonlinear benchmarks.
//!
//! Both come with dense contraction matrices bounded over documented
//! operating boxes. The boxes cover every trajectory from the example
//! configurations; reachability from other initial sets needs a matching box.

use crate::error::Result;
use crate::interval::IntervalVector;
use crate::models::bounds::{contraction, Iv};
use crate::models::simple::check_box;
use crate::system::{DenseGrowth, SystemModel};

/// Initial box center `(1.2, 1.05, 1.5, 2.4, 1, 0.1, 0.45)` ± 0.01 up to `t = 2`.
pub fn laub_loomis_operating_box() -> IntervalVector {
    IntervalVector::new(
        vec![0.9, 0.75, 0.25, 1.6, 0.25, -0.05, 0.05],
        vec![1.6, 1.3, 1.65, 2.6, 1.15, 0.25, 0.6],
    )
    .expect("valid constant box")
}

pub fn make_laub_loomis() -> Result<SystemModel> {
    make_laub_loomis_on(&laub_loomis_operating_box())
}

pub fn make_laub_loomis_on(operating: &IntervalVector) -> Result<SystemModel> {
    check_box(operating, 7)?;
    let x: Vec<Iv> = (0..7)
        .map(|k| Iv::new(operating.lower()[k], operating.upper()[k]))
        .collect();
    let p = Iv::point;
    let c = contraction(7, |i, j| match (i, j) {
        (0, 0) => p(-0.9),
        (0, 2) => p(1.4),
        (1, 1) => p(-1.5),
        (1, 4) => p(2.5),
        (2, 1) => -0.8 * x[2],
        (2, 2) => -0.8 * x[1],
        (2, 6) => p(0.6),
        (3, 2) => -1.3 * x[3],
        (3, 3) => -1.3 * x[2],
        (4, 0) => p(0.7),
        (4, 3) => -x[4],
        (4, 4) => -x[3],
        (5, 0) => p(0.3),
        (5, 5) => p(-3.1),
        (6, 1) => -1.5 * x[6],
        (6, 5) => p(1.8),
        (6, 6) => -1.5 * x[1],
        _ => p(0.0),
    });
    Ok(SystemModel::from_fn("laub-loomis", 7, 0, |i, _, x, _| match i {
        0 => 1.4 * x[2] - 0.9 * x[0],
        1 => 2.5 * x[4] - 1.5 * x[1],
        2 => 0.6 * x[6] - 0.8 * x[1] * x[2],
        3 => 2.0 - 1.3 * x[2] * x[3],
        4 => 0.7 * x[0] - x[3] * x[4],
        5 => 0.3 * x[0] - 3.1 * x[5],
        _ => 1.8 * x[5] - 1.5 * x[1] * x[6],
    })?
    .with_growth(DenseGrowth::new(7, c)?)?
    .input_affine(true)
    .with_note("dense 7x7"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArchQuadrotorParams {
    pub g: f64,
    pub m: f64,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl Default for ArchQuadrotorParams {
    fn default() -> Self {
        ArchQuadrotorParams {
            g: 9.81,
            m: 1.4,
            jx: 0.054,
            jy: 0.054,
            jz: 0.104,
        }
    }
}

/// Positions and velocities in ±0.4 around hover, angles and rates at zero,
/// up to `t = 1`.
pub fn arch_quadrotor_operating_box() -> IntervalVector {
    let lo = vec![-1.0, -1.0, -0.5, -0.5, -0.5, -2.5, -0.05, -0.05, -0.05, -0.05, -0.05, -0.05];
    let hi = vec![1.0, 1.0, 1.4, 0.5, 0.5, 0.6, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05];
    IntervalVector::new(lo, hi).expect("valid constant box")
}

pub fn make_arch_quadrotor(params: ArchQuadrotorParams) -> Result<SystemModel> {
    make_arch_quadrotor_on(params, &arch_quadrotor_operating_box())
}

/// Quadrotor with the height and attitude controller closed around it:
/// `F = m g − 10(x3 − 1) + 3 x6`, `τφ = −x7 − x10`, `τθ = −x8 − x11`, `τψ = 0`.
pub fn make_arch_quadrotor_on(params: ArchQuadrotorParams, operating: &IntervalVector) -> Result<SystemModel> {
    check_box(operating, 12)?;
    let ArchQuadrotorParams { g, m, jx, jy, jz } = params;
    let b: Vec<Iv> = (0..12)
        .map(|k| Iv::new(operating.lower()[k], operating.upper()[k]))
        .collect();
    let (x4, x5, x6) = (b[3], b[4], b[5]);
    let (x10, x11, x12) = (b[9], b[10], b[11]);
    let (s7, c7) = (b[6].sin(), b[6].cos());
    let (s8, c8, t8) = (b[7].sin(), b[7].cos(), b[7].tan());
    let (s9, c9) = (b[8].sin(), b[8].cos());
    let p = Iv::point;
    let c = contraction(12, |i, j| match (i, j) {
        (0, 3) => c8 * c9,
        (0, 4) => s7 * s8 * c9 - c7 * s9,
        (0, 5) => c7 * s8 * c9 + s7 * s9,
        (0, 6) => (c7 * s8 * c9 + s7 * s9) * x5 + (c7 * s9 - s7 * s8 * c9) * x6,
        (0, 7) => -(s8 * c9 * x4) + s7 * c8 * c9 * x5 + c7 * c8 * c9 * x6,
        (0, 8) => -(c8 * s9 * x4) - (s7 * s8 * s9 + c7 * c9) * x5 + (s7 * c9 - c7 * s8 * s9) * x6,
        (1, 3) => c8 * s9,
        (1, 4) => s7 * s8 * s9 + c7 * c9,
        (1, 5) => c7 * s8 * s9 - s7 * c9,
        (1, 6) => (c7 * s8 * s9 - s7 * c9) * x5 - (s7 * s8 * s9 + c7 * c9) * x6,
        (1, 7) => -(s8 * s9 * x4) + s7 * c8 * s9 * x5 + c7 * c8 * s9 * x6,
        (1, 8) => c8 * c9 * x4 + (s7 * s8 * c9 - c7 * s9) * x5 + (c7 * s8 * c9 + s7 * s9) * x6,
        (2, 3) => s8,
        (2, 4) => -(s7 * c8),
        (2, 5) => -(c7 * c8),
        (2, 6) => -(c7 * c8 * x5) + s7 * c8 * x6,
        (2, 7) => c8 * x4 + s7 * s8 * x5 + c7 * s8 * x6,
        (3, 4) => x12,
        (3, 5) => -x11,
        (3, 7) => -(g * c8),
        (3, 10) => -x6,
        (3, 11) => x5,
        (4, 3) => -x12,
        (4, 5) => x10,
        (4, 6) => g * c8 * c7,
        (4, 7) => -(g * s8 * s7),
        (4, 9) => x6,
        (4, 11) => -x4,
        (5, 2) => p(10.0 / m),
        (5, 3) => x11,
        (5, 4) => -x10,
        (5, 5) => p(-3.0 / m),
        (5, 6) => -(g * c8 * s7),
        (5, 7) => -(g * s8 * c7),
        (5, 9) => -x5,
        (5, 10) => x4,
        (6, 6) => c7 * t8 * x11 - s7 * t8 * x12,
        (6, 7) => (s7 * x11 + c7 * x12) / c8.sqr(),
        (6, 9) => p(1.0),
        (6, 10) => s7 * t8,
        (6, 11) => c7 * t8,
        (7, 6) => -(s7 * x11) - c7 * x12,
        (7, 10) => c7,
        (7, 11) => -s7,
        (8, 6) => (c7 * x11 - s7 * x12) / c8,
        (8, 7) => (s7 * x11 + c7 * x12) * s8 / c8.sqr(),
        (8, 10) => s7 / c8,
        (8, 11) => c7 / c8,
        (9, 6) | (9, 9) => p(-1.0 / jx),
        (9, 10) => (jy - jz) / jx * x12,
        (9, 11) => (jy - jz) / jx * x11,
        (10, 7) | (10, 10) => p(-1.0 / jy),
        (10, 9) => (jz - jx) / jy * x12,
        (10, 11) => (jz - jx) / jy * x10,
        (11, 9) => (jx - jy) / jz * x11,
        (11, 10) => (jx - jy) / jz * x10,
        _ => p(0.0),
    });
    Ok(SystemModel::from_fn("arch-quadrotor", 12, 0, move |i, _, x, _| {
        let (s7, c7) = x[6].sin_cos();
        let (s8, c8) = x[7].sin_cos();
        let (s9, c9) = x[8].sin_cos();
        match i {
            0 => c8 * c9 * x[3] + (s7 * s8 * c9 - c7 * s9) * x[4] + (c7 * s8 * c9 + s7 * s9) * x[5],
            1 => c8 * s9 * x[3] + (s7 * s8 * s9 + c7 * c9) * x[4] + (c7 * s8 * s9 - s7 * c9) * x[5],
            2 => s8 * x[3] - s7 * c8 * x[4] - c7 * c8 * x[5],
            3 => x[11] * x[4] - x[10] * x[5] - g * s8,
            4 => x[9] * x[5] - x[11] * x[3] + g * c8 * s7,
            5 => {
                let thrust = m * g - 10.0 * (x[2] - 1.0) + 3.0 * x[5];
                x[10] * x[3] - x[9] * x[4] + g * c8 * c7 - thrust / m
            }
            6 => x[9] + s7 * (s8 / c8) * x[10] + c7 * (s8 / c8) * x[11],
            7 => c7 * x[10] - s7 * x[11],
            8 => (s7 * x[10] + c7 * x[11]) / c8,
            9 => {
                let tau = -x[6] - x[9];
                (jy - jz) / jx * x[10] * x[11] + tau / jx
            }
            10 => {
                let tau = -x[7] - x[10];
                (jz - jx) / jy * x[9] * x[11] + tau / jy
            }
            _ => (jx - jy) / jz * x[9] * x[10],
        }
    })?
    .with_growth(DenseGrowth::new(12, c)?)?
    .input_affine(true)
    .with_note("dense 12x12"))
}
