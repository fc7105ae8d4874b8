//! Small test systems and the Van der Pol oscillator.

use crate::error::{Error, Result};
use crate::interval::IntervalVector;
use crate::models::bounds::{contraction, Iv};
use crate::system::{DenseGrowth, SystemModel};

/// `ẋ = 0` in `n` dimensions, with zero growth and `d = 0`.
pub fn make_zero(n: usize) -> Result<SystemModel> {
    if n == 0 {
        return Err(Error::InvalidParameter("zero model needs n >= 1".into()));
    }
    Ok(SystemModel::from_fn("zero", n, 0, |_, _, _, _| 0.0)?
        .with_growth_fn(|_, _, _, _| 0.0)?
        .with_decomposition_fn(|_, _, _, _, _, _| 0.0)
        .input_affine(true)
        .with_note("no coupling"))
}

/// Scalar `ẋ = a x + p` with growth `ṙ = a r + w` and `d = a x + p`.
pub fn make_scalar_linear(a: f64) -> Result<SystemModel> {
    if !a.is_finite() {
        return Err(Error::InvalidParameter(format!("a = {a} must be finite")));
    }
    Ok(SystemModel::from_fn("scalar-linear", 1, 1, move |_, _, x, p| a * x[0] + p[0])?
        .with_growth(DenseGrowth::with_identity_input(1, vec![a])?)?
        .with_decomposition_fn(move |_, _, x, p, _, _| a * x[0] + p[0])
        .input_affine(true)
        .with_note("scalar"))
}

/// Default Van der Pol operating box: covers every trajectory of the example
/// configuration (`x ∈ [1.25, 1.55]`, `y ∈ [2.35, 2.45]`, `t ≤ 0.5`).
pub fn vdp_operating_box() -> IntervalVector {
    IntervalVector::new(vec![1.1, -0.2], vec![2.4, 2.7]).expect("valid constant box")
}

/// Van der Pol oscillator `ẋ = y`, `ẏ = μ(1 − x²)y − x`.
pub fn make_vdp(mu: f64) -> Result<SystemModel> {
    make_vdp_on(mu, &vdp_operating_box())
}

/// Van der Pol with the contraction matrix bounded over `operating`.
pub fn make_vdp_on(mu: f64, operating: &IntervalVector) -> Result<SystemModel> {
    if !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("mu = {mu} must be finite")));
    }
    check_box(operating, 2)?;
    let x = Iv::new(operating.lower()[0], operating.upper()[0]);
    let y = Iv::new(operating.lower()[1], operating.upper()[1]);
    let c = contraction(2, |i, j| match (i, j) {
        (0, 0) => Iv::point(0.0),
        (0, 1) => Iv::point(1.0),
        (1, 0) => -2.0 * mu * x * y - 1.0,
        _ => mu * (1.0 - x.sqr()),
    });
    Ok(SystemModel::from_fn("vdp", 2, 0, move |i, _, s, _| {
        if i == 0 {
            s[1]
        } else {
            mu * (1.0 - s[0] * s[0]) * s[1] - s[0]
        }
    })?
    .with_growth(DenseGrowth::new(2, c)?)?
    .input_affine(true)
    .with_note("dense 2x2"))
}

pub(crate) fn check_box(b: &IntervalVector, n: usize) -> Result<()> {
    if b.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    Ok(())
}
