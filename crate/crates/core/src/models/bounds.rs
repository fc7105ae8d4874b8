//! Just enough interval arithmetic to bound Jacobian entries of the small
//! benchmark models over their operating boxes. Results are enclosures up to
//! floating-point rounding; callers add a margin where it matters.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Iv {
    pub lo: f64,
    pub hi: f64,
}

impl Iv {
    pub fn new(lo: f64, hi: f64) -> Iv {
        debug_assert!(lo <= hi, "[{lo}, {hi}]");
        Iv { lo, hi }
    }

    pub fn point(v: f64) -> Iv {
        Iv { lo: v, hi: v }
    }

    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    fn hull4(a: f64, b: f64, c: f64, d: f64) -> Iv {
        Iv::new(a.min(b).min(c).min(d), a.max(b).max(c).max(d))
    }

    pub fn sqr(self) -> Iv {
        if self.lo >= 0.0 {
            Iv::new(self.lo * self.lo, self.hi * self.hi)
        } else if self.hi <= 0.0 {
            Iv::new(self.hi * self.hi, self.lo * self.lo)
        } else {
            Iv::new(0.0, self.mag() * self.mag())
        }
    }

    pub fn powi(self, k: u32) -> Iv {
        match k {
            0 => Iv::point(1.0),
            1 => self,
            _ if k.is_multiple_of(2) => self.sqr().powi(k / 2),
            _ => self * self.powi(k - 1),
        }
    }

    /// Sine, using the fact that extrema sit at π/2 + kπ.
    pub fn sin(self) -> Iv {
        if self.hi - self.lo >= TAU {
            return Iv::new(-1.0, 1.0);
        }
        let (a, b) = (self.lo.sin(), self.hi.sin());
        let mut lo = a.min(b);
        let mut hi = a.max(b);
        let first_max = ((self.lo - FRAC_PI_2) / TAU).ceil();
        if FRAC_PI_2 + first_max * TAU <= self.hi {
            hi = 1.0;
        }
        let first_min = ((self.lo + FRAC_PI_2) / TAU).ceil();
        if -FRAC_PI_2 + first_min * TAU <= self.hi {
            lo = -1.0;
        }
        Iv::new(lo, hi)
    }

    pub fn cos(self) -> Iv {
        (self + Iv::point(FRAC_PI_2)).sin()
    }

    /// Tangent on an interval inside one branch `(-π/2, π/2) + kπ`.
    pub fn tan(self) -> Iv {
        let k = ((self.lo + FRAC_PI_2) / PI).floor();
        assert!(
            self.hi < FRAC_PI_2 + k * PI,
            "tan bound requested across a pole: [{}, {}]",
            self.lo,
            self.hi
        );
        Iv::new(self.lo.tan(), self.hi.tan())
    }
}

impl From<f64> for Iv {
    fn from(v: f64) -> Iv {
        Iv::point(v)
    }
}

impl Add for Iv {
    type Output = Iv;
    fn add(self, o: Iv) -> Iv {
        Iv::new(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Sub for Iv {
    type Output = Iv;
    fn sub(self, o: Iv) -> Iv {
        Iv::new(self.lo - o.hi, self.hi - o.lo)
    }
}

impl Neg for Iv {
    type Output = Iv;
    fn neg(self) -> Iv {
        Iv::new(-self.hi, -self.lo)
    }
}

impl Mul for Iv {
    type Output = Iv;
    fn mul(self, o: Iv) -> Iv {
        Iv::hull4(self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
    }
}

impl Div for Iv {
    type Output = Iv;
    fn div(self, o: Iv) -> Iv {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by an interval containing zero");
        self * Iv::new(1.0 / o.hi, 1.0 / o.lo)
    }
}

impl Add<f64> for Iv {
    type Output = Iv;
    fn add(self, o: f64) -> Iv {
        self + Iv::point(o)
    }
}

impl Sub<f64> for Iv {
    type Output = Iv;
    fn sub(self, o: f64) -> Iv {
        self - Iv::point(o)
    }
}

impl Mul<f64> for Iv {
    type Output = Iv;
    fn mul(self, o: f64) -> Iv {
        self * Iv::point(o)
    }
}

impl Div<f64> for Iv {
    type Output = Iv;
    fn div(self, o: f64) -> Iv {
        self / Iv::point(o)
    }
}

impl Mul<Iv> for f64 {
    type Output = Iv;
    fn mul(self, o: Iv) -> Iv {
        Iv::point(self) * o
    }
}

impl Add<Iv> for f64 {
    type Output = Iv;
    fn add(self, o: Iv) -> Iv {
        Iv::point(self) + o
    }
}

impl Sub<Iv> for f64 {
    type Output = Iv;
    fn sub(self, o: Iv) -> Iv {
        Iv::point(self) - o
    }
}

/// Contraction matrix from interval Jacobian entries: the diagonal keeps the
/// upper bound, off-diagonals take the magnitude. Every entry gets a relative
/// and absolute safety margin to absorb rounding in the enclosure itself.
pub(crate) fn contraction(n: usize, jac: impl Fn(usize, usize) -> Iv) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let e = jac(i, j);
            let v = if i == j { e.hi } else { e.mag() };
            c[i * n + j] = v + 1e-9 * (1.0 + v.abs());
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn contains(iv: Iv, v: f64) -> bool {
        iv.lo - 1e-12 <= v && v <= iv.hi + 1e-12
    }

    #[test]
    fn arithmetic() {
        let a = Iv::new(-1.0, 2.0);
        let b = Iv::new(3.0, 4.0);
        assert_eq!(a + b, Iv::new(2.0, 6.0));
        assert_eq!(a - b, Iv::new(-5.0, -1.0));
        assert_eq!(a * b, Iv::new(-4.0, 8.0));
        assert_eq!(a.sqr(), Iv::new(0.0, 4.0));
        assert_eq!(a.powi(3), Iv::new(-4.0, 8.0));
        assert_eq!(Iv::new(1.0, 2.0) / Iv::new(2.0, 4.0), Iv::new(0.25, 1.0));
        assert_eq!(Iv::new(0.0, PI).sin().hi, 1.0);
        assert_eq!(Iv::new(3.0, 3.5).cos().lo, -1.0);
    }

    #[test]
    fn contraction_takes_upper_diagonal_and_magnitude() {
        let c = contraction(2, |i, j| if i == j { Iv::new(-3.0, -1.0) } else { Iv::new(-2.0, 0.5) });
        assert!((c[0] + 1.0).abs() < 1e-8);
        assert!((c[1] - 2.0).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn trig_enclosures(lo in -10.0f64..10.0, w in 0.0f64..7.0, u in 0.0f64..1.0) {
            let iv = Iv::new(lo, lo + w);
            let x = lo + u * w;
            prop_assert!(contains(iv.sin(), x.sin()));
            prop_assert!(contains(iv.cos(), x.cos()));
        }

        #[test]
        fn tan_and_powers(lo in -1.4f64..1.3, w in 0.0f64..0.1, u in 0.0f64..1.0, k in 0u32..5) {
            let iv = Iv::new(lo, lo + w);
            let x = lo + u * w;
            prop_assert!(contains(iv.tan(), x.tan()));
            prop_assert!(contains(iv.powi(k), x.powi(k as i32)));
        }
    }
}
