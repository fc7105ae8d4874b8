//! Axis-aligned boxes and point sets.
//!
//! A box `[lower, upper]` is closed: points on the boundary are members. Boxes
//! are always non-empty and finite; an inverted or non-finite bound is rejected
//! at construction time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed axis-aligned box `{x : lower <= x <= upper}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox")]
pub struct IntervalVector {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

#[derive(Deserialize)]
struct RawBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<RawBox> for IntervalVector {
    type Error = Error;

    fn try_from(raw: RawBox) -> Result<Self> {
        IntervalVector::new(raw.lower, raw.upper)
    }
}

impl IntervalVector {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidInterval(format!(
                    "component {i} has a non-finite bound [{lo}, {hi}]"
                )));
            }
            if lo > hi {
                return Err(Error::InvalidInterval(format!(
                    "component {i} is inverted: lower {lo} > upper {hi}"
                )));
            }
        }
        Ok(IntervalVector { lower, upper })
    }

    /// Degenerate box containing the single point `x`.
    pub fn point(x: &[f64]) -> Result<Self> {
        IntervalVector::new(x.to_vec(), x.to_vec())
    }

    /// Box with zero components, used as the input set of input-free models.
    pub fn empty_dims() -> Self {
        IntervalVector {
            lower: Vec::new(),
            upper: Vec::new(),
        }
    }

    pub fn from_center_radius(center: &[f64], radius: &[f64]) -> Result<Self> {
        if center.len() != radius.len() {
            return Err(Error::DimensionMismatch {
                expected: center.len(),
                found: radius.len(),
            });
        }
        if let Some(i) = radius.iter().position(|r| !(*r >= 0.0)) {
            return Err(Error::InvalidInterval(format!(
                "component {i} has negative radius {}",
                radius[i]
            )));
        }
        let lower = center.iter().zip(radius).map(|(c, r)| c - r).collect();
        let upper = center.iter().zip(radius).map(|(c, r)| c + r).collect();
        IntervalVector::new(lower, upper)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn into_bounds(self) -> (Vec<f64>, Vec<f64>) {
        (self.lower, self.upper)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi + lo) / 2.0)
            .collect()
    }

    pub fn half_width(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| (hi - lo) / 2.0)
            .collect()
    }

    /// True when every component has zero width.
    pub fn is_degenerate(&self) -> bool {
        self.lower.iter().zip(&self.upper).all(|(lo, hi)| lo == hi)
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(self
            .lower
            .iter()
            .zip(&self.upper)
            .zip(x)
            .all(|((lo, hi), v)| lo <= v && v <= hi))
    }

    /// `self ⊆ other`.
    pub fn subset_of(&self, other: &IntervalVector) -> Result<bool> {
        self.check_dim(other.dim())?;
        Ok((0..self.dim())
            .all(|i| other.lower[i] <= self.lower[i] && self.upper[i] <= other.upper[i]))
    }

    /// Index of the first component of `x` outside the box, if any.
    pub fn first_violation(&self, x: &[f64]) -> Result<Option<usize>> {
        self.check_dim(x.len())?;
        Ok((0..self.dim()).find(|&i| !(self.lower[i] <= x[i] && x[i] <= self.upper[i])))
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }
}

/// Finite collection of points of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        PointSet {
            dim,
            points: Vec::new(),
        }
    }

    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or(Error::EmptyPointSet)?;
        let mut set = PointSet::new(dim);
        for p in points {
            set.push(p)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, point: Vec<f64>) -> Result<()> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: point.len(),
            });
        }
        self.points.push(point);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Smallest box containing every point.
    pub fn hull(&self) -> Result<IntervalVector> {
        let (first, rest) = self.points.split_first().ok_or(Error::EmptyPointSet)?;
        let mut hull = RunningHull::new(first);
        for p in rest {
            hull.include(p);
        }
        hull.finish()
    }
}

/// Elementwise running minimum and maximum.
///
/// Min/max use the IEEE total order so that `-0.0` and `0.0` are merged the
/// same way whatever the visiting order is.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct RunningHull {
    pub(crate) lower: Vec<f64>,
    pub(crate) upper: Vec<f64>,
}

impl RunningHull {
    pub(crate) fn new(first: &[f64]) -> Self {
        RunningHull {
            lower: first.to_vec(),
            upper: first.to_vec(),
        }
    }

    pub(crate) fn include(&mut self, x: &[f64]) {
        for ((lo, hi), &v) in self.lower.iter_mut().zip(self.upper.iter_mut()).zip(x) {
            *lo = total_min(*lo, v);
            *hi = total_max(*hi, v);
        }
    }

    pub(crate) fn merge(&mut self, other: &RunningHull) {
        for i in 0..self.lower.len() {
            self.lower[i] = total_min(self.lower[i], other.lower[i]);
            self.upper[i] = total_max(self.upper[i], other.upper[i]);
        }
    }

    pub(crate) fn finish(self) -> Result<IntervalVector> {
        IntervalVector::new(self.lower, self.upper)
    }
}

fn total_min(a: f64, b: f64) -> f64 {
    if b.total_cmp(&a).is_lt() {
        b
    } else {
        a
    }
}

fn total_max(a: f64, b: f64) -> f64 {
    if b.total_cmp(&a).is_gt() {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(lower: &[f64], upper: &[f64]) -> IntervalVector {
        IntervalVector::new(lower.to_vec(), upper.to_vec()).unwrap()
    }

    #[test]
    fn center_examples() {
        assert_eq!(b(&[0.0], &[2.0]).center(), vec![1.0]);
        assert_eq!(b(&[-1.0], &[1.0]).center(), vec![0.0]);
        assert_eq!(b(&[1.0, -2.0], &[4.0, 0.0]).center(), vec![2.5, -1.0]);
    }

    #[test]
    fn half_width_examples() {
        assert_eq!(b(&[0.0], &[2.0]).half_width(), vec![1.0]);
        assert_eq!(b(&[3.0], &[3.0]).half_width(), vec![0.0]);
        assert_eq!(b(&[1.0, -2.0], &[4.0, 0.0]).half_width(), vec![1.5, 1.0]);
    }

    #[test]
    fn from_center_radius_examples() {
        assert_eq!(
            IntervalVector::from_center_radius(&[1.0], &[1.0]).unwrap(),
            b(&[0.0], &[2.0])
        );
        let origin = IntervalVector::from_center_radius(&[0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert_eq!(origin, b(&[0.0, 0.0], &[0.0, 0.0]));
        assert!(origin.is_degenerate());
        assert_eq!(
            IntervalVector::from_center_radius(&[2.5, -1.0], &[1.5, 1.0]).unwrap(),
            b(&[1.0, -2.0], &[4.0, 0.0])
        );
        assert!(matches!(
            IntervalVector::from_center_radius(&[0.0], &[-1.0]),
            Err(Error::InvalidInterval(_))
        ));
    }

    #[test]
    fn construction_rejects_bad_bounds() {
        assert!(IntervalVector::new(vec![1.0], vec![0.0]).is_err());
        assert!(IntervalVector::new(vec![f64::NAN], vec![0.0]).is_err());
        assert!(IntervalVector::new(vec![0.0], vec![f64::INFINITY]).is_err());
        assert!(IntervalVector::new(vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn contains_examples() {
        assert!(b(&[0.0], &[2.0]).contains(&[1.0]).unwrap());
        assert!(b(&[0.0], &[2.0]).contains(&[2.0]).unwrap());
        assert!(!b(&[0.0, 0.0], &[2.0, 2.0]).contains(&[1.0, 3.0]).unwrap());
        assert!(matches!(
            b(&[0.0], &[2.0]).contains(&[1.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hull_examples() {
        let h = PointSet::from_points(vec![vec![1.0]]).unwrap().hull().unwrap();
        assert_eq!(h, b(&[1.0], &[1.0]));
        let h = PointSet::from_points(vec![vec![0.0, 1.0], vec![1.0, 0.0]])
            .unwrap()
            .hull()
            .unwrap();
        assert_eq!(h, b(&[0.0, 0.0], &[1.0, 1.0]));
        let h = PointSet::from_points(vec![vec![-1.0, 2.0], vec![3.0, -4.0], vec![0.0, 0.0]])
            .unwrap()
            .hull()
            .unwrap();
        assert_eq!(h, b(&[-1.0, -4.0], &[3.0, 2.0]));
        assert!(matches!(PointSet::new(2).hull(), Err(Error::EmptyPointSet)));
    }

    #[test]
    fn subset_examples() {
        assert!(b(&[0.0], &[1.0]).subset_of(&b(&[0.0], &[1.0])).unwrap());
        assert!(b(&[0.0], &[1.0]).subset_of(&b(&[-1.0], &[2.0])).unwrap());
        assert!(!b(&[0.0], &[3.0]).subset_of(&b(&[0.0], &[2.0])).unwrap());
    }

    #[test]
    fn json_round_trip_and_validation() {
        let iv = b(&[0.1, -1.0 / 3.0], &[0.2, 1e-300]);
        let text = serde_json::to_string(&iv).unwrap();
        assert!(text.starts_with("{\"lower\":["));
        let back: IntervalVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, iv);
        assert!(serde_json::from_str::<IntervalVector>(r#"{"lower":[1.0],"upper":[0.0]}"#).is_err());
    }

    fn arb_box(dim: usize) -> impl Strategy<Value = IntervalVector> {
        proptest::collection::vec((-1e6f64..1e6, 0f64..1e6), dim).prop_map(|v| {
            let lower: Vec<f64> = v.iter().map(|(a, _)| *a).collect();
            let upper: Vec<f64> = v.iter().map(|(a, w)| a + w).collect();
            IntervalVector::new(lower, upper).unwrap()
        })
    }

    proptest! {
        #[test]
        fn center_radius_round_trip_within_ulp(iv in arb_box(4)) {
            let back = IntervalVector::from_center_radius(&iv.center(), &iv.half_width()).unwrap();
            for i in 0..4 {
                // Round-off scales with the largest bound of the component.
                let scale = iv.lower()[i].abs().max(iv.upper()[i].abs()).max(f64::MIN_POSITIVE);
                for (a, b) in [(back.lower()[i], iv.lower()[i]), (back.upper()[i], iv.upper()[i])] {
                    let ulp = f64::EPSILON * scale;
                    prop_assert!((a - b).abs() <= 2.0 * ulp, "{a} vs {b}");
                }
            }
        }

        #[test]
        fn hull_contains_points_and_grows(
            pts in proptest::collection::vec(proptest::collection::vec(-1e3f64..1e3, 3), 1..20),
            extra in proptest::collection::vec(-1e3f64..1e3, 3),
        ) {
            let set = PointSet::from_points(pts.clone()).unwrap();
            let h = set.hull().unwrap();
            for p in &pts {
                prop_assert!(h.contains(p).unwrap());
            }
            let mut bigger = set.clone();
            bigger.push(extra).unwrap();
            prop_assert!(h.subset_of(&bigger.hull().unwrap()).unwrap());
        }

        #[test]
        fn subset_is_partial_order(a in arb_box(3), b in arb_box(3), c in arb_box(3)) {
            prop_assert!(a.subset_of(&a).unwrap());
            if a.subset_of(&b).unwrap() && b.subset_of(&a).unwrap() {
                prop_assert_eq!(&a, &b);
            }
            if a.subset_of(&b).unwrap() && b.subset_of(&c).unwrap() {
                prop_assert!(a.subset_of(&c).unwrap());
            }
        }
    }
}
