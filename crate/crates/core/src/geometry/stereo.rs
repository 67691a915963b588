//! One-point compactification of `R^n` through the unit sphere `S^n`.
//!
//! The projection is taken from the north pole `p = (0, …, 0, 1)` onto the
//! hyperplane `x_{n+1} = -1`, identified with `R^n`:
//! `s(x)_i = 2 x_i / (1 − x_{n+1})`.

use serde::Serialize;

use super::{hausdorff_with, PointSet};
use crate::error::{Error, Result};
use crate::exec::Exec;

pub const TOL_POLE: f64 = 1e-6;
pub const TOL_SPHERE: f64 = 1e-12;
/// Diameter of the unit sphere.
pub const SPHERE_DIAM: f64 = 2.0;

pub fn stereo_project(x: &[f64]) -> Result<Vec<f64>> {
    let (last, head) = x
        .split_last()
        .ok_or(Error::DimensionMismatch { expected: 2, found: 0 })?;
    if *last >= 1.0 - TOL_POLE {
        return Err(Error::Pole { point: x.to_vec() });
    }
    let denom = 1.0 - last;
    Ok(head.iter().map(|v| 2.0 * v / denom).collect())
}

/// Inverse of [`stereo_project`]. With `r = ‖y‖`,
/// `x_i = 4 y_i / (r² + 4)` and `x_{n+1} = (r² − 4) / (r² + 4)`, evaluated
/// in a scaled form that stays finite for huge `r`.
pub fn stereo_lift(y: &[f64]) -> Vec<f64> {
    let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut x = Vec::with_capacity(y.len() + 1);
    if r == 0.0 {
        x.extend(std::iter::repeat_n(0.0, y.len()));
        x.push(-1.0);
        return x;
    }
    if !r.is_finite() {
        x.extend(std::iter::repeat_n(0.0, y.len()));
        x.push(1.0);
        return x;
    }
    if r <= 2.0 {
        let s = r * r;
        x.extend(y.iter().map(|v| 4.0 * v / (s + 4.0)));
        x.push((s - 4.0) / (s + 4.0));
    } else {
        let q = 4.0 / r;
        let denom = r + q;
        x.extend(y.iter().map(|v| 4.0 * (v / r) / denom));
        x.push((r - q) / denom);
    }
    x
}

/// Finite subset of the unit sphere `S^n ⊂ R^{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpherePointSet {
    inner: PointSet,
}

impl SpherePointSet {
    pub fn new(set: PointSet) -> Result<Self> {
        for p in set.iter() {
            let norm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > TOL_SPHERE * 10.0 {
                return Err(Error::Invalid(format!("point {p:?} is not on the unit sphere")));
            }
        }
        Ok(Self { inner: set })
    }

    /// `h(K) ∪ {p}` for a finite sample `K ⊂ R^n`.
    pub fn lift_with_pole(k: &PointSet) -> Self {
        let n = k.dim();
        let mut pts: Vec<Vec<f64>> = k.iter().map(|y| stereo_lift(y)).collect();
        let mut pole = vec![0.0; n + 1];
        pole[n] = 1.0;
        pts.push(pole);
        Self {
            inner: PointSet::new(n + 1, pts).expect("lifted points share a dimension"),
        }
    }

    pub fn as_point_set(&self) -> &PointSet {
        &self.inner
    }
}

/// Kuratowski distance between closed sets sampled by `k` and `l`.
///
/// On samples of unbounded sets this is only an approximation: a finite
/// sample cannot reach the pole.
pub fn kuratowski_dist(k: &PointSet, l: &PointSet) -> Result<f64> {
    kuratowski_dist_with(k, l, Exec::auto())
}

pub fn kuratowski_dist_with(k: &PointSet, l: &PointSet, exec: Exec) -> Result<f64> {
    match (k.is_empty(), l.is_empty()) {
        (true, true) => return Ok(0.0),
        (true, false) | (false, true) => return Ok(SPHERE_DIAM + 1.0),
        (false, false) => {}
    }
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: l.dim(),
        });
    }
    let a = SpherePointSet::lift_with_pole(k);
    let b = SpherePointSet::lift_with_pole(l);
    hausdorff_with(a.as_point_set(), b.as_point_set(), exec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dist, hausdorff};

    #[test]
    fn fixed_points_of_the_formula() {
        assert_eq!(stereo_project(&[0.0, 0.0, -1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(stereo_project(&[1.0, 0.0, 0.0]).unwrap(), vec![2.0, 0.0]);
        assert_eq!(stereo_lift(&[0.0, 0.0]), vec![0.0, 0.0, -1.0]);
        assert_eq!(stereo_lift(&[2.0]), vec![1.0, 0.0]);
        assert!(matches!(stereo_project(&[0.0, 1.0]), Err(Error::Pole { .. })));
    }

    #[test]
    fn far_points_approach_the_pole() {
        let x = stereo_lift(&[1e6, 0.0]);
        assert!(dist(&x, &[0.0, 0.0, 1.0]) < 1e-5);
        let x = stereo_lift(&[1e300, 1e300]);
        assert!(x.iter().all(|v| v.is_finite()));
        assert!(dist(&x, &[0.0, 0.0, 1.0]) < 1e-12);
    }

    #[test]
    fn kuratowski_examples() {
        let z = PointSet::from_scalars(&[0.0]);
        let e = PointSet::empty(1);
        assert_eq!(kuratowski_dist(&z, &z).unwrap(), 0.0);
        assert_eq!(kuratowski_dist(&e, &z).unwrap(), 3.0);
        let mut prev = 0.0;
        for m in [1.0, 10.0, 100.0, 1e4] {
            let km = PointSet::from_scalars(&[m]);
            let d = kuratowski_dist(&km, &z).unwrap();
            assert!(d <= SPHERE_DIAM && d >= prev);
            assert_eq!(hausdorff(&km, &z).unwrap(), m);
            prev = d;
        }
    }
}
