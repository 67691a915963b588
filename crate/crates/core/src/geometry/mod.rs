//! Finite point sets, distances and the Hausdorff metric.

mod index;
mod io;
mod stereo;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;

pub use index::GridIndex;
pub use io::{read_points, write_points};
pub use stereo::{
    kuratowski_dist, kuratowski_dist_with, stereo_lift, stereo_project, SpherePointSet,
    SPHERE_DIAM, TOL_POLE, TOL_SPHERE,
};

/// Global point tolerance: two points closer than this are the same point.
pub const TOL_PT: f64 = 1e-9;

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Finite set of points in `R^n`, deduplicated at a tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            points: Vec::new(),
        }
    }

    /// Builds a set with [`TOL_PT`] deduplication; the first of any group of
    /// coincident points is kept.
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tol(dim, points, TOL_PT)
    }

    pub fn with_tol(dim: usize, points: Vec<Vec<f64>>, tol: f64) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        if tol <= 0.0 {
            return Ok(Self { dim, points });
        }
        let mut index = GridIndex::new(dim, tol);
        let mut kept = Vec::with_capacity(points.len());
        for p in points {
            if index.any_within(&kept, &p, tol) {
                continue;
            }
            index.insert(&p, kept.len());
            kept.push(p);
        }
        Ok(Self { dim, points: kept })
    }

    pub fn from_scalars(values: &[f64]) -> Self {
        Self::new(1, values.iter().map(|v| vec![*v]).collect()).expect("dimension 1")
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

    pub fn into_points(self) -> Vec<Vec<f64>> {
        self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<f64>> {
        self.points.iter()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.points.iter().any(|p| dist(p, x) <= tol)
    }

    /// Every point of `self` lies within `tol` of `other`.
    pub fn is_subset_of(&self, other: &PointSet, tol: f64) -> bool {
        self.points.iter().all(|p| other.contains(p, tol))
    }

    pub fn approx_eq(&self, other: &PointSet, tol: f64) -> bool {
        self.is_subset_of(other, tol) && other.is_subset_of(self, tol)
    }

    pub fn intersects(&self, other: &PointSet, tol: f64) -> bool {
        self.points.iter().any(|p| other.contains(p, tol))
    }

    pub fn diam(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.points.iter().enumerate() {
            for b in &self.points[i + 1..] {
                d = d.max(dist(a, b));
            }
        }
        d
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: dim,
            });
        }
        Ok(())
    }
}

/// `min_{a ∈ A} ‖x − a‖`.
pub fn dist_point_set(x: &[f64], a: &PointSet) -> Result<f64> {
    a.check_dim(x.len())?;
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(min_dist2(x, &a.points).sqrt())
}

fn min_dist2(x: &[f64], pts: &[Vec<f64>]) -> f64 {
    pts.iter().map(|p| dist2(x, p)).fold(f64::INFINITY, f64::min)
}

/// `max_{a ∈ A} d(a, B)`, by brute force.
pub fn directed_hausdorff(a: &PointSet, b: &PointSet, exec: Exec) -> f64 {
    exec.max_by(&a.points, |p| min_dist2(p, &b.points))
        .unwrap_or(0.0)
        .sqrt()
}

pub fn hausdorff(a: &PointSet, b: &PointSet) -> Result<f64> {
    hausdorff_with(a, b, Exec::auto())
}

pub fn hausdorff_with(a: &PointSet, b: &PointSet, exec: Exec) -> Result<f64> {
    a.check_dim(b.dim)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(directed_hausdorff(a, b, exec).max(directed_hausdorff(b, a, exec)))
}

/// Hausdorff distance extended to the empty set: `ambient_diam + 1` when
/// exactly one side is empty, `0` when both are.
pub fn hausdorff_ext(a: &PointSet, b: &PointSet, ambient_diam: f64) -> Result<f64> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => Ok(0.0),
        (true, false) | (false, true) => Ok(ambient_diam + 1.0),
        (false, false) => hausdorff(a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pts: &[&[f64]]) -> PointSet {
        let dim = pts.first().map_or(1, |p| p.len());
        PointSet::new(dim, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn dedup_at_tolerance() {
        let s = PointSet::from_scalars(&[0.0, 1e-12, 1.0, 1.0 + 5e-10, 2.0]);
        assert_eq!(s.points(), &[vec![0.0], vec![1.0], vec![2.0]]);
    }

    #[test]
    fn point_to_set() {
        let a = PointSet::from_scalars(&[1.0]);
        assert_eq!(dist_point_set(&[0.0], &a).unwrap(), 1.0);
        assert_eq!(dist_point_set(&[1.0], &a).unwrap(), 0.0);
        assert_eq!(dist_point_set(&[0.0], &PointSet::empty(1)), Err(Error::EmptySet));
        assert!(matches!(
            dist_point_set(&[0.0, 0.0], &a),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hausdorff_examples() {
        let a = PointSet::from_scalars(&[0.0, 2.0]);
        let b = PointSet::from_scalars(&[1.0]);
        assert_eq!(hausdorff(&a, &b).unwrap(), 1.0);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&set(&[&[0.0, 0.0]]), &set(&[&[3.0, 4.0]])).unwrap(), 5.0);
        assert_eq!(hausdorff(&a, &PointSet::empty(1)), Err(Error::EmptySet));
    }

    #[test]
    fn extended_convention() {
        let e = PointSet::empty(1);
        let z = PointSet::from_scalars(&[0.0]);
        assert_eq!(hausdorff_ext(&e, &z, 2.0).unwrap(), 3.0);
        assert_eq!(hausdorff_ext(&z, &e, 2.0).unwrap(), 3.0);
        assert_eq!(hausdorff_ext(&e, &e, 2.0).unwrap(), 0.0);
        assert_eq!(hausdorff_ext(&z, &z, 2.0).unwrap(), 0.0);
    }
}
