//! Closest points `m(x)`, their dual regions `N(a)`, the medial axis and
//! closedness checks for the associated preimages.

mod closed;
mod loja;

use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{dist, dist2, PointSet, TOL_PT};
use crate::multifun::{PreimageKind, SampledMultifunction};

pub use closed::{
    check_closed, m_preimage_rounds, n_preimage_rounds, n_region_rounds, nested_per_axis,
    ClosedVerdict, NRound, ResolvedSet, MIN_ROUNDS,
};
pub use loja::{medial_loja, MedialKind, MedialLojaOptions};

/// Finite sample of a closed set `X ⊂ R^n`.
///
/// An exact sample (`pitch = None`) is the set itself, e.g. `{0, 1}`; a
/// continuum sample carries the spacing of the points along `X`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedSetSample {
    points: PointSet,
    pitch: Option<f64>,
}

impl ClosedSetSample {
    pub fn exact(points: PointSet) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(Self { points, pitch: None })
    }

    pub fn continuum(points: PointSet, pitch: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        if !(pitch > 0.0) {
            return Err(Error::NonPositive { name: "pitch", value: pitch });
        }
        Ok(Self {
            points,
            pitch: Some(pitch),
        })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn pitch(&self) -> Option<f64> {
        self.pitch
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    /// `2 × pitch` for continuum samples, [`TOL_PT`] for exact ones.
    pub fn default_tol_med(&self) -> f64 {
        self.pitch.map_or(TOL_PT, |p| 2.0 * p)
    }

    /// Smallest distance at which two closest points count as different
    /// points of `X` rather than neighbouring samples of one point.
    pub fn base_sep(&self) -> f64 {
        self.pitch.map_or(TOL_PT, |p| 2.0 * p)
    }

    /// Index of the sample point `a` refers to: the nearest one, which must
    /// lie within the sample resolution.
    pub fn snap(&self, a: &[f64]) -> Result<usize> {
        if a.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.len(),
            });
        }
        let (i, d) = nearest(self.points.points(), a);
        let reach = self.pitch.unwrap_or(TOL_PT);
        if d > reach {
            return Err(Error::NotInSet { point: a.to_vec() });
        }
        Ok(i)
    }
}

fn nearest(pts: &[Vec<f64>], x: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, p) in pts.iter().enumerate() {
        let d = dist2(p, x);
        if d < best.1 {
            best = (i, d);
        }
    }
    (best.0, best.1.sqrt())
}

/// Indices of the sample points within `d(x, X) + tol_med` of `x`.
pub fn closest_indices(x_set: &ClosedSetSample, x: &[f64], tol_med: f64) -> Vec<usize> {
    let pts = x_set.points.points();
    let d = nearest(pts, x).1;
    (0..pts.len())
        .filter(|&i| dist(&pts[i], x) <= d + tol_med)
        .collect()
}

/// `m(x) = {y ∈ X : ‖y − x‖ = d(x, X)}` at tolerance `tol_med`.
pub fn closest_points(x_set: &ClosedSetSample, x: &[f64], tol_med: f64) -> Result<PointSet> {
    if x.len() != x_set.dim() {
        return Err(Error::DimensionMismatch {
            expected: x_set.dim(),
            found: x.len(),
        });
    }
    if !(tol_med > 0.0) {
        return Err(Error::NonPositive {
            name: "tol_med",
            value: tol_med,
        });
    }
    let pts = x_set.points.points();
    let idx = closest_indices(x_set, x, tol_med);
    PointSet::with_tol(x_set.dim(), idx.into_iter().map(|i| pts[i].clone()).collect(), 0.0)
}

/// `N(a) = {x : a ∈ m(x)}` over the samples of `D`.
pub fn n_region(
    x_set: &ClosedSetSample,
    a: &[f64],
    domain: &Domain,
    samples: usize,
    seed: u64,
    tol_med: f64,
) -> Result<PointSet> {
    let sample = domain.sample(samples, seed)?;
    n_region_on(x_set, a, &sample.points, tol_med, Exec::auto())
}

pub fn n_region_on(
    x_set: &ClosedSetSample,
    a: &[f64],
    points: &[Vec<f64>],
    tol_med: f64,
    exec: Exec,
) -> Result<PointSet> {
    let ai = x_set.snap(a)?;
    let a = &x_set.points.points()[ai];
    let keep = exec.map(points, |x| dist(a, x) <= nearest(x_set.points.points(), x).1 + tol_med);
    let pts = points
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p.clone())
        .collect();
    PointSet::with_tol(x_set.dim(), pts, 0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MedialAxisEstimate {
    pub axis: PointSet,
    /// Number of mutually separated closest points, per axis point.
    pub multiplicity: Vec<usize>,
    /// Distance to the nearest point of `X` away from the nearest one,
    /// minus the nearest distance, per axis point.
    pub gap: Vec<f64>,
    pub tol_med: f64,
    pub n_samples: usize,
    pub pitch: f64,
}

/// Closest-point structure at `x`: `(multiplicity, gap)`.
///
/// Near-minimisers of a regular point spread over a chord of about
/// `2·sqrt(2·tol·d)` on a flat piece of `X`, so closest points count as
/// distinct only when farther apart than three times that chord (and never
/// below [`ClosedSetSample::base_sep`]).
pub fn closest_structure(x_set: &ClosedSetSample, x: &[f64], tol_med: f64) -> (usize, f64) {
    let pts = x_set.points.points();
    let (ni, d) = nearest(pts, x);
    let chord = 2.0 * (tol_med * (2.0 * d + tol_med)).sqrt();
    let sep = x_set.base_sep().max(3.0 * chord);
    let near: Vec<usize> = (0..pts.len())
        .filter(|&i| dist(&pts[i], x) <= d + tol_med)
        .collect();
    let mut reps: Vec<usize> = vec![ni];
    for &i in &near {
        if reps.iter().all(|&r| dist(&pts[r], &pts[i]) > sep) {
            reps.push(i);
        }
    }
    let second = (0..pts.len())
        .filter(|&i| dist(&pts[i], &pts[ni]) > sep)
        .map(|i| dist(&pts[i], x))
        .fold(f64::INFINITY, f64::min);
    let gap = if second.is_finite() { second - d } else { f64::INFINITY };
    (reps.len(), gap)
}

pub fn medial_axis(
    x_set: &ClosedSetSample,
    domain: &Domain,
    samples: usize,
    seed: u64,
    tol_med: f64,
) -> Result<MedialAxisEstimate> {
    medial_axis_with(x_set, domain, samples, seed, tol_med, Exec::auto())
}

pub fn medial_axis_with(
    x_set: &ClosedSetSample,
    domain: &Domain,
    samples: usize,
    seed: u64,
    tol_med: f64,
    exec: Exec,
) -> Result<MedialAxisEstimate> {
    if domain.dim() != x_set.dim() {
        return Err(Error::DimensionMismatch {
            expected: x_set.dim(),
            found: domain.dim(),
        });
    }
    let sample = domain.sample(samples, seed)?;
    let info = exec.map(&sample.points, |x| closest_structure(x_set, x, tol_med));
    let mut pts = Vec::new();
    let mut multiplicity = Vec::new();
    let mut gap = Vec::new();
    for (p, (m, g)) in sample.points.iter().zip(info) {
        if m >= 2 {
            pts.push(p.clone());
            multiplicity.push(m);
            gap.push(g);
        }
    }
    Ok(MedialAxisEstimate {
        axis: PointSet::with_tol(x_set.dim(), pts, 0.0)?,
        multiplicity,
        gap,
        tol_med,
        n_samples: sample.points.len(),
        pitch: sample.pitch,
    })
}

/// The multifunction `x ↦ m(x)` on the given points.
pub fn m_multifunction(
    x_set: &ClosedSetSample,
    points: Vec<Vec<f64>>,
    tol_med: f64,
    exec: Exec,
) -> Result<SampledMultifunction> {
    let values = exec
        .map(&points, |x| closest_points(x_set, x, tol_med))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    SampledMultifunction::new(x_set.dim(), x_set.dim(), points.into_iter().zip(values).collect())
}

/// The multifunction `y ↦ N(y) ∩ W` for the sample points `y` of `X` listed
/// in `ys`, each region sampled on the window points `window`.
pub fn n_multifunction(
    x_set: &ClosedSetSample,
    ys: &[usize],
    window: &[Vec<f64>],
    tol_med: f64,
    exec: Exec,
) -> Result<SampledMultifunction> {
    let owners = exec.map(window, |x| closest_indices(x_set, x, tol_med));
    let n = x_set.points.points().len();
    let mut regions: Vec<Vec<Vec<f64>>> = vec![Vec::new(); n];
    for (x, own) in window.iter().zip(&owners) {
        for &i in own {
            regions[i].push(x.clone());
        }
    }
    let dim = x_set.dim();
    let mut samples = Vec::with_capacity(ys.len());
    for &y in ys {
        let region = std::mem::take(&mut regions[y]);
        samples.push((
            x_set.points.points()[y].clone(),
            PointSet::with_tol(dim, region, 0.0)?,
        ));
    }
    SampledMultifunction::new(dim, dim, samples)
}

/// Whether `N(p) ∩ N(q)` meets the window box, decided exactly for `n ≤ 2`
/// by intersecting the bisector of `p, q` with the half-spaces where `p` is
/// at least as close as every other point of `X`.
pub fn voronoi_adjacent(pts: &[Vec<f64>], p: usize, q: usize, window: &Domain, slack: f64) -> Result<bool> {
    if p == q {
        return Ok(true);
    }
    let dim = window.dim();
    let (pp, qq) = (&pts[p], &pts[q]);
    let sq = |v: &[f64]| v.iter().map(|c| c * c).sum::<f64>();
    let mid: Vec<f64> = pp.iter().zip(qq).map(|(a, b)| 0.5 * (a + b)).collect();
    match dim {
        1 => {
            if !window.contains(&mid)? {
                return Ok(false);
            }
            let dp = (mid[0] - pp[0]).abs();
            Ok(pts.iter().all(|r| (mid[0] - r[0]).abs() >= dp - slack))
        }
        2 => {
            let dx = qq[0] - pp[0];
            let dy = qq[1] - pp[1];
            let len = (dx * dx + dy * dy).sqrt();
            let u = [-dy / len, dx / len];
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            let mut clip = |a: f64, b: f64| {
                // a·t ≤ b
                if a.abs() < 1e-300 {
                    if b < 0.0 {
                        lo = f64::INFINITY;
                    }
                } else if a > 0.0 {
                    hi = hi.min(b / a);
                } else {
                    lo = lo.max(b / a);
                }
            };
            for d in 0..2 {
                clip(u[d], window.hi()[d] - mid[d]);
                clip(-u[d], mid[d] - window.lo()[d]);
            }
            let pn = sq(pp);
            for (i, r) in pts.iter().enumerate() {
                if i == p || i == q {
                    continue;
                }
                let w = [2.0 * (r[0] - pp[0]), 2.0 * (r[1] - pp[1])];
                let a = w[0] * u[0] + w[1] * u[1];
                let b = sq(r) - pn - (w[0] * mid[0] + w[1] * mid[1]) + slack;
                clip(a, b);
            }
            Ok(lo <= hi)
        }
        _ => Err(Error::Invalid(
            "exact region adjacency is implemented for dimensions 1 and 2".into(),
        )),
    }
}

/// `N^#(N(a)) ∩ W`: sample points `y` of `X` whose region meets `N(a)`
/// inside the window.
pub fn n_weak_preimage(x_set: &ClosedSetSample, a: &[f64], window: &Domain, slack: f64) -> Result<PointSet> {
    let ai = x_set.snap(a)?;
    let pts = x_set.points.points();
    let mut out = Vec::new();
    for j in 0..pts.len() {
        if voronoi_adjacent(pts, ai, j, window, slack)? {
            out.push(pts[j].clone());
        }
    }
    PointSet::with_tol(x_set.dim(), out, 0.0)
}

/// Preimage of `N(a)` over the sample points of `X`. The weak kind uses the
/// exact adjacency test; the others compare regions on the window grid.
pub fn n_preimage(
    x_set: &ClosedSetSample,
    a: &[f64],
    kind: PreimageKind,
    window: &Domain,
    window_per_axis: usize,
    tol_med: f64,
) -> Result<PointSet> {
    if kind == PreimageKind::Weak && x_set.dim() <= 2 {
        return n_weak_preimage(x_set, a, window, TOL_PT);
    }
    let ai = x_set.snap(a)?;
    let grid = window.grid(window_per_axis)?;
    let all: Vec<usize> = (0..x_set.points.len()).collect();
    let mf = n_multifunction(x_set, &all, &grid, tol_med, Exec::auto())?;
    let fa = mf.values()[ai].clone();
    let mut out = vec![x_set.points.points()[ai].clone()];
    for (y, fy) in mf.xs().iter().zip(mf.values()) {
        let holds = match kind {
            PreimageKind::Strong => fy.len() == fa.len() && fy.is_subset_of(&fa, TOL_PT),
            PreimageKind::Lower => !fy.is_empty() && fy.is_subset_of(&fa, TOL_PT),
            PreimageKind::Upper => fa.is_subset_of(fy, TOL_PT),
            PreimageKind::Weak => fy.intersects(&fa, TOL_PT),
        };
        if holds {
            out.push(y.clone());
        }
    }
    PointSet::new(x_set.dim(), out)
}
