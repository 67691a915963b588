//! Generalized zero sets: limits of points where `|f|` gets arbitrarily small.
//!
//! The closure of the graph meets the zero level exactly at the points
//! `x₀` reached by some sequence `x_ν → x₀` with `f(x_ν) → 0`. On a sample
//! this becomes: collect the samples with `|f| ≤ ε`, add their grid
//! neighbours (the nearest limit positions the sample can resolve), then
//! thin the candidates to a `δ`-net.

use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expr::PiecewiseFn;
use crate::geometry::{dist, GridIndex, PointSet};

pub const DEFAULT_EPS: f64 = 1e-4;
pub const DEFAULT_DELTA: f64 = 1e-2;
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub abs_f: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroSetEstimate {
    pub candidates: PointSet,
    /// One witness per candidate, same order.
    pub witnesses: Vec<Witness>,
    pub eps: f64,
    pub delta: f64,
    pub n_samples: usize,
    pub pitch: f64,
}

pub fn gamma_zero_set(
    f: &PiecewiseFn,
    domain: &Domain,
    eps: f64,
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<ZeroSetEstimate> {
    gamma_zero_set_with(f, domain, eps, delta, samples, seed, Exec::auto())
}

pub fn gamma_zero_set_with(
    f: &PiecewiseFn,
    domain: &Domain,
    eps: f64,
    delta: f64,
    samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<ZeroSetEstimate> {
    if !(eps > 0.0) {
        return Err(Error::NonPositive { name: "eps", value: eps });
    }
    if !(delta > 0.0) {
        return Err(Error::NonPositive {
            name: "delta",
            value: delta,
        });
    }
    let sample = domain.sample(samples, seed)?;
    let values = exec
        .map(&sample.points, |p| f.eval(p).map(f64::abs))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    Ok(zero_set_from_values(
        &sample.points,
        &values,
        eps,
        delta,
        sample.pitch,
    ))
}

/// Zero-set estimate from precomputed `|f|` values at `points`.
pub fn zero_set_from_values(
    points: &[Vec<f64>],
    abs_f: &[f64],
    eps: f64,
    delta: f64,
    pitch: f64,
) -> ZeroSetEstimate {
    let dim = points.first().map_or(1, Vec::len);
    let small: Vec<usize> = (0..points.len()).filter(|&i| abs_f[i] <= eps).collect();
    let reach = delta.min(pitch * (1.0 + 1e-6));

    // candidate index -> index of its witness in `points`
    let mut witness_of: Vec<Option<usize>> = vec![None; points.len()];
    let small_pts: Vec<Vec<f64>> = small.iter().map(|&i| points[i].clone()).collect();
    let index = GridIndex::build(&small_pts, reach.max(f64::MIN_POSITIVE));
    for &i in &small {
        witness_of[i] = Some(i);
    }
    if !small.is_empty() && reach > 0.0 {
        for (i, p) in points.iter().enumerate() {
            if witness_of[i].is_some() {
                continue;
            }
            let near = index.within(&small_pts, p, reach);
            let best = near.into_iter().min_by(|&a, &b| {
                dist(&small_pts[a], p)
                    .total_cmp(&dist(&small_pts[b], p))
                    .then(a.cmp(&b))
            });
            witness_of[i] = best.map(|k| small[k]);
        }
    }

    let mut cand: Vec<usize> = (0..points.len()).filter(|&i| witness_of[i].is_some()).collect();
    cand.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]).then(a.cmp(&b)));

    // Leader clustering: scanning in lexicographic order, a candidate opens a
    // new cluster unless it is within delta of an existing representative.
    let mut reps: Vec<Vec<f64>> = Vec::new();
    let mut witnesses = Vec::new();
    let mut rep_index = GridIndex::new(dim, delta);
    for i in cand {
        let p = &points[i];
        if rep_index.any_within(&reps, p, delta) {
            continue;
        }
        rep_index.insert(p, reps.len());
        reps.push(p.clone());
        let w = witness_of[i].expect("candidate has a witness");
        witnesses.push(Witness {
            point: points[w].clone(),
            abs_f: abs_f[w],
        });
    }
    let candidates = PointSet::with_tol(dim, reps, 0.0).expect("uniform dimension");
    ZeroSetEstimate {
        candidates,
        witnesses,
        eps,
        delta,
        n_samples: points.len(),
        pitch,
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Checks `f⁻¹(0)^γ ⊆ g⁻¹(0)` on an estimate: every candidate has
/// `|g| ≤ tol`. Returns the offending candidates.
pub fn zero_set_inclusion(est: &ZeroSetEstimate, g: &PiecewiseFn, tol: f64) -> Result<Vec<Vec<f64>>> {
    let mut bad = Vec::new();
    for p in est.candidates.iter() {
        if g.eval(p)?.abs() > tol {
            bad.push(p.clone());
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn positive_function_has_no_zeros() {
        let f = parse("x1^2 + 1").unwrap();
        let d = Domain::interval(-1.0, 1.0).unwrap();
        let est = gamma_zero_set(&f, &d, 0.5, 1e-2, 1000, 1).unwrap();
        assert!(est.candidates.is_empty());
    }

    #[test]
    fn witnesses_are_close_and_small() {
        let f = parse("x1 * (x1 - 1)").unwrap();
        let d = Domain::interval(-0.5, 1.5).unwrap();
        let est = gamma_zero_set(&f, &d, 1e-3, 1e-2, 2001, 3).unwrap();
        assert!(!est.candidates.is_empty());
        for (c, w) in est.candidates.iter().zip(&est.witnesses) {
            assert!(dist(c, &w.point) <= est.delta);
            assert!(w.abs_f <= est.eps);
        }
    }

    #[test]
    fn parameter_checks() {
        let f = parse("x1").unwrap();
        let d = Domain::interval(0.0, 1.0).unwrap();
        assert!(matches!(
            gamma_zero_set(&f, &d, 0.0, 1.0, 10, 0),
            Err(Error::NonPositive { name: "eps", .. })
        ));
        assert!(matches!(
            gamma_zero_set(&f, &d, 1.0, -1.0, 10, 0),
            Err(Error::NonPositive { name: "delta", .. })
        ));
    }
}
