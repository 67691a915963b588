use serde::Serialize;

use super::{closest_indices, closest_points, n_preimage, ClosedSetSample};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geometry::{dist, GridIndex, TOL_PT};
use crate::multifun::PreimageKind;
use crate::zeroset::lex_cmp;

pub const MIN_ROUNDS: usize = 3;

/// A set computed by scanning `tested` points at one resolution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedSet {
    pub members: Vec<Vec<f64>>,
    pub tested: Vec<Vec<f64>>,
    pub pitch: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ClosedVerdict {
    ConsistentWithClosed,
    WitnessOfNonclosedness {
        point: Vec<f64>,
        /// `d(x₀, S_k)` per round.
        distances: Vec<f64>,
    },
}

impl ClosedVerdict {
    pub fn witness(&self) -> Option<&[f64]> {
        match self {
            ClosedVerdict::ConsistentWithClosed => None,
            ClosedVerdict::WitnessOfNonclosedness { point, .. } => Some(point),
        }
    }
}

/// Points per axis of refinement round `k` for nested grids.
pub fn nested_per_axis(base: usize, k: usize) -> usize {
    (base.max(2) - 1) * (1 << k) + 1
}

/// Looks for a limit point of `S` outside `S`.
///
/// A witness `x₀` is tested in every round, never a member, lies within two
/// pitches of the members in every round, and its distances `d_k` to the
/// members extrapolate to zero: the least-squares line `d_k ≈ δ + β·pitch_k`
/// has `δ ≤ pitch_last / 4`. At least [`MIN_ROUNDS`] rounds are required.
/// Among several witnesses the one closest to the finest members is
/// reported.
pub fn check_closed(rounds: &[ResolvedSet]) -> Result<ClosedVerdict> {
    if rounds.len() < MIN_ROUNDS {
        return Err(Error::Invalid(format!(
            "closedness needs at least {MIN_ROUNDS} resolutions, got {}",
            rounds.len()
        )));
    }
    let indices: Vec<(GridIndex, GridIndex)> = rounds
        .iter()
        .map(|r| {
            (
                GridIndex::build(&r.tested, TOL_PT),
                GridIndex::build(&r.members, TOL_PT),
            )
        })
        .collect();
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    'cand: for x0 in &rounds[0].tested {
        let mut distances = Vec::with_capacity(rounds.len());
        for (r, (tested, members)) in rounds.iter().zip(&indices) {
            if !tested.any_within(&r.tested, x0, TOL_PT) || members.any_within(&r.members, x0, TOL_PT) {
                continue 'cand;
            }
            let d = r
                .members
                .iter()
                .map(|m| dist(m, x0))
                .fold(f64::INFINITY, f64::min);
            if !(d <= 2.0 * r.pitch) {
                continue 'cand;
            }
            distances.push(d);
        }
        let pitches: Vec<f64> = rounds.iter().map(|r| r.pitch).collect();
        let fine = *distances.last().expect("at least one round");
        if extrapolated_gap(&pitches, &distances) > 0.25 * pitches[pitches.len() - 1] {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bd, bp, _)) => fine < *bd || (fine == *bd && lex_cmp(x0, bp).is_lt()),
        };
        if better {
            best = Some((fine, x0.clone(), distances));
        }
    }
    Ok(match best {
        None => ClosedVerdict::ConsistentWithClosed,
        Some((_, point, distances)) => ClosedVerdict::WitnessOfNonclosedness { point, distances },
    })
}

/// Intercept of the least-squares line through `(pitch_k, d_k)`; the mean
/// distance when all pitches agree.
fn extrapolated_gap(pitches: &[f64], d: &[f64]) -> f64 {
    let n = d.len() as f64;
    let mx = pitches.iter().sum::<f64>() / n;
    let my = d.iter().sum::<f64>() / n;
    let sxx: f64 = pitches.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= f64::EPSILON * mx * mx {
        return my;
    }
    let sxy: f64 = pitches.iter().zip(d).map(|(x, y)| (x - mx) * (y - my)).sum();
    my - sxy / sxx * mx
}

/// Rounds for a preimage of `m(a)` over nested grids of `D`.
pub fn m_preimage_rounds(
    x_set: &ClosedSetSample,
    a: &[f64],
    kind: PreimageKind,
    domain: &Domain,
    base: usize,
    rounds: usize,
    tol_med: f64,
) -> Result<Vec<ResolvedSet>> {
    let ma = closest_points(x_set, a, tol_med)?;
    (0..rounds)
        .map(|k| {
            let per_axis = nested_per_axis(base, k);
            let tested = domain.grid(per_axis)?;
            let mut members = Vec::new();
            for x in &tested {
                if kind.holds(&closest_points(x_set, x, tol_med)?, &ma, TOL_PT) {
                    members.push(x.clone());
                }
            }
            Ok(ResolvedSet {
                members,
                tested,
                pitch: domain.pitch(per_axis),
            })
        })
        .collect()
}

/// Rounds for `N(a)` over nested grids of `D`.
pub fn n_region_rounds(
    x_set: &ClosedSetSample,
    a: &[f64],
    domain: &Domain,
    base: usize,
    rounds: usize,
    tol_med: f64,
) -> Result<Vec<ResolvedSet>> {
    let ai = x_set.snap(a)?;
    (0..rounds)
        .map(|k| {
            let per_axis = nested_per_axis(base, k);
            let tested = domain.grid(per_axis)?;
            let members = tested
                .iter()
                .filter(|x| closest_indices(x_set, x, tol_med).contains(&ai))
                .cloned()
                .collect();
            Ok(ResolvedSet {
                members,
                tested,
                pitch: domain.pitch(per_axis),
            })
        })
        .collect()
}

/// One resolution of `X` for a preimage of `N`: the sample, the window
/// on which regions are compared, and the sample pitch.
#[derive(Clone, Debug)]
pub struct NRound {
    pub x: ClosedSetSample,
    pub window: Domain,
    pub pitch: f64,
}

/// Rounds for a preimage of `N(a)` over successively finer samples of `X`.
pub fn n_preimage_rounds(
    rounds: &[NRound],
    a: &[f64],
    kind: PreimageKind,
    window_per_axis: usize,
    tol_med: f64,
) -> Result<Vec<ResolvedSet>> {
    rounds
        .iter()
        .map(|r| {
            let members = n_preimage(&r.x, a, kind, &r.window, window_per_axis, tol_med)?;
            Ok(ResolvedSet {
                members: members.into_points(),
                tested: r.x.points().points().to_vec(),
                pitch: r.pitch,
            })
        })
        .collect()
}
