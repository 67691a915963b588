use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{m_multifunction, n_multifunction, ClosedSetSample};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::dist;
use crate::lojafit::{FitConfig, PowerLawFit};
use crate::multifun::{multifun_loja_fit, PreimageKind, SetMetric};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MedialKind {
    /// Closest points `x ↦ m(x)`.
    M,
    /// Regions `y ↦ N(y)` for `y ∈ X`.
    N,
}

impl MedialKind {
    pub fn default_metric(self) -> SetMetric {
        match self {
            MedialKind::M => SetMetric::Hausdorff,
            MedialKind::N => SetMetric::Kuratowski,
        }
    }
}

impl fmt::Display for MedialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MedialKind::M => "m",
            MedialKind::N => "N",
        })
    }
}

impl FromStr for MedialKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(MedialKind::M),
            "N" | "n" => Ok(MedialKind::N),
            _ => Err(Error::Invalid(format!("unknown kind `{s}`, expected m or N"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MedialLojaOptions {
    pub samples: usize,
    pub seed: u64,
    pub tol_med: Option<f64>,
    /// Box on which `N` regions are sampled; defaults to the bounding box of
    /// `X` grown by half its diameter plus one.
    pub window: Option<Domain>,
    pub window_per_axis: usize,
    pub cfg: FitConfig,
}

impl Default for MedialLojaOptions {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 42,
            tol_med: None,
            window: None,
            window_per_axis: 41,
            cfg: FitConfig::default(),
        }
    }
}

fn default_window(x_set: &ClosedSetSample) -> Result<Domain> {
    let pts = x_set.points().points();
    let n = x_set.dim();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for p in pts {
        for d in 0..n {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let grow = 0.5 * x_set.points().diam() + 1.0;
    Domain::new(
        lo.iter().map(|v| v - grow).collect(),
        hi.iter().map(|v| v + grow).collect(),
    )
}

/// Fits `dist(F(x), F(a)) ≥ C d(x, F_*(F(a)))^α` for `F = m` on samples
/// of `K`, or for `F = N` on the points of `X` inside `K`.
pub fn medial_loja(
    x_set: &ClosedSetSample,
    a: &[f64],
    k: &Domain,
    kind: MedialKind,
    metric: SetMetric,
    opts: &MedialLojaOptions,
) -> Result<PowerLawFit> {
    let tol = opts.tol_med.unwrap_or_else(|| x_set.default_tol_med());
    let exec = Exec::auto();
    match kind {
        MedialKind::M => {
            let mut points = k.sample(opts.samples, opts.seed)?.points;
            if !points.iter().any(|p| p.as_slice() == a) {
                points.push(a.to_vec());
            }
            let mf = m_multifunction(x_set, points, tol, exec)?;
            multifun_loja_fit(&mf, a, k, PreimageKind::Upper, metric, &opts.cfg)
        }
        MedialKind::N => {
            let ai = x_set.snap(a)?;
            let pts = x_set.points().points();
            let reach = 2.0 * x_set.pitch().unwrap_or(0.0);
            let isolated = !pts
                .iter()
                .enumerate()
                .any(|(j, p)| j != ai && dist(p, &pts[ai]) <= reach);
            if isolated {
                return Err(Error::Isolated { point: a.to_vec() });
            }
            let mut ys = Vec::new();
            for (j, p) in pts.iter().enumerate() {
                if k.contains(p)? {
                    ys.push(j);
                }
            }
            let window = match &opts.window {
                Some(w) => w.clone(),
                None => default_window(x_set)?,
            };
            let grid = window.grid(opts.window_per_axis)?;
            let mf = n_multifunction(x_set, &ys, &grid, tol, exec)?;
            multifun_loja_fit(&mf, &pts[ai], k, PreimageKind::Upper, metric, &opts.cfg)
        }
    }
}
