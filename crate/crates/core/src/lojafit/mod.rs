//! Power-law envelopes `|f| ≥ C|g|^α` fitted on samples.
//!
//! For a fixed `α` the best constant is the envelope
//! `C(α) = min_i |f_i| / |g_i|^α`. On any finite sample that minimum is
//! positive for every `α`, so positivity alone cannot separate a true
//! exponent from one that only holds because the sample stops short of the
//! zero set. An exponent is accepted when its envelope is resolution
//! stable: dropping the samples with the smallest `|g|` (the finest decile)
//! changes `ln C(α)` by at most `stability`. Below the true exponent the
//! envelope is set by the finest samples and keeps falling as they get
//! finer; at or above it the binding samples sit away from the zero set.

mod checks;
mod phi;

use serde::Serialize;

use crate::domain::Domain;
use crate::error::Result;
use crate::exec::Exec;
use crate::expr::PiecewiseFn;

pub use checks::{
    check_g_bounded, check_star_condition, check_star_values, verify_inequality, BoundedCheck,
    StarCheck, Violation, ViolationReport, DEFAULT_BOUND_PROBE, DEFAULT_C_GAP, DEFAULT_EPS_STAR,
};
pub use phi::{min_selector, PowerPhi};

pub const DEFAULT_TOL_FIT: f64 = 1e-9;
pub const DEFAULT_TOL_G: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub grid: usize,
    /// Relative width at which bisection stops.
    pub rel_prec: f64,
    pub c_floor: f64,
    pub tol_g: f64,
    pub tol_fit: f64,
    /// Allowed change of `ln C` when the finest decile is dropped.
    pub stability: f64,
    /// Fraction of usable samples (smallest `|g|`) forming the finest set.
    pub fine_fraction: f64,
    pub max_power: u32,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            alpha_min: 0.05,
            alpha_max: 40.0,
            grid: 400,
            rel_prec: 1e-3,
            c_floor: 1e-12,
            tol_g: DEFAULT_TOL_G,
            tol_fit: DEFAULT_TOL_FIT,
            stability: 0.01,
            fine_fraction: 0.1,
            max_power: 40,
        }
    }
}

impl FitConfig {
    /// Default configuration with `tol_fit` taken from `LOJA_TOL` when set.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Some(t) = std::env::var("LOJA_TOL")
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|t| *t > 0.0)
        {
            cfg.tol_fit = t;
        }
        cfg
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    /// Exponent; for a reverse fit this is the integer power `N`.
    pub alpha: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub feasible: bool,
    pub degenerate: bool,
    pub n_samples: usize,
    pub min_residual: f64,
    pub binding_points: Vec<Vec<f64>>,
}

/// Retained samples of a pair `(|f|, |g|)`.
#[derive(Clone, Debug)]
pub struct PairSample {
    pub points: Vec<Vec<f64>>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl PairSample {
    pub fn new(points: Vec<Vec<f64>>, f: Vec<f64>, g: Vec<f64>) -> Self {
        assert_eq!(points.len(), f.len());
        assert_eq!(points.len(), g.len());
        let f = f.into_iter().map(f64::abs).collect();
        let g = g.into_iter().map(f64::abs).collect();
        Self { points, f, g }
    }

    pub fn evaluate(
        f: &PiecewiseFn,
        g: &PiecewiseFn,
        domain: &Domain,
        samples: usize,
        seed: u64,
        exec: Exec,
    ) -> Result<Self> {
        let sample = domain.sample(samples, seed)?;
        let pairs = exec
            .map(&sample.points, |p| Ok((f.eval(p)?, g.eval(p)?)))
            .into_iter()
            .collect::<Result<Vec<(f64, f64)>>>()?;
        let (fv, gv) = pairs.into_iter().unzip();
        Ok(Self::new(sample.points, fv, gv))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Log-space envelope data over the samples with `|g| > tol_g`.
struct LogData {
    idx: Vec<usize>,
    lf: Vec<f64>,
    lg: Vec<f64>,
    coarse: Vec<bool>,
}

impl LogData {
    fn new(data: &PairSample, tol_g: f64, fine_fraction: f64) -> Self {
        let idx: Vec<usize> = (0..data.len()).filter(|&i| data.g[i] > tol_g).collect();
        let lf = idx.iter().map(|&i| data.f[i].ln()).collect();
        let lg: Vec<f64> = idx.iter().map(|&i| data.g[i].ln()).collect();
        let mut sorted = lg.clone();
        sorted.sort_by(f64::total_cmp);
        let coarse = if sorted.is_empty() {
            Vec::new()
        } else {
            let k = ((sorted.len() as f64 * fine_fraction).floor() as usize).min(sorted.len() - 1);
            let q = sorted[k];
            lg.iter().map(|v| *v > q).collect()
        };
        Self { idx, lf, lg, coarse }
    }

    /// `(ln C(α), ln C_coarse(α))` for `sign = 1` (minimum of
    /// `ln|f| − α ln|g|`), or the maxima of `α ln|f| − ln|g|` for `sign = -1`.
    fn envelope(&self, alpha: f64, reverse: bool) -> (f64, f64) {
        let (mut all, mut coarse) = if reverse {
            (f64::NEG_INFINITY, f64::NEG_INFINITY)
        } else {
            (f64::INFINITY, f64::INFINITY)
        };
        for k in 0..self.lf.len() {
            if reverse {
                let v = alpha * self.lf[k] - self.lg[k];
                if v.is_nan() {
                    continue;
                }
                all = all.max(v);
                if self.coarse[k] {
                    coarse = coarse.max(v);
                }
            } else {
                let v = self.lf[k] - alpha * self.lg[k];
                all = all.min(v);
                if self.coarse[k] {
                    coarse = coarse.min(v);
                }
            }
        }
        (all, coarse)
    }
}

/// `C(α) = min_i |f_i| / |g_i|^α` over samples with `|g_i| > tol_g`.
pub fn envelope_constant(data: &PairSample, alpha: f64, tol_g: f64) -> f64 {
    let ld = LogData::new(data, tol_g, 0.0);
    ld.envelope(alpha, false).0.exp()
}

/// Fits `|f| ≥ C|g|^α` on sampled values; see the module docs for the
/// acceptance rule.
pub fn fit_pairs(data: &PairSample, cfg: &FitConfig, exec: Exec) -> PowerLawFit {
    let ld = LogData::new(data, cfg.tol_g, cfg.fine_fraction);
    if ld.idx.is_empty() {
        let c = data.f.iter().copied().fold(f64::INFINITY, f64::min);
        let c = if c.is_finite() { c } else { 0.0 };
        return finish(data, &ld, 1.0, c, true, true, cfg, false);
    }
    let ln_floor = cfg.c_floor.ln();
    let feasible = |alpha: f64| {
        let (all, coarse) = ld.envelope(alpha, false);
        all >= ln_floor && (coarse - all) <= cfg.stability
    };
    let grid = cfg.grid.max(2);
    let ratio = cfg.alpha_max / cfg.alpha_min;
    let alphas: Vec<f64> = (0..grid)
        .map(|j| {
            if j == grid - 1 {
                cfg.alpha_max
            } else {
                cfg.alpha_min * ratio.powf(j as f64 / (grid - 1) as f64)
            }
        })
        .collect();
    let ok = exec.map(&alphas, |a| feasible(*a));
    let alpha = match ok.iter().position(|b| *b) {
        None => {
            let c = ld.envelope(cfg.alpha_max, false).0.exp();
            return finish(data, &ld, cfg.alpha_max, c, false, false, cfg, false);
        }
        Some(0) => alphas[0],
        Some(j) => {
            let (mut lo, mut hi) = (alphas[j - 1], alphas[j]);
            while (hi - lo) / hi > cfg.rel_prec {
                let mid = 0.5 * (lo + hi);
                if feasible(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            hi
        }
    };
    let c = ld.envelope(alpha, false).0.exp();
    finish(data, &ld, alpha, c, true, false, cfg, false)
}

/// Fits `|f|^N ≤ C|g|` with the smallest integer `N ≥ 1` whose constant
/// `C = max_i |f_i|^N / |g_i|` is resolution stable.
pub fn reverse_fit_pairs(data: &PairSample, cfg: &FitConfig) -> PowerLawFit {
    let ld = LogData::new(data, cfg.tol_g, cfg.fine_fraction);
    let blocked = (0..data.len()).any(|i| data.g[i] <= cfg.tol_g && data.f[i] > cfg.tol_g);
    let all_f_zero = ld.idx.iter().all(|&i| data.f[i] == 0.0);
    if ld.idx.is_empty() || (all_f_zero && !blocked) {
        return finish(data, &ld, 1.0, 0.0, !blocked, true, cfg, true);
    }
    if blocked {
        let c = ld.envelope(1.0, true).0.exp();
        return finish(data, &ld, 1.0, c, false, false, cfg, true);
    }
    for n in 1..=cfg.max_power.max(1) {
        let (all, coarse) = ld.envelope(n as f64, true);
        if all - coarse <= cfg.stability {
            return finish(data, &ld, n as f64, all.exp(), true, false, cfg, true);
        }
    }
    let n = cfg.max_power.max(1) as f64;
    let c = ld.envelope(n, true).0.exp();
    finish(data, &ld, n, c, false, false, cfg, true)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    data: &PairSample,
    ld: &LogData,
    alpha: f64,
    c: f64,
    feasible: bool,
    degenerate: bool,
    cfg: &FitConfig,
    reverse: bool,
) -> PowerLawFit {
    let residual = |i: usize| {
        if reverse {
            c * data.g[i] - data.f[i].powf(alpha)
        } else {
            data.f[i] - c * data.g[i].powf(alpha)
        }
    };
    let min_residual = (0..data.len()).map(residual).fold(f64::INFINITY, f64::min);
    let candidates: Vec<usize> = if degenerate {
        (0..data.len()).collect()
    } else {
        ld.idx.clone()
    };
    let binding_points = candidates
        .into_iter()
        .filter(|&i| {
            let scale = if reverse { data.f[i].powf(alpha) } else { data.f[i] };
            residual(i).abs() <= cfg.tol_fit * scale.max(1.0)
        })
        .map(|i| data.points[i].clone())
        .collect();
    PowerLawFit {
        alpha,
        c,
        feasible,
        degenerate,
        n_samples: data.len(),
        min_residual: if min_residual.is_finite() { min_residual } else { 0.0 },
        binding_points,
    }
}

pub fn fit_exponent(
    f: &PiecewiseFn,
    g: &PiecewiseFn,
    domain: &Domain,
    samples: usize,
    seed: u64,
) -> Result<PowerLawFit> {
    let data = PairSample::evaluate(f, g, domain, samples, seed, Exec::auto())?;
    Ok(fit_pairs(&data, &FitConfig::default(), Exec::auto()))
}

pub fn reverse_fit(
    f: &PiecewiseFn,
    g: &PiecewiseFn,
    domain: &Domain,
    samples: usize,
    seed: u64,
) -> Result<PowerLawFit> {
    let data = PairSample::evaluate(f, g, domain, samples, seed, Exec::auto())?;
    Ok(reverse_fit_pairs(&data, &FitConfig::default()))
}

/// The value pairs `(f(x_i), g(x_i))` of a sample.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValuePairCloud {
    pub pairs: Vec<(f64, f64)>,
    pub points: Vec<Vec<f64>>,
}

pub fn value_pair_cloud(
    f: &PiecewiseFn,
    g: &PiecewiseFn,
    domain: &Domain,
    samples: usize,
    seed: u64,
) -> Result<ValuePairCloud> {
    let sample = domain.sample(samples, seed)?;
    let pairs = Exec::auto()
        .map(&sample.points, |p| Ok((f.eval(p)?, g.eval(p)?)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(ValuePairCloud {
        pairs,
        points: sample.points,
    })
}

/// Fits `|s| ≥ C (|s| + |t|)^α` over a value-pair cloud, i.e. the distance
/// to the axis `{0} × R` against the 1-norm distance to the origin.
pub fn separation_fit(cloud: &ValuePairCloud, cfg: &FitConfig) -> PowerLawFit {
    let f = cloud.pairs.iter().map(|(s, _)| s.abs()).collect();
    let g = cloud.pairs.iter().map(|(s, t)| s.abs() + t.abs()).collect();
    let data = PairSample::new(cloud.points.clone(), f, g);
    fit_pairs(&data, cfg, Exec::auto())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(k: i32, n: usize) -> PairSample {
        let pts: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64 / (n - 1) as f64]).collect();
        let f = pts.iter().map(|p| p[0]).collect();
        let g = pts.iter().map(|p| p[0].powi(k)).collect();
        PairSample::new(pts, f, g)
    }

    #[test]
    fn identity_pair() {
        let fit = fit_pairs(&line(1, 1000), &FitConfig::default(), Exec::Sequential);
        assert!(fit.feasible);
        assert!((fit.alpha - 1.0).abs() < 0.05, "{fit:?}");
        assert!((fit.c - 1.0).abs() < 0.05);
        assert!(fit.min_residual.abs() <= 1e-9);
        assert!(!fit.binding_points.is_empty());
    }

    #[test]
    fn square_gives_half() {
        let fit = fit_pairs(&line(2, 1000), &FitConfig::default(), Exec::Sequential);
        assert!((fit.alpha - 0.5).abs() < 0.025, "{fit:?}");
        assert!((fit.c - 1.0).abs() < 0.05);
    }

    #[test]
    fn zero_f_with_positive_g_is_infeasible() {
        let data = PairSample::new(vec![vec![0.0], vec![1.0]], vec![0.0, 1.0], vec![1.0, 1.0]);
        let fit = fit_pairs(&data, &FitConfig::default(), Exec::Sequential);
        assert!(!fit.feasible);
        assert_eq!(fit.c, 0.0);
    }

    #[test]
    fn all_zero_g_is_degenerate() {
        let data = PairSample::new(vec![vec![0.0], vec![1.0]], vec![0.5, 2.0], vec![0.0, 0.0]);
        let fit = fit_pairs(&data, &FitConfig::default(), Exec::Sequential);
        assert!(fit.feasible && fit.degenerate);
        assert_eq!((fit.alpha, fit.c), (1.0, 0.5));
    }

    #[test]
    fn reverse_examples() {
        let cfg = FitConfig::default();
        let pts: Vec<Vec<f64>> = (1..=1000).map(|i| vec![i as f64 / 1000.0]).collect();
        let x: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
        let fit = reverse_fit_pairs(&PairSample::new(pts.clone(), sq.clone(), x.clone()), &cfg);
        assert!(fit.feasible);
        assert_eq!(fit.alpha, 1.0);
        assert!((fit.c - 1.0).abs() < 1e-12);
        let fit = reverse_fit_pairs(&PairSample::new(pts.clone(), x.clone(), sq), &cfg);
        assert_eq!(fit.alpha, 2.0);
        let fit = reverse_fit_pairs(&PairSample::new(pts, x.clone(), vec![0.0; x.len()]), &cfg);
        assert!(!fit.feasible);
    }
}
