use serde::Serialize;

use super::{PairSample, PowerPhi, DEFAULT_TOL_FIT};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expr::PiecewiseFn;

pub const DEFAULT_C_GAP: f64 = 0.1;
pub const DEFAULT_EPS_STAR: f64 = 1e-3;
pub const DEFAULT_BOUND_PROBE: f64 = 1e6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub point: Vec<f64>,
    /// `|φ(g(x))|`
    pub lhs: f64,
    /// `|f(x)|`
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ViolationReport {
    pub n_samples: usize,
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn verified(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists the samples where `|φ(g(x))| > |f(x)| + tol_fit`.
pub fn verify_inequality(
    f: &PiecewiseFn,
    g: &PiecewiseFn,
    domain: &Domain,
    phi: &PowerPhi,
    samples: usize,
    seed: u64,
) -> Result<ViolationReport> {
    let data = PairSample::evaluate(f, g, domain, samples, seed, Exec::auto())?;
    Ok(verify_values(&data, phi, DEFAULT_TOL_FIT))
}

pub fn verify_values(data: &PairSample, phi: &PowerPhi, tol_fit: f64) -> ViolationReport {
    let violations = (0..data.len())
        .filter_map(|i| {
            let lhs = phi.eval(data.g[i]).abs();
            (lhs > data.f[i] + tol_fit).then(|| Violation {
                point: data.points[i].clone(),
                lhs,
                rhs: data.f[i],
            })
        })
        .collect();
    ViolationReport {
        n_samples: data.len(),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarCheck {
    pub pass: bool,
    pub witness: Option<Vec<f64>>,
    pub witness_g: Option<f64>,
    /// Largest `|f|` in the smallest-`|f|` decile.
    pub decile_max_f: f64,
    pub decile_size: usize,
}

/// Sequence condition `f(x_n) → 0 ⟹ g(x_n) → 0` at sampling resolution.
///
/// The samples are ranked by `|f|`; the decile with the smallest values
/// (ties included) fails the check when all its `|f|` are at most
/// `eps_star` and it still contains a point with `|g| ≥ c_gap`.
pub fn check_star_condition(
    f: &PiecewiseFn,
    g: &PiecewiseFn,
    domain: &Domain,
    samples: usize,
    seed: u64,
    c_gap: f64,
) -> Result<StarCheck> {
    let data = PairSample::evaluate(f, g, domain, samples, seed, Exec::auto())?;
    check_star_values(&data, c_gap, DEFAULT_EPS_STAR)
}

pub fn check_star_values(data: &PairSample, c_gap: f64, eps_star: f64) -> Result<StarCheck> {
    if !(c_gap > 0.0) {
        return Err(Error::NonPositive {
            name: "c_gap",
            value: c_gap,
        });
    }
    if data.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut sorted = data.f.clone();
    sorted.sort_by(f64::total_cmp);
    let k = ((sorted.len() as f64 * 0.1).ceil() as usize).clamp(1, sorted.len());
    let cut = sorted[k - 1];
    let decile: Vec<usize> = (0..data.len()).filter(|&i| data.f[i] <= cut).collect();
    let mut witness: Option<usize> = None;
    for &i in &decile {
        if data.g[i] >= c_gap && witness.is_none_or(|w| data.g[i] > data.g[w]) {
            witness = Some(i);
        }
    }
    let fail = cut <= eps_star && witness.is_some();
    Ok(StarCheck {
        pass: !fail,
        witness: if fail { witness.map(|i| data.points[i].clone()) } else { None },
        witness_g: if fail { witness.map(|i| data.g[i]) } else { None },
        decile_max_f: cut,
        decile_size: decile.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundedCheck {
    pub pass: bool,
    pub sup_g: f64,
    pub argsup: Option<Vec<f64>>,
}

/// Empirical `sup |g|`; fails above `bound_probe`.
pub fn check_g_bounded(
    g: &PiecewiseFn,
    domain: &Domain,
    samples: usize,
    seed: u64,
    bound_probe: f64,
) -> Result<BoundedCheck> {
    if !(bound_probe > 0.0) {
        return Err(Error::NonPositive {
            name: "bound_probe",
            value: bound_probe,
        });
    }
    let sample = domain.sample(samples, seed)?;
    let vals = Exec::auto()
        .map(&sample.points, |p| g.eval(p).map(f64::abs))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let mut best: Option<usize> = None;
    for (i, v) in vals.iter().enumerate() {
        if best.is_none_or(|b| *v > vals[b]) {
            best = Some(i);
        }
    }
    let sup_g = best.map_or(0.0, |b| vals[b]);
    Ok(BoundedCheck {
        pass: sup_g <= bound_probe,
        sup_g,
        argsup: best.map(|b| sample.points[b].clone()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn power_phi_examples() {
        let f = parse("x1").unwrap();
        let d = Domain::interval(0.0, 1.0).unwrap();
        let ok = verify_inequality(&f, &f, &d, &PowerPhi::new(0.5, 2.0), 1000, 0).unwrap();
        assert!(ok.verified());
        let bad = verify_inequality(&f, &f, &d, &PowerPhi::new(2.0, 1.0), 1000, 0).unwrap();
        assert_eq!(bad.violations.len(), 999);
        let zero = parse("0").unwrap();
        let r = verify_inequality(&f, &zero, &d, &PowerPhi::new(100.0, 1.0), 1000, 0).unwrap();
        assert!(r.verified());
    }

    #[test]
    fn star_on_identity_passes() {
        let f = parse("x1").unwrap();
        let d = Domain::interval(0.0, 1.0).unwrap();
        assert!(check_star_condition(&f, &f, &d, 1000, 0, DEFAULT_C_GAP).unwrap().pass);
    }

    #[test]
    fn bounded_checks() {
        let d = Domain::interval(0.0, 1.0).unwrap();
        let r = check_g_bounded(&parse("x1^2").unwrap(), &d, 1000, 0, DEFAULT_BOUND_PROBE).unwrap();
        assert!(r.pass && (r.sup_g - 1.0).abs() < 1e-12);
        let r = check_g_bounded(&parse("0").unwrap(), &d, 1000, 0, DEFAULT_BOUND_PROBE).unwrap();
        assert!(r.pass && r.sup_g == 0.0);
    }
}
