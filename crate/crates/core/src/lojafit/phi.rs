use serde::Serialize;

use super::DEFAULT_TOL_FIT;
use crate::error::{Error, Result};
use crate::expr::PiecewiseFn;

/// `φ(t) = sign(t)·C·|t|^α`, an odd increasing bijection; `p`-flat at zero
/// for `α ≥ p + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PowerPhi {
    #[serde(rename = "C")]
    pub c: f64,
    pub alpha: f64,
}

impl PowerPhi {
    pub fn new(c: f64, alpha: f64) -> Self {
        Self { c, alpha }
    }

    /// Checks `C > 0` and `α ≥ p + 1`.
    pub fn flat(c: f64, alpha: f64, p: u32) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::NonPositive { name: "C", value: c });
        }
        if !(alpha >= p as f64 + 1.0) {
            return Err(Error::Invalid(format!(
                "exponent {alpha} is below the flatness bound {}",
                p + 1
            )));
        }
        Ok(Self { c, alpha })
    }

    /// Largest `p` for which this function is `p`-flat at zero.
    pub fn flatness(&self) -> u32 {
        (self.alpha - 1.0).floor().max(0.0) as u32
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t == 0.0 {
            0.0
        } else {
            t.signum() * self.c * t.abs().powf(self.alpha)
        }
    }
}

const SELECTOR_HALF_POINTS: i32 = 100;
const SELECTOR_EPS_MIN: f64 = 1e-8;

/// Finds `(i₀, ε)` with `φ_{i₀} = sign(t)·min_i |φ_i(t)|` on `[−ε, ε]`,
/// scanning `ε = eps_scan, eps_scan/2, …` down to `1e-8`.
pub fn min_selector(phis: &[PiecewiseFn], eps_scan: f64) -> Result<(usize, f64)> {
    if phis.is_empty() {
        return Err(Error::EmptySet);
    }
    if !(eps_scan > 0.0) {
        return Err(Error::NonPositive {
            name: "eps_scan",
            value: eps_scan,
        });
    }
    let ts = |eps: f64| -> Vec<f64> {
        (-SELECTOR_HALF_POINTS..=SELECTOR_HALF_POINTS)
            .map(|j| eps * j as f64 / SELECTOR_HALF_POINTS as f64)
            .collect()
    };
    for (i, phi) in phis.iter().enumerate() {
        if phi.arity() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: phi.arity(),
            });
        }
        if phi.eval(&[0.0])? != 0.0 {
            return Err(Error::Invalid(format!("function {i} does not vanish at 0")));
        }
        for t in ts(eps_scan) {
            let (a, b) = (phi.eval(&[t])?, phi.eval(&[-t])?);
            if (a + b).abs() > DEFAULT_TOL_FIT * a.abs().max(1.0) {
                return Err(Error::Invalid(format!("function {i} is not odd at t = {t}")));
            }
        }
    }
    let mut eps = eps_scan;
    while eps >= SELECTOR_EPS_MIN {
        let t = ts(eps);
        let vals: Vec<Vec<f64>> = phis
            .iter()
            .map(|phi| t.iter().map(|v| phi.eval(&[*v])).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?;
        let lower: Vec<f64> = (0..t.len())
            .map(|k| {
                let m = vals.iter().map(|v| v[k].abs()).fold(f64::INFINITY, f64::min);
                t[k].signum() * m
            })
            .collect();
        let hit = vals.iter().position(|v| {
            v.iter()
                .zip(&lower)
                .all(|(a, b)| (a - b).abs() <= DEFAULT_TOL_FIT * b.abs().max(1.0))
        });
        if let Some(i) = hit {
            return Ok((i, eps));
        }
        eps /= 2.0;
    }
    Err(Error::NoSelector {
        epsilon: SELECTOR_EPS_MIN,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn fns(srcs: &[&str]) -> Vec<PiecewiseFn> {
        srcs.iter().map(|s| parse(s).unwrap()).collect()
    }

    #[test]
    fn selector_examples() {
        assert_eq!(min_selector(&fns(&["x1", "2*x1"]), 1.0).unwrap().0, 0);
        let (i, eps) = min_selector(&fns(&["x1", "x1^3"]), 4.0).unwrap();
        assert_eq!(i, 1);
        assert!(eps <= 1.0);
        let (i, eps) = min_selector(&fns(&["x1^3", "x1^3 + x1^5"]), 1.0).unwrap();
        assert_eq!((i, eps), (0, 1.0));
    }

    #[test]
    fn selector_rejects_even_functions() {
        assert!(matches!(
            min_selector(&fns(&["x1^2"]), 1.0),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn phi_shape() {
        let p = PowerPhi::flat(0.5, 2.0, 1).unwrap();
        assert_eq!(p.eval(-2.0), -2.0);
        assert_eq!(p.eval(0.0), 0.0);
        assert_eq!(p.flatness(), 1);
        assert!(PowerPhi::flat(1.0, 1.5, 1).is_err());
    }
}
