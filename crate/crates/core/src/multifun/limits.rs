use serde::Serialize;

use super::SampledMultifunction;
use crate::error::{Error, Result};
use crate::geometry::{dist, dist_point_set, hausdorff_ext, PointSet, TOL_PT};

/// Tolerance for comparing limit estimates with value sets.
pub const DEFAULT_TOL_LIM: f64 = 1e-2;

/// `r_k = 0.5 · 2^{-k}`, `k = 0..=12`.
pub fn default_radii() -> Vec<f64> {
    (0..=12).map(|k| 0.5 * 0.5f64.powi(k)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitEstimate {
    pub liminf: PointSet,
    pub limsup: PointSet,
    /// Radii whose punctured balls contained samples, decreasing.
    pub radii: Vec<f64>,
    pub converged: bool,
}

/// Estimates `liminf` and `limsup` of `F(x)` as `x → a` over `dom F ∖ {a}`.
///
/// At each radius the punctured ball around `a` is scanned in order of
/// distance to `a`. Its values, thinned at `tol_lim` with the value of the
/// closest sample kept, form the `limsup` estimate; those `y` with
/// `max_x d(y, F(x)) ≤ tol_lim` over the ball form the `liminf` estimate.
/// The reported estimate uses the smallest ball holding at least two samples
/// (or the smallest nonempty one), and is converged when it is within
/// `tol_lim` of the next larger ball's estimate.
pub fn kuratowski_limits(
    f: &SampledMultifunction,
    a: &[f64],
    radii: &[f64],
    tol_lim: f64,
) -> Result<LimitEstimate> {
    if a.len() != f.arg_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.arg_dim(),
            found: a.len(),
        });
    }
    let mut near: Vec<(f64, usize)> = f
        .dom_indices()
        .into_iter()
        .map(|i| (dist(&f.xs()[i], a), i))
        .filter(|(d, _)| *d > TOL_PT)
        .collect();
    near.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));

    let mut levels: Vec<(f64, usize)> = Vec::new();
    for &r in radii {
        let count = near.partition_point(|(d, _)| *d <= r);
        if count > 0 {
            levels.push((r, count));
        }
    }
    if levels.is_empty() {
        return Err(Error::Isolated { point: a.to_vec() });
    }
    let chosen = levels
        .iter()
        .rposition(|(_, c)| *c >= 2)
        .unwrap_or(levels.len() - 1);

    let estimate = |count: usize| -> Result<(PointSet, PointSet)> {
        let ball = &near[..count];
        let mut reps: Vec<Vec<f64>> = Vec::new();
        for &(_, i) in ball {
            for y in f.values()[i].iter() {
                if !reps.iter().any(|r| dist(r, y) <= tol_lim) {
                    reps.push(y.clone());
                }
            }
        }
        let mut inf = Vec::new();
        for y in &reps {
            let mut worst: f64 = 0.0;
            for &(_, i) in ball {
                worst = worst.max(dist_point_set(y, &f.values()[i])?);
                if worst > tol_lim {
                    break;
                }
            }
            if worst <= tol_lim {
                inf.push(y.clone());
            }
        }
        Ok((
            PointSet::new(f.val_dim(), inf)?,
            PointSet::new(f.val_dim(), reps)?,
        ))
    };

    let (liminf, limsup) = estimate(levels[chosen].1)?;
    let converged = if chosen == 0 {
        false
    } else {
        let (inf2, sup2) = estimate(levels[chosen - 1].1)?;
        hausdorff_ext(&limsup, &sup2, 0.0)? <= tol_lim && hausdorff_ext(&liminf, &inf2, 0.0)? <= tol_lim
    };
    Ok(LimitEstimate {
        liminf,
        limsup,
        radii: levels[..=chosen].iter().map(|(r, _)| *r).collect(),
        converged,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub outer: bool,
    pub inner: bool,
    pub upper: bool,
    pub lower: bool,
    pub continuous: bool,
}

impl Classification {
    pub fn none(&self) -> bool {
        !(self.outer || self.inner || self.upper || self.lower)
    }

    pub fn flags(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (on, name) in [
            (self.outer, "outer"),
            (self.inner, "inner"),
            (self.upper, "upper"),
            (self.lower, "lower"),
            (self.continuous, "continuous"),
        ] {
            if on {
                out.push(name);
            }
        }
        if out.is_empty() {
            out.push("none");
        }
        out
    }
}

/// Semicontinuity flags at `a`: outer `limsup ⊆ F(a)`, inner
/// `F(a) ⊆ liminf`, upper `limsup = F(a)`, lower `liminf = F(a)`,
/// continuous when both upper and lower hold.
pub fn classify_semicontinuity(
    f: &SampledMultifunction,
    a: &[f64],
    radii: &[f64],
    tol_lim: f64,
) -> Result<(Classification, LimitEstimate)> {
    let fa = f.value_in_dom(a)?;
    let lim = kuratowski_limits(f, a, radii, tol_lim)?;
    let outer = lim.limsup.is_subset_of(&fa, tol_lim);
    let inner = fa.is_subset_of(&lim.liminf, tol_lim);
    let upper = outer && fa.is_subset_of(&lim.limsup, tol_lim);
    let lower = inner && lim.liminf.is_subset_of(&fa, tol_lim);
    Ok((
        Classification {
            outer,
            inner,
            upper,
            lower,
            continuous: upper && lower,
        },
        lim,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mf(xs: &[f64], f: impl Fn(f64) -> Vec<f64>) -> SampledMultifunction {
        SampledMultifunction::new(
            1,
            1,
            xs.iter().map(|&x| (vec![x], PointSet::from_scalars(&f(x)))).collect(),
        )
        .unwrap()
    }

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| crate::domain::lerp_grid(lo, hi, i, n)).collect()
    }

    #[test]
    fn constant_multifunction_is_continuous() {
        let f = mf(&grid(0.0, 1.0, 101), |_| vec![0.0, 1.0]);
        let (c, lim) = classify_semicontinuity(&f, &[0.5], &default_radii(), DEFAULT_TOL_LIM).unwrap();
        assert!(c.continuous && c.outer && c.inner);
        assert!(lim.converged);
        assert_eq!(lim.liminf.len(), 2);
    }

    #[test]
    fn identity_limits() {
        let f = mf(&grid(0.0, 1.0, 1001), |x| vec![x]);
        let lim = kuratowski_limits(&f, &[0.3], &default_radii(), DEFAULT_TOL_LIM).unwrap();
        assert!(lim.limsup.approx_eq(&PointSet::from_scalars(&[0.3]), 2e-3));
        assert!(lim.liminf.approx_eq(&PointSet::from_scalars(&[0.3]), 2e-3));
    }

    #[test]
    fn isolated_point_is_an_error() {
        let f = mf(&[0.0, 5.0], |x| vec![x]);
        assert!(matches!(
            kuratowski_limits(&f, &[0.0], &default_radii(), DEFAULT_TOL_LIM),
            Err(Error::Isolated { .. })
        ));
    }

    #[test]
    fn jump_has_empty_liminf() {
        let f = mf(&grid(0.0, 1.0, 1001), |x| if x < 0.5 { vec![0.0] } else if x > 0.5 { vec![1.0] } else { vec![0.0, 1.0] });
        let (c, lim) = classify_semicontinuity(&f, &[0.5], &default_radii(), DEFAULT_TOL_LIM).unwrap();
        assert!(lim.liminf.is_empty());
        assert_eq!(lim.limsup.len(), 2);
        assert!(c.upper && c.outer && !c.lower && !c.inner);
    }
}
