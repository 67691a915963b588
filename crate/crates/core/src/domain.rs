//! Axis-aligned sampling boxes with an optional semialgebraic guard.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::PiecewiseFn;

/// A box `[lo_1, hi_1] × … × [lo_n, hi_n]`, optionally cut down by a guard.
///
/// A point passes the guard when the guard function is defined there (some
/// branch holds) and its value is `<= 0`. Half-open intervals such as
/// `(-1, 1]` are written as a guarded box.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    lo: Vec<f64>,
    hi: Vec<f64>,
    guard: Option<PiecewiseFn>,
}

/// Sample points together with the grid spacing that produced them.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub points: Vec<Vec<f64>>,
    /// Largest per-axis grid spacing.
    pub pitch: f64,
    pub per_axis: usize,
}

/// The `i`-th of `k` equally spaced values from `lo` to `hi`, with both ends
/// hit exactly.
pub fn lerp_grid(lo: f64, hi: f64, i: usize, k: usize) -> f64 {
    if k < 2 {
        return lo;
    }
    let (i, m) = (i as f64, (k - 1) as f64);
    (lo * (m - i) + hi * i) / m
}

impl Domain {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::EmptyDomain);
        }
        Ok(Self { lo, hi, guard: None })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn with_guard(mut self, guard: PiecewiseFn) -> Result<Self> {
        if guard.arity() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: guard.arity(),
            });
        }
        self.guard = Some(guard);
        Ok(self)
    }

    /// Parses `"a1,b1;a2,b2"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let ends: Vec<&str> = part.split(',').map(str::trim).collect();
            if ends.len() != 2 {
                return Err(Error::Invalid(format!("bad interval `{part}` in domain `{spec}`")));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Invalid(format!("bad number `{s}` in domain `{spec}`")))
            };
            lo.push(num(ends[0])?);
            hi.push(num(ends[1])?);
        }
        if lo.is_empty() {
            return Err(Error::EmptyDomain);
        }
        Self::new(lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn guard(&self) -> Option<&PiecewiseFn> {
        self.guard.as_ref()
    }

    pub fn diam(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a) * (b - a))
            .sum::<f64>()
            .sqrt()
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let in_box = x
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(v, (a, b))| *a <= *v && *v <= *b);
        if !in_box {
            return Ok(false);
        }
        self.passes_guard(x)
    }

    fn passes_guard(&self, x: &[f64]) -> Result<bool> {
        match &self.guard {
            None => Ok(true),
            Some(g) => Ok(matches!(g.eval_opt(x)?, Some(v) if v <= 0.0)),
        }
    }

    pub fn pitch(&self, per_axis: usize) -> f64 {
        if per_axis < 2 {
            return self.diam();
        }
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| (b - a) / (per_axis - 1) as f64)
            .fold(0.0, f64::max)
    }

    /// Regular grid with `per_axis` points per axis including both ends,
    /// lexicographic order, guard applied.
    pub fn grid(&self, per_axis: usize) -> Result<Vec<Vec<f64>>> {
        let per_axis = per_axis.max(1);
        let n = self.dim();
        let total = per_axis
            .checked_pow(n as u32)
            .ok_or_else(|| Error::Invalid("grid too large".into()))?;
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; n];
        for _ in 0..total {
            let p: Vec<f64> = (0..n)
                .map(|d| lerp_grid(self.lo[d], self.hi[d], idx[d], per_axis))
                .collect();
            if self.passes_guard(&p)? {
                out.push(p);
            }
            for d in (0..n).rev() {
                idx[d] += 1;
                if idx[d] < per_axis {
                    break;
                }
                idx[d] = 0;
            }
        }
        Ok(out)
    }

    /// `k = max(2, floor(samples^(1/n)))` grid points per axis (boundary
    /// included), then seeded uniform points up to `samples` in total.
    pub fn sample(&self, samples: usize, seed: u64) -> Result<Sample> {
        if samples == 0 {
            return Err(Error::NonPositive {
                name: "samples",
                value: 0.0,
            });
        }
        let n = self.dim();
        let mut k = ((samples as f64).powf(1.0 / n as f64).floor() as usize).max(2);
        while k > 2 && k.checked_pow(n as u32).is_none_or(|t| t > samples) {
            k -= 1;
        }
        let mut points = self.grid(k)?;
        let grid_total = k.pow(n as u32);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in grid_total..samples {
            let p: Vec<f64> = (0..n)
                .map(|d| {
                    if self.lo[d] == self.hi[d] {
                        self.lo[d]
                    } else {
                        rng.gen_range(self.lo[d]..=self.hi[d])
                    }
                })
                .collect();
            if self.passes_guard(&p)? {
                points.push(p);
            }
        }
        if points.is_empty() {
            return Err(Error::EmptyDomain);
        }
        Ok(Sample {
            points,
            pitch: self.pitch(k),
            per_axis: k,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn grid_hits_ends_exactly() {
        let d = Domain::interval(0.0, 4.0).unwrap();
        let g = d.grid(9).unwrap();
        assert_eq!(g.first().unwrap()[0], 0.0);
        assert_eq!(g[4][0], 2.0);
        assert_eq!(g.last().unwrap()[0], 4.0);
        assert_eq!(d.pitch(9), 0.5);
    }

    #[test]
    fn sample_is_seeded() {
        let d = Domain::parse("0,1;-1,1").unwrap();
        let a = d.sample(1000, 7).unwrap();
        let b = d.sample(1000, 7).unwrap();
        let c = d.sample(1000, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.points, c.points);
        assert_eq!(a.per_axis, 31);
        assert_eq!(a.points.len(), 1000);
    }

    #[test]
    fn guard_cuts_half_open_interval() {
        let d = Domain::interval(-1.0, 1.0)
            .unwrap()
            .with_guard(parse("piecewise{ x1 > -1 : 0 }").unwrap())
            .unwrap();
        let g = d.grid(5).unwrap();
        assert_eq!(g, vec![vec![-0.5], vec![0.0], vec![0.5], vec![1.0]]);
        assert!(!d.contains(&[-1.0]).unwrap());
    }

    #[test]
    fn bad_specs() {
        assert!(Domain::parse("1,0").is_err());
        assert!(Domain::parse("0,1;2").is_err());
        assert!(Domain::parse("").is_err());
    }
}
