//! Worked examples and counterexamples as ready-made functions, sets and
//! multifunctions.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::expr::PiecewiseFn;
use crate::geometry::{dist, PointSet};
use crate::medial::{nested_per_axis, ClosedSetSample, NRound};
use crate::multifun::SampledMultifunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureTag {
    Ex3_8,
    Ex3_9,
    Ex4_9,
    Ex5_14,
    Ex5_16,
    Ex5_18,
    Ex6_4,
    Ex6_6,
    Prop6Circle,
    Twopoint,
}

impl FixtureTag {
    pub const ALL: [FixtureTag; 10] = [
        FixtureTag::Ex3_8,
        FixtureTag::Ex3_9,
        FixtureTag::Ex4_9,
        FixtureTag::Ex5_14,
        FixtureTag::Ex5_16,
        FixtureTag::Ex5_18,
        FixtureTag::Ex6_4,
        FixtureTag::Ex6_6,
        FixtureTag::Prop6Circle,
        FixtureTag::Twopoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FixtureTag::Ex3_8 => "ex3_8",
            FixtureTag::Ex3_9 => "ex3_9",
            FixtureTag::Ex4_9 => "ex4_9",
            FixtureTag::Ex5_14 => "ex5_14",
            FixtureTag::Ex5_16 => "ex5_16",
            FixtureTag::Ex5_18 => "ex5_18",
            FixtureTag::Ex6_4 => "ex6_4",
            FixtureTag::Ex6_6 => "ex6_6",
            FixtureTag::Prop6Circle => "prop6_circle",
            FixtureTag::Twopoint => "twopoint",
        }
    }
}

impl fmt::Display for FixtureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FixtureTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FixtureTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown fixture `{s}`")))
    }
}

/// A pair `f, g` on a box.
#[derive(Clone, Debug)]
pub struct ScalarPair {
    pub f: PiecewiseFn,
    pub g: PiecewiseFn,
    pub domain: Domain,
}

fn pf(src: &str) -> PiecewiseFn {
    src.parse().expect("fixture source parses")
}

/// `f(x) = x`, `g(x) = 1/(1−x)` on `[0, 1 − 10⁻⁸]`: `g` is unbounded.
pub fn ex3_8() -> ScalarPair {
    ScalarPair {
        f: pf("x1"),
        g: pf("piecewise{ x1 < 1 : 1/(1-x1) ; x1 == 1 : 1 }"),
        domain: Domain::interval(0.0, 1.0 - 1e-8).expect("box"),
    }
}

/// `f ≡ 0`, `g = 0` on `(0, 1]` and `g(0) = 1`.
pub fn ex3_9() -> ScalarPair {
    ScalarPair {
        f: pf("0"),
        g: pf("piecewise{ x1 > 0 : 0 ; x1 == 0 : 1 }"),
        domain: Domain::interval(0.0, 1.0).expect("box"),
    }
}

/// Source of `f(x) = (x − ⌊x⌋)^⌊x⌋` on `[0, m]`, one branch per integer part.
pub fn ex4_9_f_source(m: usize) -> String {
    let branches: Vec<String> = (0..=m)
        .map(|k| format!("x1 >= {k} && x1 < {} : (x1 - {k})^{k}", k + 1))
        .collect();
    format!("piecewise{{ {} }}", branches.join(" ; "))
}

/// `f(x) = (x − ⌊x⌋)^⌊x⌋`, `g(x) = x − ⌊x⌋` on `[0, m]`.
pub fn ex4_9(m: usize) -> Result<ScalarPair> {
    if m == 0 {
        return Err(Error::NonPositive { name: "M", value: 0.0 });
    }
    Ok(ScalarPair {
        f: ex4_9_f_source(m).parse()?,
        g: pf("x1 - floor(x1)"),
        domain: Domain::interval(0.0, m as f64)?,
    })
}

/// A branch-generated multifunction with its domain box and sample grid.
#[derive(Clone, Debug)]
pub struct MultiFixture {
    pub mf: SampledMultifunction,
    pub domain: Domain,
}

fn branches_on(srcs: &[&str], domain: Domain, per_axis: usize) -> Result<MultiFixture> {
    let fns = srcs.iter().map(|s| s.parse()).collect::<Result<Vec<PiecewiseFn>>>()?;
    let xs = domain.grid(per_axis)?;
    Ok(MultiFixture {
        mf: SampledMultifunction::from_branches(fns, xs)?,
        domain,
    })
}

/// `F = {√x}` on `(0,4)`, `{2, 1}` at 4, `{5 − x}` on `(4,5)`; grid on
/// `[0, 5]` with step `5/(per_axis − 1)`.
pub fn ex5_14(per_axis: usize) -> Result<MultiFixture> {
    branches_on(
        &[
            "piecewise{ x1 > 0 && x1 < 4 : sqrt(x1) ; x1 == 4 : 2 }",
            "piecewise{ x1 == 4 : 1 ; x1 > 4 && x1 < 5 : 5 - x1 }",
        ],
        Domain::interval(0.0, 5.0)?,
        per_axis,
    )
}

/// `G = {(x−2)², 1, 2}` on `[−1, 4)` and `{1, 2}` on `[4, 6]`.
pub fn ex5_16(per_axis: usize) -> Result<MultiFixture> {
    branches_on(
        &[
            "piecewise{ x1 >= -1 && x1 < 4 : (x1 - 2)^2 }",
            "piecewise{ x1 >= -1 && x1 <= 6 : 1 }",
            "piecewise{ x1 >= -1 && x1 <= 6 : 2 }",
        ],
        Domain::interval(-1.0, 6.0)?,
        per_axis,
    )
}

/// `H = {x², x² + 1}` on `(−1, 1]`, sampled on a grid of `[−1, 1]`.
pub fn ex5_18(per_axis: usize) -> Result<MultiFixture> {
    branches_on(
        &[
            "piecewise{ x1 > -1 && x1 <= 1 : x1^2 }",
            "piecewise{ x1 > -1 && x1 <= 1 : x1^2 + 1 }",
        ],
        Domain::interval(-1.0, 1.0)?,
        per_axis,
    )
}

/// Points of `(−1, 1]`: a grid plus the sequence `−1 + 1/n`, `n ≤ seq`.
pub fn ex5_18_points(per_axis: usize, seq: usize) -> Result<Vec<Vec<f64>>> {
    let mut xs: Vec<Vec<f64>> = Domain::interval(-1.0, 1.0)?
        .grid(per_axis)?
        .into_iter()
        .filter(|x| x[0] > -1.0)
        .collect();
    xs.extend((1..=seq).map(|n| vec![-1.0 + 1.0 / n as f64]));
    Ok(xs)
}

/// `X = {0, 1} ⊂ R`.
pub fn ex6_4() -> ClosedSetSample {
    ClosedSetSample::exact(PointSet::from_scalars(&[0.0, 1.0])).expect("nonempty")
}

/// `X = {(−1, 0), (1, 0)} ⊂ R²`.
pub fn twopoint() -> ClosedSetSample {
    ClosedSetSample::exact(PointSet::new(2, vec![vec![-1.0, 0.0], vec![1.0, 0.0]]).expect("points"))
        .expect("nonempty")
}

/// `n` equally spaced points of the unit circle, starting at `(1, 0)`.
pub fn prop6_circle(n: usize) -> Result<ClosedSetSample> {
    if n < 3 {
        return Err(Error::Invalid("a circle sample needs at least 3 points".into()));
    }
    let pts = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    ClosedSetSample::continuum(PointSet::new(2, pts)?, 2.0 * (PI / n as f64).sin())
}

fn chain_pitch(pts: &[Vec<f64>]) -> f64 {
    pts.windows(2).map(|w| dist(&w[0], &w[1])).fold(0.0, f64::max)
}

/// `{0} ∪ [1, 2]`, with `[1, 2]` sampled on nested grids.
pub fn gap_segment(base: usize, round: usize) -> Result<ClosedSetSample> {
    let per_axis = nested_per_axis(base, round);
    let seg = Domain::interval(1.0, 2.0)?.grid(per_axis)?;
    let pitch = chain_pitch(&seg);
    let mut pts = vec![vec![0.0]];
    pts.extend(seg);
    ClosedSetSample::continuum(PointSet::new(1, pts)?, pitch)
}

/// `{(0,0)} ∪ {(x, −(x−1)²) : x ∈ [1/2, 1]}` at refinement `round`, with the
/// window on which regions are compared.
///
/// The window has half-width `0.4/h` for the abscissa step `h`: regions of
/// the arc points next to `(1, 0)` reach the region of the origin inside it,
/// the region of `(1, 0)` does not.
pub fn ex6_6(base: usize, round: usize) -> Result<NRound> {
    let per_axis = nested_per_axis(base, round);
    let arc: Vec<Vec<f64>> = Domain::interval(0.5, 1.0)?
        .grid(per_axis)?
        .into_iter()
        .map(|x| {
            let s = x[0] - 1.0;
            vec![x[0], 0.0 - s * s]
        })
        .collect();
    let pitch = chain_pitch(&arc);
    let h = 0.5 / (per_axis - 1) as f64;
    let r = 0.4 / h;
    let mut pts = vec![vec![0.0, 0.0]];
    pts.extend(arc);
    Ok(NRound {
        x: ClosedSetSample::continuum(PointSet::new(2, pts)?, pitch)?,
        window: Domain::new(vec![-r, -r], vec![1.0 + r, r])?,
        pitch,
    })
}
