use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::SampledMultifunction;
use crate::error::{Error, Result};
use crate::geometry::{PointSet, TOL_PT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PreimageKind {
    /// `F(x) = F(a)`
    Strong,
    /// `F(x) ⊆ F(a)`
    Lower,
    /// `F(a) ⊆ F(x)`
    Upper,
    /// `F(x) ∩ F(a) ≠ ∅`
    Weak,
}

impl PreimageKind {
    pub const ALL: [PreimageKind; 4] = [
        PreimageKind::Strong,
        PreimageKind::Lower,
        PreimageKind::Upper,
        PreimageKind::Weak,
    ];

    pub fn holds(self, fx: &PointSet, fa: &PointSet, tol: f64) -> bool {
        if fx.is_empty() {
            return false;
        }
        match self {
            PreimageKind::Strong => fx.approx_eq(fa, tol),
            PreimageKind::Lower => fx.is_subset_of(fa, tol),
            PreimageKind::Upper => fa.is_subset_of(fx, tol),
            PreimageKind::Weak => fx.intersects(fa, tol),
        }
    }
}

impl fmt::Display for PreimageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreimageKind::Strong => "strong",
            PreimageKind::Lower => "lower",
            PreimageKind::Upper => "upper",
            PreimageKind::Weak => "weak",
        })
    }
}

impl FromStr for PreimageKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strong" => Ok(PreimageKind::Strong),
            "lower" => Ok(PreimageKind::Lower),
            "upper" => Ok(PreimageKind::Upper),
            "weak" => Ok(PreimageKind::Weak),
            _ => Err(Error::Invalid(format!("unknown preimage kind `{s}`"))),
        }
    }
}

/// Samples `x ∈ dom F` whose value set relates to `F(a)` as `kind` asks,
/// with `a` itself always included.
pub fn preimage(f: &SampledMultifunction, a: &[f64], kind: PreimageKind) -> Result<PointSet> {
    preimage_tol(f, a, kind, TOL_PT)
}

pub fn preimage_tol(f: &SampledMultifunction, a: &[f64], kind: PreimageKind, tol: f64) -> Result<PointSet> {
    let fa = f.value_in_dom(a)?;
    let mut pts = vec![a.to_vec()];
    for (x, fx) in f.xs().iter().zip(f.values()) {
        if kind.holds(fx, &fa, tol) {
            pts.push(x.clone());
        }
    }
    PointSet::new(f.arg_dim(), pts)
}
