use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{preimage, PreimageKind, SampledMultifunction};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{dist_point_set, hausdorff_ext, kuratowski_dist, PointSet, TOL_PT};
use crate::lojafit::{fit_pairs, FitConfig, PairSample, PowerLawFit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SetMetric {
    Hausdorff,
    Kuratowski,
}

impl SetMetric {
    pub fn dist(self, a: &PointSet, b: &PointSet) -> Result<f64> {
        match self {
            SetMetric::Hausdorff => hausdorff_ext(a, b, 0.0),
            SetMetric::Kuratowski => kuratowski_dist(a, b),
        }
    }
}

impl fmt::Display for SetMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetMetric::Hausdorff => "hausdorff",
            SetMetric::Kuratowski => "kuratowski",
        })
    }
}

impl FromStr for SetMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hausdorff" => Ok(SetMetric::Hausdorff),
            "kuratowski" => Ok(SetMetric::Kuratowski),
            _ => Err(Error::Invalid(format!("unknown metric `{s}`"))),
        }
    }
}

/// Pairs `(dist(F(x), F(a)), d(x, P))` over the samples of `F` lying in `K`,
/// where `P` is the chosen preimage of `F(a)`.
pub fn multifun_pairs(
    f: &SampledMultifunction,
    a: &[f64],
    k: &Domain,
    kind: PreimageKind,
    metric: SetMetric,
    exec: Exec,
) -> Result<PairSample> {
    if !k.contains(a)? {
        return Err(Error::Invalid(format!("{a:?} is not in K")));
    }
    let fa = f.value_in_dom(a)?;
    let pre = preimage(f, a, kind)?;
    assert!(pre.contains(a, TOL_PT), "a belongs to each of its preimages");
    let mut idx = Vec::new();
    for (i, x) in f.xs().iter().enumerate() {
        if k.contains(x)? {
            if f.values()[i].is_empty() {
                return Err(Error::NotInDomain { point: x.clone() });
            }
            idx.push(i);
        }
    }
    if idx.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let pairs = exec
        .map(&idx, |&i| {
            Ok((
                metric.dist(&f.values()[i], &fa)?,
                dist_point_set(&f.xs()[i], &pre)?,
            ))
        })
        .into_iter()
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let points = idx.iter().map(|&i| f.xs()[i].clone()).collect();
    let (fv, gv) = pairs.into_iter().unzip();
    Ok(PairSample::new(points, fv, gv))
}

/// Fits `dist(F(x), F(a)) ≥ C d(x, P)^α` on `K`, `P` the chosen preimage.
pub fn multifun_loja_fit(
    f: &SampledMultifunction,
    a: &[f64],
    k: &Domain,
    kind: PreimageKind,
    metric: SetMetric,
    cfg: &FitConfig,
) -> Result<PowerLawFit> {
    let data = multifun_pairs(f, a, k, kind, metric, Exec::auto())?;
    Ok(fit_pairs(&data, cfg, Exec::auto()))
}
