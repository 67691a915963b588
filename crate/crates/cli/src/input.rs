use std::fs;
use std::path::Path;

use loja::domain::Domain;
use loja::expr::PiecewiseFn;
use loja::geometry::read_points;
use loja::medial::ClosedSetSample;
use loja::multifun::SampledMultifunction;
use loja::{Error, Result};

use crate::{MfSource, XSource};

/// A function from a file when `src` names one, otherwise the inline source.
pub fn function(src: &str) -> Result<PiecewiseFn> {
    let path = Path::new(src);
    if path.is_file() {
        fs::read_to_string(path)?.parse()
    } else {
        src.parse()
    }
}

pub fn point(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::Invalid(format!("bad coordinate `{v}` in `{s}`")))
        })
        .collect()
}

pub fn multifunction(src: &MfSource, a: &[f64], samples: usize, seed: u64) -> Result<SampledMultifunction> {
    if let Some(path) = &src.mf {
        let file = fs::File::open(path)?;
        return SampledMultifunction::read_jsonl(std::io::BufReader::new(file));
    }
    if src.branches.is_empty() {
        return Err(Error::Invalid("give --mf FILE or --branches f1,f2,..".into()));
    }
    let fns = src.branches.iter().map(|s| function(s)).collect::<Result<Vec<_>>>()?;
    let grid = src
        .grid
        .as_deref()
        .ok_or_else(|| Error::Invalid("--branches needs --grid SPEC".into()))?;
    let mut xs = Domain::parse(grid)?.sample(samples, seed)?.points;
    if !xs.iter().any(|x| x.as_slice() == a) {
        xs.push(a.to_vec());
    }
    SampledMultifunction::from_branches(fns, xs)
}

pub fn closed_set(src: &XSource) -> Result<ClosedSetSample> {
    let pts = read_points(&src.x, None)?;
    match src.pitch {
        Some(p) => ClosedSetSample::continuum(pts, p),
        None => ClosedSetSample::exact(pts),
    }
}

pub fn tol_med(src: &XSource, x: &ClosedSetSample) -> f64 {
    src.tol.unwrap_or_else(|| x.default_tol_med())
}
