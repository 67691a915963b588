//! Sampled multifunctions `F: R^m → P(R^n)`: Kuratowski limits,
//! semicontinuity, preimages and the multifunction inequality harness.

mod limits;
mod loja;
mod preimage;

use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::expr::PiecewiseFn;
use crate::geometry::{dist, PointSet, TOL_PT};

pub use limits::{
    classify_semicontinuity, default_radii, kuratowski_limits, Classification, LimitEstimate,
    DEFAULT_TOL_LIM,
};
pub use loja::{multifun_loja_fit, multifun_pairs, SetMetric};
pub use preimage::{preimage, PreimageKind};

pub type ValueFn = Arc<dyn Fn(&[f64]) -> Result<PointSet> + Send + Sync>;

/// Rule that recomputes `F(x)` at arbitrary points.
#[derive(Clone)]
pub enum Generator {
    /// `F(x)` is the set of values of the branches defined at `x`.
    Branches(Vec<PiecewiseFn>),
    Closure(ValueFn),
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Branches(b) => f.debug_tuple("Branches").field(&b.len()).finish(),
            Generator::Closure(_) => f.write_str("Closure(..)"),
        }
    }
}

impl Generator {
    pub fn eval(&self, x: &[f64]) -> Result<PointSet> {
        match self {
            Generator::Branches(fns) => {
                let mut vals = Vec::new();
                for f in fns {
                    if let Some(v) = f.eval_opt(x)? {
                        vals.push(vec![v]);
                    }
                }
                PointSet::new(1, vals)
            }
            Generator::Closure(c) => c(x),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SampledMultifunction {
    arg_dim: usize,
    val_dim: usize,
    xs: Vec<Vec<f64>>,
    values: Vec<PointSet>,
    generator: Option<Generator>,
}

#[derive(Serialize, Deserialize)]
struct Line {
    x: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl SampledMultifunction {
    pub fn new(arg_dim: usize, val_dim: usize, samples: Vec<(Vec<f64>, PointSet)>) -> Result<Self> {
        let mut xs = Vec::with_capacity(samples.len());
        let mut values = Vec::with_capacity(samples.len());
        for (x, v) in samples {
            if x.len() != arg_dim {
                return Err(Error::DimensionMismatch {
                    expected: arg_dim,
                    found: x.len(),
                });
            }
            if v.dim() != val_dim && !v.is_empty() {
                return Err(Error::DimensionMismatch {
                    expected: val_dim,
                    found: v.dim(),
                });
            }
            xs.push(x);
            values.push(v);
        }
        Ok(Self {
            arg_dim,
            val_dim,
            xs,
            values,
            generator: None,
        })
    }

    /// Evaluates `generator` at every point of `xs`.
    pub fn generate(
        arg_dim: usize,
        val_dim: usize,
        xs: Vec<Vec<f64>>,
        generator: Generator,
        exec: Exec,
    ) -> Result<Self> {
        let values = exec
            .map(&xs, |x| generator.eval(x))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let mut mf = Self::new(arg_dim, val_dim, xs.into_iter().zip(values).collect())?;
        mf.generator = Some(generator);
        Ok(mf)
    }

    pub fn from_branches(fns: Vec<PiecewiseFn>, xs: Vec<Vec<f64>>) -> Result<Self> {
        let arg_dim = fns.first().ok_or(Error::EmptySet)?.arity();
        if let Some(f) = fns.iter().find(|f| f.arity() != arg_dim) {
            return Err(Error::DimensionMismatch {
                expected: arg_dim,
                found: f.arity(),
            });
        }
        Self::generate(arg_dim, 1, xs, Generator::Branches(fns), Exec::auto())
    }

    pub fn arg_dim(&self) -> usize {
        self.arg_dim
    }

    pub fn val_dim(&self) -> usize {
        self.val_dim
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[Vec<f64>] {
        &self.xs
    }

    pub fn values(&self) -> &[PointSet] {
        &self.values
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_ref()
    }

    /// Indices of samples in `dom F` (nonempty value set).
    pub fn dom_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.values[i].is_empty()).collect()
    }

    /// `F(x)`: the stored value of a sample within `TOL_PT` of `x`, else the
    /// generator's value, else `None`.
    pub fn value_at(&self, x: &[f64]) -> Result<Option<PointSet>> {
        if x.len() != self.arg_dim {
            return Err(Error::DimensionMismatch {
                expected: self.arg_dim,
                found: x.len(),
            });
        }
        if let Some(i) = self.xs.iter().position(|s| dist(s, x) <= TOL_PT) {
            return Ok(Some(self.values[i].clone()));
        }
        match &self.generator {
            Some(g) => Ok(Some(g.eval(x)?)),
            None => Ok(None),
        }
    }

    /// `F(a)` for `a ∈ dom F`.
    pub fn value_in_dom(&self, a: &[f64]) -> Result<PointSet> {
        match self.value_at(a)? {
            Some(v) if !v.is_empty() => Ok(v),
            _ => Err(Error::NotInDomain { point: a.to_vec() }),
        }
    }

    /// Reads JSON lines `{"x": [..], "values": [[..], ...]}`.
    pub fn read_jsonl(reader: impl BufRead) -> Result<Self> {
        let mut samples = Vec::new();
        let (mut arg_dim, mut val_dim) = (None, None);
        for (n, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Line = serde_json::from_str(&line)
                .map_err(|e| Error::Format(format!("line {}: {e}", n + 1)))?;
            let m = *arg_dim.get_or_insert(rec.x.len());
            let d = match rec.values.first() {
                Some(v) => *val_dim.get_or_insert(v.len()),
                None => val_dim.unwrap_or(1),
            };
            if rec.x.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: rec.x.len(),
                });
            }
            samples.push((rec.x, PointSet::new(d, rec.values)?));
        }
        let arg_dim = arg_dim.ok_or(Error::EmptySet)?;
        Self::new(arg_dim, val_dim.unwrap_or(1), samples)
    }

    pub fn write_jsonl(&self, mut w: impl Write) -> Result<()> {
        for (x, v) in self.xs.iter().zip(&self.values) {
            let line = Line {
                x: x.clone(),
                values: v.points().to_vec(),
            };
            serde_json::to_writer(&mut w, &line)?;
            writeln!(w)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn jsonl_round_trip() {
        let text = "{\"x\":[0.5],\"values\":[[0.0],[1.0]]}\n{\"x\":[0.25],\"values\":[[0.0]]}\n{\"x\":[9],\"values\":[]}\n";
        let mf = SampledMultifunction::read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(mf.len(), 3);
        assert_eq!(mf.dom_indices(), vec![0, 1]);
        let mut out = Vec::new();
        mf.write_jsonl(&mut out).unwrap();
        let again = SampledMultifunction::read_jsonl(out.as_slice()).unwrap();
        assert_eq!(again.values(), mf.values());
        assert!(matches!(mf.value_in_dom(&[9.0]), Err(Error::NotInDomain { .. })));
    }

    #[test]
    fn branches_generate_consistent_values() {
        let fns = vec![
            parse("piecewise{ x1 > 0 && x1 < 4 : sqrt(x1) ; x1 == 4 : 2 }").unwrap(),
            parse("piecewise{ x1 >= 4 && x1 < 5 : 5 - x1 }").unwrap(),
        ];
        let xs: Vec<Vec<f64>> = (1..50).map(|i| vec![i as f64 * 0.1]).collect();
        let mf = SampledMultifunction::from_branches(fns, xs).unwrap();
        for (x, v) in mf.xs().iter().zip(mf.values()) {
            let again = mf.generator().unwrap().eval(x).unwrap();
            assert!(again.approx_eq(v, TOL_PT));
        }
        let at4 = mf.value_at(&[4.0]).unwrap().unwrap();
        assert!(at4.approx_eq(&PointSet::from_scalars(&[1.0, 2.0]), 1e-12));
    }
}
