use std::collections::HashMap;

use super::dist;

/// Uniform-cell spatial hash over point indices. Queries with radius at most
/// the cell size only need the 3^n neighbouring cells.
#[derive(Clone, Debug)]
pub struct GridIndex {
    dim: usize,
    cell: f64,
    cells: HashMap<Vec<i64>, Vec<usize>>,
}

impl GridIndex {
    pub fn new(dim: usize, cell: f64) -> Self {
        Self {
            dim,
            cell,
            cells: HashMap::new(),
        }
    }

    pub fn build(points: &[Vec<f64>], cell: f64) -> Self {
        let dim = points.first().map_or(0, Vec::len);
        let mut idx = Self::new(dim, cell);
        for (i, p) in points.iter().enumerate() {
            idx.insert(p, i);
        }
        idx
    }

    fn key(&self, p: &[f64]) -> Vec<i64> {
        p.iter().map(|v| (v / self.cell).floor() as i64).collect()
    }

    pub fn insert(&mut self, p: &[f64], id: usize) {
        let k = self.key(p);
        self.cells.entry(k).or_default().push(id);
    }

    /// Ids stored in the cells adjacent to `p` (including its own).
    pub fn neighbours(&self, p: &[f64]) -> Vec<usize> {
        let base = self.key(p);
        let mut out = Vec::new();
        let mut off = vec![-1i64; self.dim];
        loop {
            let k: Vec<i64> = base
                .iter()
                .zip(&off)
                .map(|(b, o)| b.saturating_add(*o))
                .collect();
            if let Some(ids) = self.cells.get(&k) {
                out.extend_from_slice(ids);
            }
            let mut d = 0;
            while d < self.dim {
                off[d] += 1;
                if off[d] <= 1 {
                    break;
                }
                off[d] = -1;
                d += 1;
            }
            if d == self.dim {
                break;
            }
        }
        out
    }

    /// Ids of `points` within `r <= cell` of `p`, sorted.
    pub fn within(&self, points: &[Vec<f64>], p: &[f64], r: f64) -> Vec<usize> {
        let mut ids: Vec<usize> = self
            .neighbours(p)
            .into_iter()
            .filter(|&i| dist(&points[i], p) <= r)
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn any_within(&self, points: &[Vec<f64>], p: &[f64], r: f64) -> bool {
        self.neighbours(p).into_iter().any(|i| dist(&points[i], p) <= r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_brute_force() {
        let pts: Vec<Vec<f64>> = (0..200)
            .map(|i| {
                let t = i as f64 * 0.7;
                vec![t.sin() * 3.0, (t * 1.3).cos() * 2.0]
            })
            .collect();
        let r = 0.4;
        let idx = GridIndex::build(&pts, r);
        for p in &pts {
            let brute: Vec<usize> = (0..pts.len()).filter(|&i| dist(&pts[i], p) <= r).collect();
            assert_eq!(idx.within(&pts, p, r), brute);
        }
    }
}
