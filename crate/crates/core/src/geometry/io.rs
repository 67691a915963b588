use std::fs;
use std::io::Write;
use std::path::Path;

use super::PointSet;
use crate::error::{Error, Result};

/// Reads a point set: one point per line, comma separated, optional
/// `# dim=n` header. An empty file is the empty set of dimension
/// `header`, `dim_hint` or 1.
pub fn read_points(path: &Path, dim_hint: Option<usize>) -> Result<PointSet> {
    parse_points(&fs::read_to_string(path)?, dim_hint)
}

pub fn parse_points(text: &str, dim_hint: Option<usize>) -> Result<PointSet> {
    let mut header_dim = None;
    for line in text.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("dim=") {
                header_dim = Some(
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Format(format!("bad header `{line}`")))?,
                );
            }
        } else if !line.is_empty() {
            break;
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let p = rec
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Format(format!("bad coordinate `{f}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        points.push(p);
    }
    let dim = header_dim
        .or_else(|| points.first().map(Vec::len))
        .or(dim_hint)
        .unwrap_or(1);
    PointSet::new(dim, points)
}

pub fn write_points(path: &Path, set: &PointSet) -> Result<()> {
    let mut out = fs::File::create(path)?;
    out.write_all(format_points(set).as_bytes())?;
    Ok(())
}

pub fn format_points(set: &PointSet) -> String {
    let mut s = format!("# dim={}\n", set.dim());
    for p in set.iter() {
        let row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_empty() {
        let s = PointSet::new(2, vec![vec![0.1, -2.0], vec![3.0, 1e-7]]).unwrap();
        assert_eq!(parse_points(&format_points(&s), None).unwrap(), s);
        let e = parse_points("# dim=3\n", None).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.dim(), 3);
        assert_eq!(parse_points("", Some(2)).unwrap().dim(), 2);
        assert!(parse_points("1,2\n3\n", None).is_err());
        assert!(parse_points("1,x\n", None).is_err());
    }
}
