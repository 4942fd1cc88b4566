//! Point-sequence file I/O.
//!
//! CSV: one header-free `x,y` line per point, `.` decimal separator, LF
//! newlines. JSON: an array of `[x, y]` arrays. Values are written in the
//! shortest form that parses back to the identical double.

use std::path::Path;

use anyhow::{bail, Context, Result};
use frechet::{Point2, PointSeq, SeqRole};

pub fn read_points(path: &Path) -> Result<Vec<Point2>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_json(&text).with_context(|| format!("parsing {}", path.display()))
    } else {
        parse_csv(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

pub fn read_seq(path: &Path, role: SeqRole) -> Result<PointSeq> {
    let points = read_points(path)?;
    Ok(PointSeq::new(points, role)?)
}

pub fn parse_csv(text: &str) -> Result<Vec<Point2>> {
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((xs, ys)) = line.split_once(',') else {
            bail!("line {}: expected \"x,y\"", lineno + 1);
        };
        let x: f64 = xs.trim().parse().with_context(|| format!("line {}: bad x", lineno + 1))?;
        let y: f64 = ys.trim().parse().with_context(|| format!("line {}: bad y", lineno + 1))?;
        points.push(Point2::new(x, y));
    }
    Ok(points)
}

pub fn parse_json(text: &str) -> Result<Vec<Point2>> {
    let pairs: Vec<[f64; 2]> = serde_json::from_str(text)?;
    Ok(pairs.into_iter().map(|[x, y]| Point2::new(x, y)).collect())
}

pub fn format_csv(points: &[Point2]) -> String {
    let mut out = String::new();
    for p in points {
        out.push_str(&format!("{:?},{:?}\n", p.x, p.y));
    }
    out
}

pub fn format_json(points: &[Point2]) -> String {
    let pairs: Vec<[f64; 2]> = points.iter().map(|p| [p.x, p.y]).collect();
    let mut s = serde_json::to_string(&pairs).expect("serializing points");
    s.push('\n');
    s
}

pub fn write_points(path: &Path, points: &[Point2], json: bool) -> Result<()> {
    let body = if json { format_json(points) } else { format_csv(points) };
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let pts = vec![
            Point2::new(0.1, -2.5),
            Point2::new(5f64.sqrt(), 1.0 / 3.0),
            Point2::new(-0.0, 1e-300),
        ];
        let parsed = parse_csv(&format_csv(&pts)).unwrap();
        assert_eq!(pts.len(), parsed.len());
        for (a, b) in pts.iter().zip(&parsed) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
    }

    #[test]
    fn json_round_trip() {
        let pts = vec![Point2::new(2.0f64.sqrt(), -1.0), Point2::new(4.0, 0.25)];
        let parsed = parse_json(&format_json(&pts)).unwrap();
        for (a, b) in pts.iter().zip(&parsed) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
    }

    #[test]
    fn csv_errors_are_reported() {
        assert!(parse_csv("1.0").is_err());
        assert!(parse_csv("a,b").is_err());
        assert!(parse_csv("1.0,2.0\n3.0\n").is_err());
    }
}
