//! Sampling a polynomial knot along a parameter range for external plotting.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::lift::PolyKnot;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("need at least two sample points, got {0}")]
    TooFewPoints(usize),
    #[error("empty or reversed range [{0}, {1}]")]
    BadRange(f64, f64),
    #[error("unknown format {0:?} (expected csv, json or obj)")]
    UnknownFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Obj,
}

impl FromStr for Format {
    type Err = ExportError;

    fn from_str(s: &str) -> Result<Format, ExportError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "obj" => Ok(Format::Obj),
            _ => Err(ExportError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// One unit beyond the outermost crossing parameters, or `[-2, 2]` for a
/// diagram without crossings.
pub fn default_range(k: &PolyKnot) -> (f64, f64) {
    let params = k.diagram.visits.iter().map(|v| v.param);
    let lo = params.clone().fold(f64::INFINITY, f64::min);
    let hi = params.fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() {
        (lo - 1.0, hi + 1.0)
    } else {
        (-2.0, 2.0)
    }
}

pub fn sample(k: &PolyKnot, npoints: usize, range: Option<(f64, f64)>) -> Result<Vec<Sample>, ExportError> {
    if npoints < 2 {
        return Err(ExportError::TooFewPoints(npoints));
    }
    let (t0, t1) = range.unwrap_or_else(|| default_range(k));
    if t0 >= t1 || !t0.is_finite() || !t1.is_finite() {
        return Err(ExportError::BadRange(t0, t1));
    }
    let step = (t1 - t0) / (npoints - 1) as f64;
    Ok((0..npoints)
        .map(|i| {
            let t = if i + 1 == npoints { t1 } else { t0 + step * i as f64 };
            Sample {
                t,
                x: k.f.eval(t),
                y: k.g.eval(t),
                z: k.h.eval(t),
            }
        })
        .collect())
}

/// Nine significant digits.
fn sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let s = format!("{v:.8e}");
    let parsed: f64 = s.parse().expect("formatted float parses");
    let plain = format!("{parsed}");
    if plain.len() <= s.len() {
        plain
    } else {
        s
    }
}

pub fn render(samples: &[Sample], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("t,x,y,z\n");
            for s in samples {
                let _ = writeln!(out, "{},{},{},{}", sig9(s.t), sig9(s.x), sig9(s.y), sig9(s.z));
            }
        }
        Format::Json => {
            let rounded: Vec<Sample> = samples
                .iter()
                .map(|s| Sample {
                    t: sig9(s.t).parse().unwrap(),
                    x: sig9(s.x).parse().unwrap(),
                    y: sig9(s.y).parse().unwrap(),
                    z: sig9(s.z).parse().unwrap(),
                })
                .collect();
            out = serde_json::to_string_pretty(&rounded).expect("samples serialize");
            out.push('\n');
        }
        Format::Obj => {
            out.push_str("# polynomial knot polyline\n");
            for s in samples {
                let _ = writeln!(out, "v {} {} {}", sig9(s.x), sig9(s.y), sig9(s.z));
            }
            out.push('l');
            for i in 1..=samples.len() {
                let _ = write!(out, " {i}");
            }
            out.push('\n');
        }
    }
    out
}

pub fn export_samples(
    k: &PolyKnot,
    npoints: usize,
    range: Option<(f64, f64)>,
    format: Format,
    mut sink: impl Write,
) -> Result<(), ExportError> {
    let samples = sample(k, npoints, range)?;
    sink.write_all(render(&samples, format).as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::QuasitoricPattern;
    use crate::lift::construct_polyknot;

    #[test]
    fn significant_digits() {
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(-0.123456789123), "-0.123456789");
        assert_eq!(sig9(123456789012.0), "123456789000");
        assert_eq!(sig9(1.5e-20), "1.50000000e-20");
        assert_eq!(sig9(0.0), "0");
    }

    #[test]
    fn csv_and_obj_shapes() {
        let k = construct_polyknot(&QuasitoricPattern::toric(2, 3)).unwrap();
        let s = sample(&k, 1000, None).unwrap();
        let csv = render(&s, Format::Csv);
        assert_eq!(csv.lines().count(), 1001);
        assert_eq!(csv.lines().next(), Some("t,x,y,z"));
        let obj = render(&s, Format::Obj);
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 1000);
        assert_eq!(obj.lines().filter(|l| l.starts_with("l ")).count(), 1);
        assert!(matches!(sample(&k, 1, None), Err(ExportError::TooFewPoints(1))));
        let (lo, hi) = default_range(&k);
        assert_eq!(s[0].t, lo);
        assert_eq!(s[999].t, hi);
    }
}
