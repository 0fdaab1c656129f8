//! CSV formats.
//!
//! * curve samples: `t,x0,x1,x2,x3,dx0,dx1,dx2,dx3`
//! * prolonged curves: `t,x0,x1,x2,x3,sigma,v1,v2,v3` (optionally followed by
//!   extra numeric columns)
//!
//! Floats are written with 17 significant digits so that a write/read cycle
//! is lossless. `sigma` is `+` or `-`.

use std::io::{Read, Write};

use crate::distribution::{CurveSample, CurveSamples, ProlongedSample};
use crate::minkowski::Orientation;
use crate::{Error, Result};

pub const CURVE_HEADER: [&str; 9] = ["t", "x0", "x1", "x2", "x3", "dx0", "dx1", "dx2", "dx3"];
pub const BUNDLE_HEADER: [&str; 9] = ["t", "x0", "x1", "x2", "x3", "sigma", "v1", "v2", "v3"];

/// Shortest-exact is not required; a fixed 17-digit scientific form keeps
/// outputs byte-stable.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn io_err(e: std::io::Error) -> Error {
    Error::Parse(e.to_string())
}

fn parse(field: &str, row: usize) -> Result<f64> {
    field.trim().parse().map_err(|_| Error::Parse(format!("row {row}: `{field}` is not a number")))
}

pub fn write_curve<W: Write>(w: W, curve: &CurveSamples) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CURVE_HEADER).map_err(csv_err)?;
    for s in curve.samples() {
        let row = std::iter::once(s.t).chain(s.x).chain(s.dx).map(fmt_f64);
        out.write_record(row).map_err(csv_err)?;
    }
    out.flush().map_err(io_err)
}

/// Read a curve. Files with only `t,x0..x3` get derivatives by finite
/// differences.
pub fn read_curve<R: Read>(r: R) -> Result<CurveSamples> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
    let with_dx = header == CURVE_HEADER;
    if !with_dx && header != CURVE_HEADER[..5] {
        return Err(Error::Parse(format!("unexpected curve header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let vals = rec.iter().map(|f| parse(f, i + 1)).collect::<Result<Vec<f64>>>()?;
        rows.push(vals);
    }
    if with_dx {
        CurveSamples::new(
            rows.iter()
                .map(|v| CurveSample { t: v[0], x: [v[1], v[2], v[3], v[4]], dx: [v[5], v[6], v[7], v[8]] })
                .collect(),
        )
    } else {
        let pts: Vec<(f64, [f64; 4])> = rows.iter().map(|v| (v[0], [v[1], v[2], v[3], v[4]])).collect();
        CurveSamples::from_positions(&pts)
    }
}

pub fn sigma_str(s: Orientation) -> &'static str {
    match s {
        Orientation::Future => "+",
        Orientation::Past => "-",
    }
}

/// Write a prolonged curve; `extra` names additional columns whose values are
/// supplied per row by `extra_values`.
pub fn write_bundle_curve<W: Write>(
    w: W,
    samples: &[ProlongedSample],
    extra: &[&str],
    extra_values: impl Fn(usize, &ProlongedSample) -> Vec<f64>,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(BUNDLE_HEADER.iter().copied().chain(extra.iter().copied())).map_err(csv_err)?;
    for (i, s) in samples.iter().enumerate() {
        let x = s.point.event.coords();
        let v = s.point.cone.spatial();
        let mut row: Vec<String> = std::iter::once(s.t).chain(x.iter().copied()).map(fmt_f64).collect();
        row.push(sigma_str(s.point.cone.sigma()).to_owned());
        row.extend(v.iter().copied().map(fmt_f64));
        row.extend(extra_values(i, s).into_iter().map(fmt_f64));
        out.write_record(&row).map_err(csv_err)?;
    }
    out.flush().map_err(io_err)
}

/// A parsed row of a prolonged-curve file.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BundleRow {
    pub t: f64,
    pub x: [f64; 4],
    pub sigma: Orientation,
    pub v: [f64; 3],
}

pub fn read_bundle_curve<R: Read>(r: R) -> Result<Vec<BundleRow>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let header: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
    if header.len() < 9 || header[..9] != BUNDLE_HEADER {
        return Err(Error::Parse(format!("unexpected bundle header {header:?}")));
    }
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(csv_err)?;
            let num = |k: usize| parse(&rec[k], i + 1);
            let sigma = match rec[5].trim() {
                "+" => Orientation::Future,
                "-" => Orientation::Past,
                other => return Err(Error::Parse(format!("row {}: bad sigma `{other}`", i + 1))),
            };
            Ok(BundleRow { t: num(0)?, x: [num(1)?, num(2)?, num(3)?, num(4)?], sigma, v: [num(6)?, num(7)?, num(8)?] })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::minkowski;
    use crate::distribution::prolong;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn curve_round_trip_is_lossless(
            rows in prop::collection::vec((prop::array::uniform4(-1e6f64..1e6), prop::array::uniform4(-1e3f64..1e3)), 1..20),
            dt in 1e-6f64..10.0,
        ) {
            let samples: Vec<CurveSample> = rows.iter().enumerate()
                .map(|(i, (x, dx))| CurveSample { t: i as f64 * dt, x: *x, dx: *dx })
                .collect();
            let curve = CurveSamples::new(samples).unwrap();
            let mut buf = Vec::new();
            write_curve(&mut buf, &curve).unwrap();
            prop_assert_eq!(read_curve(buf.as_slice()).unwrap(), curve);
        }
    }

    #[test]
    fn positions_only_curve_is_differenced() {
        let text = "t,x0,x1,x2,x3\n0,0,0,0,0\n1,1,1,0,0\n2,2,2,0,0\n";
        let c = read_curve(text.as_bytes()).unwrap();
        assert!(c.samples().iter().all(|s| s.dx == [1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn malformed_curves_are_rejected() {
        assert!(matches!(read_curve("a,b\n1,2\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_curve("t,x0,x1,x2,x3\n0,0,0,zero,0\n1,1,1,0,0\n".as_bytes()), Err(Error::Parse(_))));
    }

    #[test]
    fn bundle_curve_round_trip() {
        let m = minkowski();
        let text = "t,x0,x1,x2,x3\n0,0,0,0,0\n0.5,0.5,0,0.5,0\n1,1,0,1,0\n";
        let lifted = prolong(&read_curve(text.as_bytes()).unwrap(), &m, 1e-9).unwrap();
        let mut buf = Vec::new();
        write_bundle_curve(&mut buf, &lifted, &["extra"], |i, _| vec![i as f64]).unwrap();
        let rows = read_bundle_curve(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), 3);
        for (row, s) in rows.iter().zip(&lifted) {
            assert_eq!(row.v, s.point.cone.spatial());
            assert_eq!(row.sigma, Orientation::Future);
            assert_eq!(&row.x, s.point.event.coords());
        }
    }
}
