//! CSV serialisation of curvature grids and ratio scans.
//!
//! Floats are written as `{:.16e}` (17 significant digits) so that runs
//! diff cleanly. Indices in headers are 1-based.

use std::fmt::Write;

use crate::curvature::CurvatureTensor;
use crate::diagnostics::scans::RatioScan;
use crate::error::{Error, Result};

fn num(out: &mut String, v: f64) {
    let _ = write!(out, ",{v:.16e}");
}

/// One row per point: `w{k}_re, w{k}_im`, then `K[i][j][r][c]_re/_im`
/// with blocks flattened row-major.
pub fn curvature_csv(tensors: &[CurvatureTensor]) -> Result<String> {
    let Some(first) = tensors.first() else {
        return Ok(String::new());
    };
    let (m, n) = (first.m, first.n);
    if tensors.iter().any(|t| t.m != m || t.n != n) {
        return Err(Error::DimensionMismatch("curvature grid mixes block shapes".into()));
    }
    let mut cols = Vec::new();
    for k in 1..=m {
        cols.push(format!("w{k}_re"));
        cols.push(format!("w{k}_im"));
    }
    for i in 1..=m {
        for j in 1..=m {
            for r in 1..=n {
                for c in 1..=n {
                    cols.push(format!("K[{i}][{j}][{r}][{c}]_re"));
                    cols.push(format!("K[{i}][{j}][{r}][{c}]_im"));
                }
            }
        }
    }
    let mut out = cols.join(",");
    out.push('\n');
    for t in tensors {
        let mut row = String::new();
        for z in &t.point {
            num(&mut row, z.re);
            num(&mut row, z.im);
        }
        for b in &t.blocks {
            for r in 0..n {
                for c in 0..n {
                    num(&mut row, b[(r, c)].re);
                    num(&mut row, b[(r, c)].im);
                }
            }
        }
        out.push_str(&row[1..]);
        out.push('\n');
    }
    Ok(out)
}

/// `r, step, ratio` per radius.
pub fn ratio_scan_csv(scan: &RatioScan) -> String {
    let mut out = String::from("r,step,ratio\n");
    for ((r, s), v) in scan.radii.iter().zip(&scan.steps).zip(&scan.values) {
        let mut row = String::new();
        num(&mut row, *r);
        num(&mut row, *s);
        num(&mut row, *v);
        out.push_str(&row[1..]);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{curvature, MetricField};
    use crate::geometry::Point;
    use crate::kernels::DiagonalKernel;
    use crate::wirtinger::{CMat, WirtingerStencil};

    #[test]
    fn header_and_row_shape() {
        let h = MetricField::kernel_line(&DiagonalKernel::power(2, 1.0).unwrap());
        let s = WirtingerStencil::default();
        let pts = [Point::origin(2), Point::real(&[0.1, 0.2]).unwrap()];
        let ts: Vec<_> = pts.iter().map(|w| curvature(&h, w, &s).unwrap()).collect();
        let csv = curvature_csv(&ts).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        let header: Vec<&str> = lines[0].split(',').collect();
        assert_eq!(header.len(), 4 + 8);
        assert_eq!(header[4], "K[1][1][1][1]_re");
        assert_eq!(header[11], "K[2][2][1][1]_im");
        let origin: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
        assert!((origin[4] + 1.0).abs() < 1e-6);
        assert!(lines[1].split(',').all(|v| v.contains('e')));
    }

    #[test]
    fn mixed_shapes_rejected() {
        let s = WirtingerStencil::default();
        let a = curvature(&MetricField::constant(1, CMat::identity(1, 1)), &Point::origin(1), &s).unwrap();
        let b = curvature(&MetricField::constant(2, CMat::identity(1, 1)), &Point::origin(2), &s).unwrap();
        assert!(curvature_csv(&[a, b]).is_err());
    }
}
