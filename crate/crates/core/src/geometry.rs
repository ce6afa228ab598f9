//! Points of the open unit ball and evaluation grids.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `w = (w_1, ..., w_m)` with `|w| < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct Point(Vec<Complex64>);

impl Point {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Config("a point needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain("point has non-finite coordinates".into()));
        }
        let norm = norm(&coords);
        if norm >= 1.0 {
            return Err(Error::Domain(format!(
                "point of norm {norm} is outside the open unit ball"
            )));
        }
        Ok(Point(coords))
    }

    /// Real coordinates only.
    pub fn real(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn origin(m: usize) -> Self {
        Point(vec![Complex64::new(0.0, 0.0); m])
    }

    /// `r * e_axis` (zero-based axis).
    pub fn on_axis(m: usize, axis: usize, r: f64) -> Result<Self> {
        let mut v = vec![Complex64::new(0.0, 0.0); m];
        v[axis] = Complex64::new(r, 0.0);
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.0)
    }

    /// Coordinate-wise complex conjugate.
    pub fn conj(&self) -> Point {
        Point(self.0.iter().map(|c| c.conj()).collect())
    }
}

impl TryFrom<Vec<Complex64>> for Point {
    type Error = Error;
    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<Complex64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

pub fn norm_sqr(coords: &[Complex64]) -> f64 {
    coords.iter().map(|c| c.norm_sqr()).sum()
}

pub fn norm(coords: &[Complex64]) -> f64 {
    norm_sqr(coords).sqrt()
}

/// `<z, w> = sum z_i conj(w_i)`.
pub fn inner(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

/// Description of a set of evaluation points inside the ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridSpec {
    Points {
        points: Vec<Vec<Complex64>>,
    },
    Radial {
        direction: Vec<Complex64>,
        radii: Vec<f64>,
    },
    /// `resolution^m` points; axis `j` runs over a real segment
    /// `[-a, a]` (`a = radius_cap / sqrt(m)`) rotated by a fixed phase.
    Lattice {
        m: usize,
        resolution: usize,
        radius_cap: f64,
    },
}

impl GridSpec {
    pub fn radial_axis(m: usize, axis: usize, radii: Vec<f64>) -> Self {
        let mut direction = vec![Complex64::new(0.0, 0.0); m];
        direction[axis] = Complex64::new(1.0, 0.0);
        GridSpec::Radial { direction, radii }
    }

    /// `count` equally spaced radii in `[0, r_max]` along `e_axis`.
    pub fn radial_linspace(m: usize, axis: usize, r_max: f64, count: usize) -> Self {
        let radii = linspace(0.0, r_max, count);
        Self::radial_axis(m, axis, radii)
    }

    pub fn dim(&self) -> usize {
        match self {
            GridSpec::Points { points } => points.first().map_or(0, Vec::len),
            GridSpec::Radial { direction, .. } => direction.len(),
            GridSpec::Lattice { m, .. } => *m,
        }
    }

    /// Declared radius bound; every generated point satisfies `|w| <= r_max`.
    pub fn r_max(&self) -> f64 {
        match self {
            GridSpec::Points { points } => points.iter().map(|p| norm(p)).fold(0.0, f64::max),
            GridSpec::Radial { radii, .. } => radii.iter().map(|r| r.abs()).fold(0.0, f64::max),
            GridSpec::Lattice { radius_cap, .. } => *radius_cap,
        }
    }

    pub fn points(&self) -> Result<Vec<Point>> {
        let r_max = self.r_max();
        if !(r_max < 1.0) {
            return Err(Error::Domain(format!("grid radius bound {r_max} is not below 1")));
        }
        match self {
            GridSpec::Points { points } => {
                let m = self.dim();
                if points.iter().any(|p| p.len() != m) {
                    return Err(Error::Config("grid points have mixed dimensions".into()));
                }
                points.iter().cloned().map(Point::new).collect()
            }
            GridSpec::Radial { direction, radii } => {
                let len = norm(direction);
                if !(len > 0.0) {
                    return Err(Error::Config("radial direction must be non-zero".into()));
                }
                radii
                    .iter()
                    .map(|&r| Point::new(direction.iter().map(|d| d * (r / len)).collect()))
                    .collect()
            }
            GridSpec::Lattice {
                m,
                resolution,
                radius_cap,
            } => {
                if *m == 0 || *resolution == 0 {
                    return Err(Error::Config("lattice needs m >= 1 and resolution >= 1".into()));
                }
                let a = radius_cap / (*m as f64).sqrt();
                let axis = if *resolution == 1 {
                    vec![0.0]
                } else {
                    linspace(-a, a, *resolution)
                };
                let phases: Vec<Complex64> = (0..*m)
                    .map(|j| Complex64::from_polar(1.0, PI * (j + 1) as f64 / (2.0 * (*m + 1) as f64)))
                    .collect();
                let total = resolution.pow(*m as u32);
                (0..total)
                    .map(|mut code| {
                        let coords = phases
                            .iter()
                            .map(|ph| {
                                let v = axis[code % resolution];
                                code /= resolution;
                                ph * v
                            })
                            .collect();
                        Point::new(coords)
                    })
                    .collect()
            }
        }
    }
}

pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..count)
            .map(|k| a + (b - a) * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Short textual grid forms, or a JSON object:
///
/// * `radial:<m>:<axis>:<r_max>:<count>` (axis is 1-based)
/// * `radii:<m>:<axis>:<r1>,<r2>,...`
/// * `lattice:<m>:<resolution>:<r_max>`
/// * `point:<re>,<im>[,<re>,<im>...]`
impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Config(format!("grid JSON: {e}")));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Config(format!("unrecognised grid spec `{s}`"));
        let int = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let real = |t: &str| t.parse::<f64>().map_err(|_| bad());
        let axis = |m: usize, t: &str| -> Result<usize> {
            let a = int(t)?;
            if a == 0 || a > m {
                return Err(Error::Config(format!("axis {a} out of range 1..={m}")));
            }
            Ok(a - 1)
        };
        match parts.as_slice() {
            ["radial", m, ax, r, count] => {
                let m = int(m)?;
                Ok(GridSpec::radial_linspace(m, axis(m, ax)?, real(r)?, int(count)?))
            }
            ["radii", m, ax, list] => {
                let m = int(m)?;
                let radii = list.split(',').map(|t| real(t.trim())).collect::<Result<_>>()?;
                Ok(GridSpec::radial_axis(m, axis(m, ax)?, radii))
            }
            ["lattice", m, res, r] => Ok(GridSpec::Lattice {
                m: int(m)?,
                resolution: int(res)?,
                radius_cap: real(r)?,
            }),
            ["point", list] => {
                let vals: Vec<f64> = list.split(',').map(|t| real(t.trim())).collect::<Result<_>>()?;
                if vals.is_empty() || !vals.len().is_multiple_of(2) {
                    return Err(bad());
                }
                let p = vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
                Ok(GridSpec::Points { points: vec![p] })
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_rejects_outside() {
        assert!(Point::real(&[0.6, 0.8]).is_err());
        assert!(Point::real(&[0.6, 0.79]).is_ok());
        assert!(matches!(Point::real(&[1.5]), Err(Error::Domain(_))));
    }

    #[test]
    fn lattice_respects_cap() {
        let g = GridSpec::Lattice {
            m: 2,
            resolution: 5,
            radius_cap: 0.7,
        };
        let pts = g.points().unwrap();
        assert_eq!(pts.len(), 25);
        assert!(pts.iter().all(|p| p.norm() <= 0.7 + 1e-15));
        // not confined to the real slice
        assert!(pts.iter().any(|p| p.coords()[0].im.abs() > 0.1));
    }

    #[test]
    fn parse_short_forms() {
        let g: GridSpec = "radial:1:1:0.8:50".parse().unwrap();
        let pts = g.points().unwrap();
        assert_eq!(pts.len(), 50);
        assert!((pts[49].norm() - 0.8).abs() < 1e-15);
        let g: GridSpec = "radii:2:1:0.9,0.99".parse().unwrap();
        assert_eq!(g.points().unwrap()[1].coords()[0].re, 0.99);
        let g: GridSpec = "point:0.1,0.2,0.3,0".parse().unwrap();
        assert_eq!(g.dim(), 2);
        assert!("radial:2:3:0.5:4".parse::<GridSpec>().is_err());
        assert!("radii:1:1:1.2".parse::<GridSpec>().unwrap().points().is_err());
    }

    #[test]
    fn parse_json_grid() {
        let g: GridSpec =
            r#"{"radial":{"direction":[[1,0],[1,0]],"radii":[0.0,0.5]}}"#.parse().unwrap();
        let p = &g.points().unwrap()[1];
        assert!((p.norm() - 0.5).abs() < 1e-15);
    }
}
