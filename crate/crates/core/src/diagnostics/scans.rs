//! Curvature-ratio scans, plurisubharmonicity checks and the sup-ratio
//! section condition.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::curvature::{complex_hessian, curvature, MetricField};
use crate::error::{Error, Result};
use crate::geometry::{GridSpec, Point};
use crate::linalg::{hermitian_eigenvalues, hermitian_residual, max_abs, trace};
use crate::polynomial::Polynomial;
use crate::shifts::{DefectOperator, ShiftTuple};
use crate::wirtinger::{CMat, WirtingerStencil};

/// Step used near the boundary: `(1 - r^2) * NEAR_BOUNDARY_FACTOR`.
pub const NEAR_BOUNDARY_FACTOR: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct RatioScan {
    pub axis: usize,
    pub direction: Vec<Complex64>,
    pub radii: Vec<f64>,
    /// `K_T^{i,i} / K_S^{i,i}` (traces of the blocks for rank > 1).
    pub values: Vec<f64>,
    pub steps: Vec<f64>,
    pub stencil: WirtingerStencil,
}

/// Ratio scan along `e_axis`.
pub fn curvature_ratio_scan(
    h_t: &MetricField,
    h_s: &MetricField,
    axis: usize,
    radii: &[f64],
    stencil: &WirtingerStencil,
) -> Result<RatioScan> {
    let mut direction = vec![Complex64::new(0.0, 0.0); h_t.dim()];
    direction
        .get_mut(axis)
        .map(|d| *d = Complex64::new(1.0, 0.0))
        .ok_or_else(|| Error::Config(format!("axis {axis} out of range")))?;
    curvature_ratio_scan_along(h_t, h_s, axis, &direction, radii, stencil)
}

/// Ratio scan at `w = r * direction / |direction|`.
pub fn curvature_ratio_scan_along(
    h_t: &MetricField,
    h_s: &MetricField,
    axis: usize,
    direction: &[Complex64],
    radii: &[f64],
    stencil: &WirtingerStencil,
) -> Result<RatioScan> {
    if h_t.dim() != h_s.dim() || h_t.rank() != h_s.rank() {
        return Err(Error::DimensionMismatch("metrics are not rank-compatible".into()));
    }
    if axis >= h_t.dim() || direction.len() != h_t.dim() {
        return Err(Error::DimensionMismatch("axis or direction does not match B_m".into()));
    }
    let points = GridSpec::Radial {
        direction: direction.to_vec(),
        radii: radii.to_vec(),
    }
    .points()?;
    let mut values = Vec::with_capacity(radii.len());
    let mut steps = Vec::with_capacity(radii.len());
    for (w, r) in points.iter().zip(radii) {
        let step = stencil.step.min((1.0 - r * r) * NEAR_BOUNDARY_FACTOR);
        let s = stencil.with_step(step);
        let kt = trace(curvature(h_t, w, &s)?.block(axis, axis)).re;
        let ks = trace(curvature(h_s, w, &s)?.block(axis, axis)).re;
        let v = kt / ks;
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("ratio is not finite at r = {r}")));
        }
        values.push(v);
        steps.push(step);
    }
    Ok(RatioScan {
        axis,
        direction: direction.to_vec(),
        radii: radii.to_vec(),
        values,
        steps,
        stencil: *stencil,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PshPoint {
    pub point: Vec<Complex64>,
    pub value: Option<f64>,
    pub min_eigenvalue: Option<f64>,
    pub hessian_scale: Option<f64>,
    pub hermitian_residual: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PshReport {
    pub grid: GridSpec,
    pub points: Vec<PshPoint>,
    pub min_eigenvalue: f64,
    /// Boundedness witness `sup |psi|` over the grid.
    pub sup_abs: f64,
    pub failures: usize,
    pub is_psh: bool,
    pub stencil: WirtingerStencil,
}

/// Relative tolerance for negative Hessian eigenvalues.
pub const PSH_TOL: f64 = 1e-8;

/// Complex Hessian PSD test for `psi` at every grid point.
///
/// A point passes when its minimum eigenvalue is at least
/// `-1e-8 * max(1, max |H_ij|)`.
pub fn psh_check(
    psi: &(dyn Fn(&[Complex64]) -> Result<f64> + Sync),
    grid: &GridSpec,
    stencil: &WirtingerStencil,
) -> Result<PshReport> {
    let points = grid.points()?;
    let mut report = PshReport {
        grid: grid.clone(),
        points: Vec::with_capacity(points.len()),
        min_eigenvalue: f64::INFINITY,
        sup_abs: 0.0,
        failures: 0,
        is_psh: true,
        stencil: *stencil,
    };
    for w in &points {
        let entry = match psh_point(psi, w, stencil) {
            Ok((value, h)) => {
                let herm = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
                let min = hermitian_eigenvalues(&herm)[0];
                let scale = max_abs(&h).max(1.0);
                report.min_eigenvalue = report.min_eigenvalue.min(min);
                report.sup_abs = report.sup_abs.max(value.abs());
                if min < -PSH_TOL * scale {
                    report.failures += 1;
                }
                PshPoint {
                    point: w.coords().to_vec(),
                    value: Some(value),
                    min_eigenvalue: Some(min),
                    hessian_scale: Some(scale),
                    hermitian_residual: Some(hermitian_residual(&h)),
                    error: None,
                }
            }
            Err(e) => {
                report.failures += 1;
                PshPoint {
                    point: w.coords().to_vec(),
                    value: None,
                    min_eigenvalue: None,
                    hessian_scale: None,
                    hermitian_residual: None,
                    error: Some(e.to_string()),
                }
            }
        };
        report.points.push(entry);
    }
    report.is_psh = report.failures == 0;
    Ok(report)
}

fn psh_point(
    psi: &(dyn Fn(&[Complex64]) -> Result<f64> + Sync),
    w: &Point,
    stencil: &WirtingerStencil,
) -> Result<(f64, CMat)> {
    let value = psi(w.coords())?;
    if !value.is_finite() {
        return Err(Error::Evaluation("psi is not finite".into()));
    }
    Ok((value, complex_hessian(psi, w, stencil)?))
}

/// `psi(w) = log sum_k |phi_k(w)|^2`.
pub fn log_sum_squares(phis: Vec<Polynomial>) -> impl Fn(&[Complex64]) -> Result<f64> + Send + Sync {
    move |w| {
        let s: f64 = phis.iter().map(|p| p.eval(w).norm_sqr()).sum();
        if s > 0.0 {
            Ok(s.ln())
        } else {
            Err(Error::Evaluation("all polynomials vanish".into()))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SupRatioSample {
    pub point: Vec<Complex64>,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SupRatioReport {
    pub sup: f64,
    pub argmax: Vec<Complex64>,
    pub samples: Vec<SupRatioSample>,
    /// `||zeta_0 - P zeta_0||` for the spectral projection `P` onto ran D.
    pub range_residual: f64,
    /// First point where `<D t(w), zeta_0> = 0`.
    pub failure: Option<Vec<Complex64>>,
    /// Ratio at the outermost sample over the ratio at the innermost one.
    pub radial_trend: f64,
}

/// Range membership tolerance for `zeta_0`.
pub const RANGE_TOL: f64 = 1e-8;

/// `sup_w ||D t(w)||^2 / |<D t(w), zeta_0>|^2` over a grid.
pub fn section_sup_ratio(
    defect: &DefectOperator,
    shift: &ShiftTuple,
    zeta0: &DVector<Complex64>,
    grid: &GridSpec,
) -> Result<SupRatioReport> {
    if zeta0.len() != shift.dim() || defect.root.nrows() != shift.dim() {
        return Err(Error::DimensionMismatch("zeta_0 and D must live on the truncation".into()));
    }
    let unit = (zeta0.norm() - 1.0).abs();
    if unit > 1e-12 {
        return Err(Error::Config("zeta_0 must be a unit vector".into()));
    }
    let range_residual = range_residual(defect, zeta0);
    if range_residual > RANGE_TOL {
        return Err(Error::Config(format!(
            "zeta_0 is not in the closed range of D (residual {range_residual:e})"
        )));
    }
    let points = grid.points()?;
    let mut samples = Vec::with_capacity(points.len());
    let mut failure = None;
    for w in &points {
        let t = shift.eigenvector_at(w)?;
        let dt = defect.apply_root(&t);
        let num = dt.norm_squared();
        let inner = zeta0.dotc(&dt);
        let den = inner.norm_sqr();
        let ratio = if den > 1e-28 * num { num / den } else { f64::INFINITY };
        if ratio.is_infinite() && failure.is_none() {
            failure = Some(w.coords().to_vec());
        }
        samples.push(SupRatioSample {
            point: w.coords().to_vec(),
            ratio,
        });
    }
    let (sup, argmax) = samples
        .iter()
        .fold((f64::NEG_INFINITY, Vec::new()), |acc, s| {
            if s.ratio > acc.0 {
                (s.ratio, s.point.clone())
            } else {
                acc
            }
        });
    let by_radius = |s: &&SupRatioSample| crate::geometry::norm(&s.point);
    let inner = samples.iter().min_by(|a, b| by_radius(a).total_cmp(&by_radius(b)));
    let outer = samples.iter().max_by(|a, b| by_radius(a).total_cmp(&by_radius(b)));
    let radial_trend = match (inner, outer) {
        (Some(i), Some(o)) => o.ratio / i.ratio,
        _ => f64::NAN,
    };
    Ok(SupRatioReport {
        sup,
        argmax,
        samples,
        range_residual,
        failure,
        radial_trend,
    })
}

fn range_residual(defect: &DefectOperator, zeta0: &DVector<Complex64>) -> f64 {
    let eig = defect.square.clone().symmetric_eigen();
    let mut projected = DVector::<Complex64>::zeros(zeta0.len());
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > defect.clip {
            let v = eig.eigenvectors.column(idx).map(|x| Complex64::new(x, 0.0));
            projected += &v * v.dotc(zeta0);
        }
    }
    (zeta0 - projected).norm()
}
