//! The rank-two frame example and the determinant-curvature inequality.

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::curvature::{curvature, det_curvature, MetricField, Section};
use crate::error::{Error, Result};
use crate::geometry::{GridSpec, Point};
use crate::kernels::DiagonalKernel;
use crate::linalg::{hermitian_eigenvalues, max_abs};
use crate::shifts::ShiftTuple;
use crate::wirtinger::{CMat, WirtingerStencil};

#[derive(Debug, Clone, Serialize)]
pub struct FbSample {
    pub point: Vec<Complex64>,
    pub det_h: f64,
    /// `det h_T (1 - |w|^2)^4`, expected 2.
    pub det_scaled: f64,
    pub trace_k: f64,
    /// `trace K_T (1 - |w|^2)^2`, expected -4.
    pub trace_scaled: f64,
    /// Trace of the curvature of `M_z^* (+) M_z^*` on the Hardy and
    /// weight-3 spaces.
    pub trace_diagonal: f64,
    pub metric: [[Complex64; 2]; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct FbReport {
    pub degree: usize,
    pub samples: Vec<FbSample>,
    pub max_det_error: f64,
    pub max_trace_error: f64,
    pub max_trace_difference: f64,
    pub caveat: &'static str,
    pub stencil: WirtingerStencil,
}

pub const FB_CAVEAT: &str = "equal curvature traces do not imply similarity: the frame \
{t1, t1' + t2} gives a strongly irreducible tuple that is not similar to the diagonal one, \
which is not decided numerically here";

fn embed(v: DVector<Complex64>, offset: usize, total: usize) -> DVector<Complex64> {
    let mut out = DVector::zeros(total);
    out.rows_mut(offset, v.len()).copy_from(&v);
    out
}

/// Frame `{t_1, t_1' + t_2}` in `H_1 (+) H_3` on the disc, plus the diagonal
/// frame `{t_1, t_2}`.
pub fn fb_frames(n: usize) -> Result<(Vec<Section>, Vec<Section>)> {
    let s1 = Arc::new(ShiftTuple::build(&DiagonalKernel::power(1, 1.0)?, n)?);
    let s3 = Arc::new(ShiftTuple::build(&DiagonalKernel::power(1, 3.0)?, n)?);
    let (d1, d3) = (s1.dim(), s3.dim());
    let total = d1 + d3;
    let first: Section = {
        let s1 = s1.clone();
        Arc::new(move |w: &[Complex64]| Ok(embed(s1.joint_eigenvector(w)?, 0, total)))
    };
    let second: Section = {
        let (s1, s3) = (s1.clone(), s3.clone());
        Arc::new(move |w: &[Complex64]| {
            Ok(embed(s1.eigenvector_derivative(w, 0)?, 0, total)
                + embed(s3.joint_eigenvector(w)?, d1, total))
        })
    };
    let diagonal_second: Section =
        Arc::new(move |w: &[Complex64]| Ok(embed(s3.joint_eigenvector(w)?, d1, total)));
    Ok((vec![first.clone(), second], vec![first, diagonal_second]))
}

pub fn reproduce_fb_example(n: usize, points: &[Point], stencil: &WirtingerStencil) -> Result<FbReport> {
    if n < 30 {
        return Err(Error::Config(format!("the frame example needs N >= 30, got {n}")));
    }
    let (frame, diagonal) = fb_frames(n)?;
    let h_t = MetricField::frame_gram(1, frame);
    let h_d = MetricField::frame_gram(1, diagonal);
    let mut samples = Vec::with_capacity(points.len());
    let (mut det_err, mut trace_err, mut diff) = (0.0f64, 0.0f64, 0.0f64);
    for w in points {
        if w.dim() != 1 {
            return Err(Error::DimensionMismatch("the frame example lives on the disc".into()));
        }
        let h = h_t.evaluate(w.coords())?;
        let det_h = (h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)]).re;
        let q = 1.0 - w.norm_sqr();
        let trace_k = curvature(&h_t, w, stencil)?.total_trace();
        let trace_diagonal = curvature(&h_d, w, stencil)?.total_trace();
        let sample = FbSample {
            point: w.coords().to_vec(),
            det_h,
            det_scaled: det_h * q.powi(4),
            trace_k,
            trace_scaled: trace_k * q * q,
            trace_diagonal,
            metric: [[h[(0, 0)], h[(0, 1)]], [h[(1, 0)], h[(1, 1)]]],
        };
        det_err = det_err.max((sample.det_scaled - 2.0).abs());
        trace_err = trace_err.max((sample.trace_scaled + 4.0).abs());
        diff = diff.max((trace_k - trace_diagonal).abs());
        samples.push(sample);
    }
    Ok(FbReport {
        degree: n,
        samples,
        max_det_error: det_err,
        max_trace_error: trace_err,
        max_trace_difference: diff,
        caveat: FB_CAVEAT,
        stencil: *stencil,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DetInequalitySample {
    pub point: Vec<Complex64>,
    /// `max |K_det(K h_E) - n K_det(K) - K_det(h_E)|`.
    pub residual: f64,
    /// Largest eigenvalue of `K_det(h_E)`.
    pub max_eigenvalue: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DetInequalityReport {
    pub kernel: serde_json::Value,
    pub grid: GridSpec,
    pub samples: Vec<DetInequalitySample>,
    pub max_residual: f64,
    pub max_eigenvalue: f64,
    pub holds: bool,
    pub stencil: WirtingerStencil,
}

/// Negative-semidefiniteness tolerance, relative to `max(1, |K_det|)`.
pub const NSD_TOL: f64 = 1e-8;

/// Splits the determinant curvature of `K(w̄, w̄) h_E` into the kernel part
/// and `K_det(h_E)`, and checks the latter is negative semidefinite.
pub fn det_curvature_inequality_check(
    h_e: &MetricField,
    kernel: &DiagonalKernel,
    grid: &GridSpec,
    stencil: &WirtingerStencil,
) -> Result<DetInequalityReport> {
    if !matches!(kernel.rule(), crate::kernels::CoefficientRule::Power { .. }) {
        return Err(Error::UnsupportedKernel("the inequality is stated for Power kernels".into()));
    }
    if kernel.m() != h_e.dim() {
        return Err(Error::DimensionMismatch("kernel and metric live on different balls".into()));
    }
    let rank = h_e.rank();
    let line = MetricField::kernel_line(kernel);
    let product = {
        let (k, e) = (kernel.clone(), h_e.clone());
        MetricField::closed_form(h_e.dim(), rank, "kernel times metric", move |w| {
            Ok(e.evaluate(w)? * Complex64::new(k.diagonal(w)?, 0.0))
        })
    };
    let mut samples = Vec::new();
    for w in grid.points()? {
        let total = det_curvature(&product, &w, stencil)?;
        let kernel_part = curvature(&line, &w, stencil)?.trace_matrix() * Complex64::new(rank as f64, 0.0);
        let e_part = det_curvature(h_e, &w, stencil)?;
        let residual = max_abs(&(&total - kernel_part - &e_part));
        let herm: CMat = (&e_part + e_part.adjoint()) * Complex64::new(0.5, 0.0);
        let max_eigenvalue = *hermitian_eigenvalues(&herm).last().expect("m >= 1");
        samples.push(DetInequalitySample {
            point: w.coords().to_vec(),
            residual,
            max_eigenvalue,
            scale: max_abs(&e_part).max(1.0),
        });
    }
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    let max_eigenvalue = samples.iter().map(|s| s.max_eigenvalue).fold(f64::NEG_INFINITY, f64::max);
    let holds = samples.iter().all(|s| s.max_eigenvalue <= NSD_TOL * s.scale);
    Ok(DetInequalityReport {
        kernel: kernel.descriptor().clone(),
        grid: grid.clone(),
        samples,
        max_residual,
        max_eigenvalue,
        holds,
        stencil: *stencil,
    })
}
