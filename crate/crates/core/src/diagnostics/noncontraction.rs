//! A tuple similar to the Hardy backward shift that is not a contraction.
//!
//! Rows `phi_j(w) = sum_n a_{jn} w^n` define `X e_n = sum_j a_{jn} e_j`,
//! `Y = (I + X^*X)^{1/2}` and `T = Y S Y^{-1}` for the backward shift `S`.
//! The eigenvector section of `T` is `Y t(w)` with `t(w) = sum w^n e_n`, so
//! `h_T = ||t||^2 + ||X t||^2` and
//! `K_S - K_T = d dbar log((1 - |w|^2) sum |phi_j|^2 + 1)`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::curvature::{complex_hessian, curvature, MetricField, Section};
use crate::error::{Error, Result};
use crate::geometry::{norm_sqr, GridSpec};
use crate::kernels::DiagonalKernel;
use crate::linalg::{condition_number, hermitian_sqrt, spectral_norm, to_complex};
use crate::polynomial::Polynomial;
use crate::shifts::ShiftTuple;
use crate::wirtinger::{CMat, WirtingerStencil};

#[derive(Debug, Clone, Serialize)]
pub struct NoncontractionReport {
    pub rows: Vec<Vec<Complex64>>,
    pub degree: usize,
    pub grid: GridSpec,
    /// `2 |phi_j|^2 > m (m + 1) |phi_j'|^2` at every grid point.
    pub hypothesis_holds: bool,
    /// Smallest `2 |phi_j|^2 - m (m + 1) |phi_j'|^2` on the grid.
    pub hypothesis_margin: f64,
    pub largest_singular_value: f64,
    pub contraction_margin: f64,
    pub y_condition: f64,
    /// `max | ||X t(w)||^2 - sum |phi_j(w)|^2 |`.
    pub xk_residual: f64,
    /// `max |(K_S - K_T) - d dbar log(...)|`.
    pub curvature_residual: f64,
    pub stencil: WirtingerStencil,
}

/// Runs the construction on the truncation of degree `n` (dimension `n + 1`).
pub fn noncontraction_experiment(
    rows: &[Vec<Complex64>],
    n: usize,
    grid: &GridSpec,
    stencil: &WirtingerStencil,
) -> Result<NoncontractionReport> {
    let dim = n + 1;
    if rows.len() > dim || rows.iter().any(|r| r.len() > dim) {
        return Err(Error::Config(format!(
            "coefficient table does not fit a truncation of dimension {dim}"
        )));
    }
    if grid.dim() != 1 {
        return Err(Error::DimensionMismatch("the experiment lives on the disc".into()));
    }
    let m_poly = rows.len().saturating_sub(1);
    let phis: Vec<Polynomial> = rows.iter().map(|r| Polynomial::univariate(r)).collect();
    let points = grid.points()?;

    let factor = (m_poly * (m_poly + 1)) as f64;
    let mut margin = f64::INFINITY;
    for w in &points {
        for p in &phis {
            let v = p.eval(w.coords()).norm_sqr();
            let d = p.derivative(0).eval(w.coords()).norm_sqr();
            margin = margin.min(2.0 * v - factor * d);
        }
    }
    let hypothesis_holds = m_poly > 2 && margin > 0.0;

    let x = CMat::from_fn(dim, dim, |j, col| {
        rows.get(j)
            .and_then(|r| r.get(col))
            .copied()
            .unwrap_or_default()
    });
    let y = hermitian_sqrt(&(CMat::identity(dim, dim) + x.adjoint() * &x), 0.0);
    let y_inv = y
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Frame("Y is not invertible".into()))?;
    let shift = Arc::new(ShiftTuple::build(&DiagonalKernel::power(1, 1.0)?, n)?);
    let s = to_complex(&shift.operator(0).to_dense());
    let t = &y * s * y_inv;

    let t_section = {
        let shift = shift.clone();
        move |w: &[Complex64]| shift.joint_eigenvector(w)
    };
    let hardy: Section = Arc::new(t_section.clone());
    let yt: Section = {
        let y = y.clone();
        Arc::new(move |w: &[Complex64]| Ok(&y * t_section(w)?))
    };
    let h_s = MetricField::frame_gram(1, vec![hardy]);
    let h_t = MetricField::frame_gram(1, vec![yt]);

    let sum_sq = {
        let phis = phis.clone();
        move |w: &[Complex64]| phis.iter().map(|p| p.eval(w).norm_sqr()).sum::<f64>()
    };
    let mut xk_residual = 0.0f64;
    let mut curvature_residual = 0.0f64;
    for w in &points {
        let tw = shift.joint_eigenvector(w.coords())?;
        let xt = (&x * &tw).norm_squared();
        xk_residual = xk_residual.max((xt - sum_sq(w.coords())).abs());

        let ks = curvature(&h_s, w, stencil)?.block(0, 0)[(0, 0)];
        let kt = curvature(&h_t, w, stencil)?.block(0, 0)[(0, 0)];
        let psi = |z: &[Complex64]| Ok(((1.0 - norm_sqr(z)) * sum_sq(z) + 1.0).ln());
        let expected = complex_hessian(&psi, w, stencil)?[(0, 0)];
        curvature_residual = curvature_residual.max((ks - kt - expected).norm());
    }

    let largest = spectral_norm(&t);
    Ok(NoncontractionReport {
        rows: rows.to_vec(),
        degree: n,
        grid: grid.clone(),
        hypothesis_holds,
        hypothesis_margin: margin,
        largest_singular_value: largest,
        contraction_margin: largest - 1.0,
        y_condition: condition_number(&y),
        xk_residual,
        curvature_residual,
        stencil: *stencil,
    })
}

/// `phi_j = 1` for `j = 0..=m_poly`.
pub fn constant_rows(m_poly: usize) -> Vec<Vec<Complex64>> {
    vec![vec![Complex64::new(1.0, 0.0)]; m_poly + 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::radial_axis(1, 0, vec![0.0, 0.3, 0.6])
    }

    #[test]
    fn zero_rows_reproduce_the_shift() {
        let rows = vec![vec![Complex64::new(0.0, 0.0)]; 4];
        let r = noncontraction_experiment(&rows, 40, &grid(), &WirtingerStencil::default()).unwrap();
        assert!(!r.hypothesis_holds);
        assert!(r.largest_singular_value <= 1.0 + 1e-12);
        assert!((r.y_condition - 1.0).abs() < 1e-12);
        assert!(r.curvature_residual < 1e-6);
    }

    #[test]
    fn constant_rows_break_contractivity() {
        let r = noncontraction_experiment(&constant_rows(3), 40, &grid(), &WirtingerStencil::default()).unwrap();
        assert!(r.hypothesis_holds);
        // X^*X = 4 P_0, so ||T e_1|| = sqrt(5)
        assert!(r.largest_singular_value >= 5f64.sqrt() - 1e-9);
        assert!(r.xk_residual < 1e-12);
        assert!(r.curvature_residual < 1e-4, "{}", r.curvature_residual);
    }

    #[test]
    fn oversized_table_is_rejected() {
        let rows = vec![vec![Complex64::new(1.0, 0.0); 30]; 2];
        assert!(noncontraction_experiment(&rows, 10, &grid(), &WirtingerStencil::default()).is_err());
    }
}
