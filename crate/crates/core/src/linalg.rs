//! Small dense helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::wirtinger::CMat;

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let eig = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(a.nrows(), a.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(a: &CMat) -> f64 {
    hermitian_eigenvalues(a).first().copied().unwrap_or(f64::NAN)
}

pub fn max_eigenvalue(a: &CMat) -> f64 {
    hermitian_eigenvalues(a).last().copied().unwrap_or(f64::NAN)
}

/// Real symmetric eigenvalues (ascending); exact diagonal input skips the solver.
pub fn symmetric_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = if is_diagonal(a) {
        a.diagonal().iter().copied().collect()
    } else {
        a.clone().symmetric_eigenvalues().iter().copied().collect()
    };
    v.sort_by(f64::total_cmp);
    v
}

pub fn is_diagonal(a: &DMatrix<f64>) -> bool {
    max_off_diagonal(a) == 0.0
}

pub fn max_off_diagonal(a: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..a.ncols() {
        for r in 0..a.nrows() {
            if r != c {
                worst = worst.max(a[(r, c)].abs());
            }
        }
    }
    worst
}

/// Square root of a real symmetric PSD matrix; eigenvalues below `clip`
/// are set to zero first.
pub fn symmetric_sqrt(a: &DMatrix<f64>, clip: f64) -> DMatrix<f64> {
    let root = |x: f64| if x < clip { 0.0 } else { x.sqrt() };
    if is_diagonal(a) {
        return DMatrix::from_diagonal(&a.diagonal().map(root));
    }
    let eig = a.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(root));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// Square root of a Hermitian PSD matrix with clipping.
pub fn hermitian_sqrt(a: &CMat, clip: f64) -> CMat {
    let (values, vectors) = hermitian_eigen(a);
    let d = DVector::from_iterator(
        values.len(),
        values
            .iter()
            .map(|&x| Complex64::new(if x < clip { 0.0 } else { x.sqrt() }, 0.0)),
    );
    &vectors * CMat::from_diagonal(&d) * vectors.adjoint()
}

/// `a^{-1} b` for Hermitian positive-definite `a` (Cholesky, LU fallback).
pub fn hermitian_solve(a: &CMat, b: &CMat) -> Result<CMat> {
    if let Some(ch) = a.clone().cholesky() {
        return Ok(ch.solve(b));
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Definiteness {
            min_eigenvalue: min_eigenvalue(a),
            threshold: 0.0,
        })
}

/// Largest absolute entry of `a - a^*`.
pub fn hermitian_residual(a: &CMat) -> f64 {
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().iter().sum()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn to_complex(a: &DMatrix<f64>) -> CMat {
    a.map(|x| Complex64::new(x, 0.0))
}

/// Largest singular value.
pub fn spectral_norm(a: &CMat) -> f64 {
    a.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// `max / min` singular value.
pub fn condition_number(a: &CMat) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}
