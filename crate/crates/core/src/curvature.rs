//! Hermitian metrics on holomorphic frames and their curvature.
//!
//! Conventions: for a frame `sigma_1..sigma_n` the metric is
//! `h_{ij}(w) = <sigma_j(w), sigma_i(w)>` (inner product linear in the first
//! slot), i.e. `h = Gamma^* Gamma` with the sections as columns of `Gamma`.
//! The curvature blocks are `K^{i,j} = -dbar_j (h^{-1} d_i h)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{norm_sqr, Point};
use crate::kernels::DiagonalKernel;
use crate::linalg::{
    hermitian_eigenvalues, hermitian_residual, hermitian_solve, kron, max_abs, trace,
};
use crate::multiindex::MultiIndex;
use crate::wirtinger::{CMat, Derivative, ResolvedStencil, WirtingerStencil};

pub type MatrixEvaluator = Arc<dyn Fn(&[Complex64]) -> Result<CMat> + Send + Sync>;
pub type ScalarEvaluator = Arc<dyn Fn(&[Complex64]) -> Result<f64> + Send + Sync>;
/// A holomorphic section `w -> vector` in a truncated ambient space.
pub type Section = Arc<dyn Fn(&[Complex64]) -> Result<DVector<Complex64>> + Send + Sync>;

/// Minimum eigenvalue must exceed this multiple of `||h||`.
pub const DEFINITENESS_REL: f64 = 1e-12;
const HERMITIAN_REL: f64 = 1e-13;

#[derive(Clone)]
pub enum MetricProvenance {
    ClosedForm(String),
    FrameGram { sections: Vec<Section> },
    KernelLine(DiagonalKernel),
}

impl fmt::Debug for MetricProvenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricProvenance::ClosedForm(label) => write!(f, "ClosedForm({label})"),
            MetricProvenance::FrameGram { sections } => {
                write!(f, "FrameGram({} sections)", sections.len())
            }
            MetricProvenance::KernelLine(k) => write!(f, "KernelLine({})", k.family_name()),
        }
    }
}

/// `w -> h(w)`, an `n x n` Hermitian positive-definite matrix.
#[derive(Clone)]
pub struct MetricField {
    n: usize,
    m: usize,
    eval: MatrixEvaluator,
    provenance: MetricProvenance,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl MetricField {
    pub fn closed_form(
        m: usize,
        n: usize,
        label: impl Into<String>,
        eval: impl Fn(&[Complex64]) -> Result<CMat> + Send + Sync + 'static,
    ) -> Self {
        MetricField {
            n,
            m,
            eval: Arc::new(eval),
            provenance: MetricProvenance::ClosedForm(label.into()),
        }
    }

    /// Rank-one metric from a scalar evaluator.
    pub fn scalar(
        m: usize,
        label: impl Into<String>,
        eval: impl Fn(&[Complex64]) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        Self::closed_form(m, 1, label, move |w| {
            eval(w).map(|v| CMat::from_element(1, 1, Complex64::new(v, 0.0)))
        })
    }

    pub fn constant(m: usize, h: CMat) -> Self {
        let n = h.nrows();
        Self::closed_form(m, n, "constant", move |_| Ok(h.clone()))
    }

    /// `h(w) = K(w̄, w̄)`, the line bundle of kernel sections.
    pub fn kernel_line(kernel: &DiagonalKernel) -> Self {
        let k = kernel.clone();
        MetricField {
            n: 1,
            m: kernel.m(),
            eval: Arc::new(move |w| {
                k.diagonal(w)
                    .map(|v| CMat::from_element(1, 1, Complex64::new(v, 0.0)))
            }),
            provenance: MetricProvenance::KernelLine(kernel.clone()),
        }
    }

    /// Gram metric of `sections` (must all live in the same ambient space).
    pub fn frame_gram(m: usize, sections: Vec<Section>) -> Self {
        let n = sections.len();
        let secs = sections.clone();
        MetricField {
            n,
            m,
            eval: Arc::new(move |w| Ok(gram(&frame_matrix(&secs, w)?))),
            provenance: MetricProvenance::FrameGram { sections },
        }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn provenance(&self) -> &MetricProvenance {
        &self.provenance
    }

    /// Raw evaluation without checks.
    pub fn raw(&self, w: &[Complex64]) -> Result<CMat> {
        (self.eval)(w)
    }

    /// Evaluates `h(w)` and enforces the Hermitian and definiteness invariants.
    pub fn evaluate(&self, w: &[Complex64]) -> Result<CMat> {
        if w.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "metric on B_{} evaluated with {} coordinates",
                self.m,
                w.len()
            )));
        }
        if norm_sqr(w) >= 1.0 {
            return Err(Error::Domain("metric evaluated outside the ball".into()));
        }
        let h = (self.eval)(w)?;
        if h.nrows() != self.n || h.ncols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "metric evaluator returned {}x{}, expected rank {}",
                h.nrows(),
                h.ncols(),
                self.n
            )));
        }
        if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Evaluation("metric is not finite".into()));
        }
        let scale = max_abs(&h);
        if hermitian_residual(&h) > HERMITIAN_REL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Evaluation(format!(
                "metric is not Hermitian (residual {:e})",
                hermitian_residual(&h)
            )));
        }
        let min = if self.n == 1 {
            h[(0, 0)].re
        } else {
            hermitian_eigenvalues(&h)[0]
        };
        let threshold = DEFINITENESS_REL * scale;
        if !(min > threshold) {
            return Err(match self.provenance {
                MetricProvenance::FrameGram { .. } => Error::Frame(format!(
                    "frame is rank deficient: Gram minimum eigenvalue {min:e}"
                )),
                _ => Error::Definiteness {
                    min_eigenvalue: min,
                    threshold,
                },
            });
        }
        Ok(h)
    }

    /// `log det h(w)` via Cholesky.
    pub fn log_det(&self, w: &[Complex64]) -> Result<f64> {
        let h = self.evaluate(w)?;
        let ch = h.clone().cholesky().ok_or(Error::Definiteness {
            min_eigenvalue: hermitian_eigenvalues(&h)[0],
            threshold: 0.0,
        })?;
        Ok(2.0 * ch.l().diagonal().iter().map(|d| d.re.ln()).sum::<f64>())
    }

    fn check_point(&self, w: &Point) -> Result<()> {
        if w.dim() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "metric on B_{} used at a point of dimension {}",
                self.m,
                w.dim()
            )));
        }
        Ok(())
    }
}

/// Columns are the sections evaluated at `w`.
pub fn frame_matrix(sections: &[Section], w: &[Complex64]) -> Result<CMat> {
    let cols = sections
        .iter()
        .map(|s| s(w))
        .collect::<Result<Vec<_>>>()?;
    let ambient = cols.first().map_or(0, |c| c.len());
    if cols.iter().any(|c| c.len() != ambient) {
        return Err(Error::DimensionMismatch("sections live in different spaces".into()));
    }
    Ok(CMat::from_columns(&cols))
}

fn gram(frame: &CMat) -> CMat {
    frame.adjoint() * frame
}

/// `h_{ij}(w) = <sigma_j(w), sigma_i(w)>` at one point.
pub fn frame_gram(sections: &[Section], w: &Point) -> Result<CMat> {
    let m = w.dim();
    MetricField::frame_gram(m, sections.to_vec()).evaluate(w.coords())
}

/// Curvature blocks `K^{i,j}(w)`, `i, j = 0..m`.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureTensor {
    pub point: Vec<Complex64>,
    pub n: usize,
    pub m: usize,
    /// Row-major over `(i, j)`.
    #[serde(serialize_with = "serialize_blocks")]
    pub blocks: Vec<CMat>,
}

fn serialize_blocks<S: serde::Serializer>(blocks: &[CMat], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(blocks.len()))?;
    for b in blocks {
        let rows: Vec<Vec<Complex64>> = (0..b.nrows())
            .map(|r| (0..b.ncols()).map(|c| b[(r, c)]).collect())
            .collect();
        seq.serialize_element(&rows)?;
    }
    seq.end()
}

impl CurvatureTensor {
    pub fn block(&self, i: usize, j: usize) -> &CMat {
        &self.blocks[i * self.m + j]
    }

    /// `(trace K^{i,j})_{i,j}`, the determinant-bundle curvature.
    pub fn trace_matrix(&self) -> CMat {
        CMat::from_fn(self.m, self.m, |i, j| trace(self.block(i, j)))
    }

    /// `sum_i trace K^{i,i}`.
    pub fn total_trace(&self) -> f64 {
        (0..self.m).map(|i| trace(self.block(i, i)).re).sum()
    }

    /// Max eigenvalue of the Hermitian part of the trace matrix.
    pub fn max_trace_eigenvalue(&self) -> f64 {
        let t = self.trace_matrix();
        let herm = (&t + t.adjoint()) * Complex64::new(0.5, 0.0);
        *hermitian_eigenvalues(&herm).last().expect("m >= 1")
    }

    pub fn max_abs_difference(&self, other: &CurvatureTensor) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }
}

/// Curvature at `w`; rank one uses `-d_i dbar_j log h`.
pub fn curvature(h: &MetricField, w: &Point, stencil: &WirtingerStencil) -> Result<CurvatureTensor> {
    if h.rank() == 1 {
        curvature_log_form(h, w, stencil)
    } else {
        curvature_matrix_form(h, w, stencil)
    }
}

/// `K^{i,j} = -dbar_j (h^{-1} d_i h)` by nested differences.
pub fn curvature_matrix_form(
    h: &MetricField,
    w: &Point,
    stencil: &WirtingerStencil,
) -> Result<CurvatureTensor> {
    h.check_point(w)?;
    let rs = stencil.resolve(w.coords(), 2)?;
    let mut blocks = Vec::with_capacity(h.m * h.m);
    for i in 0..h.m {
        for j in 0..h.m {
            blocks.push(curvature_block(h, &rs, w.coords(), i, j)?);
        }
    }
    Ok(CurvatureTensor {
        point: w.coords().to_vec(),
        n: h.n,
        m: h.m,
        blocks,
    })
}

/// `h^{-1} d_l h` at `w`.
fn connection(h: &MetricField, rs: &ResolvedStencil, w: &[Complex64], l: usize) -> Result<CMat> {
    let eval = |z: &[Complex64]| h.evaluate(z);
    let dh = rs.apply(&eval, w, &[Derivative::Holomorphic(l)])?;
    hermitian_solve(&h.evaluate(w)?, &dh)
}

fn curvature_block(
    h: &MetricField,
    rs: &ResolvedStencil,
    w: &[Complex64],
    i: usize,
    j: usize,
) -> Result<CMat> {
    let theta = |z: &[Complex64]| connection(h, rs, z, i);
    Ok(-rs.apply(&theta, w, &[Derivative::Antiholomorphic(j)])?)
}

/// `K^{i,j} = -d_i dbar_j log h` (rank one only).
pub fn curvature_log_form(
    h: &MetricField,
    w: &Point,
    stencil: &WirtingerStencil,
) -> Result<CurvatureTensor> {
    h.check_point(w)?;
    if h.rank() != 1 {
        return Err(Error::DimensionMismatch("log form needs a line bundle".into()));
    }
    let blocks = log_hessian(&|z| Ok(h.evaluate(z)?[(0, 0)].re.ln()), w, stencil)?
        .into_iter()
        .map(|v| CMat::from_element(1, 1, -v))
        .collect();
    Ok(CurvatureTensor {
        point: w.coords().to_vec(),
        n: 1,
        m: h.m,
        blocks,
    })
}

/// `(d_i dbar_j psi)_{i,j}` row-major, for a real scalar field.
pub fn complex_hessian(
    psi: &dyn Fn(&[Complex64]) -> Result<f64>,
    w: &Point,
    stencil: &WirtingerStencil,
) -> Result<CMat> {
    let m = w.dim();
    let entries = log_hessian(psi, w, stencil)?;
    Ok(CMat::from_row_slice(m, m, &entries))
}

fn log_hessian(
    psi: &dyn Fn(&[Complex64]) -> Result<f64>,
    w: &Point,
    stencil: &WirtingerStencil,
) -> Result<Vec<Complex64>> {
    let m = w.dim();
    let rs = stencil.resolve(w.coords(), 2)?;
    let f = |z: &[Complex64]| psi(z).map(|v| Complex64::new(v, 0.0));
    let mut out = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            out.push(rs.apply_scalar(
                &f,
                w.coords(),
                &[Derivative::Holomorphic(i), Derivative::Antiholomorphic(j)],
            )?);
        }
    }
    Ok(out)
}

/// Largest supported `|I| + |J|` for covariant derivatives.
pub const MAX_COVARIANT_ORDER: usize = 3;

/// `K^{i,j}_{w^I wbar^J}(w)`.
///
/// Holomorphic letters are applied first, each as
/// `d_l K + [h^{-1} d_l h, K]`; antiholomorphic letters are plain `dbar_l`.
pub fn covariant_derivative(
    h: &MetricField,
    i: usize,
    j: usize,
    holomorphic: &MultiIndex,
    antiholomorphic: &MultiIndex,
    w: &Point,
    stencil: &WirtingerStencil,
) -> Result<CMat> {
    h.check_point(w)?;
    if holomorphic.dim() != h.m || antiholomorphic.dim() != h.m {
        return Err(Error::DimensionMismatch("derivative word dimension".into()));
    }
    let order = holomorphic.degree() + antiholomorphic.degree();
    if order > MAX_COVARIANT_ORDER {
        return Err(Error::UnsupportedOrder(format!(
            "|I| + |J| = {order} exceeds {MAX_COVARIANT_ORDER}"
        )));
    }
    let letters = |mi: &MultiIndex| -> Vec<usize> {
        mi.entries()
            .iter()
            .enumerate()
            .flat_map(|(c, &k)| std::iter::repeat_n(c, k))
            .collect()
    };
    let holo = letters(holomorphic);
    let anti = letters(antiholomorphic);
    let rs = stencil.resolve(w.coords(), 2 + order)?;
    covariant_rec(h, &rs, w.coords(), i, j, &holo, &anti)
}

fn covariant_rec(
    h: &MetricField,
    rs: &ResolvedStencil,
    w: &[Complex64],
    i: usize,
    j: usize,
    holo: &[usize],
    anti: &[usize],
) -> Result<CMat> {
    if let Some((&l, rest)) = anti.split_last() {
        let inner = |z: &[Complex64]| covariant_rec(h, rs, z, i, j, holo, rest);
        return rs.apply(&inner, w, &[Derivative::Antiholomorphic(l)]);
    }
    if let Some((&l, rest)) = holo.split_last() {
        let inner = |z: &[Complex64]| covariant_rec(h, rs, z, i, j, rest, &[]);
        let d = rs.apply(&inner, w, &[Derivative::Holomorphic(l)])?;
        if h.rank() == 1 {
            return Ok(d);
        }
        let here = inner(w)?;
        let a = connection(h, rs, w, l)?;
        return Ok(d + &a * &here - &here * &a);
    }
    curvature_block(h, rs, w, i, j)
}

/// Pointwise `h1 (x) h2`.
pub fn tensor_metric(h1: &MetricField, h2: &MetricField) -> Result<MetricField> {
    if h1.m != h2.m {
        return Err(Error::DimensionMismatch(format!(
            "tensor of metrics over B_{} and B_{}",
            h1.m, h2.m
        )));
    }
    let (a, b) = (h1.clone(), h2.clone());
    Ok(MetricField::closed_form(
        h1.m,
        h1.n * h2.n,
        "tensor",
        move |w| Ok(kron(&a.evaluate(w)?, &b.evaluate(w)?)),
    ))
}

/// `K1 (x) I + I (x) K2` for a single block pair.
pub fn tensor_sum(k1: &CMat, k2: &CMat) -> CMat {
    let i1 = CMat::identity(k1.nrows(), k1.nrows());
    let i2 = CMat::identity(k2.nrows(), k2.nrows());
    kron(k1, &i2) + kron(&i1, k2)
}

/// `-d_i dbar_j log det h(w)`, an `m x m` matrix.
pub fn det_curvature(h: &MetricField, w: &Point, stencil: &WirtingerStencil) -> Result<CMat> {
    h.check_point(w)?;
    let m = w.dim();
    let entries = log_hessian(&|z| h.log_det(z), w, stencil)?;
    Ok(-CMat::from_row_slice(m, m, &entries))
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameChangeReport {
    /// `max_{i,j} |K^{i,j}(sigma phi) - phi^{-1} K^{i,j}(sigma) phi|`.
    pub conjugacy_residual: f64,
    /// `max_{i,j} |trace K~^{i,j} - trace K^{i,j}|`.
    pub trace_residual: f64,
}

/// Curvature of `phi^* h phi` against the conjugated curvature of `h`.
pub fn frame_change_check(
    h: &MetricField,
    phi: &MatrixEvaluator,
    w: &Point,
    stencil: &WirtingerStencil,
) -> Result<FrameChangeReport> {
    h.check_point(w)?;
    let at_w = phi(w.coords())?;
    if at_w.nrows() != h.n || at_w.ncols() != h.n {
        return Err(Error::DimensionMismatch("frame change has the wrong size".into()));
    }
    let phi_inv = at_w
        .clone()
        .try_inverse()
        .filter(|inv| max_abs(inv).is_finite() && crate::linalg::condition_number(&at_w) < 1e12)
        .ok_or_else(|| Error::Frame("frame change is singular at w".into()))?;
    let base = h.clone();
    let p = phi.clone();
    let changed = MetricField::closed_form(h.m, h.n, "frame change", move |z| {
        let f = p(z)?;
        Ok(f.adjoint() * base.evaluate(z)? * f)
    });
    let k = curvature_matrix_form(h, w, stencil)?;
    let k_changed = curvature_matrix_form(&changed, w, stencil)?;
    let mut conj = 0.0f64;
    let mut tr = 0.0f64;
    for (a, b) in k.blocks.iter().zip(&k_changed.blocks) {
        let expected = &phi_inv * a * &at_w;
        conj = conj.max(max_abs(&(b - expected)));
        tr = tr.max((trace(a) - trace(b)).norm());
    }
    Ok(FrameChangeReport {
        conjugacy_residual: conj,
        trace_residual: tr,
    })
}

/// `Pi(w) = Gamma h^{-1} Gamma^*`, projection onto the span of the frame.
#[derive(Clone)]
pub struct ProjectionField {
    sections: Vec<Section>,
}

impl ProjectionField {
    pub fn new(sections: Vec<Section>) -> Self {
        ProjectionField { sections }
    }

    pub fn frame(&self, w: &[Complex64]) -> Result<CMat> {
        frame_matrix(&self.sections, w)
    }

    pub fn projection(&self, w: &[Complex64]) -> Result<CMat> {
        let gamma = self.frame(w)?;
        let h = MetricField::frame_gram(w.len(), self.sections.clone()).evaluate(w)?;
        let solved = hermitian_solve(&h, &gamma.adjoint())?;
        Ok(&gamma * solved)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HsIdentity {
    /// `sum_i ||d Pi / d w_i||_HS^2`.
    pub hs: f64,
    /// `sum_i trace K^{i,i}(w)`.
    pub trace: f64,
}

impl HsIdentity {
    pub fn residual(&self) -> f64 {
        (self.hs + self.trace).abs()
    }
}

pub fn projection_hs_identity(
    sections: &[Section],
    w: &Point,
    stencil: &WirtingerStencil,
) -> Result<HsIdentity> {
    let proj = ProjectionField::new(sections.to_vec());
    let rs = stencil.resolve(w.coords(), 1)?;
    let pi = |z: &[Complex64]| proj.projection(z);
    let mut hs = 0.0;
    for i in 0..w.dim() {
        let d = rs.apply(&pi, w.coords(), &[Derivative::Holomorphic(i)])?;
        hs += d.iter().map(|z| z.norm_sqr()).sum::<f64>();
    }
    let h = MetricField::frame_gram(w.dim(), sections.to_vec());
    let trace = curvature(&h, w, stencil)?.total_trace();
    Ok(HsIdentity { hs, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shifts::ShiftTuple;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn stencil() -> WirtingerStencil {
        WirtingerStencil::default()
    }

    #[test]
    fn hardy_line_curvature() {
        let h = MetricField::kernel_line(&DiagonalKernel::power(1, 1.0).unwrap());
        for r in [0.0, 0.3, 0.7] {
            let w = Point::new(vec![c(r * 0.6, r * 0.8)]).unwrap();
            let k = curvature(&h, &w, &stencil()).unwrap();
            let exact = -1.0 / (1.0 - r * r).powi(2);
            assert!((k.block(0, 0)[(0, 0)].re - exact).abs() < 1e-6 * exact.abs());
        }
    }

    #[test]
    fn constant_metric_is_flat() {
        let h = MetricField::constant(2, CMat::identity(2, 2) * c(2.0, 0.0));
        let w = Point::new(vec![c(0.1, 0.2), c(-0.3, 0.0)]).unwrap();
        let k = curvature(&h, &w, &stencil()).unwrap();
        assert!(k.blocks.iter().all(|b| max_abs(b) == 0.0));
    }

    #[test]
    fn power_line_at_origin() {
        // -k log(1 - |w|^2) has complex Hessian k * I at the origin
        for k in [1.0, 2.0, 4.0] {
            let h = MetricField::kernel_line(&DiagonalKernel::power(2, k).unwrap());
            let t = curvature(&h, &Point::origin(2), &stencil()).unwrap();
            for i in 0..2 {
                for j in 0..2 {
                    let expected = if i == j { -k } else { 0.0 };
                    assert!((t.block(i, j)[(0, 0)] - c(expected, 0.0)).norm() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn log_and_matrix_forms_agree() {
        for kern in [
            DiagonalKernel::power(2, 2.0).unwrap(),
            DiagonalKernel::log_plus(2).unwrap(),
        ] {
            let h = MetricField::kernel_line(&kern);
            let w = Point::new(vec![c(0.3, 0.2), c(-0.2, 0.4)]).unwrap();
            let a = curvature_log_form(&h, &w, &stencil()).unwrap();
            let b = curvature_matrix_form(&h, &w, &stencil()).unwrap();
            assert!(a.max_abs_difference(&b) < 1e-6);
        }
    }

    #[test]
    fn definiteness_failure() {
        let h = MetricField::constant(1, CMat::from_element(1, 1, c(-1.0, 0.0)));
        let r = curvature(&h, &Point::origin(1), &stencil());
        assert!(matches!(r, Err(Error::Definiteness { .. })));
    }

    #[test]
    fn rank_deficient_frame() {
        let s: Section = Arc::new(|w: &[Complex64]| Ok(DVector::from_vec(vec![c(1.0, 0.0), w[0]])));
        let sections = vec![s.clone(), s];
        let r = frame_gram(&sections, &Point::real(&[0.2]).unwrap());
        assert!(matches!(r, Err(Error::Frame(_))));
    }

    #[test]
    fn orthonormal_frame_gram_is_identity() {
        let e = |k: usize| -> Section {
            Arc::new(move |_: &[Complex64]| {
                let mut v = DVector::zeros(3);
                v[k] = c(1.0, 0.0);
                Ok(v)
            })
        };
        let g = frame_gram(&[e(0), e(2)], &Point::real(&[0.1, 0.2]).unwrap()).unwrap();
        assert_eq!(g, CMat::identity(2, 2));
    }

    #[test]
    fn kernel_section_gram() {
        let kern = DiagonalKernel::power(2, 2.0).unwrap();
        let shift = Arc::new(ShiftTuple::build(&kern, 60).unwrap());
        let s: Section = Arc::new(move |w: &[Complex64]| shift.joint_eigenvector(w));
        let w = Point::new(vec![c(0.2, 0.1), c(0.3, -0.1)]).unwrap();
        let g = frame_gram(&[s], &w).unwrap();
        assert!((g[(0, 0)].re - kern.diagonal_at(&w).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn scalar_covariant_derivatives_are_plain_derivatives() {
        let h = MetricField::kernel_line(&DiagonalKernel::power(1, 2.0).unwrap());
        let w = Point::new(vec![c(0.2, 0.1)]).unwrap();
        let s = WirtingerStencil::new(1e-3, 4).unwrap();
        // K = -2/(1-|w|^2)^2; d_w K = -4 wbar/(1-|w|^2)^3
        let x = w.norm_sqr();
        let z = w.coords()[0];
        let d = covariant_derivative(&h, 0, 0, &MultiIndex::new(vec![1]), &MultiIndex::new(vec![0]), &w, &s)
            .unwrap();
        let exact = -4.0 * z.conj() / (1.0 - x).powi(3);
        assert!((d[(0, 0)] - exact).norm() < 1e-6, "{} vs {exact}", d[(0, 0)]);
        let base = covariant_derivative(&h, 0, 0, &MultiIndex::zero(1), &MultiIndex::zero(1), &w, &s).unwrap();
        let k = curvature(&h, &w, &s).unwrap();
        assert!((base[(0, 0)] - k.block(0, 0)[(0, 0)]).norm() < 1e-6);
        let too_deep = covariant_derivative(&h, 0, 0, &MultiIndex::new(vec![2]), &MultiIndex::new(vec![2]), &w, &s);
        assert!(matches!(too_deep, Err(Error::UnsupportedOrder(_))));
    }

    #[test]
    fn tensor_with_trivial_line() {
        let h1 = MetricField::kernel_line(&DiagonalKernel::power(1, 1.0).unwrap());
        let one = MetricField::constant(1, CMat::identity(1, 1));
        let t = tensor_metric(&h1, &one).unwrap();
        let w = [c(0.3, 0.1)];
        assert_eq!(t.evaluate(&w).unwrap(), h1.evaluate(&w).unwrap());
        let h2 = MetricField::kernel_line(&DiagonalKernel::power(1, 3.0).unwrap());
        let t = tensor_metric(&h1, &h2).unwrap();
        let prod = h1.evaluate(&w).unwrap()[(0, 0)] * h2.evaluate(&w).unwrap()[(0, 0)];
        assert!((t.evaluate(&w).unwrap()[(0, 0)] - prod).norm() < 1e-14);
        let h3 = MetricField::kernel_line(&DiagonalKernel::power(2, 3.0).unwrap());
        assert!(tensor_metric(&h1, &h3).is_err());
    }

    #[test]
    fn det_curvature_of_line_is_curvature() {
        let h = MetricField::kernel_line(&DiagonalKernel::log_plus(2).unwrap());
        let w = Point::new(vec![c(0.3, 0.2), c(-0.2, 0.4)]).unwrap();
        let d = det_curvature(&h, &w, &stencil()).unwrap();
        let k = curvature(&h, &w, &stencil()).unwrap();
        assert!(max_abs(&(d - k.trace_matrix())) < 1e-6);
    }

    #[test]
    fn frame_change_by_identity_and_scalar() {
        let h = MetricField::kernel_line(&DiagonalKernel::power(2, 2.0).unwrap());
        let w = Point::new(vec![c(0.3, 0.2), c(-0.2, 0.4)]).unwrap();
        let id: MatrixEvaluator = Arc::new(|_| Ok(CMat::identity(1, 1)));
        let r = frame_change_check(&h, &id, &w, &stencil()).unwrap();
        assert_eq!(r.conjugacy_residual, 0.0);
        let scalar: MatrixEvaluator = Arc::new(|_| Ok(CMat::from_element(1, 1, c(2.0, -1.0))));
        let r = frame_change_check(&h, &scalar, &w, &stencil()).unwrap();
        assert!(r.conjugacy_residual < 1e-6);
        let singular: MatrixEvaluator = Arc::new(|_| Ok(CMat::zeros(1, 1)));
        assert!(matches!(
            frame_change_check(&h, &singular, &w, &stencil()),
            Err(Error::Frame(_))
        ));
    }

    #[test]
    fn projection_is_orthogonal() {
        let kern = DiagonalKernel::power(1, 3.0).unwrap();
        let shift = Arc::new(ShiftTuple::build(&kern, 40).unwrap());
        let sh = shift.clone();
        let t: Section = Arc::new(move |w: &[Complex64]| sh.joint_eigenvector(w));
        let dt: Section = Arc::new(move |w: &[Complex64]| shift.eigenvector_derivative(w, 0));
        let proj = ProjectionField::new(vec![t, dt]);
        let p = proj.projection(&[c(0.3, -0.2)]).unwrap();
        assert!(max_abs(&(&p * &p - &p)) < 1e-12);
        assert!(hermitian_residual(&p) < 1e-12);
        assert!((trace(&p).re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn hs_identity_examples() {
        for (k, m, expected) in [(1.0, 1, 1.0), (1.0, 2, 2.0), (3.0, 1, 3.0)] {
            let kern = DiagonalKernel::power(m, k).unwrap();
            let shift = Arc::new(ShiftTuple::build(&kern, 20).unwrap());
            let s: Section = Arc::new(move |w: &[Complex64]| shift.joint_eigenvector(w));
            let r = projection_hs_identity(&[s], &Point::origin(m), &stencil()).unwrap();
            assert!((r.hs - expected).abs() < 1e-6, "{r:?}");
            assert!((r.trace + expected).abs() < 1e-6, "{r:?}");
        }
    }
}
