//! Truncated weighted multishifts realizing `M_z^*` on a diagonal-kernel space.
//!
//! Basis: `e_alpha = rho(alpha)^{1/2} z^alpha`, `|alpha| <= N`, graded order.
//! `T_i e_alpha = sqrt(rho(alpha - e_i) / rho(alpha)) e_{alpha - e_i}`.
//! Because `T_i` lowers the degree, the truncated span is invariant under
//! every `T^alpha`, so hereditary expressions `T^{*alpha} X T^alpha` computed
//! on the truncation agree with the infinite-dimensional ones.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{norm_sqr, Point};
use crate::kernels::{DiagonalKernel, InverseKernelCoeffs};
use crate::linalg::{max_off_diagonal, symmetric_eigenvalues, symmetric_sqrt};
use crate::multiindex::{binomial, enumerate_basis, multinomial_f64, BasisIndex, MultiIndex};

/// Relative tail threshold `a(N)|w|^{2N} / ||t(w)||^2` for eigenvector truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Operator with at most one non-zero entry per column: `e_c -> v e_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialOperator {
    cols: Vec<Option<(usize, f64)>>,
}

impl MonomialOperator {
    pub fn identity(dim: usize) -> Self {
        MonomialOperator {
            cols: (0..dim).map(|c| Some((c, 1.0))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, c: usize) -> Option<(usize, f64)> {
        self.cols[c]
    }

    /// `self * other`.
    pub fn compose(&self, other: &MonomialOperator) -> MonomialOperator {
        MonomialOperator {
            cols: other
                .cols
                .iter()
                .map(|entry| {
                    entry.and_then(|(mid, v)| self.cols[mid].map(|(r, u)| (r, u * v)))
                })
                .collect(),
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.dim(), self.dim());
        for (c, entry) in self.cols.iter().enumerate() {
            if let Some((r, v)) = entry {
                d[(*r, c)] += v;
            }
        }
        d
    }

    /// `(row, col, value)` triplets.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        self.cols
            .iter()
            .enumerate()
            .filter_map(|(c, e)| e.map(|(r, v)| (r, c, v)))
            .collect()
    }

    /// `A^T X A` for symmetric `X` (all entries real).
    pub fn sandwich(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let live: Vec<(usize, usize, f64)> = self.triplets();
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for &(r1, c1, v1) in &live {
            for &(r2, c2, v2) in &live {
                let x12 = x[(r1, r2)];
                if x12 != 0.0 {
                    out[(c1, c2)] += v1 * v2 * x12;
                }
            }
        }
        out
    }

    /// `A^T A`.
    pub fn gram(&self) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        let live = self.triplets();
        for &(r1, c1, v1) in &live {
            for &(r2, c2, v2) in &live {
                if r1 == r2 {
                    out[(c1, c2)] += v1 * v2;
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        let mut y = DVector::zeros(self.dim());
        for (c, e) in self.cols.iter().enumerate() {
            if let Some((r, v)) = e {
                y[*r] += x[c] * *v;
            }
        }
        y
    }
}

#[derive(Debug, Clone)]
pub struct ShiftTuple {
    kernel: DiagonalKernel,
    degree: usize,
    basis: BasisIndex,
    rho: Vec<f64>,
    ops: Vec<MonomialOperator>,
}

impl ShiftTuple {
    /// Assembles `T_1, ..., T_m` on monomials of degree `<= degree`.
    pub fn build(kernel: &DiagonalKernel, degree: usize) -> Result<Self> {
        if degree < 1 {
            return Err(Error::Config("truncation degree must be at least 1".into()));
        }
        let m = kernel.m();
        let basis = BasisIndex::new(m, degree);
        let rho = basis
            .basis()
            .iter()
            .map(|a| kernel.weight(a))
            .collect::<Result<Vec<_>>>()?;
        if let Some((k, r)) = rho.iter().enumerate().find(|(_, r)| !(**r > 0.0 && r.is_finite())) {
            return Err(Error::Config(format!(
                "weight rho({}) = {r} is not positive",
                basis.basis()[k]
            )));
        }
        let ops = (0..m)
            .map(|i| MonomialOperator {
                cols: basis
                    .basis()
                    .iter()
                    .enumerate()
                    .map(|(c, alpha)| {
                        alpha.lowered(i).map(|lower| {
                            let r = basis.position(&lower).expect("lowered index in basis");
                            (r, (rho[r] / rho[c]).sqrt())
                        })
                    })
                    .collect(),
            })
            .collect();
        Ok(ShiftTuple {
            kernel: kernel.clone(),
            degree,
            basis,
            rho,
            ops,
        })
    }

    pub fn kernel(&self) -> &DiagonalKernel {
        &self.kernel
    }

    pub fn m(&self) -> usize {
        self.kernel.m()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &[MultiIndex] {
        self.basis.basis()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.basis.position(alpha)
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn operator(&self, i: usize) -> &MonomialOperator {
        &self.ops[i]
    }

    /// Weight `lambda_alpha^{(i)} = sqrt(rho(alpha) / rho(alpha + e_i))` of `T_i^*`.
    pub fn weight(&self, alpha: &MultiIndex, i: usize) -> Result<f64> {
        Ok((self.kernel.weight(alpha)? / self.kernel.weight(&alpha.raised(i))?).sqrt())
    }

    /// `T^alpha = T_1^{alpha_1} ... T_m^{alpha_m}`.
    pub fn power(&self, alpha: &MultiIndex) -> MonomialOperator {
        let mut acc = MonomialOperator::identity(self.dim());
        for (i, &a) in alpha.entries().iter().enumerate() {
            for _ in 0..a {
                acc = self.ops[i].compose(&acc);
            }
        }
        acc
    }

    /// Largest entry of `T_i T_j - T_j T_i` over all pairs.
    pub fn commutator_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.m() {
            for j in 0..i {
                let a = self.ops[i].compose(&self.ops[j]).to_dense();
                let b = self.ops[j].compose(&self.ops[i]).to_dense();
                worst = worst.max((a - b).abs().max());
            }
        }
        worst
    }

    fn check_point(&self, w: &[Complex64]) -> Result<()> {
        if w.len() != self.m() {
            return Err(Error::DimensionMismatch(format!(
                "point of dimension {} for a {}-tuple",
                w.len(),
                self.m()
            )));
        }
        if norm_sqr(w) >= 1.0 {
            return Err(Error::Domain("point is outside the ball".into()));
        }
        Ok(())
    }

    /// Mass of the top degree shell, `a(N) |w|^{2N}`, relative to `||t(w)||^2`.
    pub fn tail_ratio(&self, w: &[Complex64]) -> Result<f64> {
        let x = norm_sqr(w);
        let top = self.kernel.coefficient(self.degree)? * x.powi(self.degree as i32);
        Ok(top / self.kernel.diagonal(w)?)
    }

    fn suggest_degree(&self, x: f64, total: f64, tol: f64) -> Option<usize> {
        (self.degree..20_000).find(|&n| {
            self.kernel
                .coefficient(n)
                .map(|a| a * x.powi(n as i32) <= tol * total)
                .unwrap_or(false)
        })
    }

    pub fn eigenvector_at(&self, w: &Point) -> Result<DVector<Complex64>> {
        self.joint_eigenvector(w.coords())
    }

    /// `t(w) = sum rho(alpha)^{1/2} w^alpha e_alpha`, a joint eigenvector of
    /// `T - w` up to the truncation boundary.
    pub fn joint_eigenvector(&self, w: &[Complex64]) -> Result<DVector<Complex64>> {
        self.joint_eigenvector_with_tol(w, DEFAULT_TAIL_TOL)
    }

    pub fn joint_eigenvector_with_tol(
        &self,
        w: &[Complex64],
        tail_tol: f64,
    ) -> Result<DVector<Complex64>> {
        self.check_point(w)?;
        let ratio = self.tail_ratio(w)?;
        if ratio > tail_tol {
            let x = norm_sqr(w);
            let total = self.kernel.diagonal(w)?;
            return Err(Error::truncation(
                format!(
                    "degree-{} tail carries {ratio:e} of ||t(w)||^2 at |w| = {}, threshold {tail_tol:e}",
                    self.degree,
                    x.sqrt()
                ),
                self.suggest_degree(x, total, tail_tol),
            ));
        }
        Ok(DVector::from_iterator(
            self.dim(),
            self.basis()
                .iter()
                .zip(&self.rho)
                .map(|(alpha, r)| monomial(w, alpha) * r.sqrt()),
        ))
    }

    /// `d t(w) / d w_i`, coefficient-wise and exact.
    pub fn eigenvector_derivative(&self, w: &[Complex64], i: usize) -> Result<DVector<Complex64>> {
        self.check_point(w)?;
        Ok(DVector::from_iterator(
            self.dim(),
            self.basis().iter().zip(&self.rho).map(|(alpha, r)| match alpha.lowered(i) {
                Some(lower) => monomial(w, &lower) * (alpha.entries()[i] as f64 * r.sqrt()),
                None => Complex64::new(0.0, 0.0),
            }),
        ))
    }

    /// `max_i ||(T_i - w_i) t|| / ||t||`.
    pub fn eigen_residual(&self, w: &[Complex64], t: &DVector<Complex64>) -> f64 {
        (0..self.m())
            .map(|i| (self.ops[i].apply(t) - t * w[i]).norm() / t.norm())
            .fold(0.0, f64::max)
    }

    /// `sum_{|alpha| <= max_degree} c(alpha) T^{*alpha} T^alpha` (adjoints left).
    pub fn hereditary(&self, max_degree: usize, coeff: impl Fn(&MultiIndex) -> f64) -> DMatrix<f64> {
        let mut acc = DMatrix::zeros(self.dim(), self.dim());
        for alpha in enumerate_basis(self.m(), max_degree) {
            let c = coeff(&alpha);
            if c != 0.0 {
                acc += self.power(&alpha).gram() * c;
            }
        }
        acc
    }

    /// `Delta^{(l)} = (I - M_T)^l (I)`.
    pub fn hypercontraction_defect(&self, level: usize) -> Result<HypercontractionReport> {
        if level > self.degree {
            return Err(Error::truncation(
                format!("level {level} exceeds truncation degree {}", self.degree),
                Some(level),
            ));
        }
        let defect = self.hereditary(level, |alpha| {
            let s = alpha.degree();
            let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(level as u64, s as u64).expect("small") as f64 * multinomial_f64(alpha)
        });
        let hermitian_residual = (&defect - defect.transpose()).abs().max();
        let eigenvalues = symmetric_eigenvalues(&defect);
        let norm = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let min_eigenvalue = eigenvalues.first().copied().unwrap_or(0.0);
        Ok(HypercontractionReport {
            level,
            is_psd: min_eigenvalue >= -PSD_TOL * norm.max(1.0),
            min_eigenvalue,
            norm,
            hermitian_residual,
            eigenvalues,
            defect,
        })
    }

    /// Defect operator for the source kernel's own reciprocal polynomial of degree `k`.
    pub fn defect_operator(&self, k: usize) -> Result<DefectOperator> {
        let inverse = self.kernel.inverse_polynomial().ok_or_else(|| {
            Error::UnsupportedKernel(format!(
                "kernel family `{}` has no polynomial reciprocal",
                self.kernel.family_name()
            ))
        })?;
        if inverse.degree() != k {
            return Err(Error::UnsupportedKernel(format!(
                "1/K has degree {}, not {k}",
                inverse.degree()
            )));
        }
        self.defect_operator_with(&inverse)
    }

    /// `(1/K~)(T^*, T)` for `1/K~ = (1 - <z,w>)^k` and its clipped square root.
    pub fn defect_operator_with(&self, inverse: &InverseKernelCoeffs) -> Result<DefectOperator> {
        let k = inverse.degree();
        let square = self.hereditary(k, |alpha| {
            inverse.get(alpha.degree()) as f64 * multinomial_f64(alpha)
        });
        let eigenvalues = symmetric_eigenvalues(&square);
        let norm = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if let Some(pos) = eigenvalues.iter().position(|&x| x < -POSITIVITY_TOL) {
            return Err(Error::PositivityViolation {
                eigenvalue: eigenvalues[pos],
                index: pos,
            });
        }
        let clip = CLIP_REL * norm;
        let root = symmetric_sqrt(&square, clip);
        let diagonal_formula = self.defect_diagonal_formula(inverse)?;
        Ok(DefectOperator {
            k,
            off_diagonal: max_off_diagonal(&square),
            square,
            root,
            eigenvalues,
            diagonal_formula,
            clip,
        })
    }

    /// `sum_{alpha <= beta, |alpha| <= k} b(|alpha|) |alpha|!/alpha! rho(beta - alpha) / rho(beta)`.
    pub fn defect_diagonal_formula(&self, inverse: &InverseKernelCoeffs) -> Result<Vec<f64>> {
        let k = inverse.degree();
        self.basis()
            .iter()
            .zip(&self.rho)
            .map(|(beta, rb)| {
                let mut sum = 0.0;
                for alpha in enumerate_basis(self.m(), k.min(beta.degree())) {
                    if let Some(rest) = alpha.complement_in(beta) {
                        sum += inverse.get(alpha.degree()) as f64
                            * multinomial_f64(&alpha)
                            * self.kernel.weight(&rest)?
                            / rb;
                    }
                }
                Ok(sum)
            })
            .collect()
    }

    /// `f_j(T^*, T) = sum_{index >= j} rho(alpha) T^{*alpha} D^2 T^alpha`, column norms.
    pub fn model_tail(&self, defect: &DefectOperator, j: usize) -> ModelTail {
        let mut acc = DMatrix::zeros(self.dim(), self.dim());
        for idx in j..self.dim() {
            acc += self.model_term(defect, idx);
        }
        ModelTail::from_matrix(j, &acc)
    }

    fn model_term(&self, defect: &DefectOperator, idx: usize) -> DMatrix<f64> {
        let alpha = &self.basis()[idx];
        self.power(alpha).sandwich(&defect.square) * self.rho[idx]
    }

    /// `max_beta ||f_j e_beta||` for every `j = 0..=dim`.
    pub fn model_tail_profile(&self, defect: &DefectOperator) -> Vec<f64> {
        let mut acc = DMatrix::zeros(self.dim(), self.dim());
        let mut out = vec![0.0; self.dim() + 1];
        for idx in (0..self.dim()).rev() {
            acc += self.model_term(defect, idx);
            out[idx] = ModelTail::from_matrix(idx, &acc).max;
        }
        out
    }

    pub fn export(&self) -> ShiftExport {
        ShiftExport {
            kernel: self.kernel.descriptor().clone(),
            degree: self.degree,
            basis: self.basis().to_vec(),
            operators: self.ops.iter().map(MonomialOperator::triplets).collect(),
        }
    }
}

const PSD_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-8;
const CLIP_REL: f64 = 1e-10;

fn monomial(w: &[Complex64], alpha: &MultiIndex) -> Complex64 {
    w.iter()
        .zip(alpha.entries())
        .map(|(z, &a)| z.powu(a as u32))
        .product()
}

#[derive(Debug, Clone, Serialize)]
pub struct HypercontractionReport {
    pub level: usize,
    #[serde(skip)]
    pub defect: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub min_eigenvalue: f64,
    pub norm: f64,
    pub hermitian_residual: f64,
    /// PSD within `-1e-10 * max(||Delta||, 1)`.
    pub is_psd: bool,
}

#[derive(Debug, Clone)]
pub struct DefectOperator {
    pub k: usize,
    /// `(1/K)(T^*, T)`.
    pub square: DMatrix<f64>,
    /// Hermitian square root after clipping.
    pub root: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    /// Per-basis eigenvalues from the weight formula.
    pub diagonal_formula: Vec<f64>,
    pub off_diagonal: f64,
    pub clip: f64,
}

impl DefectOperator {
    pub fn apply_root(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        self.root.map(|v| Complex64::new(v, 0.0)) * x
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelTail {
    pub j: usize,
    pub column_norms: Vec<f64>,
    pub max: f64,
}

impl ModelTail {
    fn from_matrix(j: usize, a: &DMatrix<f64>) -> Self {
        let column_norms: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
        let max = column_norms.iter().copied().fold(0.0, f64::max);
        ModelTail {
            j,
            column_norms,
            max,
        }
    }
}

/// JSON form of a shift tuple: basis plus sparse triplets per operator.
#[derive(Debug, Clone, Serialize)]
pub struct ShiftExport {
    pub kernel: serde_json::Value,
    pub degree: usize,
    pub basis: Vec<MultiIndex>,
    pub operators: Vec<Vec<(usize, usize, f64)>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn hardy_shift_is_unweighted() {
        let s = ShiftTuple::build(&DiagonalKernel::power(1, 1.0).unwrap(), 6).unwrap();
        for n in 1..=6 {
            assert_eq!(s.operator(0).column(n), Some((n - 1, 1.0)));
        }
        assert_eq!(s.operator(0).column(0), None);
    }

    #[test]
    fn bergman_weights() {
        let s = ShiftTuple::build(&DiagonalKernel::power(1, 2.0).unwrap(), 8).unwrap();
        for n in 1..=8 {
            let (r, v) = s.operator(0).column(n).unwrap();
            assert_eq!(r, n - 1);
            assert!((v - (n as f64 / (n as f64 + 1.0)).sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn drury_arveson_mixed_weight() {
        let s = ShiftTuple::build(&DiagonalKernel::power(2, 1.0).unwrap(), 3).unwrap();
        let col = s.position(&mi(&[1, 1])).unwrap();
        let (r, v) = s.operator(0).column(col).unwrap();
        assert_eq!(s.basis()[r], mi(&[0, 1]));
        assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn truncation_degree_zero_rejected() {
        assert!(ShiftTuple::build(&DiagonalKernel::power(1, 1.0).unwrap(), 0).is_err());
    }

    #[test]
    fn shifts_commute() {
        for kern in [
            DiagonalKernel::power(2, 1.0).unwrap(),
            DiagonalKernel::power(3, 2.5).unwrap(),
            DiagonalKernel::log_plus(2).unwrap(),
        ] {
            let s = ShiftTuple::build(&kern, 12).unwrap();
            let scale = (0..s.m())
                .map(|i| s.operator(i).to_dense().norm().powi(2))
                .fold(1.0f64, f64::max);
            assert!(s.commutator_defect() <= 1e-13 * scale);
        }
    }

    #[test]
    fn eigenvector_at_origin() {
        let s = ShiftTuple::build(&DiagonalKernel::power(2, 1.0).unwrap(), 5).unwrap();
        let t = s.joint_eigenvector(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(t[0], c(1.0, 0.0));
        assert!(t.iter().skip(1).all(|z| *z == c(0.0, 0.0)));
    }

    #[test]
    fn hardy_eigenvector_norm() {
        let s = ShiftTuple::build(&DiagonalKernel::power(1, 1.0).unwrap(), 60).unwrap();
        let t = s.joint_eigenvector(&[c(0.5, 0.0)]).unwrap();
        assert!((t.norm_squared() - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvector_residual_lives_on_top_shell() {
        let kern = DiagonalKernel::power(2, 2.0).unwrap();
        let s = ShiftTuple::build(&kern, 20).unwrap();
        let w = [c(0.2, 0.1), c(-0.1, 0.25)];
        let t = s.joint_eigenvector_with_tol(&w, 1.0).unwrap();
        let x = norm_sqr(&w);
        let top = (kern.coefficient(20).unwrap() * x.powi(20)).sqrt();
        for i in 0..2 {
            let r = s.operator(i).apply(&t) - &t * w[i];
            for (k, alpha) in s.basis().iter().enumerate() {
                if alpha.degree() < 20 {
                    assert!(r[k].norm() < 1e-15);
                }
            }
            assert!((r.norm() - w[i].norm() * top).abs() < 1e-15);
        }
    }

    #[test]
    fn truncation_error_suggests_degree() {
        let s = ShiftTuple::build(&DiagonalKernel::power(1, 1.0).unwrap(), 5).unwrap();
        match s.joint_eigenvector(&[c(0.9, 0.0)]) {
            Err(Error::Truncation { suggested_n: Some(n), .. }) => {
                let big = ShiftTuple::build(s.kernel(), n).unwrap();
                assert!(big.joint_eigenvector(&[c(0.9, 0.0)]).is_ok());
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn parseval_against_kernel() {
        for kern in [
            DiagonalKernel::power(2, 3.0).unwrap(),
            DiagonalKernel::log_plus(2).unwrap(),
        ] {
            let s = ShiftTuple::build(&kern, 60).unwrap();
            let w = [c(0.3, -0.2), c(0.1, 0.35)];
            let t = s.joint_eigenvector(&w).unwrap();
            let wbar: Vec<_> = w.iter().map(|z| z.conj()).collect();
            let k = kern.eval(&wbar, &wbar, 1e-14).unwrap().re;
            assert!((t.norm_squared() - k).abs() < 1e-12 * k);
        }
    }

    #[test]
    fn exact_derivative_section() {
        let s = ShiftTuple::build(&DiagonalKernel::power(2, 2.0).unwrap(), 30).unwrap();
        let w = [c(0.2, 0.1), c(0.05, -0.3)];
        let h = 1e-6;
        let mut wp = w;
        wp[1] += h;
        let mut wm = w;
        wm[1] -= h;
        let fd = (s.joint_eigenvector(&wp).unwrap() - s.joint_eigenvector(&wm).unwrap()) / c(2.0 * h, 0.0);
        let exact = s.eigenvector_derivative(&w, 1).unwrap();
        assert!((fd - exact).norm() < 1e-8);
    }

    #[test]
    fn hypercontraction_levels() {
        let s = ShiftTuple::build(&DiagonalKernel::power(1, 1.0).unwrap(), 10).unwrap();
        let d0 = s.hypercontraction_defect(0).unwrap();
        assert_eq!(d0.defect, DMatrix::identity(11, 11));
        assert_eq!(d0.min_eigenvalue, 1.0);
        let d1 = s.hypercontraction_defect(1).unwrap();
        let mut p0 = DMatrix::zeros(11, 11);
        p0[(0, 0)] = 1.0;
        assert!((&d1.defect - p0).abs().max() < 1e-15);
        assert!(s.hypercontraction_defect(11).is_err());

        let s2 = ShiftTuple::build(&DiagonalKernel::power(2, 1.0).unwrap(), 8).unwrap();
        let d = s2.hypercontraction_defect(1).unwrap();
        assert!(d.is_psd);
        assert!(d.hermitian_residual < 1e-14);
    }

    #[test]
    fn defect_examples() {
        let s = ShiftTuple::build(&DiagonalKernel::power(1, 1.0).unwrap(), 10).unwrap();
        let d = s.defect_operator(1).unwrap();
        assert_eq!(d.diagonal_formula[0], 1.0);
        assert!(d.diagonal_formula[1..].iter().all(|&x| x == 0.0));
        assert_eq!(d.root[(0, 0)], 1.0);

        let s = ShiftTuple::build(&DiagonalKernel::power(1, 2.0).unwrap(), 10).unwrap();
        let d = s.defect_operator(2).unwrap();
        assert!((d.diagonal_formula[0] - 1.0).abs() < 1e-15);
        assert!(d.diagonal_formula[1..].iter().all(|&x| x.abs() < 1e-14));
        for (k, &x) in d.diagonal_formula.iter().enumerate() {
            assert!((d.square[(k, k)] - x).abs() < 1e-14);
        }
    }

    #[test]
    fn defect_is_diagonal() {
        let s = ShiftTuple::build(&DiagonalKernel::power(2, 3.0).unwrap(), 10).unwrap();
        let d = s.defect_operator(3).unwrap();
        assert!(d.off_diagonal <= 1e-14);
    }

    #[test]
    fn defect_rejects_non_polynomial() {
        let s = ShiftTuple::build(&DiagonalKernel::dirichlet(), 10).unwrap();
        assert!(matches!(s.defect_operator(1), Err(Error::UnsupportedKernel(_))));
        let s = ShiftTuple::build(&DiagonalKernel::log_plus(1).unwrap(), 10).unwrap();
        assert!(matches!(s.defect_operator(1), Err(Error::UnsupportedKernel(_))));
    }

    #[test]
    fn defect_positivity_violation() {
        // Hardy shift is not a 2-hypercontraction: (1 - t)^2 defect has a negative eigenvalue
        let s = ShiftTuple::build(&DiagonalKernel::power(1, 1.0).unwrap(), 6).unwrap();
        let r = s.defect_operator_with(&crate::kernels::inverse_coeffs(2));
        assert!(matches!(r, Err(Error::PositivityViolation { .. })));
    }

    #[test]
    fn model_tail_examples() {
        let s = ShiftTuple::build(&DiagonalKernel::power(1, 1.0).unwrap(), 12).unwrap();
        let d = s.defect_operator(1).unwrap();
        let f0 = s.model_tail(&d, 0);
        assert!(f0.column_norms.iter().all(|&x| (x - 1.0).abs() < 1e-15));
        let beyond = s.model_tail(&d, s.dim() + 3);
        assert_eq!(beyond.max, 0.0);
        let profile = s.model_tail_profile(&d);
        assert!(profile.windows(2).all(|p| p[1] <= p[0] + 1e-15));
        assert_eq!(*profile.last().unwrap(), 0.0);
        assert!((profile[5] - s.model_tail(&d, 5).max).abs() < 1e-15);
    }

    #[test]
    fn export_shape() {
        let s = ShiftTuple::build(&DiagonalKernel::power(2, 1.0).unwrap(), 2).unwrap();
        let e = s.export();
        assert_eq!(e.basis.len(), 6);
        assert_eq!(e.operators.len(), 2);
        // T_1 lowers (1,0),(2,0),(1,1)
        assert_eq!(e.operators[0].len(), 3);
    }
}
