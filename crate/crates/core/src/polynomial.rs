//! Holomorphic polynomials in `m` complex variables.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::multiindex::MultiIndex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    m: usize,
    terms: Vec<(MultiIndex, Complex64)>,
}

impl Polynomial {
    pub fn new(m: usize, terms: Vec<(MultiIndex, Complex64)>) -> Self {
        assert!(terms.iter().all(|(a, _)| a.dim() == m), "term dimension mismatch");
        Polynomial { m, terms }
    }

    pub fn constant(m: usize, c: Complex64) -> Self {
        Self::new(m, vec![(MultiIndex::zero(m), c)])
    }

    /// One variable, `sum_n coeffs[n] w^n`.
    pub fn univariate(coeffs: &[Complex64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(n, &c)| (MultiIndex::new(vec![n]), c))
            .collect();
        Self::new(1, terms)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[(MultiIndex, Complex64)] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(a, _)| a.degree()).max().unwrap_or(0)
    }

    pub fn eval(&self, w: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(alpha, c)| {
                alpha
                    .entries()
                    .iter()
                    .zip(w)
                    .fold(*c, |acc, (&e, z)| acc * z.powu(e as u32))
            })
            .sum()
    }

    /// `d/dw_i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter_map(|(alpha, c)| {
                let e = alpha.entries()[i];
                alpha.lowered(i).map(|lower| (lower, c * e as f64))
            })
            .collect();
        Polynomial { m: self.m, terms }
    }

    /// Coefficient of `w^alpha` (terms with equal exponents are summed).
    pub fn coefficient(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms
            .iter()
            .filter(|(a, _)| a == alpha)
            .map(|(_, c)| *c)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivative() {
        // p = 2 + 3 w0 w1^2
        let p = Polynomial::new(
            2,
            vec![
                (MultiIndex::zero(2), Complex64::new(2.0, 0.0)),
                (MultiIndex::new(vec![1, 2]), Complex64::new(3.0, 0.0)),
            ],
        );
        let w = [Complex64::new(0.5, 0.0), Complex64::new(0.0, 1.0)];
        assert_eq!(p.eval(&w), Complex64::new(2.0 - 1.5, 0.0));
        let d1 = p.derivative(1);
        assert_eq!(d1.eval(&w), Complex64::new(0.0, 3.0));
        assert_eq!(p.degree(), 3);
        assert!(p.derivative(0).derivative(0).terms().is_empty());
    }

    #[test]
    fn univariate_skips_zeros() {
        let p = Polynomial::univariate(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.coefficient(&MultiIndex::new(vec![0])), Complex64::new(1.0, 0.0));
    }
}
