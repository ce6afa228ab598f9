//! Multi-indices over `N_0^m` and the graded basis ordering.
//!
//! The library-wide convention orders monomials by total degree and, within
//! a degree, lexicographically with the leading exponent decreasing:
//! `(0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest total degree for which exact integer bookkeeping is documented.
pub const MAX_EXACT_DEGREE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    /// The unit multi-index `e_i` (zero-based `i`).
    pub fn unit(m: usize, i: usize) -> Self {
        let mut v = vec![0; m];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// `alpha! = prod alpha_i!`, exact.
    pub fn factorial(&self) -> BigUint {
        self.0.iter().map(|&a| factorial_big(a)).product()
    }

    /// `alpha + e_i`.
    pub fn raised(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    /// `alpha + k e_i`.
    pub fn raised_by(&self, i: usize, k: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += k;
        MultiIndex(v)
    }

    /// `alpha - e_i`, or `None` when `alpha_i = 0`.
    pub fn lowered(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(MultiIndex(v))
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other - self`, when `self <= other`.
    pub fn complement_in(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if !self.le(other) {
            return None;
        }
        Some(MultiIndex(
            other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect(),
        ))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

fn factorial_big(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).product()
}

/// All multi-indices of a fixed degree in the library order.
pub fn multi_indices_of_degree(m: usize, degree: usize) -> Vec<MultiIndex> {
    fn rec(m: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == m {
            prefix.push(remaining);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for first in (0..=remaining).rev() {
            prefix.push(first);
            rec(m, remaining - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    rec(m, degree, &mut Vec::with_capacity(m), &mut out);
    out
}

/// All `alpha` with `|alpha| <= max_degree`, graded lexicographic order.
pub fn enumerate_basis(m: usize, max_degree: usize) -> Vec<MultiIndex> {
    (0..=max_degree)
        .flat_map(|d| multi_indices_of_degree(m, d))
        .collect()
}

/// Exact `|alpha|! / alpha!`.
pub fn multinomial(alpha: &MultiIndex) -> Result<u128> {
    // prod_k binom(alpha_1 + ... + alpha_k, alpha_k)
    let mut total: u128 = 1;
    let mut partial = 0usize;
    for &a in alpha.entries() {
        partial += a;
        let b = binomial(partial as u64, a as u64).ok_or_else(|| capacity(alpha))?;
        total = total.checked_mul(b).ok_or_else(|| capacity(alpha))?;
    }
    Ok(total)
}

fn capacity(alpha: &MultiIndex) -> Error {
    Error::Capacity(format!("multinomial coefficient of {alpha} exceeds 128 bits"))
}

/// Exact binomial coefficient, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for j in 1..=k as u128 {
        // r * (n - k + j) is divisible by j at every step
        r = r.checked_mul(n as u128 - k as u128 + j)? / j;
    }
    Some(r)
}

/// `|alpha|! / alpha!` as a float; exact when it fits in 128 bits.
pub fn multinomial_f64(alpha: &MultiIndex) -> f64 {
    match multinomial(alpha) {
        Ok(v) => v as f64,
        Err(_) => {
            let mut total = 1.0;
            let mut partial = 0usize;
            for &a in alpha.entries() {
                partial += a;
                total *= binomial_f64(partial, a);
            }
            total
        }
    }
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (1..=k).fold(1.0, |acc, j| acc * (n - k + j) as f64 / j as f64)
}

/// Position lookup for a fixed basis.
#[derive(Debug, Clone)]
pub struct BasisIndex {
    basis: Vec<MultiIndex>,
    positions: HashMap<MultiIndex, usize>,
}

impl BasisIndex {
    pub fn new(m: usize, max_degree: usize) -> Self {
        let basis = enumerate_basis(m, max_degree);
        let positions = basis
            .iter()
            .enumerate()
            .map(|(k, a)| (a.clone(), k))
            .collect();
        BasisIndex { basis, positions }
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.positions.get(alpha).copied()
    }
}
