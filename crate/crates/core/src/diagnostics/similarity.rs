//! Weight-ratio criterion for similarity of two weighted multishifts.
//!
//! Along the ray `alpha + l e_i` the product of `l` consecutive weight
//! quotients `lambda / lambda~` telescopes to
//! `sqrt(rho_1(alpha) rho_2(alpha + l e_i) / (rho_1(alpha + l e_i) rho_2(alpha)))`.
//! The multinomial parts of the two weights are equal and cancel, leaving
//! `sqrt(a_1(d) a_2(d + l) / (a_1(d + l) a_2(d)))` with `d = |alpha|`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::kernels::DiagonalKernel;
use crate::multiindex::{multi_indices_of_degree, MultiIndex};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityOptions {
    /// Longest ray length `L`.
    pub max_l: usize,
    pub low: f64,
    pub high: f64,
    /// Base points are all `|alpha| <= base_degree`.
    pub base_degree: usize,
    /// Trailing fraction of a ray that must be monotone for divergence.
    pub monotone_window: f64,
}

impl Default for SimilarityOptions {
    fn default() -> Self {
        SimilarityOptions {
            max_l: 500,
            low: 0.5,
            high: 10.0,
            base_degree: 3,
            monotone_window: 0.25,
        }
    }
}

impl SimilarityOptions {
    pub fn with_bounds(self, low: f64, high: f64) -> Self {
        SimilarityOptions { low, high, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_l == 0 {
            return Err(Error::Config("ray length L must be at least 1".into()));
        }
        if !(self.low > 0.0 && self.low <= 1.0 && self.high >= 1.0 && self.high.is_finite()) {
            return Err(Error::Config(format!(
                "bounds must satisfy 0 < low <= 1 <= high < inf, got ({}, {})",
                self.low, self.high
            )));
        }
        if !(self.monotone_window > 0.0 && self.monotone_window <= 1.0) {
            return Err(Error::Config("monotone window must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SimilarityOutcome {
    BoundedRatios {
        c1: f64,
        c2: f64,
    },
    DivergentRay {
        /// Zero-based axis `i`.
        axis: usize,
        base: MultiIndex,
        direction: Direction,
        exit: usize,
        value: f64,
    },
    Inconclusive {
        max_l: usize,
        reason: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SimilarityVerdict {
    pub outcome: SimilarityOutcome,
    pub options: SimilarityOptions,
    pub kernels: [Value; 2],
    /// Longest ray actually scanned (shorter than `L` for tabulated kernels).
    pub scanned_l: usize,
    pub rays: usize,
}

impl SimilarityVerdict {
    pub fn is_bounded(&self) -> bool {
        matches!(self.outcome, SimilarityOutcome::BoundedRatios { .. })
    }
}

/// Ray products for base degree `d`, `l = 0..=len` (entry 0 is the empty product).
pub fn ray_products(k1: &DiagonalKernel, k2: &DiagonalKernel, d: usize, len: usize) -> Result<Vec<f64>> {
    let a1d = k1.coefficient(d)?;
    let a2d = k2.coefficient(d)?;
    let mut out = Vec::with_capacity(len + 1);
    out.push(1.0);
    for l in 1..=len {
        let num = a1d * k2.coefficient(d + l)?;
        let den = k1.coefficient(d + l)? * a2d;
        out.push((num / den).sqrt());
    }
    Ok(out)
}

/// `prod_{k=0}^{l-1} lambda / lambda~` along `alpha + k e_i`.
pub fn ray_product(k1: &DiagonalKernel, k2: &DiagonalKernel, alpha: &MultiIndex, l: usize) -> Result<f64> {
    Ok(ray_products(k1, k2, alpha.degree(), l)?[l])
}

enum RayResult {
    Bounded { min: f64, max: f64 },
    Exit { l: usize, direction: Direction, value: f64 },
    Excursion { l: usize },
}

fn classify(values: &[f64], opts: &SimilarityOptions) -> RayResult {
    let exit = values.iter().enumerate().skip(1).find_map(|(l, &v)| {
        if v >= opts.high {
            Some((l, Direction::Up, v))
        } else if v <= opts.low {
            Some((l, Direction::Down, v))
        } else {
            None
        }
    });
    match exit {
        Some((l, direction, value)) => {
            let start = l - ((l as f64 * opts.monotone_window).ceil() as usize).min(l);
            let window = &values[start..=l];
            let monotone = window.windows(2).all(|p| match direction {
                Direction::Up => p[1] >= p[0],
                Direction::Down => p[1] <= p[0],
            });
            if monotone {
                RayResult::Exit { l, direction, value }
            } else {
                RayResult::Excursion { l }
            }
        }
        None => {
            let tail = &values[1..];
            RayResult::Bounded {
                min: tail.iter().copied().fold(f64::INFINITY, f64::min),
                max: tail.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        }
    }
}

/// Scans rays from every base point `|alpha| <= A` along every axis.
///
/// Witnesses are reported in basis order, then by axis.
pub fn shift_similarity(
    k1: &DiagonalKernel,
    k2: &DiagonalKernel,
    opts: &SimilarityOptions,
) -> Result<SimilarityVerdict> {
    opts.validate()?;
    if k1.m() != k2.m() {
        return Err(Error::DimensionMismatch(format!(
            "kernels on B_{} and B_{}",
            k1.m(),
            k2.m()
        )));
    }
    let m = k1.m();
    let known = match (k1.known_len(), k2.known_len()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let mut scanned_l = 0;
    let mut rays = 0;
    let mut bounds = (f64::INFINITY, f64::NEG_INFINITY);
    let mut excursion = None;
    for d in 0..=opts.base_degree {
        let len = match known {
            Some(n) if n <= d + 1 => continue,
            Some(n) => opts.max_l.min(n - 1 - d),
            None => opts.max_l,
        };
        scanned_l = scanned_l.max(len);
        let values = ray_products(k1, k2, d, len)?;
        let bases = multi_indices_of_degree(m, d);
        rays += bases.len() * m;
        match classify(&values, opts) {
            RayResult::Exit { l, direction, value } => {
                let outcome = SimilarityOutcome::DivergentRay {
                    axis: 0,
                    base: bases[0].clone(),
                    direction,
                    exit: l,
                    value,
                };
                return Ok(verdict(outcome, opts, k1, k2, scanned_l, rays));
            }
            RayResult::Excursion { l } => {
                excursion.get_or_insert((d, l));
            }
            RayResult::Bounded { min, max } => {
                bounds = (bounds.0.min(min), bounds.1.max(max));
            }
        }
    }
    let outcome = if let Some((d, l)) = excursion {
        SimilarityOutcome::Inconclusive {
            max_l: scanned_l,
            reason: format!("non-monotone excursion from base degree {d} at l = {l}"),
        }
    } else if rays == 0 {
        SimilarityOutcome::Inconclusive {
            max_l: 0,
            reason: "tabulated prefixes too short to scan any ray".into(),
        }
    } else {
        SimilarityOutcome::BoundedRatios {
            c1: bounds.0,
            c2: bounds.1,
        }
    };
    Ok(verdict(outcome, opts, k1, k2, scanned_l, rays))
}

fn verdict(
    outcome: SimilarityOutcome,
    opts: &SimilarityOptions,
    k1: &DiagonalKernel,
    k2: &DiagonalKernel,
    scanned_l: usize,
    rays: usize,
) -> SimilarityVerdict {
    SimilarityVerdict {
        outcome,
        options: *opts,
        kernels: [k1.descriptor().clone(), k2.descriptor().clone()],
        scanned_l,
        rays,
    }
}
