//! Wirtinger derivatives by composed central differences.
//!
//! `d/dw = (d/dx - i d/dy) / 2` and `d/dw̄ = (d/dx + i d/dy) / 2` on each
//! coordinate `w_k = x_k + i y_k`. Mixed words are evaluated by nesting one
//! central difference per letter, so a word of length `p` costs
//! `(2 * order)^p` field evaluations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{norm, Point};
use crate::multiindex::MultiIndex;

pub type CMat = DMatrix<Complex64>;

pub const DEFAULT_STEP: f64 = 1e-4;

/// One letter of a derivative word (zero-based coordinate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Derivative {
    Holomorphic(usize),
    Antiholomorphic(usize),
}

impl Derivative {
    pub fn coord(self) -> usize {
        match self {
            Derivative::Holomorphic(c) | Derivative::Antiholomorphic(c) => c,
        }
    }
}

/// `d^I dbar^J`: holomorphic letters first, then antiholomorphic ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivativeWord {
    pub holomorphic: MultiIndex,
    pub antiholomorphic: MultiIndex,
}

impl DerivativeWord {
    pub fn new(holomorphic: MultiIndex, antiholomorphic: MultiIndex) -> Self {
        DerivativeWord {
            holomorphic,
            antiholomorphic,
        }
    }

    pub fn empty(m: usize) -> Self {
        Self::new(MultiIndex::zero(m), MultiIndex::zero(m))
    }

    pub fn len(&self) -> usize {
        self.holomorphic.degree() + self.antiholomorphic.degree()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn letters(&self) -> Vec<Derivative> {
        let mut out = Vec::with_capacity(self.len());
        for (c, &k) in self.holomorphic.entries().iter().enumerate() {
            out.extend(std::iter::repeat_n(Derivative::Holomorphic(c), k));
        }
        for (c, &k) in self.antiholomorphic.entries().iter().enumerate() {
            out.extend(std::iter::repeat_n(Derivative::Antiholomorphic(c), k));
        }
        out
    }
}

/// Finite-difference parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WirtingerStencil {
    pub step: f64,
    /// Accuracy order of each central difference, 2 or 4.
    pub order: u8,
    /// Shrink the step near the boundary so the stencil stays interior.
    pub boundary_scaling: bool,
}

impl Default for WirtingerStencil {
    fn default() -> Self {
        WirtingerStencil {
            step: DEFAULT_STEP,
            order: 2,
            boundary_scaling: true,
        }
    }
}

impl WirtingerStencil {
    pub fn new(step: f64, order: u8) -> Result<Self> {
        let s = WirtingerStencil {
            step,
            order,
            boundary_scaling: true,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_step(self, step: f64) -> Self {
        WirtingerStencil { step, ..self }
    }

    pub fn fixed(self) -> Self {
        WirtingerStencil {
            boundary_scaling: false,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Config(format!("stencil step must be positive, got {}", self.step)));
        }
        if self.order != 2 && self.order != 4 {
            return Err(Error::Config(format!("stencil order must be 2 or 4, got {}", self.order)));
        }
        Ok(())
    }

    /// Fixes the step for a word of length `depth` evaluated at `w`.
    ///
    /// With boundary scaling the step becomes
    /// `min(step, (1 - |w|) / (4 * reach))`, where `reach = depth * order / 2`
    /// is the stencil radius in units of the step; for second derivatives at
    /// order 2 this is `(1 - |w|) / 8`.
    pub fn resolve(&self, w: &[Complex64], depth: usize) -> Result<ResolvedStencil> {
        self.validate()?;
        let radius = norm(w);
        if radius >= 1.0 {
            return Err(Error::Domain(format!("point of norm {radius} is outside the ball")));
        }
        let reach = (depth * self.order as usize / 2) as f64;
        let mut step = self.step;
        if self.boundary_scaling && reach > 0.0 {
            step = step.min((1.0 - radius) / (4.0 * reach));
        }
        if radius + reach * step >= 1.0 {
            return Err(Error::Domain(format!(
                "stencil of radius {} around |w| = {radius} leaves the ball",
                reach * step
            )));
        }
        Ok(ResolvedStencil {
            step,
            order: self.order,
        })
    }
}

/// A stencil with its step fixed for a particular evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedStencil {
    pub step: f64,
    pub order: u8,
}

type Field<'a> = dyn Fn(&[Complex64]) -> Result<CMat> + 'a;

impl ResolvedStencil {
    /// Applies the letters left to right: `steps[0]` is the outermost
    /// difference.
    pub fn apply(&self, f: &Field<'_>, w: &[Complex64], steps: &[Derivative]) -> Result<CMat> {
        let Some((&d, rest)) = steps.split_first() else {
            let v = f(w)?;
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Evaluation("field returned a non-finite value".into()));
            }
            return Ok(v);
        };
        let c = d.coord();
        let along = |delta: Complex64| {
            move |s: f64| -> Result<CMat> {
                let mut shifted = w.to_vec();
                shifted[c] += delta * s;
                self.apply(f, &shifted, rest)
            }
        };
        let dx = self.central(along(Complex64::new(1.0, 0.0)))?;
        let dy = self.central(along(Complex64::new(0.0, 1.0)))?;
        let half_i = Complex64::new(0.0, 0.5);
        Ok(match d {
            Derivative::Holomorphic(_) => dx * Complex64::new(0.5, 0.0) - dy * half_i,
            Derivative::Antiholomorphic(_) => dx * Complex64::new(0.5, 0.0) + dy * half_i,
        })
    }

    fn central(&self, g: impl Fn(f64) -> Result<CMat>) -> Result<CMat> {
        let h = self.step;
        match self.order {
            2 => {
                let plus = g(h)?;
                let minus = g(-h)?;
                Ok((plus - minus) * Complex64::new(0.5 / h, 0.0))
            }
            _ => {
                let p2 = g(2.0 * h)?;
                let p1 = g(h)?;
                let m1 = g(-h)?;
                let m2 = g(-2.0 * h)?;
                Ok((p1 - m1) * Complex64::new(8.0 / (12.0 * h), 0.0)
                    - (p2 - m2) * Complex64::new(1.0 / (12.0 * h), 0.0))
            }
        }
    }

    pub fn apply_scalar(
        &self,
        f: &dyn Fn(&[Complex64]) -> Result<Complex64>,
        w: &[Complex64],
        steps: &[Derivative],
    ) -> Result<Complex64> {
        let lifted = |z: &[Complex64]| f(z).map(|v| CMat::from_element(1, 1, v));
        Ok(self.apply(&lifted, w, steps)?[(0, 0)])
    }
}

/// `d^I dbar^J f(w)` for a matrix-valued field.
pub fn wirtinger(
    f: &Field<'_>,
    w: &Point,
    word: &DerivativeWord,
    stencil: &WirtingerStencil,
) -> Result<CMat> {
    check_word(w, word)?;
    let resolved = stencil.resolve(w.coords(), word.len())?;
    resolved.apply(f, w.coords(), &word.letters())
}

/// `d^I dbar^J f(w)` for a scalar field.
pub fn wirtinger_scalar(
    f: &dyn Fn(&[Complex64]) -> Result<Complex64>,
    w: &Point,
    word: &DerivativeWord,
    stencil: &WirtingerStencil,
) -> Result<Complex64> {
    check_word(w, word)?;
    let resolved = stencil.resolve(w.coords(), word.len())?;
    resolved.apply_scalar(f, w.coords(), &word.letters())
}

fn check_word(w: &Point, word: &DerivativeWord) -> Result<()> {
    if word.holomorphic.dim() != w.dim() || word.antiholomorphic.dim() != w.dim() {
        return Err(Error::DimensionMismatch(format!(
            "derivative word over {} coordinates applied at a point of dimension {}",
            word.holomorphic.dim(),
            w.dim()
        )));
    }
    Ok(())
}
