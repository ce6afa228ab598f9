//! Unitarily invariant (diagonal) reproducing kernels on the unit ball.
//!
//! A kernel `K(z, w) = sum_i a(i) <z, w>^i` is described by its coefficient
//! rule. The monomials `z^alpha` are then orthogonal with
//! `||z^alpha||^2 = 1 / rho(alpha)`, `rho(alpha) = a(|alpha|) |alpha|! / alpha!`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{inner, norm_sqr, Point};
use crate::multiindex::{binomial, multinomial_f64, MultiIndex};

/// Envelope `a(i) <= C (i + 1)^p` used to bound series tails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    #[serde(rename = "C")]
    pub c: f64,
    pub p: f64,
}

impl GrowthBound {
    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite() && self.p >= 0.0 && self.p.is_finite()) {
            return Err(Error::Config(format!(
                "growth bound needs C > 0 and p >= 0, got C = {}, p = {}",
                self.c, self.p
            )));
        }
        Ok(())
    }

    fn envelope(&self, i: usize) -> f64 {
        self.c * ((i + 1) as f64).powf(self.p)
    }

    /// Bound on `sum_{i >= start} C (i+1)^p x^i`, if the envelope ratio is
    /// below one from `start` on.
    fn tail_from(&self, start: usize, x: f64) -> Option<f64> {
        if x == 0.0 {
            return Some(if start == 0 { self.c } else { 0.0 });
        }
        let ratio = (((start + 2) as f64) / ((start + 1) as f64)).powf(self.p) * x;
        if ratio >= 1.0 {
            return None;
        }
        Some(self.envelope(start) * x.powi(start as i32) / (1.0 - ratio))
    }
}

/// Named coefficient family.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientRule {
    /// `a(i) = (k)_i / i!`, i.e. `K = (1 - <z,w>)^{-k}`.
    Power { k: f64 },
    /// `a(i) = 1 + H_i`, i.e. `K = (1 - log(1 - <z,w>)) / (1 - <z,w>)`.
    LogPlus,
    /// `a(i) = 1 / (i + 1)`, one variable only.
    Dirichlet1D,
    /// Explicit prefix `a(0..len)`; the omitted tail is controlled by `growth`.
    Tabulated { coeffs: Vec<f64>, growth: GrowthBound },
}

/// JSON kernel descriptor as accepted on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDescriptor {
    pub family: String,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthBound>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalKernel {
    m: usize,
    rule: CoefficientRule,
    descriptor: Value,
}

impl DiagonalKernel {
    pub fn power(m: usize, k: f64) -> Result<Self> {
        Self::from_descriptor(KernelDescriptor {
            family: "power".into(),
            m,
            k: Some(k),
            coeffs: None,
            growth: None,
        })
    }

    pub fn log_plus(m: usize) -> Result<Self> {
        Self::from_descriptor(KernelDescriptor {
            family: "logplus".into(),
            m,
            k: None,
            coeffs: None,
            growth: None,
        })
    }

    pub fn dirichlet() -> Self {
        Self::from_descriptor(KernelDescriptor {
            family: "dirichlet1d".into(),
            m: 1,
            k: None,
            coeffs: None,
            growth: None,
        })
        .expect("static descriptor")
    }

    pub fn tabulated(m: usize, coeffs: Vec<f64>, growth: Option<GrowthBound>) -> Result<Self> {
        Self::from_descriptor(KernelDescriptor {
            family: "tabulated".into(),
            m,
            k: None,
            coeffs: Some(coeffs),
            growth,
        })
    }

    /// Parses a JSON descriptor; the original JSON is kept verbatim.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| {
            Error::Config(format!(
                "kernel descriptor, line {} column {}: {e}",
                e.line(),
                e.column()
            ))
        })?;
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        let desc: KernelDescriptor = serde_json::from_value(value.clone())
            .map_err(|e| Error::Config(format!("kernel descriptor: {e}")))?;
        let mut kernel = Self::from_descriptor(desc)?;
        kernel.descriptor = value;
        Ok(kernel)
    }

    pub fn from_descriptor(desc: KernelDescriptor) -> Result<Self> {
        if desc.m == 0 {
            return Err(Error::Config("field `m`: ball dimension must be at least 1".into()));
        }
        let no_extra = |field: &str, present: bool| -> Result<()> {
            if present {
                Err(Error::Config(format!(
                    "field `{field}` is not used by family `{}`",
                    desc.family
                )))
            } else {
                Ok(())
            }
        };
        let rule = match desc.family.as_str() {
            "power" => {
                let k = desc
                    .k
                    .ok_or_else(|| Error::Config("field `k`: required for family `power`".into()))?;
                if !(k > 0.0 && k.is_finite()) {
                    return Err(Error::Config(format!("field `k`: must be positive, got {k}")));
                }
                no_extra("coeffs", desc.coeffs.is_some())?;
                CoefficientRule::Power { k }
            }
            "logplus" => {
                no_extra("k", desc.k.is_some())?;
                no_extra("coeffs", desc.coeffs.is_some())?;
                CoefficientRule::LogPlus
            }
            "dirichlet1d" => {
                if desc.m != 1 {
                    return Err(Error::Config(format!(
                        "field `m`: family `dirichlet1d` requires m = 1, got {}",
                        desc.m
                    )));
                }
                no_extra("k", desc.k.is_some())?;
                no_extra("coeffs", desc.coeffs.is_some())?;
                CoefficientRule::Dirichlet1D
            }
            "tabulated" => {
                no_extra("k", desc.k.is_some())?;
                let coeffs = desc.coeffs.clone().ok_or_else(|| {
                    Error::Config("field `coeffs`: required for family `tabulated`".into())
                })?;
                let growth = desc.growth.ok_or_else(|| {
                    Error::Config("field `growth`: tabulated kernels need a growth bound".into())
                })?;
                growth.validate()?;
                if coeffs.is_empty() {
                    return Err(Error::Config("field `coeffs`: must be non-empty".into()));
                }
                for (i, &a) in coeffs.iter().enumerate() {
                    if !(a > 0.0 && a.is_finite()) {
                        return Err(Error::Config(format!(
                            "field `coeffs`: entry {i} must be positive, got {a}"
                        )));
                    }
                    if a > growth.envelope(i) * (1.0 + 1e-12) {
                        return Err(Error::Config(format!(
                            "field `coeffs`: entry {i} = {a} exceeds the declared growth bound"
                        )));
                    }
                }
                CoefficientRule::Tabulated { coeffs, growth }
            }
            other => {
                return Err(Error::Config(format!(
                    "field `family`: unknown family `{other}` (expected power, logplus, dirichlet1d or tabulated)"
                )))
            }
        };
        let descriptor = serde_json::to_value(&desc).expect("descriptor serializes");
        Ok(DiagonalKernel {
            m: desc.m,
            rule,
            descriptor,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rule(&self) -> &CoefficientRule {
        &self.rule
    }

    /// The descriptor JSON this kernel was built from.
    pub fn descriptor(&self) -> &Value {
        &self.descriptor
    }

    pub fn family_name(&self) -> &'static str {
        match self.rule {
            CoefficientRule::Power { .. } => "power",
            CoefficientRule::LogPlus => "logplus",
            CoefficientRule::Dirichlet1D => "dirichlet1d",
            CoefficientRule::Tabulated { .. } => "tabulated",
        }
    }

    /// A copy with every coefficient multiplied by `c > 0`, as a tabulated
    /// kernel over the first `len` coefficients.
    pub fn scaled_prefix(&self, c: f64, len: usize) -> Result<Self> {
        let coeffs = (0..len)
            .map(|i| self.coefficient(i).map(|a| c * a))
            .collect::<Result<Vec<_>>>()?;
        let g = self.growth_bound();
        Self::tabulated(
            self.m,
            coeffs,
            Some(GrowthBound {
                c: g.c * c.max(1.0),
                p: g.p,
            }),
        )
    }

    /// Coefficient `a(i)`.
    pub fn coefficient(&self, i: usize) -> Result<f64> {
        Ok(match &self.rule {
            CoefficientRule::Power { k } => power_coefficient(*k, i),
            CoefficientRule::LogPlus => 1.0 + harmonic(i),
            CoefficientRule::Dirichlet1D => 1.0 / (i as f64 + 1.0),
            CoefficientRule::Tabulated { coeffs, .. } => *coeffs.get(i).ok_or_else(|| {
                Error::truncation(
                    format!(
                        "tabulated kernel lists {} coefficients, a({i}) was requested",
                        coeffs.len()
                    ),
                    None,
                )
            })?,
        })
    }

    /// Largest index with a known coefficient, if finite.
    pub fn known_len(&self) -> Option<usize> {
        match &self.rule {
            CoefficientRule::Tabulated { coeffs, .. } => Some(coeffs.len()),
            _ => None,
        }
    }

    /// Envelope `a(i) <= C (i+1)^p` for every family.
    pub fn growth_bound(&self) -> GrowthBound {
        match &self.rule {
            // (k)_i / i! = prod_{j <= k-1} (i + j) / j <= (i + 1)^{k-1} for integer k >= 1
            CoefficientRule::Power { k } => GrowthBound {
                c: 1.0,
                p: (k.ceil() - 1.0).max(0.0),
            },
            // 1 + H_i <= 2 + log(i + 1) <= 3 sqrt(i + 1)
            CoefficientRule::LogPlus => GrowthBound { c: 3.0, p: 0.5 },
            CoefficientRule::Dirichlet1D => GrowthBound { c: 1.0, p: 0.0 },
            CoefficientRule::Tabulated { growth, .. } => *growth,
        }
    }

    /// `rho(alpha) = a(|alpha|) |alpha|! / alpha!`.
    pub fn weight(&self, alpha: &MultiIndex) -> Result<f64> {
        self.check_dim(alpha.dim())?;
        Ok(self.coefficient(alpha.degree())? * multinomial_f64(alpha))
    }

    /// Reciprocal polynomial `1/K`, when it exists (integer `Power` only).
    pub fn inverse_polynomial(&self) -> Option<InverseKernelCoeffs> {
        match self.rule {
            CoefficientRule::Power { k } if k.fract() == 0.0 && (1.0..=64.0).contains(&k) => {
                Some(inverse_coeffs(k as u32))
            }
            _ => None,
        }
    }

    fn check_dim(&self, m: usize) -> Result<()> {
        if m != self.m {
            return Err(Error::DimensionMismatch(format!(
                "kernel on B_{} used with {m} coordinates",
                self.m
            )));
        }
        Ok(())
    }

    /// `K(z, w)` to within `tol` (closed forms where available).
    pub fn eval(&self, z: &[Complex64], w: &[Complex64], tol: f64) -> Result<Complex64> {
        self.check_dim(z.len())?;
        self.check_dim(w.len())?;
        let t = inner(z, w);
        if t.norm() >= 1.0 {
            return Err(Error::Domain(format!("|<z, w>| = {} is not below 1", t.norm())));
        }
        let one = Complex64::new(1.0, 0.0);
        match &self.rule {
            CoefficientRule::Power { k } => Ok((-(*k) * (one - t).ln()).exp()),
            CoefficientRule::LogPlus => {
                let s = one - t;
                Ok((one - s.ln()) / s)
            }
            CoefficientRule::Dirichlet1D if t.norm() > 0.5 => Ok(-(one - t).ln() / t),
            _ => self.series(t, tol),
        }
    }

    /// Power series evaluation with an explicit tail bound below `tol`.
    pub fn eval_series(&self, z: &[Complex64], w: &[Complex64], tol: f64) -> Result<Complex64> {
        self.check_dim(z.len())?;
        self.check_dim(w.len())?;
        let t = inner(z, w);
        if t.norm() >= 1.0 {
            return Err(Error::Domain(format!("|<z, w>| = {} is not below 1", t.norm())));
        }
        self.series(t, tol)
    }

    fn series(&self, t: Complex64, tol: f64) -> Result<Complex64> {
        if !(tol > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
        }
        let x = t.norm();
        let growth = self.growth_bound();
        let terms = match self.known_len() {
            Some(len) => {
                let tail = growth.tail_from(len, x).ok_or_else(|| {
                    Error::Config("growth bound does not control the tail at this point".into())
                })?;
                if tail >= tol {
                    return Err(Error::truncation(
                        format!("tabulated prefix of {len} terms leaves a tail bound {tail:e} >= {tol:e}"),
                        None,
                    ));
                }
                len
            }
            None => {
                let mut len = 1usize;
                loop {
                    if let Some(tail) = growth.tail_from(len, x) {
                        if tail < tol {
                            break len;
                        }
                    }
                    len += 1;
                    if len > 1_000_000 {
                        return Err(Error::Config("series tail does not fall below tol".into()));
                    }
                }
            }
        };
        // Horner from the top
        let mut acc = Complex64::new(0.0, 0.0);
        for i in (0..terms).rev() {
            acc = acc * t + self.coefficient(i)?;
        }
        Ok(acc)
    }

    /// `K(w̄, w̄) = sum a(i) |w|^{2i}`, the squared norm of the kernel section.
    pub fn diagonal(&self, w: &[Complex64]) -> Result<f64> {
        self.check_dim(w.len())?;
        let x = norm_sqr(w);
        if x >= 1.0 {
            return Err(Error::Domain(format!("|w|^2 = {x} is not below 1")));
        }
        match &self.rule {
            CoefficientRule::Power { k } => Ok((-k * (-x).ln_1p()).exp()),
            CoefficientRule::LogPlus => {
                let l = (-x).ln_1p();
                Ok((1.0 - l) / (1.0 - x))
            }
            CoefficientRule::Dirichlet1D if x > 0.5 => Ok(-(-x).ln_1p() / x),
            _ => Ok(self.series(Complex64::new(x, 0.0), 1e-15)?.re),
        }
    }

    pub fn diagonal_at(&self, w: &Point) -> Result<f64> {
        self.diagonal(w.coords())
    }
}

/// `(k)_i / i!`; exact binomial for integer `k`.
fn power_coefficient(k: f64, i: usize) -> f64 {
    if k.fract() == 0.0 && (1.0..1e6).contains(&k) {
        if let Some(b) = binomial((i as u64) + (k as u64) - 1, i as u64) {
            return b as f64;
        }
    }
    (1..=i).fold(1.0, |acc, j| acc * (k + j as f64 - 1.0) / j as f64)
}

/// `H_i = sum_{j <= i} 1/j` with Neumaier compensation.
pub fn harmonic(i: usize) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for j in 1..=i {
        let term = 1.0 / j as f64;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Coefficients of `(1 - t)^k = sum_i b(i) t^i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseKernelCoeffs {
    pub k: u32,
    pub b: Vec<i128>,
}

impl InverseKernelCoeffs {
    pub fn get(&self, i: usize) -> i128 {
        self.b.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.k as usize
    }
}

/// `b(i) = (-1)^i k! / (i! (k - i)!)`.
pub fn inverse_coeffs(k: u32) -> InverseKernelCoeffs {
    let b = (0..=k as u64)
        .map(|i| {
            let mag = binomial(k as u64, i).expect("k <= 64 fits") as i128;
            if i % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    InverseKernelCoeffs { k, b }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn power_at_origin_is_one() {
        for k in [0.5, 1.0, 2.0, 3.7] {
            let kern = DiagonalKernel::power(2, k).unwrap();
            let z = [c(0.0, 0.0), c(0.0, 0.0)];
            assert_eq!(kern.eval(&z, &z, 1e-12).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn power_two_at_half() {
        // <z, w> = 0.5: closed form 1/(1 - 0.5)^2
        let kern = DiagonalKernel::power(1, 2.0).unwrap();
        let v = kern.eval(&[c(0.5, 0.0)], &[c(1.0, 0.0)], 1e-12);
        // |w| may exceed one for the second argument; only <z,w> matters
        assert!((v.unwrap() - c(4.0, 0.0)).norm() < 1e-14);
        let v = kern.eval_series(&[c(0.5, 0.0)], &[c(1.0, 0.0)], 1e-12).unwrap();
        assert!((v - c(4.0, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn logplus_diagonal_closed_form() {
        let kern = DiagonalKernel::log_plus(2).unwrap();
        let w = [c(0.3, 0.1), c(-0.2, 0.4)];
        let r2: f64 = w.iter().map(|v| v.norm_sqr()).sum();
        let exact = (1.0 - (1.0 - r2).ln()) / (1.0 - r2);
        let wbar: Vec<_> = w.iter().map(|v| v.conj()).collect();
        assert!((kern.eval(&wbar, &wbar, 1e-12).unwrap().re - exact).abs() < 1e-13);
        assert!((kern.diagonal(&w).unwrap() - exact).abs() < 1e-13);
        assert!((kern.eval_series(&wbar, &wbar, 1e-13).unwrap().re - exact).abs() < 1e-12);
    }

    #[test]
    fn weights() {
        let k1 = DiagonalKernel::power(1, 1.0).unwrap();
        for n in 0..30 {
            assert_eq!(k1.weight(&MultiIndex::new(vec![n])).unwrap(), 1.0);
        }
        let k12 = DiagonalKernel::power(2, 1.0).unwrap();
        assert_eq!(k12.weight(&MultiIndex::new(vec![1, 1])).unwrap(), 2.0);
        let lp = DiagonalKernel::log_plus(2).unwrap();
        let alpha = MultiIndex::new(vec![2, 1]);
        let expected = (1.0 + 1.0 + 0.5 + 1.0 / 3.0) * 3.0;
        assert!((lp.weight(&alpha).unwrap() - expected).abs() < 1e-14);
        assert_eq!(lp.weight(&MultiIndex::zero(2)).unwrap(), 1.0);
    }

    #[test]
    fn logplus_coefficient_three() {
        let lp = DiagonalKernel::log_plus(1).unwrap();
        assert!((lp.coefficient(3).unwrap() - 2.833_333_333_333_333).abs() < 1e-14);
    }

    #[test]
    fn inverse_coefficients() {
        assert_eq!(inverse_coeffs(1).b, vec![1, -1]);
        assert_eq!(inverse_coeffs(3).b, vec![1, -3, 3, -1]);
        for k in 1..20 {
            let b = inverse_coeffs(k);
            assert_eq!(b.b[0], 1);
            assert_eq!(b.b.iter().sum::<i128>(), 0);
        }
    }

    #[test]
    fn inverse_convolution_vanishes() {
        let kern = DiagonalKernel::power(1, 3.0).unwrap();
        let b = inverse_coeffs(3);
        for s in 1..=10 {
            let conv: f64 = (0..=s.min(3))
                .map(|i| b.get(i) as f64 * kern.coefficient(s - i).unwrap())
                .sum();
            assert_eq!(conv, 0.0, "s = {s}");
        }
    }

    #[test]
    fn descriptor_errors() {
        assert!(matches!(
            DiagonalKernel::from_json(r#"{"family":"power","m":1}"#),
            Err(Error::Config(_))
        ));
        assert!(DiagonalKernel::from_json(r#"{"family":"dirichlet1d","m":2}"#).is_err());
        assert!(DiagonalKernel::from_json(r#"{"family":"nope","m":1}"#).is_err());
        assert!(DiagonalKernel::from_json(r#"{"family":"tabulated","m":1,"coeffs":[1,1]}"#).is_err());
        assert!(DiagonalKernel::from_json(
            r#"{"family":"tabulated","m":1,"coeffs":[1,5],"growth":{"C":1,"p":1}}"#
        )
        .is_err());
        let err = DiagonalKernel::from_json("{\"family\":\n\"power\", m}").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn descriptor_kept_verbatim() {
        let text = r#"{"family":"power","m":2,"k":3}"#;
        let kern = DiagonalKernel::from_json(text).unwrap();
        assert_eq!(kern.descriptor(), &serde_json::from_str::<Value>(text).unwrap());
        assert_eq!(kern.inverse_polynomial().unwrap().b, vec![1, -3, 3, -1]);
        assert!(DiagonalKernel::log_plus(1).unwrap().inverse_polynomial().is_none());
        assert!(DiagonalKernel::dirichlet().inverse_polynomial().is_none());
    }

    #[test]
    fn tabulated_tail_control() {
        let coeffs: Vec<f64> = (0..60).map(|i| 1.0 + i as f64).collect();
        let kern = DiagonalKernel::tabulated(1, coeffs, Some(GrowthBound { c: 1.0, p: 1.0 })).unwrap();
        let w = [c(0.4, 0.0)];
        let exact = 1.0 / (1.0 - 0.16f64).powi(2);
        assert!((kern.diagonal(&w).unwrap() - exact).abs() < 1e-12);
        // far out the 60-term prefix cannot certify the tail
        let z = [c(0.95, 0.0)];
        assert!(matches!(kern.eval(&z, &z, 1e-10), Err(Error::Truncation { .. })));
        assert!(kern.coefficient(60).is_err());
    }

    #[test]
    fn eval_domain_error() {
        let kern = DiagonalKernel::power(1, 1.0).unwrap();
        assert!(matches!(
            kern.eval(&[c(1.0, 0.0)], &[c(1.0, 0.0)], 1e-10),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn dirichlet_matches_series() {
        let d = DiagonalKernel::dirichlet();
        for r in [0.1, 0.6, 0.9] {
            let w = [c(r, 0.0)];
            let x = r * r;
            let closed = -(1.0 - x).ln() / x;
            assert!((d.diagonal(&w).unwrap() - closed).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn power_weight_ratio(k in 1u32..6, a in 0usize..10, b in 0usize..10, i in 0usize..2) {
            // rho(alpha + e_i) / rho(alpha) = (k + |alpha|)/(|alpha| + 1) * |alpha+e_i|/(alpha_i+1)
            let kern = DiagonalKernel::power(2, k as f64).unwrap();
            let alpha = MultiIndex::new(vec![a, b]);
            let s = (a + b) as f64;
            let ratio = kern.weight(&alpha.raised(i)).unwrap() / kern.weight(&alpha).unwrap();
            let expected = (k as f64 + s) / (s + 1.0) * (s + 1.0) / (alpha.entries()[i] as f64 + 1.0);
            prop_assert!((ratio - expected).abs() <= 1e-12 * expected);
        }

        #[test]
        fn halving_tol_is_stable(re in -0.9f64..0.9, im in -0.4f64..0.4, tol_exp in 3i32..12) {
            prop_assume!(re * re + im * im < 0.81);
            let tol = 10f64.powi(-tol_exp);
            for kern in [DiagonalKernel::power(1, 2.5).unwrap(), DiagonalKernel::log_plus(1).unwrap()] {
                let z = [c(re, im)];
                let one = [c(1.0, 0.0)];
                let a = kern.eval_series(&z, &one, tol).unwrap();
                let b = kern.eval_series(&z, &one, tol / 2.0).unwrap();
                prop_assert!((a - b).norm() <= tol);
                let closed = kern.eval(&z, &one, tol).unwrap();
                prop_assert!((a - closed).norm() <= tol + 1e-12 * closed.norm());
            }
        }
    }
}
