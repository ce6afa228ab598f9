//! Seeded random metrics, frame changes and polynomial families.

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::{MatrixEvaluator, MetricField, Section};
use crate::multiindex::enumerate_basis;
use crate::polynomial::Polynomial;
use crate::wirtinger::CMat;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex(rng: &mut impl Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
}

/// All monomials of degree `<= degree` with independent uniform coefficients.
pub fn random_polynomial(rng: &mut impl Rng, m: usize, degree: usize, scale: f64) -> Polynomial {
    let terms = enumerate_basis(m, degree)
        .into_iter()
        .map(|alpha| {
            let c = complex(rng, scale);
            (alpha, c)
        })
        .collect();
    Polynomial::new(m, terms)
}

/// Frame `sigma_j = e_j (+) (p_{1j}, .., p_{rj})` with polynomial tails, so the
/// Gram metric `I + P^* P` is positive-definite everywhere.
pub fn random_frame(rng: &mut impl Rng, m: usize, n: usize, extra: usize, degree: usize) -> Vec<Section> {
    (0..n)
        .map(|j| {
            let tail: Vec<Polynomial> = (0..extra)
                .map(|_| random_polynomial(rng, m, degree, 0.7))
                .collect();
            let section: Section = Arc::new(move |w: &[Complex64]| {
                let mut v = DVector::zeros(n + extra);
                v[j] = Complex64::new(1.0, 0.0);
                for (r, p) in tail.iter().enumerate() {
                    v[n + r] = p.eval(w);
                }
                Ok(v)
            });
            section
        })
        .collect()
}

/// Rank-`n` Gram metric of a random polynomial frame (degree 2, two extra
/// ambient coordinates).
pub fn random_metric(rng: &mut impl Rng, m: usize, n: usize) -> MetricField {
    MetricField::frame_gram(m, random_frame(rng, m, n, 2, 2))
}

/// `phi(w) = I + A_0 + sum_k A_k w_k` with small random `A_k`.
pub fn random_frame_change(rng: &mut impl Rng, m: usize, n: usize) -> MatrixEvaluator {
    let mats: Vec<CMat> = (0..=m)
        .map(|_| CMat::from_fn(n, n, |_, _| complex(rng, 0.2)))
        .collect();
    Arc::new(move |w: &[Complex64]| {
        let mut phi = CMat::identity(n, n) + &mats[0];
        for (k, a) in mats[1..].iter().enumerate() {
            phi += a * w[k];
        }
        Ok(phi)
    })
}

/// `count` polynomials of degree `<= max_degree`, the first with a unit
/// constant term added.
pub fn random_polynomial_family(
    rng: &mut impl Rng,
    m: usize,
    count: usize,
    max_degree: usize,
) -> Vec<Polynomial> {
    (0..count)
        .map(|k| {
            let degree = rng.gen_range(1..=max_degree);
            let p = random_polynomial(rng, m, degree, 1.0);
            if k == 0 {
                let mut terms = p.terms().to_vec();
                terms[0].1 += Complex64::new(1.0, 0.0);
                Polynomial::new(m, terms)
            } else {
                p
            }
        })
        .collect()
}
