#![allow(dead_code)]

use gqi_core::metric::TangentVector;
use gqi_core::sample::random_state;
use gqi_core::GaussianState;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// State with every symplectic eigenvalue at least `1 + min_excess`.
pub fn mixed_state(rng: &mut ChaCha8Rng, n: usize, min_excess: f64) -> GaussianState<f64> {
    let s = random_state::<f64, _>(rng, n, 2.0, 0.8, 1.5);
    let (mean, cov) = s.into_parts();
    let cov = cov + DMatrix::identity(2 * n, 2 * n) * min_excess;
    GaussianState::new(mean, cov).unwrap()
}

pub fn random_tangent(rng: &mut ChaCha8Rng, n: usize) -> TangentVector<f64> {
    let d = 2 * n;
    let a = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
    let d_cov = (&a + a.transpose()) * 0.5;
    let d_mean = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
    TangentVector::new(d_mean, d_cov).unwrap()
}

/// Two-mode probe: random state on signal and idler with the signal mean
/// and correlations intact.
pub fn random_probe(rng: &mut ChaCha8Rng) -> GaussianState<f64> {
    random_state::<f64, _>(rng, 2, 1.5, 0.8, 1.0)
}
