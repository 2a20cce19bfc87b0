//! Seeded random symplectic matrices and Gaussian states for property checks.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::scalar::{lit, Real};
use crate::symplectic::{ChannelSpec, GaussianState};

/// Symplectic matrix built from layers of local phases and squeezers
/// followed by beam splitters on every mode pair. Squeezing parameters are
/// drawn from `[−max_squeeze, max_squeeze]`.
pub fn random_symplectic<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n_modes: usize,
    max_squeeze: f64,
) -> DMatrix<T> {
    let mut s = DMatrix::<T>::identity(2 * n_modes, 2 * n_modes);
    let push = |op: ChannelSpec<T>, s: &mut DMatrix<T>| {
        let m = op
            .symplectic_matrix(n_modes)
            .expect("generated parameters are in range")
            .expect("unitary operation");
        *s = m * &*s;
    };
    let angle = |rng: &mut R| lit::<T>(rng.gen_range(0.0..std::f64::consts::TAU));
    for _ in 0..2 {
        for mode in 0..n_modes {
            push(
                ChannelSpec::Phase {
                    mode,
                    phi: angle(rng),
                },
                &mut s,
            );
            let zeta = lit::<T>(rng.gen_range(-max_squeeze..=max_squeeze));
            push(
                ChannelSpec::SingleModeSqueeze {
                    mode,
                    zeta,
                    phase: angle(rng),
                },
                &mut s,
            );
        }
        for i in 0..n_modes {
            for j in i + 1..n_modes {
                push(
                    ChannelSpec::BeamSplit {
                        modes: (i, j),
                        theta: angle(rng),
                    },
                    &mut s,
                );
            }
        }
    }
    s
}

/// Gaussian state `S diag(ν) Sᵀ` with `ν − 1` uniform in `[0, max_excess]`,
/// mean entries uniform in `[−max_mean, max_mean]`.
pub fn random_state<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n_modes: usize,
    max_excess: f64,
    max_squeeze: f64,
    max_mean: f64,
) -> GaussianState<T> {
    let s = random_symplectic::<T, R>(rng, n_modes, max_squeeze);
    let nus: Vec<T> = (0..n_modes)
        .map(|_| lit::<T>(1.0 + rng.gen_range(0.0..=max_excess)))
        .collect();
    let d = DMatrix::from_fn(2 * n_modes, 2 * n_modes, |i, j| {
        if i == j {
            nus[i / 2]
        } else {
            T::zero()
        }
    });
    let cov = &s * d * s.transpose();
    let cov = (&cov + cov.transpose()) * lit::<T>(0.5);
    let mean = DVector::from_fn(2 * n_modes, |_, _| {
        if max_mean > 0.0 {
            lit::<T>(rng.gen_range(-max_mean..=max_mean))
        } else {
            T::zero()
        }
    });
    GaussianState::new(mean, cov).expect("dimensions agree")
}

/// Pure state `S Sᵀ` with zero mean.
pub fn random_pure_state<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    n_modes: usize,
    max_squeeze: f64,
) -> GaussianState<T> {
    random_state(rng, n_modes, 0.0, max_squeeze, 0.0)
}
