use approx::assert_abs_diff_eq;
use gqi_core::sample::{random_state, random_symplectic};
use gqi_core::symplectic::{symplectic_deviation, PSD_TOL};
use gqi_core::{symplectic_inverse, williamson, ChannelSpec, GaussianState};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rel_frobenius(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn williamson_recovers_constructed_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let s0 = random_symplectic::<f64, _>(&mut rng, 2, 1.0);
        let v = &s0
            * DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0, 3.0, 3.0]))
            * s0.transpose();
        let w = williamson(&v).unwrap();
        assert_abs_diff_eq!(w.spectrum[0], 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(w.spectrum[1], 2.0, epsilon = 1e-9);
        assert!(symplectic_deviation(&w.symplectic) < 1e-9);
        assert!(rel_frobenius(&w.reconstruct(), &v) < 1e-9);
    }
}

#[test]
fn williamson_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let v = random_state::<f64, _>(&mut rng, 3, 2.0, 0.8, 0.0)
        .cov()
        .clone();
    assert_eq!(williamson(&v).unwrap(), williamson(&v).unwrap());
}

#[test]
fn tmsv_has_unit_spectrum() {
    for n_s in [0.0, 0.01, 1.0, 30.0] {
        let w = williamson(GaussianState::<f64>::tmsv(n_s).unwrap().cov()).unwrap();
        for nu in w.spectrum.iter() {
            assert_abs_diff_eq!(*nu, 1.0, epsilon = 1e-9);
        }
    }
    assert_eq!(
        GaussianState::<f64>::tmsv(0.0).unwrap(),
        GaussianState::vacuum(2)
    );
}

#[test]
fn tmsv_signal_photons() {
    for n_s in [0.0, 0.01, 2.5] {
        let s = GaussianState::<f64>::tmsv(n_s).unwrap();
        assert_abs_diff_eq!(s.mean_photon(0).unwrap(), n_s, epsilon = 1e-15);
        assert_abs_diff_eq!(s.mean_photon(1).unwrap(), n_s, epsilon = 1e-15);
    }
}

#[test]
fn pure_constructions_have_unit_determinant() {
    let states = [
        GaussianState::<f64>::tmsv(0.7).unwrap(),
        GaussianState::vacuum(1)
            .apply(&ChannelSpec::SingleModeSqueeze {
                mode: 0,
                zeta: 0.9,
                phase: 0.4,
            })
            .unwrap(),
        GaussianState::coherent(1.3, -0.2),
    ];
    for s in states {
        let spectrum = s.validate().symplectic_spectrum.unwrap();
        assert!(spectrum.iter().all(|nu| (nu - 1.0).abs() < 1e-9));
        assert_abs_diff_eq!(s.cov().determinant(), 1.0, epsilon = 1e-9);
    }
    let mixed = GaussianState::<f64>::thermal(0.2).unwrap();
    assert!((mixed.cov().determinant() - 1.0).abs() > 1e-3);
}

#[test]
fn loss_keeps_states_valid_on_a_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..30 {
        let s = random_state::<f64, _>(&mut rng, 2, 1.0, 1.0, 1.0);
        for eta in [0.0, 0.1, 0.5, 0.9, 1.0] {
            for n_l in [0.0, 0.43, 7.84] {
                let out = s
                    .apply(&ChannelSpec::Loss {
                        mode: k % 2,
                        eta,
                        n_l,
                    })
                    .unwrap();
                let d = out.validate();
                assert!(d.valid, "eta {eta} n_l {n_l}: {d:?}");
            }
        }
    }
}

fn seeded_state(seed: u64, n: usize) -> GaussianState<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state(&mut rng, n, 3.0, 1.0, 2.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diagonalizing_symplectic_leaves_diagonal_cov(seed in any::<u64>(), n in 1usize..4) {
        let s = seeded_state(seed, n);
        let w = williamson(s.cov()).unwrap();
        let out = s.apply(&ChannelSpec::Symplectic(symplectic_inverse(&w.symplectic))).unwrap();
        let off = out.cov() - w.diagonal();
        prop_assert!(off.amax() < 1e-9 * w.spectrum[0]);
    }

    #[test]
    fn williamson_reconstructs(seed in any::<u64>(), n in 1usize..5) {
        let s = seeded_state(seed, n);
        let w = williamson(s.cov()).unwrap();
        prop_assert!(symplectic_deviation(&w.symplectic) < 1e-9);
        prop_assert!(rel_frobenius(&w.reconstruct(), s.cov()) < 1e-9);
        prop_assert!(w.spectrum.as_slice().windows(2).all(|p| p[0] >= p[1]));
        prop_assert!(w.spectrum.iter().all(|&nu| nu >= 1.0 - PSD_TOL));
    }

    #[test]
    fn symplectic_composition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_state::<f64, _>(&mut rng, 2, 1.0, 0.5, 1.0);
        let a = random_symplectic::<f64, _>(&mut rng, 2, 0.5);
        let b = random_symplectic::<f64, _>(&mut rng, 2, 0.5);
        let seq = s.apply(&ChannelSpec::Symplectic(a.clone())).unwrap()
            .apply(&ChannelSpec::Symplectic(b.clone())).unwrap();
        let once = s.apply(&ChannelSpec::Symplectic(&b * &a)).unwrap();
        let scale = 1.0 + once.cov().amax();
        prop_assert!((seq.cov() - once.cov()).amax() < 1e-12 * scale);
        prop_assert!((seq.mean() - once.mean()).amax() < 1e-12 * scale);
    }

    #[test]
    fn random_states_are_valid(seed in any::<u64>(), n in 1usize..4) {
        prop_assert!(seeded_state(seed, n).is_valid());
    }
}
