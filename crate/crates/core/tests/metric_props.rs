mod common;

use common::{mixed_state, random_tangent, rel_err, rng};
use gqi_core::metric::{basis_matrices, metric_thermal_terms};
use gqi_core::qi::decay_via_metric;
use gqi_core::sample::random_symplectic;
use gqi_core::{
    coherent_benchmark, metric_general, metric_thermal, ChannelSpec, GaussianState,
    MonotoneFunction, TangentVector,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;

fn f_col(t: f64) -> f64 {
    2.0 * (t.sqrt() + 1.0).powi(2)
}

fn f_loc(t: f64) -> f64 {
    4.0 * (t + 1.0)
}

/// The diagonal-state metric written out term by term with `(ν − 1)`
/// denominators; valid only when every `ν > 1`.
#[allow(clippy::needless_range_loop)]
fn textbook_metric(nus: &[f64], f: fn(f64) -> f64, t: &TangentVector<f64>) -> f64 {
    let n = nus.len();
    let b = basis_matrices::<f64>(n).unwrap();
    let tr = |x: &DMatrix<f64>| (&t.d_cov * x).trace();
    let mut g = 0.0;
    for i in 0..n {
        let nu = nus[i];
        g += 0.25 * tr(&b.number[i]).powi(2) / (f(1.0) * (nu * nu - 1.0));
        g += 0.25 * (tr(&b.squeeze[i]).powi(2) + tr(&b.squeeze_t[i]).powi(2))
            / ((nu - 1.0).powi(2) * f(((nu + 1.0) / (nu - 1.0)).powi(2)));
        let (dx, dp) = (t.d_mean[2 * i], t.d_mean[2 * i + 1]);
        g += 2.0 / ((nu - 1.0) * f((nu + 1.0) / (nu - 1.0))) * (dx * dx + dp * dp);
    }
    for (k, &(i, j)) in b.pairs.iter().enumerate() {
        let (ni, nj) = (nus[i], nus[j]);
        let sq = tr(&b.two_mode_s[k]).powi(2) + tr(&b.two_mode_t[k]).powi(2);
        let bs = tr(&b.beam_a[k]).powi(2) + tr(&b.beam_b[k]).powi(2);
        g += sq
            / (8.0
                * (ni - 1.0)
                * (nj - 1.0)
                * f((ni + 1.0) / (ni - 1.0) * (nj + 1.0) / (nj - 1.0)));
        g += bs
            / (8.0
                * (ni + 1.0)
                * (nj - 1.0)
                * f((ni - 1.0) / (ni + 1.0) * (nj + 1.0) / (nj - 1.0)));
    }
    g
}

/// A built-in metric paired with an independent evaluation of its function.
type Builtin = (MonotoneFunction<f64>, fn(f64) -> f64);

fn builtins() -> [Builtin; 2] {
    [
        (MonotoneFunction::collective(), f_col),
        (MonotoneFunction::local(), f_loc),
    ]
}

#[test]
fn thermal_metric_matches_textbook_form() {
    let mut r = rng(21);
    for _ in 0..200 {
        let n = r.gen_range(1..4);
        let nus: Vec<f64> = (0..n).map(|_| 1.0 + r.gen_range(0.05..5.0)).collect();
        let t = random_tangent(&mut r, n);
        for (f, raw) in builtins() {
            let g = metric_thermal(&nus, &f, &t).unwrap();
            assert!(rel_err(g, textbook_metric(&nus, raw, &t)) < 1e-11);
        }
    }
}

#[test]
fn single_basis_tangent_gives_one_summand() {
    let nus = [1.7, 3.2, 1.1];
    let b = basis_matrices::<f64>(3).unwrap();
    for (f, raw) in builtins() {
        for x in b.all() {
            let t = TangentVector::new(DVector::zeros(6), x * 0.37).unwrap();
            let terms = metric_thermal_terms(&nus, &f, &t).unwrap();
            assert_eq!(terms.len(), 1, "{x}");
            assert!(rel_err(terms[0].1, textbook_metric(&nus, raw, &t)) < 1e-12);
        }
        for k in 0..6 {
            let mut dm = DVector::zeros(6);
            dm[k] = -0.8;
            let t = TangentVector::new(dm, DMatrix::zeros(6, 6)).unwrap();
            let terms = metric_thermal_terms(&nus, &f, &t).unwrap();
            assert_eq!(terms.len(), 1);
            assert!(rel_err(terms[0].1, textbook_metric(&nus, raw, &t)) < 1e-12);
        }
    }
}

#[test]
fn zero_tangent_has_zero_length() {
    let s = GaussianState::<f64>::thermal(0.3).unwrap();
    let f = MonotoneFunction::collective();
    assert_eq!(
        metric_general(&s, &f, &TangentVector::zero(1)).unwrap(),
        0.0
    );
}

#[test]
fn coherent_pipeline_matches_benchmark() {
    for (n_s, n_b) in [(0.01f64, 625.0f64), (1.0, 0.0), (3.0, 2.5)] {
        let x: f64 = (2.0 * n_s).sqrt();
        let probe = GaussianState::vacuum(2)
            .apply(&ChannelSpec::Displacement(DVector::from_vec(vec![
                x, 0.0, 0.0, 0.0,
            ])))
            .unwrap();
        let expected = coherent_benchmark(n_s, n_b, 0.01).unwrap();
        let col = decay_via_metric(&probe, n_b, 0.01, &MonotoneFunction::collective()).unwrap();
        let loc = decay_via_metric(&probe, n_b, 0.01, &MonotoneFunction::local()).unwrap();
        assert!(rel_err(col, n_s * 0.01 / (n_b.sqrt() + (1.0 + n_b).sqrt()).powi(2)) < 1e-12);
        assert!(rel_err(col, expected.gamma_col) < 1e-12);
        assert!(rel_err(loc, expected.gamma_loc) < 1e-12);
    }
}

#[test]
fn positive_on_nonzero_tangents() {
    let mut r = rng(4);
    for _ in 0..50 {
        let s = mixed_state(&mut r, 2, 0.1);
        let t = random_tangent(&mut r, 2);
        for (f, _) in builtins() {
            assert!(metric_general(&s, &f, &t).unwrap() > 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn invariant_under_symplectic_and_displacement(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..4);
        let s = mixed_state(&mut r, n, 0.05);
        let t = random_tangent(&mut r, n);
        let s0 = random_symplectic::<f64, _>(&mut r, n, 0.6);
        let shift = DVector::from_fn(2 * n, |_, _| r.gen_range(-2.0..2.0));
        let moved = s
            .apply(&ChannelSpec::Symplectic(s0.clone())).unwrap()
            .apply(&ChannelSpec::Displacement(shift)).unwrap();
        let t_moved = t.transformed(&s0);
        for (f, _) in builtins() {
            let before = metric_general(&s, &f, &t).unwrap();
            let after = metric_general(&moved, &f, &t_moved).unwrap();
            prop_assert!(rel_err(before, after) < 1e-9, "{before} vs {after}");
        }
    }

    #[test]
    fn loss_never_increases_the_metric(seed in any::<u64>(), eta in 0.0f64..=1.0, n_l in 0.0f64..3.0) {
        let mut r = rng(seed);
        let s = mixed_state(&mut r, 2, 0.05);
        let t = random_tangent(&mut r, 2);
        let mode = r.gen_range(0..2);
        let map = ChannelSpec::Loss { mode, eta, n_l }.gaussian_map(2).unwrap();
        let out = map.apply(&s);
        let t_out = t.transformed(&map.x);
        for (f, _) in builtins() {
            let before = metric_general(&s, &f, &t).unwrap();
            let after = metric_general(&out, &f, &t_out).unwrap();
            prop_assert!(after <= before * (1.0 + 1e-9), "{after} > {before}");
        }
    }

    #[test]
    fn quadratic_in_the_tangent(seed in any::<u64>(), a in -10.0f64..10.0) {
        let mut r = rng(seed);
        let s = mixed_state(&mut r, 2, 0.05);
        let t = random_tangent(&mut r, 2);
        for (f, _) in builtins() {
            let g = metric_general(&s, &f, &t).unwrap();
            let ga = metric_general(&s, &f, &t.scaled(a)).unwrap();
            prop_assert!(rel_err(ga, a * a * g) < 1e-12 || (a == 0.0 && ga == 0.0));
        }
    }
}
