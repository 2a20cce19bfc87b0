//! Quantum-illumination decay constants for two-mode Gaussian probes.
//!
//! Mode 0 is the signal sent towards the target, mode 1 the retained idler.
//! The target is a beam splitter of reflectivity `κ` mixing the signal with
//! a thermal background; at `κ → 0` the returned signal is thermal with mean
//! photon number `N_B`, and both decay constants are `κ` times a monotone
//! metric evaluated at that state along the leading-order perturbation.

mod regions;
mod sweeps;
mod thresholds;

pub use regions::{
    classify_correlations, CorrelationGrid, RegionClassification, RegionLabel, RegionPoint,
};
pub use sweeps::{
    idler_squeeze_sweep, memory_advantage_grid, signal_op_sweep, threshold_curves, IdlerSqueezeRow,
    MemoryAdvantageRow, SignalOp, SignalOpRow, ThresholdRow,
};
pub use thresholds::{
    eta_qa1_col, eta_qa1_col_limit, eta_qa1_loc, eta_qa1_loc_limit, EtaThreshold,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::metric::{metric_general, MonotoneFunction, TangentVector};
use crate::scalar::{lit, to_f64, Real};
use crate::symplectic::{local_matrix, symplectic_inverse, williamson, ChannelSpec, GaussianState};

/// Largest `|a₃₃ − a₄₄|` and `|a₃₄|` accepted by [`decay_thermal_idler`].
pub const THERMAL_IDLER_TOL: f64 = 1e-10;

/// Reflectivity above which the small-`κ` expansion is flagged.
pub const KAPPA_WARN: f64 = 0.1;

pub const SIGNAL: usize = 0;
pub const IDLER: usize = 1;

/// Per-copy error exponents for collective and local measurements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayConstants<T: Real> {
    pub gamma_col: T,
    pub gamma_loc: T,
}

impl<T: Real> DecayConstants<T> {
    pub fn scaled(self, a: T) -> Self {
        Self {
            gamma_col: self.gamma_col * a,
            gamma_loc: self.gamma_loc * a,
        }
    }

    /// Component-wise ratio `self / other`.
    pub fn ratio(self, other: Self) -> QuantumAdvantage<T> {
        QuantumAdvantage {
            col: self.gamma_col / other.gamma_col,
            loc: self.gamma_loc / other.gamma_loc,
        }
    }
}

/// Decay constants relative to a coherent probe of equal signal power.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantumAdvantage<T: Real> {
    pub col: T,
    pub loc: T,
}

/// Beam splitter of transmittivity `eta` mixing the stored idler with a
/// thermal mode of mean photon number `n_l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdlerMemory<T: Real> {
    pub eta: T,
    pub n_l: T,
}

/// A probe together with the target, background, and idler memory.
///
/// The state actually sent is the probe after `signal_ops`, `idler_ops`
/// and finally the idler memory, in that order.
#[derive(Clone, Debug, PartialEq)]
pub struct QiScenario<T: Real> {
    probe: GaussianState<T>,
    kappa: T,
    n_b: T,
    idler_memory: Option<IdlerMemory<T>>,
    signal_ops: Vec<ChannelSpec<T>>,
    idler_ops: Vec<ChannelSpec<T>>,
}

fn check_two_mode<T: Real>(probe: &GaussianState<T>) -> Result<()> {
    if probe.n_modes() != 2 {
        return Err(Error::Dimension(format!(
            "probe must have two modes (signal, idler), got {}",
            probe.n_modes()
        )));
    }
    Ok(())
}

fn check_background<T: Real>(n_b: T) -> Result<()> {
    if !(n_b >= T::zero()) || !n_b.is_finite() {
        return Err(Error::Domain(format!(
            "background photon number must be >= 0, got {}",
            n_b
        )));
    }
    Ok(())
}

fn check_kappa<T: Real>(kappa: T) -> Result<()> {
    if !(kappa >= T::zero()) || !kappa.is_finite() {
        return Err(Error::Domain(format!(
            "reflectivity must be >= 0, got {}",
            kappa
        )));
    }
    Ok(())
}

impl<T: Real> QiScenario<T> {
    pub fn new(probe: GaussianState<T>, kappa: T, n_b: T) -> Result<Self> {
        check_two_mode(&probe)?;
        probe.ensure_valid()?;
        if !(kappa > T::zero() && kappa < T::one()) {
            return Err(Error::Domain(format!(
                "reflectivity must lie in (0, 1), got {}",
                kappa
            )));
        }
        check_background(n_b)?;
        Ok(Self {
            probe,
            kappa,
            n_b,
            idler_memory: None,
            signal_ops: Vec::new(),
            idler_ops: Vec::new(),
        })
    }

    pub fn with_idler_memory(mut self, eta: T, n_l: T) -> Result<Self> {
        // Validate the parameters through the channel constructor.
        ChannelSpec::Loss {
            mode: IDLER,
            eta,
            n_l,
        }
        .gaussian_map(2)?;
        self.idler_memory = Some(IdlerMemory { eta, n_l });
        Ok(self)
    }

    /// Appends an operation that may only touch the signal mode.
    pub fn with_signal_op(mut self, op: ChannelSpec<T>) -> Result<Self> {
        Self::check_local(&op, SIGNAL)?;
        self.signal_ops.push(op);
        Ok(self)
    }

    /// Appends an operation that may only touch the idler mode; it acts
    /// before the idler memory.
    pub fn with_idler_op(mut self, op: ChannelSpec<T>) -> Result<Self> {
        Self::check_local(&op, IDLER)?;
        self.idler_ops.push(op);
        Ok(self)
    }

    fn check_local(op: &ChannelSpec<T>, mode: usize) -> Result<()> {
        op.gaussian_map(2)?;
        let touched = op.touched_modes(2)?;
        if let Some(&bad) = touched.iter().find(|&&m| m != mode) {
            return Err(Error::Domain(format!(
                "operation touches mode {bad}, expected only mode {mode}"
            )));
        }
        Ok(())
    }

    pub fn probe(&self) -> &GaussianState<T> {
        &self.probe
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn n_b(&self) -> T {
        self.n_b
    }

    pub fn idler_memory(&self) -> Option<IdlerMemory<T>> {
        self.idler_memory
    }

    /// Human-readable notes on parameters outside the small-`κ` regime.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.kappa > lit::<T>(KAPPA_WARN) {
            w.push(format!(
                "reflectivity {} exceeds {}; the decay constants are leading order in kappa",
                to_f64(self.kappa),
                KAPPA_WARN
            ));
        }
        w
    }

    /// The two-mode state at the moment the signal meets the target.
    pub fn prepared_probe(&self) -> Result<GaussianState<T>> {
        let mut state = self.probe.clone();
        for op in self.signal_ops.iter().chain(&self.idler_ops) {
            state = state.apply(op)?;
        }
        if let Some(IdlerMemory { eta, n_l }) = self.idler_memory {
            state = state.apply(&ChannelSpec::Loss {
                mode: IDLER,
                eta,
                n_l,
            })?;
        }
        Ok(state)
    }

    pub fn signal_photons(&self) -> Result<T> {
        self.prepared_probe()?.mean_photon(SIGNAL)
    }
}

/// The target-absent output `ρ₀` and the leading-order tangent `dρ/d√κ`.
///
/// `ρ₀` keeps the idler marginal (including its mean) and replaces the
/// signal by a thermal mode with `N_B` photons. The tangent carries the
/// signal mean and the signal–idler correlation block `C`; the factor `√κ`
/// is left out and re-enters as the overall `κ` of the decay constants.
pub fn returned_tangent<T: Real>(
    probe: &GaussianState<T>,
    n_b: T,
) -> Result<(GaussianState<T>, TangentVector<T>)> {
    check_two_mode(probe)?;
    check_background(n_b)?;
    let v = probe.cov();
    let m = probe.mean();
    let thermal = T::one() + lit::<T>(2.0) * n_b;
    let mut cov0 = DMatrix::zeros(4, 4);
    cov0[(0, 0)] = thermal;
    cov0[(1, 1)] = thermal;
    cov0.view_mut((2, 2), (2, 2))
        .copy_from(&v.view((2, 2), (2, 2)));
    let mean0 = DVector::from_vec(vec![T::zero(), T::zero(), m[2], m[3]]);
    let rho0 = GaussianState::new(mean0, cov0)?;

    let mut d_cov = DMatrix::zeros(4, 4);
    let c = v.view((0, 2), (2, 2)).into_owned();
    d_cov.view_mut((0, 2), (2, 2)).copy_from(&c);
    d_cov.view_mut((2, 0), (2, 2)).copy_from(&c.transpose());
    let d_mean = DVector::from_vec(vec![m[0], m[1], T::zero(), T::zero()]);
    Ok((rho0, TangentVector::new(d_mean, d_cov)?))
}

/// `κ · g_{ρ₀}(dρ, dρ)` for an arbitrary monotone function.
pub fn decay_via_metric<T: Real>(
    probe: &GaussianState<T>,
    n_b: T,
    kappa: T,
    f: &MonotoneFunction<T>,
) -> Result<T> {
    check_kappa(kappa)?;
    let (rho0, t) = returned_tangent(probe, n_b)?;
    Ok(kappa * metric_general(&rho0, f, &t)?)
}

/// Both decay constants through the general metric evaluation.
pub fn decay_metric_pipeline<T: Real>(
    probe: &GaussianState<T>,
    n_b: T,
    kappa: T,
) -> Result<DecayConstants<T>> {
    Ok(DecayConstants {
        gamma_col: decay_via_metric(probe, n_b, kappa, &MonotoneFunction::collective())?,
        gamma_loc: decay_via_metric(probe, n_b, kappa, &MonotoneFunction::local())?,
    })
}

/// `num / den`, reading `0/0` as zero.
fn safe_ratio<T: Real>(num: T, den: T) -> Result<T> {
    if den > T::zero() {
        Ok(num / den)
    } else if num.abs() <= lit::<T>(1e-24) {
        Ok(T::zero())
    } else {
        Err(Error::InvalidState(format!(
            "correlation {} with a pure idler and zero background",
            to_f64(num)
        )))
    }
}

/// Closed-form decay constants for probes whose idler marginal is thermal
/// (`a₃₃ = a₄₄ = 1 + 2N_I`, `a₃₄ = 0`).
///
/// With `P = (a₁₄ + a₂₃)² + (a₁₃ − a₂₄)²`, `M = (a₁₄ − a₂₃)² + (a₁₃ + a₂₄)²`
/// and `d² = x_s² + p_s²`:
///
/// ```text
/// γ_col = κ/16 [P/(√(N_B N_I) + √((1+N_B)(1+N_I)))² + M/(√(N_B(1+N_I)) + √((1+N_B)N_I))²
///               + 8d²/(√N_B + √(1+N_B))²]
/// γ_loc = κ/32 [P/(1 + N_B + N_I + 2N_B N_I) + M/(N_B + N_I + 2N_B N_I) + 8d²/(1 + 2N_B)]
/// ```
pub fn decay_thermal_idler<T: Real>(
    probe: &GaussianState<T>,
    n_b: T,
    kappa: T,
) -> Result<DecayConstants<T>> {
    check_two_mode(probe)?;
    check_background(n_b)?;
    check_kappa(kappa)?;
    let v = probe.cov();
    let tol = lit::<T>(THERMAL_IDLER_TOL);
    let (a33, a44, a34) = (v[(2, 2)], v[(3, 3)], v[(2, 3)]);
    if (a33 - a44).abs() > tol || a34.abs() > tol {
        return Err(Error::Precondition(format!(
            "idler marginal is not thermal (a33 - a44 = {:e}, a34 = {:e}); use decay_general",
            to_f64(a33 - a44),
            to_f64(a34)
        )));
    }
    probe.ensure_valid()?;
    let (a13, a14, a23, a24) = (v[(0, 2)], v[(0, 3)], v[(1, 2)], v[(1, 3)]);
    let m = probe.mean();
    let one = T::one();
    let two = lit::<T>(2.0);
    let eight = lit::<T>(8.0);
    let n_i = ((a33 + a44) / two - one).max(T::zero()) / two;
    let plus = (a14 + a23) * (a14 + a23) + (a13 - a24) * (a13 - a24);
    let minus = (a14 - a23) * (a14 - a23) + (a13 + a24) * (a13 + a24);
    let d2 = m[0] * m[0] + m[1] * m[1];
    let sq = |x: T| x * x;

    let col_plus = sq((n_b * n_i).sqrt() + ((one + n_b) * (one + n_i)).sqrt());
    let col_minus = sq((n_b * (one + n_i)).sqrt() + ((one + n_b) * n_i).sqrt());
    let col_disp = sq(n_b.sqrt() + (one + n_b).sqrt());
    let gamma_col = (plus / col_plus + safe_ratio(minus, col_minus)? + eight * d2 / col_disp)
        * kappa
        / lit(16.0);

    let loc_plus = one + n_b + n_i + two * n_b * n_i;
    let loc_minus = n_b + n_i + two * n_b * n_i;
    let loc_disp = one + two * n_b;
    let gamma_loc = (plus / loc_plus + safe_ratio(minus, loc_minus)? + eight * d2 / loc_disp)
        * kappa
        / lit(32.0);

    Ok(DecayConstants {
        gamma_col,
        gamma_loc,
    })
}

/// The idler-local symplectic `I ⊕ S_i⁻¹` bringing the idler marginal to
/// thermal form.
pub fn idler_normalizer<T: Real>(probe: &GaussianState<T>) -> Result<DMatrix<T>> {
    check_two_mode(probe)?;
    let w = williamson(&probe.cov().view((2, 2), (2, 2)).into_owned())?;
    Ok(local_matrix(2, IDLER, &symplectic_inverse(&w.symplectic)))
}

/// Decay constants of any valid two-mode probe: diagonalize the idler
/// marginal with an idler-local symplectic, then use [`decay_thermal_idler`].
pub fn decay_general<T: Real>(
    probe: &GaussianState<T>,
    n_b: T,
    kappa: T,
) -> Result<DecayConstants<T>> {
    check_two_mode(probe)?;
    probe.ensure_valid()?;
    let l = idler_normalizer(probe)?;
    let mut normalized = probe.transformed(&l);
    // Remove the residual rounding of the diagonalized idler block.
    let (mut mean, mut cov) = (normalized.mean().clone(), normalized.cov().clone());
    let nu = (cov[(2, 2)] + cov[(3, 3)]) / lit(2.0);
    cov[(2, 2)] = nu;
    cov[(3, 3)] = nu;
    cov[(2, 3)] = T::zero();
    cov[(3, 2)] = T::zero();
    mean[2] = T::zero();
    mean[3] = T::zero();
    normalized = GaussianState::new(mean, cov)?;
    decay_thermal_idler(&normalized, n_b, kappa)
}

/// Large-background form, needing only `ν₂ = √det V_i` and `Tr C V_i⁻¹ Cᵀ`:
///
/// ```text
/// γ_col = κ/(4N_B) (d²/2 + ν₂ Tr(C V_i⁻¹ Cᵀ)/(√(ν₂+1) + √(ν₂−1))²)
/// γ_loc = κ/(4N_B) (d²/2 + Tr(C V_i⁻¹ Cᵀ)/4)
/// ```
pub fn decay_large_nb<T: Real>(
    probe: &GaussianState<T>,
    n_b: T,
    kappa: T,
) -> Result<DecayConstants<T>> {
    check_two_mode(probe)?;
    check_kappa(kappa)?;
    if !(n_b > T::zero()) {
        return Err(Error::Domain(format!(
            "large-background form needs N_B > 0, got {}",
            n_b
        )));
    }
    let v = probe.cov();
    let vi = v.view((2, 2), (2, 2)).into_owned();
    let det = vi.determinant();
    if !(det > T::zero()) {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: to_f64(det),
        });
    }
    let vi_inv = vi.try_inverse().ok_or(Error::NotPositiveDefinite {
        eigenvalue: to_f64(det),
    })?;
    let c = v.view((0, 2), (2, 2)).into_owned();
    let corr = (&c * vi_inv * c.transpose()).trace();
    let one = T::one();
    let two = lit::<T>(2.0);
    let nu2 = det.sqrt().max(one);
    let m = probe.mean();
    let half_d2 = (m[0] * m[0] + m[1] * m[1]) / two;
    let pre = kappa / (lit::<T>(4.0) * n_b);
    let root = (nu2 + one).sqrt() + (nu2 - one).sqrt();
    Ok(DecayConstants {
        gamma_col: pre * (half_d2 + nu2 * corr / (root * root)),
        gamma_loc: pre * (half_d2 + corr / lit(4.0)),
    })
}

/// Limits of both constants as idler squeezing `diag(e^ζ, e^−ζ)` grows
/// without bound ahead of any idler memory; requires `a₃₄ = 0`.
pub fn idler_squeeze_limit<T: Real>(
    probe: &GaussianState<T>,
    n_b: T,
    kappa: T,
) -> Result<DecayConstants<T>> {
    check_two_mode(probe)?;
    check_background(n_b)?;
    check_kappa(kappa)?;
    let v = probe.cov();
    if v[(2, 3)].abs() > lit::<T>(THERMAL_IDLER_TOL) {
        return Err(Error::Precondition(format!(
            "idler squeezing limit needs a34 = 0, got {:e}",
            to_f64(v[(2, 3)])
        )));
    }
    let m = probe.mean();
    let one = T::one();
    let two = lit::<T>(2.0);
    let (a13, a23, a33) = (v[(0, 2)], v[(1, 2)], v[(2, 2)]);
    let num = (a13 * a13 + a23 * a23) / a33 + two * (m[0] * m[0] + m[1] * m[1]);
    let root = n_b.sqrt() + (one + n_b).sqrt();
    Ok(DecayConstants {
        gamma_col: num * kappa / (lit::<T>(4.0) * root * root),
        gamma_loc: num * kappa / (lit::<T>(8.0) + lit::<T>(16.0) * n_b),
    })
}

/// Coherent probe with `n_s` signal photons.
pub fn coherent_benchmark<T: Real>(n_s: T, n_b: T, kappa: T) -> Result<DecayConstants<T>> {
    check_background(n_b)?;
    check_kappa(kappa)?;
    if !(n_s >= T::zero()) {
        return Err(Error::Domain(format!(
            "signal photon number must be >= 0, got {}",
            n_s
        )));
    }
    let one = T::one();
    let root = n_b.sqrt() + (one + n_b).sqrt();
    Ok(DecayConstants {
        gamma_col: n_s * kappa / (root * root),
        gamma_loc: n_s * kappa / (lit::<T>(2.0) + lit::<T>(4.0) * n_b),
    })
}

/// Two-mode squeezed vacuum with `n_s` signal photons and an ideal memory.
pub fn tmsv_decay<T: Real>(n_s: T, n_b: T, kappa: T) -> Result<DecayConstants<T>> {
    check_background(n_b)?;
    check_kappa(kappa)?;
    if !(n_s >= T::zero()) {
        return Err(Error::Domain(format!(
            "signal photon number must be >= 0, got {}",
            n_s
        )));
    }
    let one = T::one();
    let two = lit::<T>(2.0);
    let root = (n_b * n_s).sqrt() + ((one + n_b) * (one + n_s)).sqrt();
    let num = n_s * (one + n_s) * kappa;
    Ok(DecayConstants {
        gamma_col: num / (root * root),
        gamma_loc: num / (two + two * n_b + two * n_s + lit::<T>(4.0) * n_b * n_s),
    })
}

/// Decay constants of the state prepared by the scenario.
pub fn scenario_decay<T: Real>(scenario: &QiScenario<T>) -> Result<DecayConstants<T>> {
    decay_general(&scenario.prepared_probe()?, scenario.n_b, scenario.kappa)
}

/// Decay constants relative to a coherent probe with the same signal
/// photon number; `κ` cancels.
pub fn quantum_advantage<T: Real>(scenario: &QiScenario<T>) -> Result<QuantumAdvantage<T>> {
    let prepared = scenario.prepared_probe()?;
    let n_s = prepared.mean_photon(SIGNAL)?;
    if !(n_s > T::zero()) {
        return Err(Error::Domain(
            "quantum advantage needs a nonzero signal photon number".into(),
        ));
    }
    let gamma = decay_general(&prepared, scenario.n_b, T::one())?;
    Ok(gamma.ratio(coherent_benchmark(n_s, scenario.n_b, T::one())?))
}

/// TMSV with `n_s` photons whose idler passes a memory `(eta, n_l)`.
pub(crate) fn lossy_tmsv<T: Real>(n_s: T, eta: T, n_l: T) -> Result<GaussianState<T>> {
    GaussianState::tmsv(n_s)?.apply(&ChannelSpec::Loss {
        mode: IDLER,
        eta,
        n_l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn returned_tangent_of_tmsv() {
        let n_s: f64 = 0.01;
        let (rho0, t) = returned_tangent(&GaussianState::tmsv(n_s).unwrap(), 625.0).unwrap();
        assert_eq!(rho0.cov()[(0, 0)], 1251.0);
        assert_eq!(rho0.cov()[(1, 1)], 1251.0);
        assert_eq!(rho0.cov()[(0, 2)], 0.0);
        let c = 2.0 * (n_s + n_s * n_s).sqrt();
        assert_eq!(t.d_cov[(0, 2)], c);
        assert_eq!(t.d_cov[(1, 3)], -c);
        assert_eq!(t.d_cov[(0, 3)], 0.0);
        assert_eq!(t.d_cov[(1, 2)], 0.0);
        assert_eq!(t.d_mean, DVector::zeros(4));
    }

    #[test]
    fn returned_tangent_of_coherent() {
        let probe = GaussianState::coherent(0.3, -0.4).tensor(&GaussianState::vacuum(1));
        let (_, t) = returned_tangent(&probe, 2.0).unwrap();
        assert_eq!(t.d_cov, DMatrix::zeros(4, 4));
        assert_eq!(t.d_mean.as_slice(), &[0.3, -0.4, 0.0, 0.0]);
        assert!(matches!(
            returned_tangent(&GaussianState::vacuum(1), 1.0),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn coherent_probe_reproduces_benchmark() {
        let n_s: f64 = 0.7;
        let probe =
            GaussianState::coherent((2.0 * n_s).sqrt(), 0.0).tensor(&GaussianState::vacuum(1));
        let g = decay_thermal_idler(&probe, 3.0, 0.01).unwrap();
        let b = coherent_benchmark(n_s, 3.0, 0.01).unwrap();
        assert_relative_eq!(g.gamma_col, b.gamma_col, max_relative = 1e-14);
        assert_relative_eq!(g.gamma_loc, b.gamma_loc, max_relative = 1e-14);
    }

    #[test]
    fn tmsv_matches_closed_form() {
        let g = decay_thermal_idler(&GaussianState::tmsv(0.01).unwrap(), 625.0, 0.01).unwrap();
        let t = tmsv_decay(0.01, 625.0, 0.01).unwrap();
        assert_relative_eq!(g.gamma_col, t.gamma_col, max_relative = 1e-13);
        assert_relative_eq!(g.gamma_loc, t.gamma_loc, max_relative = 1e-13);
    }

    #[test]
    fn thermal_idler_form_rejects_other_idlers() {
        let probe = GaussianState::tmsv(0.1)
            .unwrap()
            .apply(&ChannelSpec::SingleModeSqueeze {
                mode: 1,
                zeta: 0.3,
                phase: 0.0,
            })
            .unwrap();
        assert!(matches!(
            decay_thermal_idler(&probe, 1.0, 0.01),
            Err(Error::Precondition(_))
        ));
        assert!(decay_general(&probe, 1.0, 0.01).is_ok());
    }

    #[test]
    fn zero_background_with_vacuum_idler() {
        let probe = GaussianState::coherent(1.0, 0.0).tensor(&GaussianState::vacuum(1));
        let g = decay_thermal_idler(&probe, 0.0, 0.01).unwrap();
        assert_relative_eq!(g.gamma_col, 0.005, max_relative = 1e-14);
    }

    #[test]
    fn scenario_validation() {
        let probe = GaussianState::tmsv(0.1).unwrap();
        assert!(QiScenario::new(probe.clone(), 0.0, 1.0).is_err());
        assert!(QiScenario::new(probe.clone(), 0.01, -1.0).is_err());
        let s = QiScenario::new(probe.clone(), 0.2, 1.0).unwrap();
        assert_eq!(s.warnings().len(), 1);
        let s = QiScenario::new(probe, 0.01, 1.0).unwrap();
        assert!(s.warnings().is_empty());
        assert!(s
            .clone()
            .with_signal_op(ChannelSpec::Phase { mode: 1, phi: 0.1 })
            .is_err());
        assert!(s
            .clone()
            .with_idler_op(ChannelSpec::TwoModeSqueeze {
                modes: (0, 1),
                zeta: 0.1
            })
            .is_err());
        assert!(s.with_idler_memory(1.2, 0.0).is_err());
    }

    #[test]
    fn advantage_needs_signal_power() {
        let s = QiScenario::new(GaussianState::vacuum(2), 0.01, 1.0).unwrap();
        assert!(matches!(quantum_advantage(&s), Err(Error::Domain(_))));
    }
}
