//! Signal-to-noise ratio of quadratic observables on the returned signal
//! and idler.

use gqi_core::qi::returned_tangent;
use gqi_core::symplectic::omega;
use gqi_core::{ChannelSpec, GaussianState};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::FockOperator;

/// `O = rᵀ G r + hᵀ r + c` in the quadratures `r = (x_s, p_s, x_i, p_i)`,
/// with `x = (a + a†)/√2`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticObservable {
    pub g: DMatrix<f64>,
    pub h: DVector<f64>,
    pub constant: f64,
}

const N_PARAMS: usize = 14;

impl QuadraticObservable {
    pub fn new(g: DMatrix<f64>, h: DVector<f64>, constant: f64) -> Result<Self> {
        if g.nrows() != 4 || g.ncols() != 4 || h.len() != 4 {
            return Err(Error::Dimension(
                "quadratic observable needs a 4x4 form and a 4-vector".into(),
            ));
        }
        if (&g - g.transpose()).amax() > 1e-12 {
            return Err(Error::Parameter("quadratic form must be symmetric".into()));
        }
        Ok(Self { g, h, constant })
    }

    /// Linear observable `hᵀ r`.
    pub fn linear(h: [f64; 4]) -> Self {
        Self {
            g: DMatrix::zeros(4, 4),
            h: DVector::from_row_slice(&h),
            constant: 0.0,
        }
    }

    /// Upper-triangle entries of `G` row by row, then `h`.
    fn from_params(theta: &DVector<f64>) -> Self {
        let mut g = DMatrix::zeros(4, 4);
        let mut k = 0;
        for i in 0..4 {
            for j in i..4 {
                g[(i, j)] = theta[k];
                g[(j, i)] = theta[k];
                k += 1;
            }
        }
        Self {
            g,
            h: theta.rows(10, 4).into_owned(),
            constant: 0.0,
        }
    }

    /// Mean and variance under a Gaussian state.
    pub fn moments(&self, state: &GaussianState<f64>) -> Result<(f64, f64)> {
        if state.n_modes() != 2 {
            return Err(Error::Dimension(format!(
                "need a two-mode state, got {}",
                state.n_modes()
            )));
        }
        let sigma = state.cov() * 0.5;
        let m = state.mean();
        let om = omega::<f64>(2);
        let gs = &self.g * &sigma;
        let mean =
            gs.trace() + (m.transpose() * &self.g * m)[(0, 0)] + self.h.dot(m) + self.constant;
        let lin = &self.g * m * 2.0 + &self.h;
        let go = &self.g * &om;
        let var = 2.0 * (&gs * &gs).trace()
            + 0.5 * (&go * &go).trace()
            + (lin.transpose() * &sigma * &lin)[(0, 0)];
        Ok((mean, var.max(0.0)))
    }

    /// The observable as a truncated matrix on a two-mode Fock space.
    pub fn fock_matrix(&self, rho: &FockOperator) -> DMatrix<Complex64> {
        let r = rho.quadratures();
        let n = rho.data().nrows();
        let mut out = DMatrix::<Complex64>::identity(n, n) * Complex64::new(self.constant, 0.0);
        for i in 0..4 {
            out += &r[i] * Complex64::new(self.h[i], 0.0);
            for j in 0..4 {
                if self.g[(i, j)] != 0.0 {
                    out += &r[i] * &r[j] * Complex64::new(self.g[(i, j)], 0.0);
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnrReport {
    /// Leading order as `κ → 0`, divided by `κ`:
    /// `(∂⟨O⟩/∂√κ)² / (8 Var₀ O)`.
    pub per_kappa: f64,
    /// `(m₁ − m₀)² / (2(σ₀ + σ₁)²) / κ` at the given `κ`.
    pub finite: f64,
}

/// Returned-state moments: target absent and target present at `kappa`.
fn returned_pair(
    probe: &GaussianState<f64>,
    kappa: f64,
    n_b: f64,
) -> Result<(GaussianState<f64>, GaussianState<f64>)> {
    let (rho0, _) = returned_tangent(probe, n_b)?;
    let rho1 = probe.apply(&ChannelSpec::Loss {
        mode: 0,
        eta: kappa,
        n_l: n_b / (1.0 - kappa),
    })?;
    Ok((rho0, rho1))
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den <= 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// Slope of `⟨O⟩` in `√κ` at `κ = 0`.
fn mean_slope(obs: &QuadraticObservable, probe: &GaussianState<f64>, n_b: f64) -> Result<f64> {
    let (rho0, t) = returned_tangent(probe, n_b)?;
    let lin = &obs.g * rho0.mean() * 2.0 + &obs.h;
    Ok((&obs.g * &t.d_cov).trace() / 2.0 + lin.dot(&t.d_mean))
}

pub fn quadratic_snr(
    probe: &GaussianState<f64>,
    kappa: f64,
    n_b: f64,
    obs: &QuadraticObservable,
) -> Result<SnrReport> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::Parameter(format!(
            "reflectivity must lie in (0, 1), got {kappa}"
        )));
    }
    let (rho0, rho1) = returned_pair(probe, kappa, n_b)?;
    let slope = mean_slope(obs, probe, n_b)?;
    let (m0, v0) = obs.moments(&rho0)?;
    let (m1, v1) = obs.moments(&rho1)?;
    let spread = v0.sqrt() + v1.sqrt();
    Ok(SnrReport {
        per_kappa: ratio(slope * slope, 8.0 * v0),
        finite: ratio((m1 - m0) * (m1 - m0), 2.0 * spread * spread) / kappa,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SnrOptimum {
    pub observable: QuadraticObservable,
    /// Leading-order SNR per unit `κ`.
    pub snr: f64,
}

/// Maximizes the leading-order SNR over all quadratic observables.
///
/// The slope is linear in the 14 coefficients `θ` and the variance under
/// `ρ₀` is a quadratic form `θᵀBθ`, so the maximum of
/// `(aᵀθ)²/(8 θᵀBθ)` is `aᵀB⁺a/8`, attained at `θ = B⁺a`.
pub fn snr_maximize(probe: &GaussianState<f64>, n_b: f64) -> Result<SnrOptimum> {
    let (rho0, _) = returned_tangent(probe, n_b)?;
    let unit = |k: usize| {
        let mut e = DVector::zeros(N_PARAMS);
        e[k] = 1.0;
        e
    };
    let var = |theta: &DVector<f64>| {
        QuadraticObservable::from_params(theta)
            .moments(&rho0)
            .map(|(_, v)| v)
    };
    let mut a = DVector::zeros(N_PARAMS);
    let mut diag = [0.0; N_PARAMS];
    for k in 0..N_PARAMS {
        a[k] = mean_slope(&QuadraticObservable::from_params(&unit(k)), probe, n_b)?;
        diag[k] = var(&unit(k))?;
    }
    let mut b = DMatrix::zeros(N_PARAMS, N_PARAMS);
    for k in 0..N_PARAMS {
        b[(k, k)] = diag[k];
        for l in k + 1..N_PARAMS {
            let v = (var(&(unit(k) + unit(l)))? - diag[k] - diag[l]) / 2.0;
            b[(k, l)] = v;
            b[(l, k)] = v;
        }
    }
    let eig = SymmetricEigen::new(b);
    let cutoff = 1e-12 * eig.eigenvalues.amax();
    let mut theta = DVector::zeros(N_PARAMS);
    let mut value = 0.0;
    for k in 0..N_PARAMS {
        let u = eig.eigenvectors.column(k);
        let proj = u.dot(&a);
        if eig.eigenvalues[k] > cutoff {
            value += proj * proj / eig.eigenvalues[k];
            theta += u * (proj / eig.eigenvalues[k]);
        } else if proj.abs() > 1e-12 * a.norm().max(f64::MIN_POSITIVE) {
            return Ok(SnrOptimum {
                observable: QuadraticObservable::from_params(&u.into_owned()),
                snr: f64::INFINITY,
            });
        }
    }
    Ok(SnrOptimum {
        observable: QuadraticObservable::from_params(&theta),
        snr: value / 8.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_operator_on_vacuum_has_no_spread() {
        let mut g = DMatrix::zeros(4, 4);
        g[(0, 0)] = 0.5;
        g[(1, 1)] = 0.5;
        let obs = QuadraticObservable::new(g, DVector::zeros(4), -0.5).unwrap();
        let (m, v) = obs.moments(&GaussianState::vacuum(2)).unwrap();
        assert!(m.abs() < 1e-15 && v.abs() < 1e-15);
    }

    #[test]
    fn constant_observable_gives_nothing() {
        let obs = QuadraticObservable::new(DMatrix::zeros(4, 4), DVector::zeros(4), 1.0).unwrap();
        let r = quadratic_snr(&GaussianState::tmsv(0.1).unwrap(), 0.01, 1.0, &obs).unwrap();
        assert_eq!((r.per_kappa, r.finite), (0.0, 0.0));
    }
}
