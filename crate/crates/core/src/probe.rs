//! Optimal probes at fixed signal photon number.
//!
//! Two problems live here. For pure two-mode Gaussian probes the metric
//! only depends on the two-mode squeezing `ζ`, a signal squeezing `ζ_s`
//! and a signal displacement `r`, tied by `r² + cosh 2ζ cosh 2ζ_s = 1 + 2N_S`;
//! [`probe_search`] maximizes over that family. For single-mode probes
//! `|ψ⟩ = Σ cₙ|n⟩` the collective constant is governed by
//! `γ = Σ c_{n+1} cₙ √(n+1)`, maximized by [`single_mode_optimize`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::MonotoneFunction;
use crate::scalar::{lit, to_f64, Real};
use crate::symplectic::{ChannelSpec, GaussianState};

/// Tolerance on `r² + cosh 2ζ cosh 2ζ_s = 1 + 2N_S`.
pub const CONSTRAINT_TOL: f64 = 1e-10;

/// Pure two-mode probe: TMSV with squeezing `zeta`, then signal squeezing
/// `diag(e^ζ_s, e^−ζ_s)` and a displacement `r` along the signal `x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PureProbeFamily<T: Real> {
    pub zeta: T,
    pub zeta_s: T,
    pub r: T,
}

impl<T: Real> PureProbeFamily<T> {
    /// Solves the photon-number constraint for `zeta`.
    pub fn from_constraint(n_s: T, zeta_s: T, r: T) -> Result<Self> {
        let two = lit::<T>(2.0);
        let cosh_2z = (T::one() + two * n_s - r * r) / (two * zeta_s).cosh();
        if !(cosh_2z >= T::one() - lit::<T>(CONSTRAINT_TOL)) {
            return Err(Error::Infeasible(format!(
                "no two-mode squeezing meets N_S = {} with zeta_s = {}, r = {}",
                to_f64(n_s),
                to_f64(zeta_s),
                to_f64(r)
            )));
        }
        Ok(Self {
            zeta: cosh_2z.max(T::one()).acosh() / two,
            zeta_s,
            r,
        })
    }

    pub fn tmsv(n_s: T) -> Result<Self> {
        Self::from_constraint(n_s, T::zero(), T::zero())
    }

    pub fn coherent(n_s: T) -> Self {
        Self {
            zeta: T::zero(),
            zeta_s: T::zero(),
            r: (lit::<T>(2.0) * n_s).sqrt(),
        }
    }

    /// `r² + cosh 2ζ cosh 2ζ_s − (1 + 2N_S)`.
    pub fn constraint_violation(&self, n_s: T) -> T {
        let two = lit::<T>(2.0);
        self.r * self.r + (two * self.zeta).cosh() * (two * self.zeta_s).cosh()
            - (T::one() + two * n_s)
    }

    pub fn state(&self) -> Result<GaussianState<T>> {
        let n = ((lit::<T>(2.0) * self.zeta).cosh() - T::one()) / lit(2.0);
        let mut d = DVector::zeros(4);
        d[0] = self.r;
        GaussianState::tmsv(n)?
            .apply(&ChannelSpec::SingleModeSqueeze {
                mode: 0,
                zeta: self.zeta_s,
                phase: T::zero(),
            })?
            .apply(&ChannelSpec::Displacement(d))
    }
}

/// Metric of the returned-state tangent for a member of the pure family:
///
/// ```text
/// g = 2 sinh²2ζ cosh²ζ_s c_TMS(ν₁, ν₂) + 2 sinh²2ζ sinh²ζ_s c_BS(ν₁, ν₂) + r² c_D(ν₁)
/// ```
///
/// with `ν₁ = 1 + 2N_B`, `ν₂ = cosh 2ζ`, `c_TMS = 1/((ν₁+1)(ν₂+1) f(y₁y₂))`,
/// `c_BS = 1/((ν_lo+1)(ν_hi−1) f(y_lo/y_hi))`, `c_D = 2/((ν₁+1) f(y₁))`
/// and `y = (ν−1)/(ν+1)`.
pub fn family_metric<T: Real>(
    params: &PureProbeFamily<T>,
    n_s: T,
    n_b: T,
    f: &MonotoneFunction<T>,
) -> Result<T> {
    let violation = params.constraint_violation(n_s);
    if violation.abs() > lit::<T>(CONSTRAINT_TOL) * (T::one() + n_s) {
        return Err(Error::Infeasible(format!(
            "photon-number constraint violated by {:e}",
            to_f64(violation)
        )));
    }
    if !(n_b >= T::zero()) {
        return Err(Error::Domain(format!("N_B must be >= 0, got {}", n_b)));
    }
    let one = T::one();
    let two = lit::<T>(2.0);
    let nu1 = one + two * n_b;
    let nu2 = (two * params.zeta).cosh();
    let y = |nu: T| (nu - one) / (nu + one);
    let (y1, y2) = (y(nu1), y(nu2));
    let s2 = (two * params.zeta).sinh();
    let s2 = s2 * s2;
    let ch = params.zeta_s.cosh();
    let sh = params.zeta_s.sinh();

    let mut g = T::zero();
    if s2 > T::zero() {
        g += two * s2 * ch * ch / ((nu1 + one) * (nu2 + one) * f.eval(y1 * y2));
        if sh != T::zero() {
            let (lo, hi) = if nu1 <= nu2 { (nu1, nu2) } else { (nu2, nu1) };
            if hi <= one {
                return Err(Error::SingularMetric {
                    term: crate::metric::MetricTerm::BeamSplit { i: 0, j: 1 },
                    nu: to_f64(hi),
                });
            }
            g += two * s2 * sh * sh / ((lo + one) * (hi - one) * f.eval(y(lo) / y(hi)));
        }
    }
    g += two * params.r * params.r / ((nu1 + one) * f.eval(y1));
    Ok(g)
}

/// Result of [`probe_search`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeOptimum<T: Real> {
    pub params: PureProbeFamily<T>,
    pub objective: T,
    /// `family_metric` of the TMSV member, for comparison.
    pub tmsv_objective: T,
}

/// Points per axis of the coarse grid in [`probe_search`].
pub const SEARCH_GRID: usize = 201;

/// Maximizes [`family_metric`] over the feasible set.
///
/// The set is parameterized by `s, t ∈ [0, 1]` as `r = s √(2N_S)` and
/// `ζ_s = t ζ_s,max(r)`, where `ζ_s,max` makes `ζ = 0`; the metric is even
/// in `ζ_s`. A `SEARCH_GRID²` scan is followed by a compass search from the
/// best cell, with steps halved down to `1e-12`.
pub fn probe_search<T: Real>(n_s: T, n_b: T, f: &MonotoneFunction<T>) -> Result<ProbeOptimum<T>> {
    if !(n_s > T::zero()) {
        return Err(Error::Infeasible(format!(
            "signal photon number must be > 0, got {}",
            n_s
        )));
    }
    let two = lit::<T>(2.0);
    let r_max = (two * n_s).sqrt();
    let point = |s: T, t: T| -> Result<(PureProbeFamily<T>, T)> {
        let r = s * r_max;
        let room = (T::one() + two * n_s - r * r).max(T::one());
        let zeta_s = t * room.acosh() / two;
        let p = PureProbeFamily::from_constraint(n_s, zeta_s, r)?;
        Ok((p, family_metric(&p, n_s, n_b, f)?))
    };
    let n = SEARCH_GRID;
    let grid_coord = |k: usize| lit::<T>(k as f64 / (n - 1) as f64);
    let values = (0..n * n)
        .into_par_iter()
        .map(|idx| point(grid_coord(idx / n), grid_coord(idx % n)).map(|(_, g)| g))
        .collect::<Result<Vec<T>>>()?;
    // Ties resolve to the lowest index, so the TMSV corner wins exact ties.
    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (k, &v)| if v > values[b] { k } else { b });
    let (mut s, mut t) = (grid_coord(best / n), grid_coord(best % n));
    let mut g_best = values[best];
    let mut step = T::one() / lit((n - 1) as f64);
    let clamp = |x: T| x.max(T::zero()).min(T::one());
    while step > lit::<T>(1e-12) {
        let mut moved = false;
        for (ds, dt) in [
            (step, T::zero()),
            (-step, T::zero()),
            (T::zero(), step),
            (T::zero(), -step),
        ] {
            let (cs, ct) = (clamp(s + ds), clamp(t + dt));
            let (_, g) = point(cs, ct)?;
            if g > g_best {
                (s, t, g_best) = (cs, ct, g);
                moved = true;
            }
        }
        if !moved {
            step /= two;
        }
    }
    let (params, objective) = point(s, t)?;
    let tmsv = PureProbeFamily::tmsv(n_s)?;
    Ok(ProbeOptimum {
        params,
        objective,
        tmsv_objective: family_metric(&tmsv, n_s, n_b, f)?,
    })
}

/// Real amplitudes `cₙ`, `n = 0..=cutoff`, of a single-mode pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct FockCoefficients<T: Real> {
    pub c: DVector<T>,
}

impl<T: Real> FockCoefficients<T> {
    pub fn new(c: DVector<T>) -> Self {
        Self { c }
    }

    pub fn cutoff(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn norm_sqr(&self) -> T {
        self.c.norm_squared()
    }

    /// `Σ n cₙ²`.
    pub fn mean_photon(&self) -> T {
        self.c
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (n, &c)| acc + lit::<T>(n as f64) * c * c)
    }

    /// Truncated coherent amplitudes `e^{−α²/2} αⁿ/√n!`, computed by recursion.
    pub fn coherent(alpha: T, cutoff: usize) -> Self {
        let mut c = DVector::zeros(cutoff + 1);
        c[0] = (-alpha * alpha / lit(2.0)).exp();
        for m in 0..cutoff {
            c[m + 1] = c[m] * alpha / lit::<T>((m + 1) as f64).sqrt();
        }
        Self { c }
    }

    /// Displaced number state `D(α)|n⟩`, built column by column from
    /// `D|k+1⟩ = (a† − α) D|k⟩ / √(k+1)`.
    pub fn displaced_number(alpha: T, n: usize, cutoff: usize) -> Self {
        let mut col = Self::coherent(alpha, cutoff).c;
        for k in 0..n {
            let mut next = DVector::zeros(cutoff + 1);
            for m in 0..=cutoff {
                let raised = if m > 0 {
                    lit::<T>(m as f64).sqrt() * col[m - 1]
                } else {
                    T::zero()
                };
                next[m] = (raised - alpha * col[m]) / lit::<T>((k + 1) as f64).sqrt();
            }
            col = next;
        }
        Self { c: col }
    }

    /// Overlap `|Σ cₙ dₙ|` with another truncated state.
    pub fn overlap(&self, other: &Self) -> T {
        let len = self.c.len().min(other.c.len());
        self.c.rows(0, len).dot(&other.c.rows(0, len)).abs()
    }
}

fn norm_tol<T: Real>() -> T {
    lit::<T>(1e-10).max(T::default_epsilon() * lit::<T>(100.0))
}

/// `γ = Σ c_{n+1} cₙ √(n+1)`, the amplitude `⟨a⟩` of a real state.
pub fn single_mode_gamma<T: Real>(c: &FockCoefficients<T>) -> Result<T> {
    let norm = c.norm_sqr();
    if (norm - T::one()).abs() > norm_tol::<T>() {
        return Err(Error::NotNormalized(to_f64(norm)));
    }
    Ok(raw_gamma(&c.c))
}

fn raw_gamma<T: Real>(c: &DVector<T>) -> T {
    (0..c.len().saturating_sub(1)).fold(T::zero(), |acc, n| {
        acc + c[n + 1] * c[n] * lit::<T>((n + 1) as f64).sqrt()
    })
}

/// Max-norm residual of `c_{n+1}√(n+1) + c_{n−1}√n + 2cₙ(μ₁ + nμ₂)` over
/// the rows `n = 0..cutoff` whose neighbours are all available.
pub fn lagrange_residual<T: Real>(c: &FockCoefficients<T>, mu1: T, mu2: T) -> T {
    let c = &c.c;
    let two = lit::<T>(2.0);
    (0..c.len().saturating_sub(1))
        .map(|n| {
            let nf = lit::<T>(n as f64);
            let below = if n > 0 {
                c[n - 1] * nf.sqrt()
            } else {
                T::zero()
            };
            (c[n + 1] * (nf + T::one()).sqrt() + below + two * c[n] * (mu1 + nf * mu2)).abs()
        })
        .fold(T::zero(), |a, b| a.max(b))
}

/// Result of [`single_mode_optimize`] and [`displaced_number_state`].
#[derive(Clone, Debug, PartialEq)]
pub struct SingleModeOptimum<T: Real> {
    pub coefficients: FockCoefficients<T>,
    pub gamma: T,
    pub mu1: T,
    pub mu2: T,
}

/// `D(√(N_S − n))|n⟩` with its multipliers `μ₂ = −1/(2√(N_S − n))`,
/// `μ₁ = (n/α − α)/2`.
pub fn displaced_number_state<T: Real>(
    n: usize,
    n_s: T,
    cutoff: usize,
) -> Result<SingleModeOptimum<T>> {
    let nf = lit::<T>(n as f64);
    if !(n_s > nf) {
        return Err(Error::Domain(format!(
            "displaced number state |{n}> needs N_S > {n}, got {}",
            to_f64(n_s)
        )));
    }
    let alpha = (n_s - nf).sqrt();
    let coefficients = FockCoefficients::displaced_number(alpha, n, cutoff);
    let two = lit::<T>(2.0);
    Ok(SingleModeOptimum {
        gamma: raw_gamma(&coefficients.c),
        coefficients,
        mu1: (nf / alpha - alpha) / two,
        mu2: -T::one() / (two * alpha),
    })
}

/// Top eigenpair of the truncated `(a + a†) − β a†a`.
fn top_eigenvector<T: Real>(beta: T, cutoff: usize) -> (T, DVector<T>) {
    let dim = cutoff + 1;
    let mut h = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        h[(n, n)] = -beta * lit::<T>(n as f64);
        if n + 1 < dim {
            let v = lit::<T>((n + 1) as f64).sqrt();
            h[(n, n + 1)] = v;
            h[(n + 1, n)] = v;
        }
    }
    let eig = SymmetricEigen::new(h);
    let k = eig.eigenvalues.imax();
    let mut v = eig.eigenvectors.column(k).into_owned();
    if v[0] < T::zero() {
        v = -v;
    }
    (eig.eigenvalues[k], v)
}

/// Maximizes `γ` subject to `Σcₙ² = 1` and `Σ n cₙ² = N_S`.
///
/// Stationary points satisfy `((a + a†) + 2μ₂ a†a) c = −2μ₁ c`, so for a
/// given `β = −2μ₂ > 0` the best state is the top eigenvector of
/// `(a + a†) − β a†a`. Its photon number falls monotonically with `β`,
/// which is bisected until the constraint holds. The sign is fixed by
/// `c₀ > 0`.
pub fn single_mode_optimize<T: Real>(n_s: T, cutoff: usize) -> Result<SingleModeOptimum<T>> {
    if !(n_s > T::zero()) {
        return Err(Error::Infeasible(format!(
            "signal photon number must be > 0, got {}",
            n_s
        )));
    }
    let needed = (10.0 * to_f64(n_s).max(1.0)).ceil() as usize;
    if cutoff < needed {
        return Err(Error::Infeasible(format!(
            "cutoff {cutoff} too small for N_S = {}; need at least {needed}",
            to_f64(n_s)
        )));
    }
    let photons = |beta: T| {
        let (_, v) = top_eigenvector(beta, cutoff);
        FockCoefficients::new(v).mean_photon()
    };
    let guess = T::one() / n_s.sqrt();
    let (mut lo, mut hi) = (guess / lit(2.0), guess * lit(2.0));
    while photons(lo) < n_s {
        lo /= lit(2.0);
        if lo < lit::<T>(1e-6) {
            return Err(Error::Infeasible(format!(
                "cutoff {cutoff} cannot hold {} photons",
                to_f64(n_s)
            )));
        }
    }
    while photons(hi) > n_s {
        hi *= lit(2.0);
    }
    for _ in 0..200 {
        let mid = (lo + hi) / lit(2.0);
        if photons(mid) > n_s {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::default_epsilon() * hi {
            break;
        }
    }
    let beta = (lo + hi) / lit(2.0);
    let (lambda, v) = top_eigenvector(beta, cutoff);
    let coefficients = FockCoefficients::new(v);
    Ok(SingleModeOptimum {
        gamma: raw_gamma(&coefficients.c),
        coefficients,
        mu1: -lambda / lit(2.0),
        mu2: -beta / lit(2.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_gamma_is_zero() {
        let mut c = DVector::zeros(5);
        c[0] = 1.0f64;
        assert_eq!(single_mode_gamma(&FockCoefficients::new(c)).unwrap(), 0.0);
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let c = FockCoefficients::new(DVector::from_vec(vec![1.0f64, 1.0]));
        assert!(matches!(
            single_mode_gamma(&c),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn coherent_amplitude() {
        let c = FockCoefficients::coherent(1.0f64, 30);
        assert_abs_diff_eq!(single_mode_gamma(&c).unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn displaced_one_photon_state_has_zero_gamma_at_unit_power() {
        // N_S = 1, n = 1 gives α = 0, i.e. the number state itself.
        let c = FockCoefficients::displaced_number(0.0f64, 1, 20);
        assert_abs_diff_eq!(c.c[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(single_mode_gamma(&c).unwrap(), 0.0, epsilon = 1e-15);
        assert!(displaced_number_state::<f64>(1, 1.0, 20).is_err());
    }

    #[test]
    fn cutoff_guard() {
        assert!(matches!(
            single_mode_optimize(2.0f64, 15),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn family_endpoints() {
        let f = MonotoneFunction::<f64>::collective();
        let sq = PureProbeFamily {
            zeta: 0.0,
            zeta_s: (0.3f64).sqrt().asinh(),
            r: 0.0,
        };
        assert_abs_diff_eq!(
            family_metric(&sq, 0.3, 5.0, &f).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let bad = PureProbeFamily {
            zeta: 0.5,
            zeta_s: 0.0,
            r: 0.0,
        };
        assert!(matches!(
            family_metric(&bad, 0.3, 5.0, &f),
            Err(Error::Infeasible(_))
        ));
    }
}
