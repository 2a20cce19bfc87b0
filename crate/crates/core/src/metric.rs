//! Monotone Riemannian metrics restricted to Gaussian states.
//!
//! A monotone metric is fixed by an operator monotone function `f` with
//! `f(t) = t f(1/t)`. On a Gaussian state with Williamson form
//! `V = S diag(ν) Sᵀ`, the metric of a tangent `(dr̄, dV)` splits into one
//! term per mode (number change, single-mode squeezing, displacement) and
//! one per mode pair (two-mode squeezing, beam splitting); see
//! [`metric_thermal_terms`].

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{lit, psd_tol, symmetry_tol, to_f64, Real};
use crate::symplectic::{check_even_square, symplectic_inverse, williamson, GaussianState};

/// Relative size below which a projection of the tangent counts as zero.
///
/// Terms with a vanishing projection are skipped before their coefficient
/// is evaluated, so an unexcited direction at `ν = 1` never divides by zero.
pub const PROJECTION_TOL: f64 = 1e-10;

/// Identifies one summand of the metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetricTerm {
    Number { mode: usize },
    Squeeze { mode: usize },
    TwoModeSqueeze { i: usize, j: usize },
    BeamSplit { i: usize, j: usize },
    Displacement { mode: usize },
}

impl fmt::Display for MetricTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricTerm::Number { mode } => write!(f, "number(mode {mode})"),
            MetricTerm::Squeeze { mode } => write!(f, "squeeze(mode {mode})"),
            MetricTerm::TwoModeSqueeze { i, j } => write!(f, "two-mode squeeze(modes {i}, {j})"),
            MetricTerm::BeamSplit { i, j } => write!(f, "beam split(modes {i}, {j})"),
            MetricTerm::Displacement { mode } => write!(f, "displacement(mode {mode})"),
        }
    }
}

type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// A function `f: (0, ∞) → (0, ∞)` with `f(t) = t f(1/t)`.
///
/// Only the symmetry and positivity are checked; operator monotonicity
/// cannot be established from samples and is the caller's responsibility.
#[derive(Clone)]
pub struct MonotoneFunction<T: Real> {
    eval: ScalarFn<T>,
    label: String,
}

impl<T: Real> fmt::Debug for MonotoneFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneFunction")
            .field("label", &self.label)
            .finish()
    }
}

/// Log-spaced sample points `10^-4 … 10^4` used to check `f(t) = t f(1/t)`.
pub fn symmetry_grid() -> impl Iterator<Item = f64> {
    (0..=80).map(|k| 10f64.powf(-4.0 + 0.1 * k as f64))
}

impl<T: Real> MonotoneFunction<T> {
    /// `f(t) = 2(√t + 1)²`, the function behind the collective decay constant.
    pub fn collective() -> Self {
        Self {
            eval: Arc::new(|t: T| {
                let s = t.sqrt() + T::one();
                lit::<T>(2.0) * s * s
            }),
            label: "f_col".into(),
        }
    }

    /// `f(t) = 4(t + 1)`, the function behind the local decay constant.
    pub fn local() -> Self {
        Self {
            eval: Arc::new(|t: T| lit::<T>(4.0) * (t + T::one())),
            label: "f_loc".into(),
        }
    }

    /// Wraps a user function after checking positivity and `f(t) = t f(1/t)`
    /// on [`symmetry_grid`].
    pub fn custom(
        label: impl Into<String>,
        f: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Result<Self> {
        let label = label.into();
        let rel_tol = lit::<T>(1e-10).max(T::default_epsilon() * lit::<T>(100.0));
        for t in symmetry_grid() {
            let t = lit::<T>(t);
            let a = f(t);
            let b = t * f(T::one() / t);
            if !(a > T::zero()) || !a.is_finite() {
                return Err(Error::InvalidFunction(format!(
                    "{label}: f({}) = {} is not positive",
                    to_f64(t),
                    to_f64(a)
                )));
            }
            if (a - b).abs() > rel_tol * a.abs().max(b.abs()) {
                return Err(Error::InvalidFunction(format!(
                    "{label}: f({}) = {} but t f(1/t) = {}",
                    to_f64(t),
                    to_f64(a),
                    to_f64(b)
                )));
            }
        }
        Ok(Self {
            eval: Arc::new(f),
            label,
        })
    }

    pub fn eval(&self, t: T) -> T {
        (self.eval)(t)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Perturbation `(dr̄, dV)` of a Gaussian state.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector<T: Real> {
    pub d_mean: DVector<T>,
    pub d_cov: DMatrix<T>,
}

impl<T: Real> TangentVector<T> {
    pub fn new(d_mean: DVector<T>, d_cov: DMatrix<T>) -> Result<Self> {
        let n = check_even_square(&d_cov)?;
        if d_mean.len() != 2 * n {
            return Err(Error::Dimension(format!(
                "d_mean has length {}, d_cov is {}x{}",
                d_mean.len(),
                d_cov.nrows(),
                d_cov.ncols()
            )));
        }
        let asym = (&d_cov - d_cov.transpose()).amax();
        if asym > symmetry_tol::<T>() {
            return Err(Error::Domain(format!(
                "d_cov is not symmetric (deviation {:e})",
                to_f64(asym)
            )));
        }
        Ok(Self { d_mean, d_cov })
    }

    pub fn zero(n_modes: usize) -> Self {
        Self {
            d_mean: DVector::zeros(2 * n_modes),
            d_cov: DMatrix::zeros(2 * n_modes, 2 * n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.d_cov.nrows() / 2
    }

    pub fn scaled(&self, a: T) -> Self {
        Self {
            d_mean: &self.d_mean * a,
            d_cov: &self.d_cov * a,
        }
    }

    /// `(X dr̄, X dV Xᵀ)`: the image under a linear map of the moments.
    pub fn transformed(&self, x: &DMatrix<T>) -> Self {
        Self {
            d_mean: x * &self.d_mean,
            d_cov: x * &self.d_cov * x.transpose(),
        }
    }

    fn scale(&self) -> T {
        self.d_cov.amax().max(self.d_mean.amax())
    }
}

/// The orthogonal matrices spanning symmetric `2n×2n` perturbations of a
/// diagonal covariance matrix, with entries in `{−1, 0, 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisMatrices<T: Real> {
    pub n_modes: usize,
    pub number: Vec<DMatrix<T>>,
    pub squeeze: Vec<DMatrix<T>>,
    pub squeeze_t: Vec<DMatrix<T>>,
    /// Mode pairs `(i, j)`, `i < j`, in the order of the pair matrices below.
    pub pairs: Vec<(usize, usize)>,
    pub two_mode_s: Vec<DMatrix<T>>,
    pub two_mode_t: Vec<DMatrix<T>>,
    pub beam_a: Vec<DMatrix<T>>,
    pub beam_b: Vec<DMatrix<T>>,
}

impl<T: Real> BasisMatrices<T> {
    pub fn all(&self) -> Vec<&DMatrix<T>> {
        self.number
            .iter()
            .chain(&self.squeeze)
            .chain(&self.squeeze_t)
            .chain(&self.two_mode_s)
            .chain(&self.two_mode_t)
            .chain(&self.beam_a)
            .chain(&self.beam_b)
            .collect()
    }
}

pub fn basis_matrices<T: Real>(n: usize) -> Result<BasisMatrices<T>> {
    if n == 0 {
        return Err(Error::Dimension("basis needs at least one mode".into()));
    }
    let dim = 2 * n;
    let build = |entries: &[(usize, usize, f64)]| {
        let mut m = DMatrix::<T>::zeros(dim, dim);
        for &(r, c, v) in entries {
            m[(r, c)] = lit(v);
        }
        m
    };
    let mut b = BasisMatrices {
        n_modes: n,
        number: vec![],
        squeeze: vec![],
        squeeze_t: vec![],
        pairs: vec![],
        two_mode_s: vec![],
        two_mode_t: vec![],
        beam_a: vec![],
        beam_b: vec![],
    };
    for i in 0..n {
        let (x, p) = (2 * i, 2 * i + 1);
        b.number.push(build(&[(x, x, 1.0), (p, p, 1.0)]));
        b.squeeze.push(build(&[(p, x, 1.0), (x, p, 1.0)]));
        b.squeeze_t.push(build(&[(x, x, 1.0), (p, p, -1.0)]));
    }
    for i in 0..n {
        for j in i + 1..n {
            let (xi, pi, xj, pj) = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1);
            b.pairs.push((i, j));
            b.two_mode_s.push(build(&[
                (pj, xi, 1.0),
                (xj, pi, 1.0),
                (pi, xj, 1.0),
                (xi, pj, 1.0),
            ]));
            b.two_mode_t.push(build(&[
                (xj, xi, 1.0),
                (pj, pi, -1.0),
                (xi, xj, 1.0),
                (pi, pj, -1.0),
            ]));
            b.beam_a.push(build(&[
                (pj, xi, 1.0),
                (xj, pi, -1.0),
                (pi, xj, -1.0),
                (xi, pj, 1.0),
            ]));
            b.beam_b.push(build(&[
                (xj, xi, 1.0),
                (pj, pi, 1.0),
                (xi, xj, 1.0),
                (pi, pj, 1.0),
            ]));
        }
    }
    Ok(b)
}

fn clamp_pure<T: Real>(nu: T) -> T {
    if (nu - T::one()).abs() <= psd_tol::<T>() {
        T::one()
    } else {
        nu
    }
}

/// Checks that a coefficient came out finite and positive.
fn coefficient<T: Real>(c: T, term: MetricTerm, nu: T) -> Result<T> {
    if c.is_finite() && c >= T::zero() {
        Ok(c)
    } else {
        Err(Error::SingularMetric {
            term,
            nu: to_f64(nu),
        })
    }
}

/// Every non-skipped summand of the metric at a diagonal (thermal-product)
/// state with symplectic spectrum `nus`.
///
/// The coefficients are evaluated in the form obtained by applying
/// `f(t) = t f(1/t)` so that they stay finite as `ν → 1`. With
/// `y = (ν − 1)/(ν + 1)` they read
///
/// * number: `1 / (4 f(1) (ν² − 1))`
/// * squeeze: `1 / (4 (ν + 1)² f(y²))`
/// * two-mode squeeze: `1 / (8 (νᵢ + 1)(νⱼ + 1) f(yᵢ yⱼ))`
/// * beam split (`νᵢ ≤ νⱼ`): `1 / (8 (νᵢ + 1)(νⱼ − 1) f(yᵢ / yⱼ))`
/// * displacement: `2 / ((ν + 1) f(y))`
///
/// Only the number term at `ν = 1` and the beam-split term with both
/// eigenvalues equal to one genuinely diverge; exciting either is an error.
pub fn metric_thermal_terms<T: Real>(
    nus: &[T],
    f: &MonotoneFunction<T>,
    t: &TangentVector<T>,
) -> Result<Vec<(MetricTerm, T)>> {
    let n = nus.len();
    if t.n_modes() != n {
        return Err(Error::Dimension(format!(
            "spectrum has {} modes, tangent has {}",
            n,
            t.n_modes()
        )));
    }
    if n == 0 {
        return Err(Error::Dimension("empty spectrum".into()));
    }
    for &nu in nus {
        if !(nu >= T::one() - psd_tol::<T>()) {
            return Err(Error::Domain(format!(
                "symplectic eigenvalue {} below 1",
                to_f64(nu)
            )));
        }
    }
    let nus: Vec<T> = nus.iter().map(|&v| clamp_pure(v)).collect();
    let one = T::one();
    let two = lit::<T>(2.0);
    let y: Vec<T> = nus.iter().map(|&v| (v - one) / (v + one)).collect();
    let dv = &t.d_cov;
    let negligible = lit::<T>(PROJECTION_TOL) * t.scale();
    let mut out = Vec::new();

    for i in 0..n {
        let (x, p) = (2 * i, 2 * i + 1);
        let nu = nus[i];
        let proj_n = dv[(x, x)] + dv[(p, p)];
        if proj_n.abs() > negligible {
            let term = MetricTerm::Number { mode: i };
            if nu <= one {
                return Err(Error::SingularMetric {
                    term,
                    nu: to_f64(nu),
                });
            }
            let c = coefficient(
                one / (lit::<T>(4.0) * f.eval(one) * (nu * nu - one)),
                term,
                nu,
            )?;
            out.push((term, c * proj_n * proj_n));
        }
        let proj_s = two * dv[(x, p)];
        let proj_t = dv[(x, x)] - dv[(p, p)];
        if proj_s.abs() > negligible || proj_t.abs() > negligible {
            let term = MetricTerm::Squeeze { mode: i };
            let c = coefficient(
                one / (lit::<T>(4.0) * (nu + one) * (nu + one) * f.eval(y[i] * y[i])),
                term,
                nu,
            )?;
            out.push((term, c * (proj_s * proj_s + proj_t * proj_t)));
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            let (xi, pi, xj, pj) = (2 * i, 2 * i + 1, 2 * j, 2 * j + 1);
            let s_ij = two * (dv[(xi, pj)] + dv[(pi, xj)]);
            let t_ij = two * (dv[(xi, xj)] - dv[(pi, pj)]);
            if s_ij.abs() > negligible || t_ij.abs() > negligible {
                let term = MetricTerm::TwoModeSqueeze { i, j };
                let c =
                    one / (lit::<T>(8.0) * (nus[i] + one) * (nus[j] + one) * f.eval(y[i] * y[j]));
                let c = coefficient(c, term, nus[i])?;
                out.push((term, c * (s_ij * s_ij + t_ij * t_ij)));
            }
            let a_ij = two * (dv[(xi, pj)] - dv[(pi, xj)]);
            let b_ij = two * (dv[(xi, xj)] + dv[(pi, pj)]);
            if a_ij.abs() > negligible || b_ij.abs() > negligible {
                let term = MetricTerm::BeamSplit { i, j };
                let (lo, hi) = if nus[i] <= nus[j] { (i, j) } else { (j, i) };
                if nus[hi] <= one {
                    return Err(Error::SingularMetric {
                        term,
                        nu: to_f64(nus[hi]),
                    });
                }
                let c = one
                    / (lit::<T>(8.0) * (nus[lo] + one) * (nus[hi] - one) * f.eval(y[lo] / y[hi]));
                let c = coefficient(c, term, nus[hi])?;
                out.push((term, c * (a_ij * a_ij + b_ij * b_ij)));
            }
        }
    }

    for i in 0..n {
        let (x, p) = (2 * i, 2 * i + 1);
        let norm2 = t.d_mean[x] * t.d_mean[x] + t.d_mean[p] * t.d_mean[p];
        if norm2.sqrt() > negligible {
            let term = MetricTerm::Displacement { mode: i };
            let c = coefficient(two / ((nus[i] + one) * f.eval(y[i])), term, nus[i])?;
            out.push((term, c * norm2));
        }
    }
    Ok(out)
}

/// Metric at a diagonal state with symplectic spectrum `nus`.
pub fn metric_thermal<T: Real>(
    nus: &[T],
    f: &MonotoneFunction<T>,
    t: &TangentVector<T>,
) -> Result<T> {
    Ok(metric_thermal_terms(nus, f, t)?
        .into_iter()
        .fold(T::zero(), |acc, (_, v)| acc + v))
}

/// Metric at an arbitrary Gaussian state.
///
/// The state is brought to diagonal form by its Williamson symplectic `S`
/// and the tangent is mapped along: `dV → S⁻¹ dV S⁻ᵀ`, `dr̄ → S⁻¹ dr̄`.
pub fn metric_general<T: Real>(
    state: &GaussianState<T>,
    f: &MonotoneFunction<T>,
    t: &TangentVector<T>,
) -> Result<T> {
    if t.n_modes() != state.n_modes() {
        return Err(Error::Dimension(format!(
            "state has {} modes, tangent has {}",
            state.n_modes(),
            t.n_modes()
        )));
    }
    let w = williamson(state.cov())?;
    let s_inv = symplectic_inverse(&w.symplectic);
    metric_thermal(w.spectrum.as_slice(), f, &t.transformed(&s_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn basis_counts_and_single_mode_shapes() {
        let b1 = basis_matrices::<f64>(1).unwrap();
        assert_eq!(b1.number[0], DMatrix::identity(2, 2));
        assert_eq!(
            b1.squeeze[0],
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
        );
        assert_eq!(
            b1.squeeze_t[0],
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
        );
        assert_eq!(basis_matrices::<f64>(2).unwrap().all().len(), 10);
        assert_eq!(basis_matrices::<f64>(4).unwrap().all().len(), 3 * 4 + 4 * 6);
        assert!(basis_matrices::<f64>(0).is_err());
    }

    #[test]
    fn basis_is_orthogonal() {
        let b = basis_matrices::<f64>(3).unwrap();
        let all = b.all();
        for (k, x) in all.iter().enumerate() {
            for y in &all[k + 1..] {
                assert_eq!((x.transpose() * *y).trace(), 0.0);
            }
            assert!(x.iter().all(|&v| v == 0.0 || v == 1.0 || v == -1.0));
        }
    }

    #[test]
    fn builtin_functions_are_symmetric() {
        for f in [
            MonotoneFunction::<f64>::collective(),
            MonotoneFunction::local(),
        ] {
            assert!(MonotoneFunction::custom("copy", {
                let f = f.clone();
                move |t| f.eval(t)
            })
            .is_ok());
        }
        assert!(matches!(
            MonotoneFunction::<f64>::custom("linear", |t| t),
            Err(Error::InvalidFunction(_))
        ));
        assert!(matches!(
            MonotoneFunction::<f64>::custom("negative", |t| -(t + 1.0)),
            Err(Error::InvalidFunction(_))
        ));
    }

    #[test]
    fn number_direction() {
        let f = MonotoneFunction::<f64>::collective();
        let nu = 3.0;
        let dnu = 0.2;
        let t = TangentVector::new(DVector::zeros(2), DMatrix::identity(2, 2) * dnu).unwrap();
        let g = metric_thermal(&[nu], &f, &t).unwrap();
        assert_relative_eq!(
            g,
            dnu * dnu / (f.eval(1.0) * (nu * nu - 1.0)),
            max_relative = 1e-14
        );
    }

    #[test]
    fn displacement_direction() {
        let f = MonotoneFunction::<f64>::local();
        let (nu, d) = (2.5, 0.3);
        let t = TangentVector::new(DVector::from_vec(vec![d, 0.0]), DMatrix::zeros(2, 2)).unwrap();
        let g = metric_thermal(&[nu], &f, &t).unwrap();
        let expected = 2.0 * d * d / ((nu - 1.0) * f.eval((nu + 1.0) / (nu - 1.0)));
        assert_relative_eq!(g, expected, max_relative = 1e-14);
    }

    #[test]
    fn zero_tangent_gives_zero_even_when_pure() {
        let f = MonotoneFunction::<f64>::collective();
        assert_eq!(
            metric_thermal(&[1.0, 1.0], &f, &TangentVector::zero(2)).unwrap(),
            0.0
        );
    }

    #[test]
    fn pure_number_change_is_singular() {
        let f = MonotoneFunction::<f64>::collective();
        let t = TangentVector::new(DVector::zeros(2), DMatrix::identity(2, 2)).unwrap();
        assert!(matches!(
            metric_thermal(&[1.0], &f, &t),
            Err(Error::SingularMetric {
                term: MetricTerm::Number { mode: 0 },
                ..
            })
        ));
    }

    #[test]
    fn stable_forms_match_direct_forms() {
        let f = MonotoneFunction::<f64>::collective();
        let (n1, n2) = (2.0, 4.0);
        let b = basis_matrices::<f64>(2).unwrap();
        // squeeze
        let t = TangentVector::new(DVector::zeros(4), b.squeeze[0].clone()).unwrap();
        let g = metric_thermal(&[n1, n2], &f, &t).unwrap();
        let want = 0.25 * 4.0 / ((n1 - 1.0f64).powi(2) * f.eval(((n1 + 1.0) / (n1 - 1.0)).powi(2)));
        assert_relative_eq!(g, want, max_relative = 1e-13);
        // two-mode squeeze
        let t = TangentVector::new(DVector::zeros(4), b.two_mode_t[0].clone()).unwrap();
        let g = metric_thermal(&[n1, n2], &f, &t).unwrap();
        let arg = (n1 + 1.0) / (n1 - 1.0) * (n2 + 1.0) / (n2 - 1.0);
        let want = 0.125 * 16.0 / ((n1 - 1.0) * (n2 - 1.0) * f.eval(arg));
        assert_relative_eq!(g, want, max_relative = 1e-13);
        // beam split, both orderings of the spectrum
        for (a, c) in [(n1, n2), (n2, n1)] {
            let t = TangentVector::new(DVector::zeros(4), b.beam_b[0].clone()).unwrap();
            let g = metric_thermal(&[a, c], &f, &t).unwrap();
            let arg = (a - 1.0) / (a + 1.0) * (c + 1.0) / (c - 1.0);
            let want = 0.125 * 16.0 / ((a + 1.0) * (c - 1.0) * f.eval(arg));
            assert_relative_eq!(g, want, max_relative = 1e-13);
        }
    }

    #[test]
    fn f32_instantiation() {
        let f = MonotoneFunction::<f32>::local();
        let t =
            TangentVector::new(DVector::from_vec(vec![1.0f32, 0.0]), DMatrix::zeros(2, 2)).unwrap();
        let g = metric_thermal(&[3.0f32], &f, &t).unwrap();
        assert!((g - 2.0 / (2.0 * 4.0 * 3.0)).abs() < 1e-6);
    }
}
