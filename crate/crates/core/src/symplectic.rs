//! Gaussian states in the quadrature picture.
//!
//! Quadratures are interleaved, `(x₁, p₁, x₂, p₂, …)`, and the covariance
//! matrix is `V = ⟨{r − r̄, (r − r̄)ᵀ}⟩`, so the vacuum has `V = I` and a
//! thermal mode with mean photon number `N` has `V = (1 + 2N)·I`.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, psd_tol, symmetry_tol, to_f64, Real};

/// Largest tolerated asymmetry `|V_ij − V_ji|` of a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Slack allowed on `V + iΩ ≥ 0` and on `ν ≥ 1`.
pub const PSD_TOL: f64 = 1e-9;
/// Largest tolerated entry of `S Ω Sᵀ − Ω` for a symplectic matrix.
pub const SYMPLECTIC_TOL: f64 = 1e-9;

/// The symplectic form `⊕ [[0, 1], [−1, 0]]` on `n_modes` modes.
pub fn omega<T: Real>(n_modes: usize) -> DMatrix<T> {
    let mut w = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        w[(2 * k, 2 * k + 1)] = T::one();
        w[(2 * k + 1, 2 * k)] = -T::one();
    }
    w
}

/// `S⁻¹ = Ω⁻¹ Sᵀ Ω`, exact for symplectic `S`.
pub fn symplectic_inverse<T: Real>(s: &DMatrix<T>) -> DMatrix<T> {
    let w = omega::<T>(s.nrows() / 2);
    -(&w * s.transpose() * &w)
}

/// Largest entry of `|S Ω Sᵀ − Ω|`.
pub fn symplectic_deviation<T: Real>(s: &DMatrix<T>) -> T {
    let w = omega::<T>(s.nrows() / 2);
    (s * &w * s.transpose() - w).amax()
}

pub(crate) fn check_even_square<T: Real>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::Dimension(format!(
            "matrix dimension {} is not a positive even number",
            m.nrows()
        )));
    }
    Ok(m.nrows() / 2)
}

pub(crate) fn symmetrized<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.transpose()) * lit::<T>(0.5)
}

/// Symmetric square root of a symmetric positive-definite matrix.
fn spd_sqrt<T: Real>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    let eig = SymmetricEigen::new(m.clone());
    let min = eig.eigenvalues.min();
    if min <= T::zero() {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: to_f64(min),
        });
    }
    let roots = eig.eigenvalues.map(|l| l.sqrt());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.transpose())
}

/// Embeds a 2×2 block acting on `mode` into the identity on `n_modes` modes.
pub fn local_matrix<T: Real>(n_modes: usize, mode: usize, block: &DMatrix<T>) -> DMatrix<T> {
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    m.view_mut((2 * mode, 2 * mode), (2, 2)).copy_from(block);
    m
}

fn rotation<T: Real>(theta: T) -> DMatrix<T> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// First and second moments of an `n`-mode Gaussian state.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState<T: Real> {
    mean: DVector<T>,
    cov: DMatrix<T>,
}

/// Outcome of [`GaussianState::validate`]; returned for invalid states too.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnostics<T: Real> {
    pub valid: bool,
    /// Largest `|V_ij − V_ji|`.
    pub asymmetry: T,
    /// Smallest eigenvalue of the Hermitian matrix `V + iΩ`.
    pub min_uncertainty_eigenvalue: T,
    /// Symplectic spectrum in descending order; `None` when `V` is not
    /// positive definite.
    pub symplectic_spectrum: Option<Vec<T>>,
}

impl<T: Real> GaussianState<T> {
    pub fn new(mean: DVector<T>, cov: DMatrix<T>) -> Result<Self> {
        let n = check_even_square(&cov)?;
        if mean.len() != 2 * n {
            return Err(Error::Dimension(format!(
                "mean has length {}, covariance is {}x{}",
                mean.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        Ok(Self { mean, cov })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            mean: DVector::zeros(2 * n_modes),
            cov: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Single-mode thermal state with mean photon number `n_photon`.
    pub fn thermal(n_photon: T) -> Result<Self> {
        if !(n_photon >= T::zero()) {
            return Err(Error::Domain(format!(
                "thermal photon number must be >= 0, got {}",
                n_photon
            )));
        }
        let v = T::one() + lit::<T>(2.0) * n_photon;
        Ok(Self {
            mean: DVector::zeros(2),
            cov: DMatrix::from_diagonal_element(2, 2, v),
        })
    }

    /// Two-mode squeezed vacuum with signal (and idler) mean photon number `n_s`.
    pub fn tmsv(n_s: T) -> Result<Self> {
        if !(n_s >= T::zero()) {
            return Err(Error::Domain(format!(
                "TMSV photon number must be >= 0, got {}",
                n_s
            )));
        }
        let a = T::one() + lit::<T>(2.0) * n_s;
        let c = lit::<T>(2.0) * (n_s + n_s * n_s).sqrt();
        let z = T::zero();
        #[rustfmt::skip]
        let cov = DMatrix::from_row_slice(4, 4, &[
            a, z, c, z,
            z, a, z, -c,
            c, z, a, z,
            z, -c, z, a,
        ]);
        Ok(Self {
            mean: DVector::zeros(4),
            cov,
        })
    }

    /// Single-mode coherent state with quadrature means `(x, p)`.
    pub fn coherent(x: T, p: T) -> Self {
        Self {
            mean: DVector::from_vec(vec![x, p]),
            cov: DMatrix::identity(2, 2),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.cov.nrows() / 2
    }

    pub fn mean(&self) -> &DVector<T> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<T> {
        &self.cov
    }

    pub fn into_parts(self) -> (DVector<T>, DMatrix<T>) {
        (self.mean, self.cov)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            return Err(Error::ModeIndex {
                index: mode,
                n_modes: self.n_modes(),
            });
        }
        Ok(())
    }

    /// The 2×2 covariance block between modes `i` and `j`.
    pub fn block(&self, i: usize, j: usize) -> Result<DMatrix<T>> {
        self.check_mode(i)?;
        self.check_mode(j)?;
        Ok(self.cov.view((2 * i, 2 * j), (2, 2)).into_owned())
    }

    /// `(V₁₁ + V₂₂ − 2)/4 + (x̄² + p̄²)/2` for the selected mode.
    pub fn mean_photon(&self, mode: usize) -> Result<T> {
        self.check_mode(mode)?;
        let (i, j) = (2 * mode, 2 * mode + 1);
        let four = lit::<T>(4.0);
        let two = lit::<T>(2.0);
        Ok((self.cov[(i, i)] + self.cov[(j, j)] - two) / four
            + (self.mean[i] * self.mean[i] + self.mean[j] * self.mean[j]) / two)
    }

    pub fn validate(&self) -> Diagnostics<T> {
        let asymmetry = (&self.cov - self.cov.transpose()).amax();
        let sym = symmetrized(&self.cov);
        let n = self.n_modes();
        let w = omega::<T>(n);
        let h = DMatrix::from_fn(2 * n, 2 * n, |i, j| Complex::new(sym[(i, j)], w[(i, j)]));
        let min_uncertainty_eigenvalue = h.symmetric_eigenvalues().min();
        let symplectic_spectrum = symplectic_spectrum(&sym)
            .ok()
            .map(|s| s.as_slice().to_vec());
        let one_minus = T::one() - psd_tol::<T>();
        let valid = asymmetry <= symmetry_tol::<T>()
            && min_uncertainty_eigenvalue >= -psd_tol::<T>()
            && symplectic_spectrum
                .as_ref()
                .is_some_and(|s| s.iter().all(|&nu| nu >= one_minus));
        Diagnostics {
            valid,
            asymmetry,
            min_uncertainty_eigenvalue,
            symplectic_spectrum,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid
    }

    /// Validity as a `Result`, carrying the diagnostics in the message.
    pub fn ensure_valid(&self) -> Result<()> {
        let d = self.validate();
        if d.valid {
            Ok(())
        } else {
            Err(Error::InvalidState(format!(
                "asymmetry {:e}, min eig(V + iΩ) {:e}, spectrum {:?}",
                to_f64(d.asymmetry),
                to_f64(d.min_uncertainty_eigenvalue),
                d.symplectic_spectrum
                    .map(|s| s.into_iter().map(to_f64).collect::<Vec<_>>())
            )))
        }
    }

    pub fn apply(&self, channel: &ChannelSpec<T>) -> Result<Self> {
        let map = channel.gaussian_map(self.n_modes())?;
        Ok(map.apply(self))
    }

    /// Keeps the listed modes (in ascending order), discarding the rest.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyModeSet);
        }
        let mut modes = keep.to_vec();
        modes.sort_unstable();
        modes.dedup();
        for &m in &modes {
            self.check_mode(m)?;
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let mean = DVector::from_fn(idx.len(), |i, _| self.mean[idx[i]]);
        let cov = DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.cov[(idx[i], idx[j])]);
        Ok(Self { mean, cov })
    }

    /// Product state `self ⊗ other`, with `self`'s modes first.
    pub fn tensor(&self, other: &Self) -> Self {
        let (a, b) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(a + b);
        mean.rows_mut(0, a).copy_from(&self.mean);
        mean.rows_mut(a, b).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(a + b, a + b);
        cov.view_mut((0, 0), (a, a)).copy_from(&self.cov);
        cov.view_mut((a, a), (b, b)).copy_from(&other.cov);
        Self { mean, cov }
    }

    /// Conjugation by a symplectic matrix without the symplecticity check.
    pub(crate) fn transformed(&self, s: &DMatrix<T>) -> Self {
        Self {
            mean: s * &self.mean,
            cov: symmetrized(&(s * &self.cov * s.transpose())),
        }
    }
}

/// Affine action `r̄ → X r̄ + d`, `V → X V Xᵀ + Y` of a Gaussian channel.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianMap<T: Real> {
    pub x: DMatrix<T>,
    pub y: DMatrix<T>,
    pub d: DVector<T>,
}

impl<T: Real> GaussianMap<T> {
    pub fn apply(&self, state: &GaussianState<T>) -> GaussianState<T> {
        GaussianState {
            mean: &self.x * &state.mean + &self.d,
            cov: symmetrized(&(&self.x * &state.cov * self.x.transpose() + &self.y)),
        }
    }
}

/// Single Gaussian operation on a multimode state.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSpec<T: Real> {
    /// Thermal loss: mixes `mode` with a thermal state of mean photon
    /// number `n_l` on a beam splitter of transmittivity `eta`.
    Loss {
        mode: usize,
        eta: T,
        n_l: T,
    },
    Displacement(DVector<T>),
    Symplectic(DMatrix<T>),
    /// `R(φ/2)·diag(e^ζ, e^−ζ)·R(φ/2)ᵀ` on `mode`.
    SingleModeSqueeze {
        mode: usize,
        zeta: T,
        phase: T,
    },
    /// Two-mode squeezer; on vacuum with `cosh 2ζ = 1 + 2N` it yields `tmsv(N)`.
    TwoModeSqueeze {
        modes: (usize, usize),
        zeta: T,
    },
    BeamSplit {
        modes: (usize, usize),
        theta: T,
    },
    Phase {
        mode: usize,
        phi: T,
    },
}

impl<T: Real> ChannelSpec<T> {
    fn check_mode(mode: usize, n_modes: usize) -> Result<()> {
        if mode >= n_modes {
            return Err(Error::ModeIndex {
                index: mode,
                n_modes,
            });
        }
        Ok(())
    }

    fn check_pair((i, j): (usize, usize), n_modes: usize) -> Result<()> {
        Self::check_mode(i, n_modes)?;
        Self::check_mode(j, n_modes)?;
        if i == j {
            return Err(Error::Domain(format!(
                "mode pair ({i}, {j}) must be distinct"
            )));
        }
        Ok(())
    }

    /// The symplectic matrix of a unitary operation; `None` for loss and
    /// displacement.
    pub fn symplectic_matrix(&self, n_modes: usize) -> Result<Option<DMatrix<T>>> {
        let dim = 2 * n_modes;
        let s = match self {
            ChannelSpec::Loss { .. } | ChannelSpec::Displacement(_) => return Ok(None),
            ChannelSpec::Symplectic(s) => {
                if s.nrows() != dim || s.ncols() != dim {
                    return Err(Error::Dimension(format!(
                        "symplectic matrix is {}x{}, state has dimension {}",
                        s.nrows(),
                        s.ncols(),
                        dim
                    )));
                }
                let dev = symplectic_deviation(s);
                if dev > lit::<T>(SYMPLECTIC_TOL).max(psd_tol::<T>()) {
                    return Err(Error::NotSymplectic {
                        deviation: to_f64(dev),
                    });
                }
                s.clone()
            }
            &ChannelSpec::SingleModeSqueeze { mode, zeta, phase } => {
                Self::check_mode(mode, n_modes)?;
                let r = rotation(phase / lit::<T>(2.0));
                let sq =
                    DMatrix::from_diagonal(&DVector::from_vec(vec![zeta.exp(), (-zeta).exp()]));
                local_matrix(n_modes, mode, &(&r * sq * r.transpose()))
            }
            &ChannelSpec::TwoModeSqueeze { modes, zeta } => {
                Self::check_pair(modes, n_modes)?;
                let (c, s) = (zeta.cosh(), zeta.sinh());
                let mut m = DMatrix::identity(dim, dim);
                let (i, j) = (2 * modes.0, 2 * modes.1);
                for (a, b) in [(i, j), (j, i)] {
                    m[(a, a)] = c;
                    m[(a + 1, a + 1)] = c;
                    m[(a, b)] = s;
                    m[(a + 1, b + 1)] = -s;
                }
                m
            }
            &ChannelSpec::BeamSplit { modes, theta } => {
                Self::check_pair(modes, n_modes)?;
                let (s, c) = theta.sin_cos();
                let mut m = DMatrix::identity(dim, dim);
                let (i, j) = (2 * modes.0, 2 * modes.1);
                for k in 0..2 {
                    m[(i + k, i + k)] = c;
                    m[(j + k, j + k)] = c;
                    m[(i + k, j + k)] = s;
                    m[(j + k, i + k)] = -s;
                }
                m
            }
            &ChannelSpec::Phase { mode, phi } => {
                Self::check_mode(mode, n_modes)?;
                local_matrix(n_modes, mode, &rotation(phi))
            }
        };
        Ok(Some(s))
    }

    pub fn gaussian_map(&self, n_modes: usize) -> Result<GaussianMap<T>> {
        let dim = 2 * n_modes;
        match self {
            &ChannelSpec::Loss { mode, eta, n_l } => {
                Self::check_mode(mode, n_modes)?;
                if !(eta >= T::zero() && eta <= T::one()) {
                    return Err(Error::Domain(format!(
                        "transmittivity {} outside [0, 1]",
                        eta
                    )));
                }
                if !(n_l >= T::zero()) {
                    return Err(Error::Domain(format!("memory noise {} must be >= 0", n_l)));
                }
                let mut x = DMatrix::identity(dim, dim);
                let mut y = DMatrix::zeros(dim, dim);
                let noise = (T::one() - eta) * (T::one() + lit::<T>(2.0) * n_l);
                for k in [2 * mode, 2 * mode + 1] {
                    x[(k, k)] = eta.sqrt();
                    y[(k, k)] = noise;
                }
                Ok(GaussianMap {
                    x,
                    y,
                    d: DVector::zeros(dim),
                })
            }
            ChannelSpec::Displacement(d) => {
                if d.len() != dim {
                    return Err(Error::Dimension(format!(
                        "displacement has length {}, state has dimension {}",
                        d.len(),
                        dim
                    )));
                }
                Ok(GaussianMap {
                    x: DMatrix::identity(dim, dim),
                    y: DMatrix::zeros(dim, dim),
                    d: d.clone(),
                })
            }
            _ => {
                let s = self
                    .symplectic_matrix(n_modes)?
                    .expect("unitary channel has a symplectic matrix");
                Ok(GaussianMap {
                    x: s,
                    y: DMatrix::zeros(dim, dim),
                    d: DVector::zeros(dim),
                })
            }
        }
    }

    /// Modes the operation acts on non-trivially.
    pub fn touched_modes(&self, n_modes: usize) -> Result<Vec<usize>> {
        Ok(match self {
            &ChannelSpec::Loss { mode, .. }
            | &ChannelSpec::SingleModeSqueeze { mode, .. }
            | &ChannelSpec::Phase { mode, .. } => vec![mode],
            &ChannelSpec::TwoModeSqueeze { modes, .. } | &ChannelSpec::BeamSplit { modes, .. } => {
                vec![modes.0, modes.1]
            }
            ChannelSpec::Displacement(d) => (0..d.len() / 2)
                .filter(|&m| d[2 * m] != T::zero() || d[2 * m + 1] != T::zero())
                .collect(),
            ChannelSpec::Symplectic(s) => {
                let id = DMatrix::<T>::identity(s.nrows(), s.ncols());
                let diff = s - id;
                (0..n_modes)
                    .filter(|&m| {
                        (0..diff.nrows()).any(|k| {
                            diff[(2 * m, k)] != T::zero()
                                || diff[(2 * m + 1, k)] != T::zero()
                                || diff[(k, 2 * m)] != T::zero()
                                || diff[(k, 2 * m + 1)] != T::zero()
                        })
                    })
                    .collect()
            }
        })
    }
}

/// `V = S · diag(ν₁, ν₁, …, νₙ, νₙ) · Sᵀ` with `S` symplectic.
#[derive(Clone, Debug, PartialEq)]
pub struct WilliamsonDecomposition<T: Real> {
    pub symplectic: DMatrix<T>,
    /// Symplectic eigenvalues, descending.
    pub spectrum: DVector<T>,
}

impl<T: Real> WilliamsonDecomposition<T> {
    /// `diag(ν₁, ν₁, …, νₙ, νₙ)`.
    pub fn diagonal(&self) -> DMatrix<T> {
        let n = self.spectrum.len();
        DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i == j {
                self.spectrum[i / 2]
            } else {
                T::zero()
            }
        })
    }

    pub fn reconstruct(&self) -> DMatrix<T> {
        &self.symplectic * self.diagonal() * self.symplectic.transpose()
    }
}

/// Hermitian matrix `i · V^{1/2} Ω V^{1/2}` whose eigenvalues are `±νₖ`.
fn spectral_generator<T: Real>(cov: &DMatrix<T>) -> Result<(DMatrix<T>, DMatrix<Complex<T>>)> {
    let n = check_even_square(cov)?;
    let root = spd_sqrt(&symmetrized(cov))?;
    let b = &root * omega::<T>(n) * &root;
    let h = DMatrix::from_fn(2 * n, 2 * n, |i, j| Complex::new(T::zero(), b[(i, j)]));
    Ok((root, h))
}

/// Symplectic spectrum (descending) of a positive-definite covariance matrix.
pub fn symplectic_spectrum<T: Real>(cov: &DMatrix<T>) -> Result<DVector<T>> {
    let (_, h) = spectral_generator(cov)?;
    let mut eig: Vec<T> = h
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .filter(|&l| l > T::zero())
        .collect();
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(DVector::from_vec(eig))
}

/// Williamson decomposition of a symmetric positive-definite matrix.
///
/// The positive eigenvectors `u = a + ib` of `i V^{1/2} Ω V^{1/2}` give an
/// orthogonal `O = [√2 b, √2 a, …]` bringing `V^{1/2} Ω V^{1/2}` to the
/// canonical block form, and `S = V^{1/2} O K^{-1/2}`. Each eigenvector is
/// rotated so that its largest component is real and positive; single-mode
/// inputs use the closed form `S = (V/ν)^{1/2}`.
pub fn williamson<T: Real>(cov: &DMatrix<T>) -> Result<WilliamsonDecomposition<T>> {
    let n = check_even_square(cov)?;
    let sym = symmetrized(cov);
    if n == 1 {
        return williamson_single_mode(&sym);
    }
    let (root, h) = spectral_generator(&sym)?;
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..2 * n)
        .filter(|&k| eig.eigenvalues[k] > T::zero())
        .collect();
    if order.len() != n {
        return Err(Error::NotPositiveDefinite {
            eigenvalue: to_f64(eig.eigenvalues.min()),
        });
    }
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sqrt2 = lit::<T>(2.0).sqrt();
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    let mut spectrum = DVector::zeros(n);
    for (k, &col) in order.iter().enumerate() {
        let mut u = eig.eigenvectors.column(col).into_owned();
        let (pivot, _) = u
            .iter()
            .enumerate()
            .fold((0, T::zero()), |(bi, bm), (i, z)| {
                let m = z.norm_sqr();
                if m > bm {
                    (i, m)
                } else {
                    (bi, bm)
                }
            });
        let phase = u[pivot] / Complex::new(u[pivot].norm_sqr().sqrt(), T::zero());
        u /= phase;
        for i in 0..2 * n {
            o[(i, 2 * k)] = sqrt2 * u[i].im;
            o[(i, 2 * k + 1)] = sqrt2 * u[i].re;
        }
        spectrum[k] = eig.eigenvalues[col];
    }
    let inv_sqrt_k = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if i == j {
            T::one() / spectrum[i / 2].sqrt()
        } else {
            T::zero()
        }
    });
    Ok(WilliamsonDecomposition {
        symplectic: root * o * inv_sqrt_k,
        spectrum,
    })
}

fn williamson_single_mode<T: Real>(cov: &DMatrix<T>) -> Result<WilliamsonDecomposition<T>> {
    let (a, b, c) = (cov[(0, 0)], cov[(0, 1)], cov[(1, 1)]);
    let det = a * c - b * b;
    if !(a > T::zero() && det > T::zero()) {
        let tr = a + c;
        let disc = ((a - c) * (a - c) + lit::<T>(4.0) * b * b).sqrt();
        return Err(Error::NotPositiveDefinite {
            eigenvalue: to_f64((tr - disc) / lit::<T>(2.0)),
        });
    }
    let nu = det.sqrt();
    // (V/ν)^{1/2} = (M + I)/√(tr M + 2) for a 2×2 SPD matrix M with det M = 1.
    let m = cov / nu;
    let scale = T::one() / (m.trace() + lit::<T>(2.0)).sqrt();
    let s = (m + DMatrix::identity(2, 2)) * scale;
    Ok(WilliamsonDecomposition {
        symplectic: s,
        spectrum: DVector::from_element(1, nu),
    })
}

/// JSON form of a state: `{n_modes, mean: […], cov: [[…]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateRecord {
    pub n_modes: usize,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

impl<T: Real> From<&GaussianState<T>> for StateRecord {
    fn from(state: &GaussianState<T>) -> Self {
        let dim = state.mean.len();
        Self {
            n_modes: state.n_modes(),
            mean: state.mean.iter().map(|&v| to_f64(v)).collect(),
            cov: (0..dim)
                .map(|i| (0..dim).map(|j| to_f64(state.cov[(i, j)])).collect())
                .collect(),
        }
    }
}

impl<T: Real> TryFrom<StateRecord> for GaussianState<T> {
    type Error = Error;

    fn try_from(rec: StateRecord) -> Result<Self> {
        let dim = 2 * rec.n_modes;
        if rec.n_modes == 0 || rec.cov.len() != dim || rec.cov.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension(format!(
                "record declares {} modes but cov is not {dim}x{dim}",
                rec.n_modes
            )));
        }
        let cov = DMatrix::from_fn(dim, dim, |i, j| lit::<T>(rec.cov[i][j]));
        let mean = DVector::from_iterator(rec.mean.len(), rec.mean.iter().map(|&v| lit::<T>(v)));
        GaussianState::new(mean, cov)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_is_valid_with_unit_spectrum() {
        let d = GaussianState::<f64>::vacuum(1).validate();
        assert!(d.valid);
        assert_abs_diff_eq!(d.symplectic_spectrum.unwrap()[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn squeezed_below_vacuum_is_invalid() {
        let s = GaussianState::new(DVector::zeros(2), DMatrix::from_diagonal_element(2, 2, 0.5))
            .unwrap();
        let d = s.validate();
        assert!(!d.valid);
        assert_abs_diff_eq!(d.symplectic_spectrum.unwrap()[0], 0.5, epsilon = 1e-12);
        assert!(d.min_uncertainty_eigenvalue < -0.4);
    }

    #[test]
    fn tmsv_is_valid_and_pure() {
        let s = GaussianState::<f64>::tmsv(0.01).unwrap();
        let d = s.validate();
        assert!(d.valid);
        for nu in d.symplectic_spectrum.unwrap() {
            assert_abs_diff_eq!(nu, 1.0, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(s.cov()[(0, 2)], 2.0 * 0.0101f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.cov()[(1, 3)], -2.0 * 0.0101f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn dimension_errors() {
        let bad = GaussianState::new(DVector::<f64>::zeros(3), DMatrix::identity(3, 3));
        assert!(matches!(bad, Err(Error::Dimension(_))));
        let rect = GaussianState::new(DVector::<f64>::zeros(2), DMatrix::identity(2, 4));
        assert!(matches!(rect, Err(Error::Dimension(_))));
        assert!(matches!(
            williamson(&DMatrix::<f64>::identity(3, 3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn tmsv_rejects_negative_photons() {
        assert!(matches!(
            GaussianState::<f64>::tmsv(-0.1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn thermal_williamson_is_trivial() {
        let v = DMatrix::from_diagonal_element(2, 2, 7.0);
        let w = williamson(&v).unwrap();
        assert_abs_diff_eq!(w.spectrum[0], 7.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.symplectic, DMatrix::identity(2, 2), epsilon = 1e-12);
    }

    #[test]
    fn williamson_rejects_indefinite() {
        let v = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, 2.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                2.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            ],
        );
        match williamson(&v) {
            Err(Error::NotPositiveDefinite { eigenvalue }) => {
                assert!((eigenvalue + 1.0).abs() < 1e-9)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coherent_photon_number() {
        let s = GaussianState::coherent(2f64.sqrt(), 0.0);
        assert_abs_diff_eq!(s.mean_photon(0).unwrap(), 1.0, epsilon = 1e-15);
        let rotated = s.apply(&ChannelSpec::Phase { mode: 0, phi: 0.7 }).unwrap();
        assert_abs_diff_eq!(rotated.mean_photon(0).unwrap(), 1.0, epsilon = 1e-14);
        assert_eq!(
            GaussianState::<f64>::coherent(0.0, 0.0),
            GaussianState::vacuum(1)
        );
    }

    #[test]
    fn loss_limits() {
        let tmsv = GaussianState::<f64>::tmsv(0.3).unwrap();
        let same = tmsv
            .apply(&ChannelSpec::Loss {
                mode: 1,
                eta: 1.0,
                n_l: 4.0,
            })
            .unwrap();
        assert_abs_diff_eq!(same.cov(), tmsv.cov(), epsilon = 1e-15);
        let replaced = GaussianState::<f64>::vacuum(1)
            .apply(&ChannelSpec::Loss {
                mode: 0,
                eta: 0.0,
                n_l: 0.5,
            })
            .unwrap();
        assert_abs_diff_eq!(
            replaced.cov(),
            &DMatrix::from_diagonal_element(2, 2, 2.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn channel_parameter_errors() {
        let s = GaussianState::<f64>::vacuum(2);
        assert!(matches!(
            s.apply(&ChannelSpec::Loss {
                mode: 2,
                eta: 0.5,
                n_l: 0.0
            }),
            Err(Error::ModeIndex {
                index: 2,
                n_modes: 2
            })
        ));
        assert!(matches!(
            s.apply(&ChannelSpec::Loss {
                mode: 0,
                eta: 1.5,
                n_l: 0.0
            }),
            Err(Error::Domain(_))
        ));
        let not_symplectic = DMatrix::from_diagonal_element(4, 4, 2.0);
        assert!(matches!(
            s.apply(&ChannelSpec::Symplectic(not_symplectic)),
            Err(Error::NotSymplectic { .. })
        ));
        assert!(matches!(
            s.apply(&ChannelSpec::BeamSplit {
                modes: (1, 1),
                theta: 0.1
            }),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn two_mode_squeezer_on_vacuum_is_tmsv() {
        let n_s = 0.37;
        let zeta = 0.5 * (1.0f64 + 2.0 * n_s).acosh();
        let out = GaussianState::vacuum(2)
            .apply(&ChannelSpec::TwoModeSqueeze {
                modes: (0, 1),
                zeta,
            })
            .unwrap();
        assert_abs_diff_eq!(
            out.cov(),
            GaussianState::tmsv(n_s).unwrap().cov(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn partial_traces() {
        let tmsv = GaussianState::<f64>::tmsv(0.2).unwrap();
        let signal = tmsv.partial_trace(&[0]).unwrap();
        let nu = signal.validate().symplectic_spectrum.unwrap()[0];
        assert_abs_diff_eq!(nu, 1.4, epsilon = 1e-12);
        assert_eq!(tmsv.partial_trace(&[0, 1]).unwrap(), tmsv);
        let prod = GaussianState::coherent(1.0, -2.0).tensor(&GaussianState::vacuum(1));
        assert_eq!(prod.partial_trace(&[1]).unwrap(), GaussianState::vacuum(1));
        assert!(matches!(tmsv.partial_trace(&[]), Err(Error::EmptyModeSet)));
    }

    #[test]
    fn state_record_roundtrip() {
        let s = GaussianState::<f64>::tmsv(0.1).unwrap();
        let rec = StateRecord::from(&s);
        let json = serde_json_like(&rec);
        assert!(json.contains("\"n_modes\":2"));
        let back: GaussianState<f64> = rec.try_into().unwrap();
        assert_eq!(back, s);
    }

    fn serde_json_like(rec: &StateRecord) -> String {
        // serde_json is not a dependency of this crate; a Debug-free check of the
        // field names is enough here.
        format!(
            "{{\"n_modes\":{},\"mean\":{:?},\"cov\":{:?}}}",
            rec.n_modes, rec.mean, rec.cov
        )
    }

    #[test]
    fn works_in_single_precision() {
        let s = GaussianState::<f32>::tmsv(0.5).unwrap();
        let w = williamson(s.cov()).unwrap();
        for nu in w.spectrum.iter() {
            assert!((nu - 1.0).abs() < 1e-3);
        }
    }
}
