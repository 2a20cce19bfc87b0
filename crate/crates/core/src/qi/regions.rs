//! Which signal–idler correlations beat a coherent probe.
//!
//! The states considered have zero mean and covariance
//!
//! ```text
//! ⎡ 1+2N_S    0      a₁₃     0   ⎤
//! ⎢   0     1+2N_S    0     a₂₄  ⎥
//! ⎢  a₁₃      0     1+2N_I   0   ⎥
//! ⎣   0      a₂₄      0    1+2N_I⎦
//! ```
//!
//! Physicality is `V + iΩ ≥ 0`; separability is physicality of the partial
//! transpose `ΛVΛ` with `Λ = diag(1, 1, 1, −1)`, which is exact for one
//! mode against one mode.

use std::fmt;

use nalgebra::{Complex, DMatrix};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{lit, psd_tol, Real};
use crate::symplectic::omega;

use super::{coherent_benchmark, QuantumAdvantage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    Unphysical,
    Separable,
    EntangledNoAdvantage,
    CollectiveOnly,
    LocalAndCollective,
}

impl RegionLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::Unphysical => "unphysical",
            RegionLabel::Separable => "separable",
            RegionLabel::EntangledNoAdvantage => "entangled_no_advantage",
            RegionLabel::CollectiveOnly => "collective_only",
            RegionLabel::LocalAndCollective => "local_and_collective",
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Square grid `a₁₃, a₂₄ ∈ [−extent, extent]` with `points` values per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationGrid<T: Real> {
    pub points: usize,
    /// Defaults to the largest physical `|a₁₃|` along the anti-diagonal.
    pub extent: Option<T>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegionPoint<T: Real> {
    pub a13: T,
    pub a24: T,
    pub label: RegionLabel,
    /// Advantage from the closed-form constants; defined for unphysical
    /// points too.
    pub advantage: QuantumAdvantage<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionClassification<T: Real> {
    pub n_s: T,
    pub n_i: T,
    pub n_b: T,
    pub extent: T,
    pub coords: Vec<T>,
    /// Row-major: `points[i * coords.len() + j]` has `a₁₃ = coords[i]`,
    /// `a₂₄ = coords[j]`.
    pub points: Vec<RegionPoint<T>>,
}

impl<T: Real> RegionClassification<T> {
    pub fn at(&self, i: usize, j: usize) -> &RegionPoint<T> {
        &self.points[i * self.coords.len() + j]
    }
}

fn correlation_cov<T: Real>(n_s: T, n_i: T, a13: T, a24: T) -> DMatrix<T> {
    let two = lit::<T>(2.0);
    let a = T::one() + two * n_s;
    let b = T::one() + two * n_i;
    let z = T::zero();
    #[rustfmt::skip]
    let v = DMatrix::from_row_slice(4, 4, &[
        a, z, a13, z,
        z, a, z, a24,
        a13, z, b, z,
        z, a24, z, b,
    ]);
    v
}

fn min_uncertainty_eig<T: Real>(v: &DMatrix<T>) -> T {
    let w = omega::<T>(2);
    DMatrix::from_fn(4, 4, |i, j| Complex::new(v[(i, j)], w[(i, j)]))
        .symmetric_eigenvalues()
        .min()
}

/// Largest physical TMSV-like correlation `|a₁₃| = |a₂₄|` on the
/// anti-diagonal: `√((a−1)(b+1))` capped by `√((a+1)(b−1))`.
pub fn antidiagonal_extent<T: Real>(n_s: T, n_i: T) -> T {
    let two = lit::<T>(2.0);
    let one = T::one();
    let a = one + two * n_s;
    let b = one + two * n_i;
    ((a - one) * (b + one))
        .min((a + one) * (b - one))
        .max(T::zero())
        .sqrt()
}

pub fn classify_correlations<T: Real>(
    n_s: T,
    n_i: T,
    n_b: T,
    grid: CorrelationGrid<T>,
) -> Result<RegionClassification<T>> {
    if !(n_s > T::zero()) || !(n_i >= T::zero()) || !(n_b >= T::zero()) {
        return Err(Error::Domain(format!(
            "need N_S > 0, N_I >= 0, N_B >= 0; got {}, {}, {}",
            n_s, n_i, n_b
        )));
    }
    if grid.points < 2 {
        return Err(Error::Domain(
            "correlation grid needs at least two points per axis".into(),
        ));
    }
    let extent = grid.extent.unwrap_or_else(|| antidiagonal_extent(n_s, n_i));
    let n = grid.points;
    let denom = lit::<T>((n - 1) as f64);
    // Built as c·(2k − (n−1))/(n−1) so that the grid is exactly symmetric about zero.
    let coords: Vec<T> = (0..n)
        .map(|k| extent * lit::<T>(2.0 * k as f64 - (n - 1) as f64) / denom)
        .collect();
    let coherent = coherent_benchmark(n_s, n_b, T::one())?;
    let tol = psd_tol::<T>();
    let points = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (a13, a24) = (coords[idx / n], coords[idx % n]);
            let v = correlation_cov(n_s, n_i, a13, a24);
            let mut pt = v.clone();
            for k in 0..4 {
                pt[(3, k)] = -pt[(3, k)];
                pt[(k, 3)] = -pt[(k, 3)];
            }
            let physical = min_uncertainty_eig(&v) >= -tol;
            let separable = physical && min_uncertainty_eig(&pt) >= -tol;
            let advantage = thermal_idler_unchecked(n_i, n_b, a13, a24).ratio(coherent);
            let label = if !physical {
                RegionLabel::Unphysical
            } else if separable {
                RegionLabel::Separable
            } else if advantage.col < T::one() {
                RegionLabel::EntangledNoAdvantage
            } else if advantage.loc < T::one() {
                RegionLabel::CollectiveOnly
            } else {
                RegionLabel::LocalAndCollective
            };
            RegionPoint {
                a13,
                a24,
                label,
                advantage,
            }
        })
        .collect();
    Ok(RegionClassification {
        n_s,
        n_i,
        n_b,
        extent,
        coords,
        points,
    })
}

/// The closed-form constants at `κ = 1` for the correlation family,
/// evaluated from the matrix entries alone so unphysical points get values too.
fn thermal_idler_unchecked<T: Real>(n_i: T, n_b: T, a13: T, a24: T) -> super::DecayConstants<T> {
    let one = T::one();
    let two = lit::<T>(2.0);
    let plus = (a13 - a24) * (a13 - a24);
    let minus = (a13 + a24) * (a13 + a24);
    let sq = |x: T| x * x;
    let col_plus = sq((n_b * n_i).sqrt() + ((one + n_b) * (one + n_i)).sqrt());
    let col_minus = sq((n_b * (one + n_i)).sqrt() + ((one + n_b) * n_i).sqrt());
    let loc_plus = one + n_b + n_i + two * n_b * n_i;
    let loc_minus = n_b + n_i + two * n_b * n_i;
    let ratio = |num: T, den: T| {
        if den > T::zero() {
            num / den
        } else {
            T::zero()
        }
    };
    super::DecayConstants {
        gamma_col: (plus / col_plus + ratio(minus, col_minus)) / lit(16.0),
        gamma_loc: (plus / loc_plus + ratio(minus, loc_minus)) / lit(32.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qi::decay_thermal_idler;
    use crate::symplectic::GaussianState;

    #[test]
    fn origin_and_corners() {
        let r = classify_correlations(
            0.01,
            0.01,
            625.0,
            CorrelationGrid {
                points: 21,
                extent: None,
            },
        )
        .unwrap();
        assert_eq!(r.at(10, 10).label, RegionLabel::Separable);
        assert_eq!(r.at(10, 10).a13, 0.0);
        let tmsv_corner = r.at(20, 0);
        assert_eq!(tmsv_corner.a13, -tmsv_corner.a24);
        assert_eq!(tmsv_corner.label, RegionLabel::LocalAndCollective);
        assert_eq!(r.at(20, 20).label, RegionLabel::Unphysical);
    }

    #[test]
    fn physical_points_match_checked_formula() {
        let r = classify_correlations(
            0.1f64,
            0.2,
            3.0,
            CorrelationGrid {
                points: 9,
                extent: None,
            },
        )
        .unwrap();
        let coherent = coherent_benchmark(0.1, 3.0, 1.0).unwrap();
        for p in r
            .points
            .iter()
            .filter(|p| p.label != RegionLabel::Unphysical)
        {
            let probe = GaussianState::new(
                nalgebra::DVector::zeros(4),
                correlation_cov(0.1, 0.2, p.a13, p.a24),
            )
            .unwrap();
            let qa = decay_thermal_idler(&probe, 3.0, 1.0)
                .unwrap()
                .ratio(coherent);
            assert!((qa.col - p.advantage.col).abs() <= 1e-12 * qa.col.max(1e-300));
            assert!((qa.loc - p.advantage.loc).abs() <= 1e-12 * qa.loc.max(1e-300));
        }
    }
}
