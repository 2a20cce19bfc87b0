//! Minimal idler-memory transmittivity for a quantum advantage with a TMSV probe.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use super::{coherent_benchmark, decay_thermal_idler, lossy_tmsv};

/// Outcome of [`eta_qa1_col`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EtaThreshold<T: Real> {
    /// Transmittivity at which the collective advantage equals one.
    Threshold(T),
    /// Even a lossless memory does not beat the coherent probe.
    NoAdvantage { qa_at_unity: T },
}

impl<T: Real> EtaThreshold<T> {
    pub fn threshold(self) -> Option<T> {
        match self {
            EtaThreshold::Threshold(eta) => Some(eta),
            EtaThreshold::NoAdvantage { .. } => None,
        }
    }
}

fn check_nonneg<T: Real>(name: &str, x: T) -> Result<()> {
    if !(x >= T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("{name} must be >= 0, got {}", x)));
    }
    Ok(())
}

/// `(1 + N_B + N_L + 2N_B N_L) / ((1 + 2N_B)(1 + N_L))`.
pub fn eta_qa1_loc<T: Real>(n_b: T, n_l: T) -> Result<T> {
    check_nonneg("N_B", n_b)?;
    check_nonneg("N_L", n_l)?;
    let one = T::one();
    let two = lit::<T>(2.0);
    Ok((one + n_b + n_l + two * n_b * n_l) / ((one + two * n_b) * (one + n_l)))
}

/// `N_B → ∞` limit of [`eta_qa1_loc`]: `½ (1 + 2N_L)/(1 + N_L)`.
pub fn eta_qa1_loc_limit<T: Real>(n_l: T) -> Result<T> {
    check_nonneg("N_L", n_l)?;
    let one = T::one();
    Ok((one + lit::<T>(2.0) * n_l) / (lit::<T>(2.0) * (one + n_l)))
}

/// `N_B → ∞` limit of [`eta_qa1_col`]:
/// `¼ (1 + 2N_L)/(1 + N_L) · (1 + √(1 − (1 + N_L)/((1 + 2N_L)²(1 + N_S))))`.
pub fn eta_qa1_col_limit<T: Real>(n_s: T, n_l: T) -> Result<T> {
    check_nonneg("N_S", n_s)?;
    check_nonneg("N_L", n_l)?;
    let one = T::one();
    let a = one + lit::<T>(2.0) * n_l;
    let radicand = (one - (one + n_l) / (a * a * (one + n_s))).max(T::zero());
    Ok(a / (lit::<T>(4.0) * (one + n_l)) * (one + radicand.sqrt()))
}

/// Collective advantage of a TMSV probe whose idler passes the memory.
fn qa_col<T: Real>(n_s: T, n_b: T, n_l: T, eta: T) -> Result<T> {
    let probe = lossy_tmsv(n_s, eta, n_l)?;
    let g = decay_thermal_idler(&probe, n_b, T::one())?;
    Ok(g.gamma_col / coherent_benchmark(n_s, n_b, T::one())?.gamma_col)
}

const MONOTONE_SAMPLES: usize = 64;
const DENSE_SAMPLES: usize = 4096;

/// Transmittivity at which a TMSV probe with `n_s` photons and memory noise
/// `n_l` matches the coherent probe under collective measurements.
///
/// The advantage is sampled on a coarse grid first. When the samples are
/// nondecreasing the sign change is bracketed from them; otherwise a dense
/// scan locates the smallest crossing. Either way the bracket is then
/// bisected to below `1e-12`.
pub fn eta_qa1_col<T: Real>(n_s: T, n_b: T, n_l: T) -> Result<EtaThreshold<T>> {
    if !(n_s > T::zero()) {
        return Err(Error::Domain(format!("N_S must be > 0, got {}", n_s)));
    }
    check_nonneg("N_B", n_b)?;
    check_nonneg("N_L", n_l)?;
    let f = |eta: T| qa_col(n_s, n_b, n_l, eta).map(|q| q - T::one());
    let at_unity = f(T::one())?;
    if at_unity < T::zero() {
        return Ok(EtaThreshold::NoAdvantage {
            qa_at_unity: at_unity + T::one(),
        });
    }
    let sample = |k: usize, n: usize| -> T { lit::<T>(k as f64 / n as f64) };
    let coarse: Vec<T> = (0..=MONOTONE_SAMPLES)
        .map(|k| f(sample(k, MONOTONE_SAMPLES)))
        .collect::<Result<_>>()?;
    let slack = lit::<T>(1e-12);
    let monotone = coarse.windows(2).all(|w| w[1] >= w[0] - slack);
    let (n, values) = if monotone {
        (MONOTONE_SAMPLES, coarse)
    } else {
        let dense = (0..=DENSE_SAMPLES)
            .map(|k| f(sample(k, DENSE_SAMPLES)))
            .collect::<Result<Vec<T>>>()?;
        (DENSE_SAMPLES, dense)
    };
    let k = values
        .iter()
        .position(|&v| v >= T::zero())
        .expect("the last sample is nonnegative");
    if k == 0 {
        return Ok(EtaThreshold::Threshold(T::zero()));
    }
    let (mut lo, mut hi) = (sample(k - 1, n), sample(k, n));
    while hi - lo > lit::<T>(1e-12) {
        let mid = (lo + hi) / lit(2.0);
        if f(mid)? >= T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(EtaThreshold::Threshold((lo + hi) / lit(2.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn local_threshold_values() {
        assert_abs_diff_eq!(
            eta_qa1_loc(625.0, 0.0).unwrap(),
            626.0 / 1251.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(eta_qa1_loc_limit(0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            eta_qa1_loc(1e12, 0.43).unwrap(),
            eta_qa1_loc_limit(0.43).unwrap(),
            epsilon = 1e-10
        );
        assert!(eta_qa1_loc(-1.0, 0.0).is_err());
    }

    #[test]
    fn collective_limit_values() {
        assert_abs_diff_eq!(eta_qa1_col_limit(0.0, 0.0).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(eta_qa1_col_limit(1.0, 0.43).unwrap(), 0.615, epsilon = 1e-3);
        assert_abs_diff_eq!(
            eta_qa1_col_limit(0.01, 0.43).unwrap(),
            0.575,
            epsilon = 1e-3
        );
    }

    #[test]
    fn bisection_crosses_one() {
        let eta = eta_qa1_col(0.01, 625.0, 0.0).unwrap().threshold().unwrap();
        assert!(eta > 0.25);
        assert_abs_diff_eq!(qa_col(0.01, 625.0, 0.0, eta).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn zero_background_has_no_strict_advantage() {
        // With N_B = 0 the TMSV and coherent constants coincide at η = 1.
        match eta_qa1_col(0.5, 0.0, 0.0).unwrap() {
            EtaThreshold::Threshold(eta) => assert!(eta > 0.99),
            EtaThreshold::NoAdvantage { qa_at_unity } => {
                assert_abs_diff_eq!(qa_at_unity, 1.0, epsilon = 1e-12)
            }
        }
    }
}
