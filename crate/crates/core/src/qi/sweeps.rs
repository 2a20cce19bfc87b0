//! Parameter sweeps over TMSV-based probes. Rows come back in grid order.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::symplectic::{ChannelSpec, GaussianState};

use super::{
    decay_general, eta_qa1_col_limit, eta_qa1_loc_limit, quantum_advantage, scenario_decay,
    DecayConstants, QiScenario, QuantumAdvantage, IDLER, SIGNAL,
};

/// Signal-mode operation used to add photons to a TMSV probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignalOp {
    /// Displacement along `x` by `√(2ΔN)`.
    Displace,
    /// Squeezing `diag(e^ζ, e^−ζ)` with `cosh 2ζ = 1 + 2ΔN/(1 + 2N_S)`.
    Squeeze,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignalOpRow<T: Real> {
    pub delta_n: T,
    pub gamma: DecayConstants<T>,
}

/// TMSV probe with `n_s` photons and `delta_n` extra signal photons
/// supplied by `op`.
pub fn signal_op_probe<T: Real>(n_s: T, delta_n: T, op: SignalOp) -> Result<GaussianState<T>> {
    if !(delta_n >= T::zero()) {
        return Err(Error::Domain(format!(
            "added photon number must be >= 0, got {}",
            delta_n
        )));
    }
    let tmsv = GaussianState::tmsv(n_s)?;
    let two = lit::<T>(2.0);
    let channel = match op {
        SignalOp::Displace => {
            let mut d = DVector::zeros(4);
            d[0] = (two * delta_n).sqrt();
            ChannelSpec::Displacement(d)
        }
        SignalOp::Squeeze => {
            let cosh2 = T::one() + two * delta_n / (T::one() + two * n_s);
            ChannelSpec::SingleModeSqueeze {
                mode: SIGNAL,
                zeta: cosh2.acosh() / two,
                phase: T::zero(),
            }
        }
    };
    tmsv.apply(&channel)
}

pub fn signal_op_sweep<T: Real>(
    n_s: T,
    n_b: T,
    kappa: T,
    delta_grid: &[T],
    op: SignalOp,
) -> Result<Vec<SignalOpRow<T>>> {
    delta_grid
        .par_iter()
        .map(|&delta_n| {
            let probe = signal_op_probe(n_s, delta_n, op)?;
            Ok(SignalOpRow {
                delta_n,
                gamma: decay_general(&probe, n_b, kappa)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdlerSqueezeRow<T: Real> {
    pub zeta_i: T,
    pub gamma: DecayConstants<T>,
}

/// TMSV probe whose idler is squeezed by `diag(e^ζ, e^−ζ)` and then stored
/// in a memory `(eta, n_l)`.
pub fn idler_squeeze_sweep<T: Real>(
    n_s: T,
    n_b: T,
    kappa: T,
    eta: T,
    n_l: T,
    zeta_grid: &[T],
) -> Result<Vec<IdlerSqueezeRow<T>>> {
    let base =
        QiScenario::new(GaussianState::tmsv(n_s)?, kappa, n_b)?.with_idler_memory(eta, n_l)?;
    zeta_grid
        .par_iter()
        .map(|&zeta_i| {
            let s = base.clone().with_idler_op(ChannelSpec::SingleModeSqueeze {
                mode: IDLER,
                zeta: zeta_i,
                phase: T::zero(),
            })?;
            Ok(IdlerSqueezeRow {
                zeta_i,
                gamma: scenario_decay(&s)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MemoryAdvantageRow<T: Real> {
    pub r: T,
    pub eta: T,
    pub advantage: QuantumAdvantage<T>,
}

/// Advantage of a TMSV probe displaced by `r` along the signal `x`
/// quadrature, stored in a memory `(eta, n_l)`; rows run over `r` first,
/// then `eta`.
pub fn memory_advantage_grid<T: Real>(
    n_s: T,
    n_b: T,
    n_l: T,
    r_grid: &[T],
    eta_grid: &[T],
) -> Result<Vec<MemoryAdvantageRow<T>>> {
    let cells: Vec<(T, T)> = r_grid
        .iter()
        .flat_map(|&r| eta_grid.iter().map(move |&eta| (r, eta)))
        .collect();
    cells
        .par_iter()
        .map(|&(r, eta)| {
            let mut d = DVector::zeros(4);
            d[0] = r;
            let probe = GaussianState::tmsv(n_s)?.apply(&ChannelSpec::Displacement(d))?;
            let s = QiScenario::new(probe, lit(0.01), n_b)?.with_idler_memory(eta, n_l)?;
            Ok(MemoryAdvantageRow {
                r,
                eta,
                advantage: quantum_advantage(&s)?,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdRow<T: Real> {
    pub n_l: T,
    pub n_s: T,
    pub eta_loc: T,
    pub eta_col: T,
}

/// Large-background transmittivity thresholds; rows run over `n_l` first,
/// then `n_s`.
pub fn threshold_curves<T: Real>(n_l_grid: &[T], n_s_set: &[T]) -> Result<Vec<ThresholdRow<T>>> {
    let mut rows = Vec::with_capacity(n_l_grid.len() * n_s_set.len());
    for &n_l in n_l_grid {
        let eta_loc = eta_qa1_loc_limit(n_l)?;
        for &n_s in n_s_set {
            rows.push(ThresholdRow {
                n_l,
                n_s,
                eta_loc,
                eta_col: eta_qa1_col_limit(n_s, n_l)?,
            });
        }
    }
    Ok(rows)
}
