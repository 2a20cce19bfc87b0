//! Gaussian circuits evaluated gate by gate in a truncated Fock space.

use gqi_core::qi::{IDLER, SIGNAL};
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{beam_splitter_table, displacement, single_mode_squeeze, two_mode_squeeze};
use crate::operator::{c, digits, index, FockOperator};

/// Largest truncation deficit [`build_state`] accepts by default.
pub const MAX_DEFICIT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// Replaces `mode` by a thermal state; only allowed before any other gate.
    ThermalSeed { mode: usize, n: f64 },
    /// `exp(ζ(a†b† − ab))`.
    TwoModeSqueeze { modes: (usize, usize), zeta: f64 },
    /// `D(α)`; `α = (x̄ + i p̄)/√2`.
    Displace { mode: usize, alpha: Complex64 },
    /// Multiplies `x` by `e^ζ`, `p` by `e^−ζ`.
    SingleModeSqueeze { mode: usize, zeta: f64 },
    /// Beam splitter of transmittivity `eta` between two circuit modes;
    /// `x₀ → √η x₀ + √(1−η) x₁`.
    BeamSplit { modes: (usize, usize), eta: f64 },
    /// Mixes `mode` with a vacuum ancilla of cutoff `ancilla_cutoff`.
    Loss {
        mode: usize,
        eta: f64,
        ancilla_cutoff: usize,
    },
    /// Mixes `mode` with a thermal ancilla of `n` photons; `out_cutoff`
    /// resizes the mode.
    ThermalMix {
        mode: usize,
        eta: f64,
        n: f64,
        ancilla_cutoff: usize,
        out_cutoff: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec {
    pub dims: Vec<usize>,
    pub gates: Vec<Gate>,
}

impl CircuitSpec {
    pub fn new(dims: Vec<usize>) -> Self {
        Self {
            dims,
            gates: vec![],
        }
    }

    pub fn gate(mut self, g: Gate) -> Self {
        self.gates.push(g);
        self
    }

    /// TMSV with `n_s` photons per mode.
    pub fn tmsv(n_s: f64, cutoff: usize) -> Self {
        Self::new(vec![cutoff, cutoff]).gate(Gate::TwoModeSqueeze {
            modes: (SIGNAL, IDLER),
            zeta: (2.0 * n_s + 1.0).acosh() / 2.0,
        })
    }

    /// Coherent signal with `n_s` photons along `x`, vacuum idler.
    pub fn coherent(n_s: f64, cutoff: usize) -> Self {
        Self::new(vec![cutoff, cutoff]).gate(Gate::Displace {
            mode: SIGNAL,
            alpha: c(n_s.sqrt()),
        })
    }
}

fn check_mode(mode: usize, n: usize) -> Result<()> {
    if mode >= n {
        return Err(Error::Dimension(format!(
            "mode {mode} out of range for {n} modes"
        )));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::Parameter(format!(
            "transmittivity must lie in [0, 1], got {eta}"
        )));
    }
    Ok(())
}

/// Mixes `mode` with a thermal ancilla on a beam splitter keeping a
/// fraction `eta` of the mode, then traces the ancilla out.
///
/// The ancilla is diagonal, so the channel is the Kraus sum over ancilla
/// input `k` and output `j` of `√p_k ⟨j|U|k⟩`, each of which shifts the
/// photon number of the mode by `k − j`.
pub fn thermal_mix(
    rho: &FockOperator,
    mode: usize,
    eta: f64,
    n: f64,
    ancilla_cutoff: usize,
    out_cutoff: Option<usize>,
) -> Result<FockOperator> {
    check_mode(mode, rho.dims().len())?;
    check_eta(eta)?;
    let ancilla = FockOperator::thermal(n, ancilla_cutoff)?;
    let p: Vec<f64> = (0..ancilla_cutoff)
        .map(|k| ancilla.data()[(k, k)].re)
        .collect();
    let d_in = rho.dims()[mode];
    let d_out = out_cutoff.unwrap_or(d_in);
    let table = beam_splitter_table(eta, d_in, ancilla_cutoff);
    let mut dims_out = rho.dims().to_vec();
    dims_out[mode] = d_out;
    let dim_out: usize = dims_out.iter().product();
    let mut out = DMatrix::<Complex64>::zeros(dim_out, dim_out);

    // Output index of a basis state is `base + m · stride` with `m` the new
    // photon number of `mode`.
    let stride: usize = dims_out[mode + 1..].iter().product();
    let split: Vec<(usize, usize)> = (0..rho.data().nrows())
        .map(|i| {
            let mut di = digits(i, rho.dims());
            let n_mode = di[mode];
            di[mode] = 0;
            (n_mode, index(&di, &dims_out))
        })
        .collect();
    for (j, &(nj, base_j)) in split.iter().enumerate() {
        for (i, &(ni, base_i)) in split.iter().enumerate() {
            let v = rho.data()[(i, j)];
            if v == c(0.0) {
                continue;
            }
            for (k, &pk) in p.iter().enumerate() {
                let (ai, aj) = (&table[ni][k], &table[nj][k]);
                // Ancilla output n + k − m must agree on both sides.
                for (mi, &a) in ai.iter().enumerate().take(d_out) {
                    let out_anc = ni + k - mi;
                    if out_anc > nj + k {
                        continue;
                    }
                    let mj = nj + k - out_anc;
                    if mj >= d_out {
                        continue;
                    }
                    out[(base_i + mi * stride, base_j + mj * stride)] += v * (pk * a * aj[mj]);
                }
            }
        }
    }
    let mut result = FockOperator::new(dims_out, out)?;
    result = result.with_deficit(rho.deficit() + ancilla.deficit());
    Ok(result.hermitized())
}

/// Two-mode beam splitter between circuit modes, truncated to the existing cutoffs.
fn beam_split_gate(eta: f64, d_a: usize, d_b: usize) -> DMatrix<Complex64> {
    let table = beam_splitter_table(eta, d_a, d_b);
    let mut u = DMatrix::zeros(d_a * d_b, d_a * d_b);
    for na in 0..d_a {
        for nb in 0..d_b {
            for (i, &amp) in table[na][nb].iter().enumerate() {
                let rest = na + nb - i;
                if i < d_a && rest < d_b {
                    u[(i * d_b + rest, na * d_b + nb)] = c(amp);
                }
            }
        }
    }
    u
}

/// Runs the circuit from vacuum (or the requested thermal seeds) and
/// renormalizes; fails when more than `max_deficit` of the trace was lost.
pub fn build_state(circuit: &CircuitSpec, max_deficit: f64) -> Result<FockOperator> {
    let n_modes = circuit.dims.len();
    let mut seeds = vec![0.0; n_modes];
    let mut body = circuit.gates.as_slice();
    while let Some((Gate::ThermalSeed { mode, n }, rest)) = body.split_first() {
        check_mode(*mode, n_modes)?;
        seeds[*mode] = *n;
        body = rest;
    }
    let mut rho = seeds
        .iter()
        .zip(&circuit.dims)
        .map(|(&n, &d)| FockOperator::thermal(n, d))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .reduce(|a, b| a.tensor(&b))
        .ok_or_else(|| Error::Dimension("circuit has no modes".into()))?;

    for g in body {
        rho = match *g {
            Gate::ThermalSeed { .. } => {
                return Err(Error::Parameter(
                    "thermal seeds must precede all other gates".into(),
                ))
            }
            Gate::TwoModeSqueeze {
                modes: (a, b),
                zeta,
            } => {
                check_mode(a.max(b), n_modes)?;
                rho.conjugated(
                    &[a, b],
                    &two_mode_squeeze(zeta, rho.dims()[a], rho.dims()[b]),
                )?
            }
            Gate::Displace { mode, alpha } => {
                check_mode(mode, n_modes)?;
                rho.conjugated(&[mode], &displacement(alpha, rho.dims()[mode]))?
            }
            Gate::SingleModeSqueeze { mode, zeta } => {
                check_mode(mode, n_modes)?;
                rho.conjugated(&[mode], &single_mode_squeeze(zeta, rho.dims()[mode]))?
            }
            Gate::BeamSplit { modes: (a, b), eta } => {
                check_mode(a.max(b), n_modes)?;
                check_eta(eta)?;
                rho.conjugated(&[a, b], &beam_split_gate(eta, rho.dims()[a], rho.dims()[b]))?
            }
            Gate::Loss {
                mode,
                eta,
                ancilla_cutoff,
            } => thermal_mix(&rho, mode, eta, 0.0, ancilla_cutoff, None)?,
            Gate::ThermalMix {
                mode,
                eta,
                n,
                ancilla_cutoff,
                out_cutoff,
            } => thermal_mix(&rho, mode, eta, n, ancilla_cutoff, out_cutoff)?,
        };
    }
    let carried = rho.deficit();
    let rho = rho.renormalized();
    let deficit = rho.deficit() + carried;
    if deficit > max_deficit {
        return Err(Error::CutoffTooSmall {
            deficit,
            limit: max_deficit,
        });
    }
    Ok(rho.with_deficit(deficit))
}

/// Cutoffs for [`qi_output_pair`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutputCutoffs {
    /// Returned signal mode.
    pub signal: usize,
    /// Thermal background ancilla.
    pub ancilla: usize,
}

/// Target-absent and target-present states.
///
/// With the target present the signal meets a thermal background of
/// `N_B/(1 − κ)` photons on a beam splitter of reflectivity `κ`; without
/// it the signal is replaced by a thermal mode with `N_B` photons. The
/// idler is kept in both.
pub fn qi_output_pair(
    probe: &FockOperator,
    kappa: f64,
    n_b: f64,
    cutoffs: OutputCutoffs,
    max_deficit: f64,
) -> Result<(FockOperator, FockOperator)> {
    if probe.dims().len() != 2 {
        return Err(Error::Dimension(format!(
            "probe must have two modes, has {}",
            probe.dims().len()
        )));
    }
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::Parameter(format!(
            "reflectivity must lie in [0, 1), got {kappa}"
        )));
    }
    if !(n_b >= 0.0) {
        return Err(Error::Parameter(format!(
            "background must be >= 0, got {n_b}"
        )));
    }
    let idler = probe.partial_trace(&[IDLER])?;
    let background = FockOperator::thermal(n_b, cutoffs.signal)?;
    let rho0 = background.tensor(&idler);
    let rho1 = thermal_mix(
        probe,
        SIGNAL,
        kappa,
        n_b / (1.0 - kappa),
        cutoffs.ancilla,
        Some(cutoffs.signal),
    )?;
    let finish = |rho: FockOperator| -> Result<FockOperator> {
        let carried = rho.deficit();
        let rho = rho.renormalized();
        let deficit = rho.deficit() + carried;
        if deficit > max_deficit {
            return Err(Error::CutoffTooSmall {
                deficit,
                limit: max_deficit,
            });
        }
        Ok(rho.with_deficit(deficit))
    };
    Ok((finish(rho0)?, finish(rho1)?))
}
