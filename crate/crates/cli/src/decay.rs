//! Decay constants and advantage for a single scenario.

use std::path::PathBuf;

use gqi_core::{
    coherent_benchmark, scenario_decay, ChannelSpec, GaussianState, PureProbeFamily, QiScenario,
    StateRecord,
};
use nalgebra::DVector;

use crate::error::{CliError, Result};
use crate::table::SweepTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeKind {
    Tmsv,
    Coherent,
    CustomJson,
}

impl ProbeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProbeKind::Tmsv => "tmsv",
            ProbeKind::Coherent => "coherent",
            ProbeKind::CustomJson => "custom-json",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayRequest {
    pub probe: ProbeKind,
    /// Signal photon number of the built-in probes.
    pub n_s: Option<f64>,
    /// JSON state file for `custom-json`.
    pub state: Option<PathBuf>,
    pub n_b: f64,
    pub kappa: f64,
    /// Idler memory transmittivity; `None` for a perfect memory.
    pub eta: Option<f64>,
    pub n_l: Option<f64>,
    /// Signal displacement along `x`.
    pub displace: f64,
    /// Signal squeezing `diag(e^ζ, e^−ζ)`, applied before the displacement.
    pub squeeze_signal: f64,
}

impl DecayRequest {
    pub fn new(probe: ProbeKind, n_b: f64, kappa: f64) -> Self {
        Self {
            probe,
            n_s: None,
            state: None,
            n_b,
            kappa,
            eta: None,
            n_l: None,
            displace: 0.0,
            squeeze_signal: 0.0,
        }
    }
}

fn load_state(path: &PathBuf) -> Result<GaussianState<f64>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let record: StateRecord = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{} is not a state record: {e}", path.display())))?;
    let state = GaussianState::try_from(record)?;
    state.ensure_valid()?;
    Ok(state)
}

fn probe_state(req: &DecayRequest) -> Result<GaussianState<f64>> {
    let n_s = || {
        req.n_s
            .ok_or_else(|| CliError::Invalid(format!("--probe {} needs --ns", req.probe.as_str())))
    };
    if req.probe != ProbeKind::CustomJson && req.state.is_some() {
        return Err(CliError::Invalid(
            "--state is only used with --probe custom-json".into(),
        ));
    }
    match req.probe {
        ProbeKind::Tmsv => Ok(GaussianState::tmsv(n_s()?)?),
        ProbeKind::Coherent => Ok(PureProbeFamily::coherent(n_s()?).state()?),
        ProbeKind::CustomJson => {
            if req.n_s.is_some() {
                return Err(CliError::Invalid(
                    "--ns does not apply to a custom probe".into(),
                ));
            }
            let path = req.state.as_ref().ok_or_else(|| {
                CliError::Invalid("--probe custom-json needs --state PATH".into())
            })?;
            load_state(path)
        }
    }
}

pub fn scenario(req: &DecayRequest) -> Result<QiScenario<f64>> {
    let mut s = QiScenario::new(probe_state(req)?, req.kappa, req.n_b)?;
    if req.squeeze_signal != 0.0 {
        s = s.with_signal_op(ChannelSpec::SingleModeSqueeze {
            mode: 0,
            zeta: req.squeeze_signal,
            phase: 0.0,
        })?;
    }
    if req.displace != 0.0 {
        let mut d = DVector::zeros(4);
        d[0] = req.displace;
        s = s.with_signal_op(ChannelSpec::Displacement(d))?;
    }
    match (req.eta, req.n_l) {
        (Some(eta), n_l) => s = s.with_idler_memory(eta, n_l.unwrap_or(0.0))?,
        (None, Some(_)) => return Err(CliError::Invalid("--nl needs --eta".into())),
        (None, None) => {}
    }
    Ok(s)
}

/// One-row table plus any warnings about the parameter regime.
pub fn decay_table(req: &DecayRequest) -> Result<(SweepTable, Vec<String>)> {
    let s = scenario(req)?;
    let n_s = s.signal_photons()?;
    let gamma = scenario_decay(&s)?;
    let coherent = coherent_benchmark(n_s, req.n_b, req.kappa)?;
    let qa = gamma.ratio(coherent);
    let mut t = SweepTable::new("decay").meta("probe", req.probe.as_str());
    if let Some(p) = &req.state {
        t = t.meta("state", p.display());
    }
    if let Some(x) = req.n_s {
        t = t.meta("n_s", x);
    }
    t = t.meta("n_b", req.n_b).meta("kappa", req.kappa);
    if let Some(eta) = req.eta {
        t = t.meta("eta", eta).meta("n_l", req.n_l.unwrap_or(0.0));
    }
    let table = t
        .meta("displace", req.displace)
        .meta("squeeze_signal", req.squeeze_signal)
        .real("signal_photons", vec![n_s])
        .real("gamma_col", vec![gamma.gamma_col])
        .real("gamma_loc", vec![gamma.gamma_loc])
        .real("coherent_col", vec![coherent.gamma_col])
        .real("coherent_loc", vec![coherent.gamma_loc])
        .real("qa_col", vec![qa.col])
        .real("qa_loc", vec![qa.loc]);
    Ok((table, s.warnings()))
}
