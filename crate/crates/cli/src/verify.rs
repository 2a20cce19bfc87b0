//! Oracle and property checks exposed as `gqi verify <suite>`.

use std::fmt;
use std::str::FromStr;

use gqi_core::sample::{random_state, random_symplectic};
use gqi_core::{
    decay_general, decay_thermal_idler, metric_general, probe_search, ChannelSpec, GaussianState,
    MonotoneFunction, PureProbeFamily, TangentVector,
};
use gqi_fock::{
    build_state, chernoff_exponent, qi_output_pair, snr_maximize, CircuitSpec, OutputCutoffs,
    MAX_DEFICIT,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Chernoff,
    Snr,
    MetricInvariance,
    OptimalProbe,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Self::Chernoff,
        Self::Snr,
        Self::MetricInvariance,
        Self::OptimalProbe,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Chernoff => "chernoff",
            Self::Snr => "snr",
            Self::MetricInvariance => "metric-invariance",
            Self::OptimalProbe => "optimal-probe",
        }
    }

    fn accepts(self) -> &'static [&'static str] {
        match self {
            Self::Chernoff => &["kappa", "ns", "nb", "cutoff", "out-cutoff", "tol"],
            Self::Snr => &["ns", "nb", "seed", "draws", "tol"],
            Self::MetricInvariance => &["seed", "draws", "tol"],
            Self::OptimalProbe => &["ns", "nb", "tol"],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| CliError::Invalid(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyOptions {
    pub kappa: Option<f64>,
    pub ns: Option<f64>,
    pub nb: Option<f64>,
    /// Fock cutoff per probe mode.
    pub cutoff: Option<usize>,
    /// Fock cutoff of the returned signal and the background ancilla.
    pub out_cutoff: Option<usize>,
    pub seed: Option<u64>,
    pub draws: Option<usize>,
    pub tol: Option<f64>,
}

impl VerifyOptions {
    fn given(&self) -> Vec<&'static str> {
        [
            (self.kappa.is_some(), "kappa"),
            (self.ns.is_some(), "ns"),
            (self.nb.is_some(), "nb"),
            (self.cutoff.is_some(), "cutoff"),
            (self.out_cutoff.is_some(), "out-cutoff"),
            (self.seed.is_some(), "seed"),
            (self.draws.is_some(), "draws"),
            (self.tol.is_some(), "tol"),
        ]
        .into_iter()
        .filter_map(|(set, name)| set.then_some(name))
        .collect()
    }
}

/// One measured error against its tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub label: String,
    pub error: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub params: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn max_error(&self) -> f64 {
        self.checks.iter().map(|c| c.error).fold(0.0, f64::max)
    }

    pub fn render(&self) -> String {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let mut out = format!("suite {} ({})\n", self.suite, params.join(" "));
        for c in &self.checks {
            out.push_str(&format!(
                "  {} {}: error={:.3e} tol={:.1e} {}\n",
                if c.passed() { "PASS" } else { "FAIL" },
                c.label,
                c.error,
                c.tolerance,
                c.detail
            ));
        }
        let ok = self.checks.iter().filter(|c| c.passed()).count();
        out.push_str(&format!(
            "{} {}: {ok}/{} checks, max error {:.3e}\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.checks.len(),
            self.max_error()
        ));
        out
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn run(suite: Suite, opts: &VerifyOptions) -> Result<Report> {
    let accepted = suite.accepts();
    if let Some(bad) = opts.given().into_iter().find(|f| !accepted.contains(f)) {
        return Err(CliError::Invalid(format!(
            "--{bad} does not apply to suite {suite}"
        )));
    }
    if let Some(tol) = opts.tol {
        if !(tol > 0.0) {
            return Err(CliError::Invalid(format!(
                "--tol must be positive, got {tol}"
            )));
        }
    }
    match suite {
        Suite::Chernoff => chernoff(opts),
        Suite::Snr => snr(opts),
        Suite::MetricInvariance => metric_invariance(opts),
        Suite::OptimalProbe => optimal_probe(opts),
    }
}

fn probes(n_s: f64) -> Result<[(&'static str, GaussianState<f64>); 2]> {
    Ok([
        ("tmsv", GaussianState::tmsv(n_s)?),
        ("coherent", PureProbeFamily::coherent(n_s).state()?),
    ])
}

/// Chernoff exponent of the truncated output states against `γ_col`.
fn chernoff(o: &VerifyOptions) -> Result<Report> {
    let kappa = o.kappa.unwrap_or(0.01);
    let n_s = o.ns.unwrap_or(0.1);
    let n_b = o.nb.unwrap_or(0.5);
    let cutoff = o.cutoff.unwrap_or(12);
    let out = o.out_cutoff.unwrap_or(25);
    let tol = o.tol.unwrap_or(0.05);
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(CliError::Invalid(format!(
            "--kappa must lie in (0, 1), got {kappa}"
        )));
    }
    let circuits = [
        ("tmsv", CircuitSpec::tmsv(n_s, cutoff)),
        ("coherent", CircuitSpec::coherent(n_s, cutoff)),
    ];
    let gaussian = probes(n_s)?;
    let checks = circuits
        .par_iter()
        .zip(gaussian.par_iter())
        .map(|((label, circuit), (_, state))| {
            let probe = build_state(circuit, MAX_DEFICIT)?;
            let cutoffs = OutputCutoffs {
                signal: out,
                ancilla: out,
            };
            let (rho0, rho1) = qi_output_pair(&probe, kappa, n_b, cutoffs, MAX_DEFICIT)?;
            let exact = chernoff_exponent(&rho0, &rho1)?;
            let predicted = decay_thermal_idler(state, n_b, kappa)?.gamma_col;
            Ok(Check {
                label: label.to_string(),
                error: (exact.exponent - predicted).abs() / predicted,
                tolerance: tol,
                detail: format!(
                    "exponent={:.10e} gamma_col={:.10e} s={:.4} deficit={:.1e}",
                    exact.exponent,
                    predicted,
                    exact.s,
                    rho1.deficit().max(rho0.deficit())
                ),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Report {
        suite: Suite::Chernoff,
        params: vec![
            ("kappa".into(), kappa.to_string()),
            ("n_s".into(), n_s.to_string()),
            ("n_b".into(), n_b.to_string()),
            ("cutoff".into(), cutoff.to_string()),
            ("out_cutoff".into(), out.to_string()),
        ],
        checks,
    })
}

/// Best quadratic-observable SNR against `γ_loc/κ`: equal for TMSV and
/// coherent probes, never above it for random probes.
fn snr(o: &VerifyOptions) -> Result<Report> {
    let n_s = o.ns.unwrap_or(0.01);
    let n_b = o.nb.unwrap_or(625.0);
    let seed = o.seed.unwrap_or(7);
    let draws = o.draws.unwrap_or(20);
    let tol = o.tol.unwrap_or(1e-6);
    let per_kappa = |p: &GaussianState<f64>| -> Result<(f64, f64)> {
        let snr = snr_maximize(p, n_b)?.snr;
        let gamma = decay_general(p, n_b, 0.01)?.gamma_loc / 0.01;
        Ok((snr, gamma))
    };
    let mut checks = Vec::new();
    for (label, p) in probes(n_s)? {
        let (snr, gamma) = per_kappa(&p)?;
        checks.push(Check {
            label: label.into(),
            error: rel_err(snr, gamma),
            tolerance: tol,
            detail: format!("snr={snr:.10e} gamma_loc/kappa={gamma:.10e}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let randoms: Vec<GaussianState<f64>> = (0..draws)
        .map(|_| random_state::<f64, _>(&mut rng, 2, 1.5, 0.8, 1.0))
        .collect();
    let measured = randoms
        .par_iter()
        .map(per_kappa)
        .collect::<Result<Vec<_>>>()?;
    for (k, (snr, gamma)) in measured.into_iter().enumerate() {
        checks.push(Check {
            label: format!("random[{k}] excess"),
            error: (snr / gamma - 1.0).max(0.0),
            tolerance: tol,
            detail: format!("snr/gamma_loc-1={:.3e}", snr / gamma - 1.0),
        });
    }
    Ok(Report {
        suite: Suite::Snr,
        params: vec![
            ("n_s".into(), n_s.to_string()),
            ("n_b".into(), n_b.to_string()),
            ("seed".into(), seed.to_string()),
            ("draws".into(), draws.to_string()),
        ],
        checks,
    })
}

/// Metric before and after a random symplectic map and displacement.
fn metric_invariance(o: &VerifyOptions) -> Result<Report> {
    let seed = o.seed.unwrap_or(7);
    let draws = o.draws.unwrap_or(100);
    let tol = o.tol.unwrap_or(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(draws);
    for _ in 0..draws {
        let n = rng.gen_range(1..4);
        let (mean, cov) = random_state::<f64, _>(&mut rng, n, 2.0, 0.8, 1.5).into_parts();
        // Keep every symplectic eigenvalue away from 1, where some terms diverge.
        let state = GaussianState::new(mean, cov + DMatrix::identity(2 * n, 2 * n) * 0.05)?;
        let a = DMatrix::from_fn(2 * n, 2 * n, |_, _| rng.gen_range(-1.0..1.0));
        let d_mean = DVector::from_fn(2 * n, |_, _| rng.gen_range(-1.0..1.0));
        let tangent = TangentVector::new(d_mean, (&a + a.transpose()) * 0.5)?;
        let s = random_symplectic::<f64, _>(&mut rng, n, 0.6);
        let shift = DVector::from_fn(2 * n, |_, _| rng.gen_range(-2.0..2.0));
        cases.push((state, tangent, s, shift));
    }
    let fs = [
        ("f_col", MonotoneFunction::collective()),
        ("f_loc", MonotoneFunction::local()),
    ];
    let checks = cases
        .par_iter()
        .enumerate()
        .map(|(k, (state, tangent, s, shift))| {
            let moved = state
                .apply(&ChannelSpec::Symplectic(s.clone()))?
                .apply(&ChannelSpec::Displacement(shift.clone()))?;
            let t_moved = tangent.transformed(s);
            fs.iter()
                .map(|(name, f)| {
                    let before = metric_general(state, f, tangent)?;
                    let after = metric_general(&moved, f, &t_moved)?;
                    Ok(Check {
                        label: format!("draw[{k}] {name}"),
                        error: rel_err(before, after),
                        tolerance: tol,
                        detail: format!(
                            "modes={} before={before:.12e} after={after:.12e}",
                            state.n_modes()
                        ),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(Report {
        suite: Suite::MetricInvariance,
        params: vec![
            ("seed".into(), seed.to_string()),
            ("draws".into(), draws.to_string()),
        ],
        checks,
    })
}

/// The constrained probe search lands on the TMSV point `ζ_s = r = 0`.
fn optimal_probe(o: &VerifyOptions) -> Result<Report> {
    let n_s = o.ns.unwrap_or(0.01);
    let n_b = o.nb.unwrap_or(625.0);
    let tol = o.tol.unwrap_or(1e-4);
    let fs = [
        ("f_col", MonotoneFunction::collective()),
        ("f_loc", MonotoneFunction::local()),
    ];
    let mut checks = Vec::new();
    for (name, f) in &fs {
        let opt = probe_search(n_s, n_b, f)?;
        let detail = format!(
            "zeta={:.8} objective={:.10e} tmsv_objective={:.10e}",
            opt.params.zeta, opt.objective, opt.tmsv_objective
        );
        checks.push(Check {
            label: format!("{name} |zeta_s|"),
            error: opt.params.zeta_s.abs(),
            tolerance: tol,
            detail: detail.clone(),
        });
        checks.push(Check {
            label: format!("{name} |r|"),
            error: opt.params.r.abs(),
            tolerance: tol,
            detail,
        });
    }
    Ok(Report {
        suite: Suite::OptimalProbe,
        params: vec![
            ("n_s".into(), n_s.to_string()),
            ("n_b".into(), n_b.to_string()),
        ],
        checks,
    })
}
