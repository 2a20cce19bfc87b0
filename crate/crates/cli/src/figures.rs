//! Figure data tables. Defaults reproduce the published parameter sets;
//! every field can be overridden.

use std::fmt;
use std::str::FromStr;

use gqi_core::qi::{
    classify_correlations, idler_squeeze_sweep, memory_advantage_grid, signal_op_sweep,
    threshold_curves, CorrelationGrid, SignalOp,
};
use gqi_core::{coherent_benchmark, tmsv_decay, DecayConstants};

use crate::error::{CliError, Result};
use crate::table::SweepTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureName {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl FigureName {
    pub const ALL: [FigureName; 5] = [Self::Fig2, Self::Fig3, Self::Fig4, Self::Fig5, Self::Fig6];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Fig6 => "fig6",
        }
    }

    /// Override flags the figure accepts.
    fn accepts(self) -> &'static [&'static str] {
        match self {
            Self::Fig2 => &["ns", "nb", "kappa", "points", "max"],
            Self::Fig3 => &["ns", "nb", "kappa", "nl", "eta", "points", "max"],
            Self::Fig4 => &["ns", "nb", "nl", "points", "max"],
            Self::Fig5 => &["ns", "nl", "points", "max"],
            Self::Fig6 => &["ns", "ni", "nb", "points"],
        }
    }
}

impl fmt::Display for FigureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| CliError::Invalid(format!("unknown figure {s:?}; expected fig2..fig6")))
    }
}

/// Optional overrides. `ns` and `nl` are lists because fig5 sweeps a set
/// of signal photon numbers and fig3/fig4 a set of memory noises.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FigureOptions {
    pub ns: Option<Vec<f64>>,
    pub ni: Option<f64>,
    pub nb: Option<f64>,
    pub kappa: Option<f64>,
    pub nl: Option<Vec<f64>>,
    pub eta: Option<Vec<f64>>,
    /// Points along the swept axis (the `r` axis for fig4, each axis for fig6).
    pub points: Option<usize>,
    /// Upper end of the swept axis.
    pub max: Option<f64>,
}

impl FigureOptions {
    fn given(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        let mut mark = |set: bool, name| {
            if set {
                v.push(name)
            }
        };
        mark(self.ns.is_some(), "ns");
        mark(self.ni.is_some(), "ni");
        mark(self.nb.is_some(), "nb");
        mark(self.kappa.is_some(), "kappa");
        mark(self.nl.is_some(), "nl");
        mark(self.eta.is_some(), "eta");
        mark(self.points.is_some(), "points");
        mark(self.max.is_some(), "max");
        v
    }

    fn single_ns(&self, default: f64) -> Result<f64> {
        match self.ns.as_deref() {
            None => Ok(default),
            Some([x]) => Ok(*x),
            Some(v) => Err(CliError::Invalid(format!(
                "this figure takes one --ns value, got {}",
                v.len()
            ))),
        }
    }
}

pub const DEFAULT_NS: f64 = 0.01;
pub const DEFAULT_NB: f64 = 625.0;
pub const DEFAULT_KAPPA: f64 = 0.01;
/// Memory noise of a 10 GHz mode at 40 mK, 400 mK and 4 K.
pub const DEFAULT_NL: [f64; 3] = [0.0, 0.43, 7.84];

/// `points` values from `lo` to `hi` with exact end points.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let m = (points - 1) as f64;
    (0..points)
        .map(|k| (lo * (m - k as f64) + hi * k as f64) / m)
        .collect()
}

fn grid_spec(lo: f64, hi: f64, points: usize) -> String {
    format!("linspace({lo},{hi},{points})")
}

fn list(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn check_points(points: usize, min: usize) -> Result<usize> {
    if points < min {
        return Err(CliError::Invalid(format!(
            "need at least {min} grid points, got {points}"
        )));
    }
    Ok(points)
}

fn check_max(max: f64) -> Result<f64> {
    if !(max > 0.0) || !max.is_finite() {
        return Err(CliError::Invalid(format!(
            "grid end must be positive and finite, got {max}"
        )));
    }
    Ok(max)
}

pub fn figure_table(name: FigureName, opts: &FigureOptions) -> Result<SweepTable> {
    let accepted = name.accepts();
    if let Some(bad) = opts.given().into_iter().find(|f| !accepted.contains(f)) {
        return Err(CliError::Invalid(format!(
            "--{bad} does not apply to {name}"
        )));
    }
    let table = match name {
        FigureName::Fig2 => fig2(opts),
        FigureName::Fig3 => fig3(opts),
        FigureName::Fig4 => fig4(opts),
        FigureName::Fig5 => fig5(opts),
        FigureName::Fig6 => fig6(opts),
    }?;
    table.validate()?;
    Ok(table)
}

fn split(rows: &[DecayConstants<f64>], base: DecayConstants<f64>) -> (Vec<f64>, Vec<f64>) {
    rows.iter()
        .map(|g| (g.gamma_col / base.gamma_col, g.gamma_loc / base.gamma_loc))
        .unzip()
}

/// TMSV with extra signal photons from a larger source, a displacement or
/// a signal squeezer, relative to the TMSV at `ns`.
fn fig2(o: &FigureOptions) -> Result<SweepTable> {
    let n_s = o.single_ns(DEFAULT_NS)?;
    let n_b = o.nb.unwrap_or(DEFAULT_NB);
    let kappa = o.kappa.unwrap_or(DEFAULT_KAPPA);
    let points = check_points(o.points.unwrap_or(51), 2)?;
    let max = check_max(o.max.unwrap_or(0.1))?;
    let grid = linspace(0.0, max, points);
    let base = tmsv_decay(n_s, n_b, kappa)?;
    let bigger: Vec<_> = grid
        .iter()
        .map(|&dn| tmsv_decay(n_s + dn, n_b, kappa))
        .collect::<gqi_core::Result<_>>()?;
    let displaced: Vec<_> = signal_op_sweep(n_s, n_b, kappa, &grid, SignalOp::Displace)?
        .into_iter()
        .map(|r| r.gamma)
        .collect();
    let squeezed: Vec<_> = signal_op_sweep(n_s, n_b, kappa, &grid, SignalOp::Squeeze)?
        .into_iter()
        .map(|r| r.gamma)
        .collect();
    let (tc, tl) = split(&bigger, base);
    let (dc, dl) = split(&displaced, base);
    let (sc, sl) = split(&squeezed, base);
    Ok(SweepTable::new("fig2")
        .meta("n_s", n_s)
        .meta("n_b", n_b)
        .meta("kappa", kappa)
        .meta("delta_n", grid_spec(0.0, max, points))
        .meta("normalization", "tmsv(n_s)")
        .real("delta_n", grid)
        .real("tmsv_col", tc)
        .real("tmsv_loc", tl)
        .real("displaced_col", dc)
        .real("displaced_loc", dl)
        .real("squeezed_col", sc)
        .real("squeezed_loc", sl))
}

/// Idler squeezing ahead of a lossy, noisy memory, relative to the TMSV at
/// `ns`, with the coherent benchmark as a reference line.
fn fig3(o: &FigureOptions) -> Result<SweepTable> {
    let n_s = o.single_ns(DEFAULT_NS)?;
    let n_b = o.nb.unwrap_or(DEFAULT_NB);
    let kappa = o.kappa.unwrap_or(DEFAULT_KAPPA);
    let etas = o.eta.clone().unwrap_or_else(|| vec![0.9, 0.1]);
    let n_ls = o.nl.clone().unwrap_or_else(|| DEFAULT_NL.to_vec());
    let points = check_points(o.points.unwrap_or(61), 2)?;
    let max = check_max(o.max.unwrap_or(3.0))?;
    let grid = linspace(0.0, max, points);
    let base = tmsv_decay(n_s, n_b, kappa)?;
    let coherent = coherent_benchmark(n_s, n_b, kappa)?;
    let mut cols: [Vec<f64>; 7] = Default::default();
    for &eta in &etas {
        for &n_l in &n_ls {
            for row in idler_squeeze_sweep(n_s, n_b, kappa, eta, n_l, &grid)? {
                let vals = [
                    eta,
                    n_l,
                    row.zeta_i,
                    row.gamma.gamma_col / base.gamma_col,
                    row.gamma.gamma_loc / base.gamma_loc,
                    coherent.gamma_col / base.gamma_col,
                    coherent.gamma_loc / base.gamma_loc,
                ];
                for (c, v) in cols.iter_mut().zip(vals) {
                    c.push(v);
                }
            }
        }
    }
    let [c0, c1, c2, c3, c4, c5, c6] = cols;
    Ok(SweepTable::new("fig3")
        .meta("n_s", n_s)
        .meta("n_b", n_b)
        .meta("kappa", kappa)
        .meta("eta", list(&etas))
        .meta("n_l", list(&n_ls))
        .meta("zeta_i", grid_spec(0.0, max, points))
        .meta("normalization", "tmsv(n_s)")
        .real("eta", c0)
        .real("n_l", c1)
        .real("zeta_i", c2)
        .real("gamma_col", c3)
        .real("gamma_loc", c4)
        .real("coherent_col", c5)
        .real("coherent_loc", c6))
}

/// Advantage of a signal-displaced TMSV over `(r, eta)` for each memory noise.
fn fig4(o: &FigureOptions) -> Result<SweepTable> {
    let n_s = o.single_ns(DEFAULT_NS)?;
    let n_b = o.nb.unwrap_or(DEFAULT_NB);
    let n_ls = o.nl.clone().unwrap_or_else(|| DEFAULT_NL.to_vec());
    let points = check_points(o.points.unwrap_or(26), 2)?;
    let max = check_max(o.max.unwrap_or(0.5))?;
    let r_grid = linspace(0.0, max, points);
    let eta_grid = linspace(0.0, 1.0, 21);
    let mut cols: [Vec<f64>; 5] = Default::default();
    for &n_l in &n_ls {
        for row in memory_advantage_grid(n_s, n_b, n_l, &r_grid, &eta_grid)? {
            for (c, v) in
                cols.iter_mut()
                    .zip([n_l, row.r, row.eta, row.advantage.col, row.advantage.loc])
            {
                c.push(v);
            }
        }
    }
    let [c0, c1, c2, c3, c4] = cols;
    Ok(SweepTable::new("fig4")
        .meta("n_s", n_s)
        .meta("n_b", n_b)
        .meta("n_l", list(&n_ls))
        .meta("r", grid_spec(0.0, max, points))
        .meta("eta", grid_spec(0.0, 1.0, 21))
        .real("n_l", c0)
        .real("r", c1)
        .real("eta", c2)
        .real("qa_col", c3)
        .real("qa_loc", c4))
}

/// Large-background memory transmittivity needed for an advantage.
fn fig5(o: &FigureOptions) -> Result<SweepTable> {
    if o.nl.is_some() {
        return Err(CliError::Invalid(
            "fig5 sweeps n_l; set its range with --max and --points".into(),
        ));
    }
    let n_s_set = o.ns.clone().unwrap_or_else(|| vec![0.01, 0.1, 1.0]);
    let points = check_points(o.points.unwrap_or(1001), 2)?;
    let max = check_max(o.max.unwrap_or(10.0))?;
    let grid = linspace(0.0, max, points);
    let rows = threshold_curves(&grid, &n_s_set)?;
    Ok(SweepTable::new("fig5")
        .meta("n_s", list(&n_s_set))
        .meta("n_b", "inf")
        .meta("n_l", grid_spec(0.0, max, points))
        .real("n_l", rows.iter().map(|r| r.n_l).collect())
        .real("n_s", rows.iter().map(|r| r.n_s).collect())
        .real("eta_loc", rows.iter().map(|r| r.eta_loc).collect())
        .real("eta_col", rows.iter().map(|r| r.eta_col).collect()))
}

/// Region labels and advantages over the correlation plane `(a13, a24)`.
fn fig6(o: &FigureOptions) -> Result<SweepTable> {
    let n_s = o.single_ns(DEFAULT_NS)?;
    let n_i = o.ni.unwrap_or(n_s);
    let n_b = o.nb.unwrap_or(DEFAULT_NB);
    let points = check_points(o.points.unwrap_or(61), 2)?;
    let c = classify_correlations(
        n_s,
        n_i,
        n_b,
        CorrelationGrid {
            points,
            extent: None,
        },
    )?;
    Ok(SweepTable::new("fig6")
        .meta("n_s", n_s)
        .meta("n_i", n_i)
        .meta("n_b", n_b)
        .meta("a13", grid_spec(-c.extent, c.extent, points))
        .meta("a24", grid_spec(-c.extent, c.extent, points))
        .real("a13", c.points.iter().map(|p| p.a13).collect())
        .real("a24", c.points.iter().map(|p| p.a24).collect())
        .label(
            "label",
            c.points
                .iter()
                .map(|p| p.label.as_str().to_string())
                .collect(),
        )
        .real("qa_col", c.points.iter().map(|p| p.advantage.col).collect())
        .real("qa_loc", c.points.iter().map(|p| p.advantage.loc).collect()))
}
