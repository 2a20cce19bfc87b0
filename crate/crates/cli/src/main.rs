use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gqi_cli::decay::{decay_table, DecayRequest, ProbeKind};
use gqi_cli::figures::{figure_table, FigureName, FigureOptions};
use gqi_cli::verify::{self, Suite, VerifyOptions};
use gqi_cli::{CliError, Format, Result};

/// Decay constants of Gaussian quantum illumination, figure data and
/// Fock-space verification.
#[derive(Parser)]
#[command(name = "gqi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decay constants and quantum advantage of one probe.
    #[command(allow_negative_numbers = true)]
    Decay(DecayArgs),
    /// Data behind one of the figures (fig2..fig6).
    #[command(allow_negative_numbers = true)]
    Figure(FigureArgs),
    /// Run a verification suite; exits 1 if any check fails.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProbeArg {
    Tmsv,
    Coherent,
    CustomJson,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecayArgs {
    #[arg(long, value_enum)]
    probe: ProbeArg,
    /// Signal photon number (tmsv, coherent).
    #[arg(long)]
    ns: Option<f64>,
    /// JSON state `{n_modes, mean, cov}` (custom-json).
    #[arg(long)]
    state: Option<PathBuf>,
    /// Background photon number.
    #[arg(long)]
    nb: f64,
    /// Target reflectivity.
    #[arg(long, default_value_t = 0.01)]
    kappa: f64,
    /// Idler memory transmittivity.
    #[arg(long)]
    eta: Option<f64>,
    /// Idler memory noise photons; needs --eta.
    #[arg(long)]
    nl: Option<f64>,
    /// Signal displacement along x.
    #[arg(long, default_value_t = 0.0)]
    displace: f64,
    /// Signal squeezing, applied before the displacement.
    #[arg(long, default_value_t = 0.0)]
    squeeze_signal: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct FigureArgs {
    /// fig2, fig3, fig4, fig5 or fig6.
    name: String,
    /// Signal photon number; a comma list for fig5.
    #[arg(long, value_delimiter = ',')]
    ns: Option<Vec<f64>>,
    /// Idler photon number (fig6).
    #[arg(long)]
    ni: Option<f64>,
    #[arg(long)]
    nb: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    /// Memory noise values, comma separated.
    #[arg(long, value_delimiter = ',')]
    nl: Option<Vec<f64>>,
    /// Memory transmittivities, comma separated (fig3).
    #[arg(long, value_delimiter = ',')]
    eta: Option<Vec<f64>>,
    /// Points along the swept axis.
    #[arg(long)]
    points: Option<usize>,
    /// Upper end of the swept axis.
    #[arg(long)]
    max: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    /// chernoff, snr, metric-invariance or optimal-probe.
    suite: String,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    ns: Option<f64>,
    #[arg(long)]
    nb: Option<f64>,
    /// Fock cutoff per probe mode.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Fock cutoff of the returned signal and background.
    #[arg(long)]
    out_cutoff: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random draws.
    #[arg(long)]
    draws: Option<usize>,
    /// Tolerance on each measured error.
    #[arg(long)]
    tol: Option<f64>,
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("GQI_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Invalid(format!(
            "GQI_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("cannot size the thread pool: {e}")))
}

fn decay(a: DecayArgs) -> Result<ExitCode> {
    let probe = match a.probe {
        ProbeArg::Tmsv => ProbeKind::Tmsv,
        ProbeArg::Coherent => ProbeKind::Coherent,
        ProbeArg::CustomJson => ProbeKind::CustomJson,
    };
    let req = DecayRequest {
        probe,
        n_s: a.ns,
        state: a.state,
        n_b: a.nb,
        kappa: a.kappa,
        eta: a.eta,
        n_l: a.nl,
        displace: a.displace,
        squeeze_signal: a.squeeze_signal,
    };
    let (table, warnings) = decay_table(&req)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    emit(&table.render(a.output.format.into())?, &a.output.out)?;
    Ok(ExitCode::SUCCESS)
}

fn figure(a: FigureArgs) -> Result<ExitCode> {
    let name: FigureName = a.name.parse()?;
    let opts = FigureOptions {
        ns: a.ns,
        ni: a.ni,
        nb: a.nb,
        kappa: a.kappa,
        nl: a.nl,
        eta: a.eta,
        points: a.points,
        max: a.max,
    };
    let table = figure_table(name, &opts)?;
    emit(&table.render(a.output.format.into())?, &a.output.out)?;
    Ok(ExitCode::SUCCESS)
}

fn run_verify(a: VerifyArgs) -> Result<ExitCode> {
    let suite: Suite = a.suite.parse()?;
    let opts = VerifyOptions {
        kappa: a.kappa,
        ns: a.ns,
        nb: a.nb,
        cutoff: a.cutoff,
        out_cutoff: a.out_cutoff,
        seed: a.seed,
        draws: a.draws,
        tol: a.tol,
    };
    let report = verify::run(suite, &opts)?;
    print!("{}", report.render());
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Decay(a) => decay(a),
        Command::Figure(a) => figure(a),
        Command::Verify(a) => run_verify(a),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
