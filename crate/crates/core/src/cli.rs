//! Command-line front end.
//!
//! Exit codes: 0 success, 1 check failed or no convention matched, 2 usage
//! error, 3 I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::cavity::{self, CavityParams};
use crate::circuit::{closed_form_amplitudes, crosscheck, success_probability};
use crate::components::{ClonerModel, ControlState, TargetState};
use crate::defaults::{select_pin, PinnedDefaults};
use crate::error::Error;
use crate::fidelity::{
    convention_search_with, AveragingMethod, AveragingSpec, FidelityConvention, GateModel, Measure,
};
use crate::sweep::{
    axis, regime_classify, run_sweep_with, write_csv, write_heatmap, AxisScale, Execution, SweepConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Environment variable capping the worker count of parallel sweeps.
pub const THREADS_ENV: &str = "CNOTSIM_THREADS";

#[derive(Debug, Parser)]
#[command(name = "cnot-cavity-sim", version, about = "Compact photonic CNOT gate simulator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficients, success probabilities and average fidelity at one point.
    Point(PointArgs),
    /// Average fidelity over a (κ_s/κ, g/κ) grid, written as CSV and optionally PGM.
    Sweep(SweepArgs),
    /// Rank all fidelity conventions against a target value.
    Conventions(ConventionArgs),
    /// Compare the staged pipeline with the closed-form output on random inputs.
    Crosscheck(CrosscheckArgs),
    /// Classify the coupling regime of a parameter point.
    Regime(RegimeArgs),
}

#[derive(Debug, Args)]
struct CavityArgs {
    /// Side leakage κ_s/κ.
    #[arg(long, default_value_t = 0.01, value_parser = positive_ratio)]
    ks_ratio: f64,
    /// Coupling strength g/κ.
    #[arg(long, default_value_t = 0.01, value_parser = positive_ratio)]
    g_ratio: f64,
    /// Dipole decay ρ/κ.
    #[arg(long, default_value_t = 0.1, value_parser = positive_ratio)]
    rho_ratio: f64,
    /// Cloner fidelity F_UC in (0, 1].
    #[arg(long, default_value_t = ClonerModel::OPTIMAL_FIDELITY, value_parser = cloner_fidelity)]
    f_uc: f64,
}

impl CavityArgs {
    fn params(&self) -> CavityParams {
        CavityParams::from_ratios(self.ks_ratio, self.g_ratio, self.rho_ratio)
    }

    fn cloner(&self) -> ClonerModel {
        ClonerModel::new(self.f_uc).expect("validated by the parser")
    }
}

#[derive(Debug, Args)]
struct AveragingArgs {
    /// Averaging method: quadrature or monte_carlo.
    #[arg(long = "avg", default_value = "quadrature", value_parser = averaging_method)]
    method: AveragingMethod,
    /// Quadrature points per angle (≥ 8).
    #[arg(long, default_value_t = 64)]
    points: usize,
    /// Monte Carlo samples (≥ 1000).
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl AveragingArgs {
    fn spec(&self) -> Result<AveragingSpec, String> {
        let spec = AveragingSpec {
            method: self.method,
            quadrature_points: self.points,
            mc_samples: self.samples,
            seed: self.seed,
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
struct ConventionChoice {
    /// Fidelity convention, e.g. flipboth/aswritten/raw/uniform. Defaults to the pinned one.
    #[arg(long, value_parser = convention)]
    convention: Option<FidelityConvention>,
    /// Pinned-defaults file to read the default convention from.
    #[arg(long)]
    defaults: Option<PathBuf>,
}

impl ConventionChoice {
    fn resolve(&self) -> Result<FidelityConvention, (i32, String)> {
        if let Some(c) = self.convention {
            return Ok(c);
        }
        let pinned = match &self.defaults {
            Some(path) => PinnedDefaults::load(path).map_err(|e| match e {
                Error::Io { .. } => (EXIT_IO, e.to_string()),
                other => (EXIT_USAGE, other.to_string()),
            })?,
            None => PinnedDefaults::embedded(),
        };
        pinned.convention().map_err(|e| (EXIT_USAGE, e.to_string()))
    }
}

#[derive(Debug, Args)]
struct PointArgs {
    #[command(flatten)]
    cavity: CavityArgs,
    #[command(flatten)]
    choice: ConventionChoice,
    #[command(flatten)]
    averaging: AveragingArgs,
    /// Decimal places for fidelities.
    #[arg(long, default_value_t = 4)]
    precision: usize,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 0.01, value_parser = positive_ratio)]
    ks_min: f64,
    #[arg(long, default_value_t = 3.0, value_parser = positive_ratio)]
    ks_max: f64,
    #[arg(long, default_value_t = 60)]
    ks_count: usize,
    /// lin or log
    #[arg(long, default_value = "log", value_parser = axis_scale)]
    ks_scale: AxisScale,
    #[arg(long, default_value_t = 0.01, value_parser = positive_ratio)]
    g_min: f64,
    #[arg(long, default_value_t = 3.0, value_parser = positive_ratio)]
    g_max: f64,
    #[arg(long, default_value_t = 60)]
    g_count: usize,
    #[arg(long, default_value = "log", value_parser = axis_scale)]
    g_scale: AxisScale,
    #[arg(long, default_value_t = 0.1, value_parser = positive_ratio)]
    rho_ratio: f64,
    #[arg(long, default_value_t = ClonerModel::OPTIMAL_FIDELITY, value_parser = cloner_fidelity)]
    f_uc: f64,
    #[command(flatten)]
    choice: ConventionChoice,
    #[command(flatten)]
    averaging: AveragingArgs,
    /// CSV output path.
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
    /// Optional plain-PGM heatmap path.
    #[arg(long)]
    pgm: Option<PathBuf>,
    /// Evaluate cells on a single worker.
    #[arg(long)]
    serial: bool,
    #[arg(long, default_value_t = 4)]
    precision: usize,
}

#[derive(Debug, Args)]
struct ConventionArgs {
    #[command(flatten)]
    cavity: CavityArgs,
    /// Fidelity value to match.
    #[arg(long, default_value_t = 0.9043)]
    target: f64,
    /// Maximum |value − target| for a match.
    #[arg(long, default_value_t = 0.005)]
    tol: f64,
    /// Quadrature points per angle.
    #[arg(long, default_value_t = 64)]
    points: usize,
    /// Write the best matching convention to this defaults file.
    #[arg(long)]
    pin: Option<PathBuf>,
    /// Input measure the pinned convention must use.
    #[arg(long, default_value = "uniform", value_parser = measure)]
    pin_measure: Measure,
    #[arg(long, default_value_t = 4)]
    precision: usize,
}

#[derive(Debug, Args)]
struct CrosscheckArgs {
    /// Random inputs per parameter set.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Parameter sets; the first is always the reference point.
    #[arg(long, default_value_t = 20)]
    param_sets: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct RegimeArgs {
    #[arg(long, value_parser = non_negative_ratio)]
    ks_ratio: f64,
    #[arg(long, value_parser = non_negative_ratio)]
    g_ratio: f64,
}

fn positive_ratio(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("rate ratios must be finite and > 0 (got {v})"));
    }
    Ok(v)
}

fn non_negative_ratio(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(format!("rate ratios must be finite and ≥ 0 (got {v})"));
    }
    Ok(v)
}

fn cloner_fidelity(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    ClonerModel::new(v)
        .map(|c| c.fidelity())
        .map_err(|_| format!("f-uc must lie in (0, 1] (got {v})"))
}

fn convention(s: &str) -> Result<FidelityConvention, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn averaging_method(s: &str) -> Result<AveragingMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn axis_scale(s: &str) -> Result<AxisScale, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn measure(s: &str) -> Result<Measure, String> {
    Measure::ALL
        .iter()
        .find(|m| m.token() == s)
        .copied()
        .ok_or_else(|| format!("measure must be one of: uniform, haar, basis (got `{s}`)"))
}

fn fmt_complex(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

/// Parses `args` (including the program name) and runs the subcommand,
/// writing to `out`/`err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Point(a) => cmd_point(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Conventions(a) => cmd_conventions(&a, out),
        Command::Crosscheck(a) => cmd_crosscheck(&a, out),
        Command::Regime(a) => cmd_regime(&a, out),
    };
    match result {
        Ok(code) => code,
        Err((code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

type CmdResult = Result<i32, (i32, String)>;

fn usage(e: impl ToString) -> (i32, String) {
    (EXIT_USAGE, e.to_string())
}

fn io_err(e: impl ToString) -> (i32, String) {
    (EXIT_IO, e.to_string())
}

fn cmd_point(a: &PointArgs, out: &mut dyn Write) -> CmdResult {
    let convention = a.choice.resolve()?;
    let avg = a.averaging.spec().map_err(usage)?;
    let params = a.cavity.params();
    let cloner = a.cavity.cloner();
    let model = GateModel::new(&params, cloner).map_err(usage)?;
    let k = model.coeffs;
    let p = a.precision;
    let mut lines = vec![
        format!(
            "params ks_ratio={} g_ratio={} rho_ratio={} f_uc={}",
            a.cavity.ks_ratio, a.cavity.g_ratio, a.cavity.rho_ratio, a.cavity.f_uc
        ),
        format!(
            "cavity t0={} r0={} t1={} r1={}",
            fmt_complex(k.t0),
            fmt_complex(k.r0),
            fmt_complex(k.t1),
            fmt_complex(k.r1)
        ),
        format!("regime={}", regime_classify(&params)),
    ];
    for (cn, control) in [("R", ControlState::r()), ("L", ControlState::l())] {
        for (tn, target) in [("R", TargetState::r()), ("L", TargetState::l())] {
            let state = closed_form_amplitudes(&control, &target, &k, &cloner);
            lines.push(format!(
                "success_probability control={cn} target={tn} value={:.6}",
                success_probability(&state)
            ));
        }
    }
    lines.push(format!("convention={convention}"));
    let estimate = model.average(&convention, &avg).map_err(usage)?;
    lines.push(match estimate.std_error {
        Some(se) => format!(
            "avg_fidelity={:.p$} std_error={:.p$} method=monte_carlo samples={} seed={}",
            estimate.value, se, avg.mc_samples, avg.seed
        ),
        None => format!(
            "avg_fidelity={:.p$} method=quadrature points={}",
            estimate.value, avg.quadrature_points
        ),
    });
    for line in lines {
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn worker_threads() -> Result<Option<usize>, (i32, String)> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(usage(format!("{THREADS_ENV} must be a positive integer (got `{v}`)"))),
        },
        Err(_) => Ok(None),
    }
}

fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> CmdResult {
    let convention = a.choice.resolve()?;
    let averaging = a.averaging.spec().map_err(usage)?;
    let config = SweepConfig {
        ks_ratio_axis: axis(a.ks_min, a.ks_max, a.ks_count, a.ks_scale).map_err(usage)?,
        g_ratio_axis: axis(a.g_min, a.g_max, a.g_count, a.g_scale).map_err(usage)?,
        rho_ratio: a.rho_ratio,
        f_uc: a.f_uc,
        convention,
        averaging,
    };
    let execution = if a.serial {
        Execution::Serial
    } else {
        Execution::Parallel {
            threads: worker_threads()?,
        }
    };
    let grid = run_sweep_with(&config, execution).map_err(usage)?;
    write_csv(&grid, &a.out).map_err(io_err)?;
    if let Some(pgm) = &a.pgm {
        write_heatmap(&grid, pgm).map_err(io_err)?;
    }
    let m = grid.argmax;
    let p = a.precision;
    writeln!(out, "max={:.p$} at ks={} g={} regime={}", m.value, m.ks_ratio, m.g_ratio, m.regime)
        .map_err(io_err)?;
    writeln!(out, "wrote {}", a.out.display()).map_err(io_err)?;
    if let Some(pgm) = &a.pgm {
        writeln!(out, "wrote {}", pgm.display()).map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_conventions(a: &ConventionArgs, out: &mut dyn Write) -> CmdResult {
    let params = a.cavity.params();
    let cloner = a.cavity.cloner();
    let avg = AveragingSpec::quadrature(a.points);
    let scores = convention_search_with(&params, &cloner, a.target, a.tol, &avg).map_err(usage)?;
    let p = a.precision;
    writeln!(out, "rank  convention                        value      deviation  match").map_err(io_err)?;
    for (rank, s) in scores.iter().enumerate() {
        writeln!(
            out,
            "{:<5} {:<33} {:<10.p$} {:<10.p$} {}",
            rank + 1,
            s.convention.to_string(),
            s.value,
            s.deviation,
            if s.flagged { "*" } else { "" }
        )
        .map_err(io_err)?;
    }
    let matches = scores.iter().filter(|s| s.flagged).count();
    writeln!(out, "matches={matches} target={} tol={}", a.target, a.tol).map_err(io_err)?;
    if let Some(path) = &a.pin {
        let Some(best) = select_pin(&scores, a.pin_measure) else {
            writeln!(out, "nothing to pin: no match uses the {} measure", a.pin_measure.token())
                .map_err(io_err)?;
            return Ok(EXIT_CHECK_FAILED);
        };
        let pinned = PinnedDefaults {
            convention: best.convention.to_string(),
            value: best.value,
            target: a.target,
            tol: a.tol,
            ks_ratio: a.cavity.ks_ratio,
            g_ratio: a.cavity.g_ratio,
            rho_ratio: a.cavity.rho_ratio,
            f_uc: a.cavity.f_uc,
            quadrature_points: a.points,
        };
        pinned.write(path).map_err(io_err)?;
        writeln!(out, "pinned {} to {}", best.convention, path.display()).map_err(io_err)?;
    }
    Ok(if matches > 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_crosscheck(a: &CrosscheckArgs, out: &mut dyn Write) -> CmdResult {
    const TOLERANCE: f64 = 1e-12;
    if a.trials == 0 || a.param_sets == 0 {
        return Err(usage("--trials and --param-sets must be positive"));
    }
    let report = crosscheck(a.trials, a.param_sets, a.seed).map_err(usage)?;
    writeln!(
        out,
        "trials={} param_sets={} seed={} max_deviation={:e}",
        report.trials, report.param_sets, a.seed, report.max_deviation
    )
    .map_err(io_err)?;
    if report.max_deviation < TOLERANCE {
        writeln!(out, "status=ok").map_err(io_err)?;
        return Ok(EXIT_OK);
    }
    if let Some(w) = &report.worst {
        writeln!(
            out,
            "failing input control=({}, {}) target=({}, {}) params={:?} f_uc={}",
            fmt_complex(w.control.a_r),
            fmt_complex(w.control.a_l),
            fmt_complex(w.target.a_r),
            fmt_complex(w.target.a_l),
            w.params,
            w.f_uc
        )
        .map_err(io_err)?;
    }
    writeln!(out, "status=failed").map_err(io_err)?;
    Ok(EXIT_CHECK_FAILED)
}

fn cmd_regime(a: &RegimeArgs, out: &mut dyn Write) -> CmdResult {
    let params = CavityParams::from_ratios(a.ks_ratio, a.g_ratio, 0.1);
    cavity::coefficients(&params).map_err(usage)?;
    writeln!(
        out,
        "regime={} threshold={}",
        regime_classify(&params),
        (params.kappa_s + params.kappa) / 4.0
    )
    .map_err(io_err)?;
    Ok(EXIT_OK)
}
