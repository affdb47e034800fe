//! Command-line surface: run a simulation, verify the linear propagation
//! against direct semigroup exponentials, fit decay exponents from a series,
//! dump per-block dyadic norms of a snapshot, and re-verify a persisted
//! series.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_config, RunConfig};
use crate::diagnostics::{self, energy_inequality_check, fit_decay, update_trackers};
use crate::error::{Error, Result};
use crate::integrator::{self, linear_defect_against};
use crate::lp::FilterBank;
use crate::model::ModelState;
use crate::propagator::{Propagators, PropagatorTable};
use crate::snapshot::read_snapshot;

/// Exit status used when a run blows up.
pub const EXIT_BLOWUP: i32 = 2;
/// Exit status for usage and configuration errors.
pub const EXIT_USAGE: i32 = 64;
/// Exit status for I/O and malformed input files.
pub const EXIT_IO: i32 = 74;

/// Threshold of the linear semigroup verification.
pub const LINEAR_VERIFY_TOL: f64 = 1e-8;
/// Energy-inequality tolerance coefficient: `1e-6 * E_sigma(0) / dt`.
pub const INEQUALITY_COEFF: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "odhl",
    about = "Pseudo-spectral decay-rate laboratory for 2-D compressible Oldroyd-B and Hall-MHD flows",
    long_about = "Simulates the two systems on a periodic box with exact per-mode linear \
                  propagation, records harmonic-analysis diagnostics (energy functionals, \
                  dyadic/Besov block norms, shrinking-ball low-frequency energies, running \
                  sup-trackers) and fits algebraic decay exponents from the series.\n\n\
                  Config keys (INI sections or dotted keys): model {oldroyd|hallmhd}; \
                  grid.n, grid.L; time.dt, time.t_end, time.stride (default 1); \
                  params.gamma (1.5), params.b (0), params.eta (0.01), params.c2 (1.0), \
                  params.hall {on|off}; ic.seed (1), ic.amplitude (1e-2), ic.cutoff (1.0), \
                  ic.tail_exponent (4.0); output.dir (out); run.nonlinear {on|off}; \
                  fit.windows (t0:t1[, t0:t1 ...]).\n\n\
                  Exit codes: 0 success, 2 solver blow-up, 64 usage/config, 74 I/O."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured simulation; writes series.csv, snapshots and a
    /// config copy into output.dir.
    Run(RunArgs),
    /// Advance the linear flow and compare every mode against the direct
    /// matrix exponential of the total time; exit 0 iff the worst relative
    /// error is at most 1e-8.
    LinearVerify(RunArgs),
    /// Least-squares decay exponent of one column over a window.
    Fit(FitArgs),
    /// Per-block dyadic norms of a snapshot.
    Lp(LpArgs),
    /// Re-verify a persisted series: recompute sup-trackers and check the
    /// discrete energy inequality.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the INI configuration.
    config: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    /// series.csv produced by `run`.
    series: PathBuf,
    /// Column to fit; besides the schema columns, the derived names
    /// l2_rho_u and l2_state are accepted.
    #[arg(long)]
    column: String,
    /// Fit window formatted t0:t1.
    #[arg(long)]
    window: String,
}

#[derive(Args)]
struct LpArgs {
    /// Snapshot file written by `run`.
    snapshot: PathBuf,
    /// Besov weight exponent for the weighted column.
    #[arg(long, allow_hyphen_values = true)]
    s: f64,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// series.csv produced by `run`.
    series: PathBuf,
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::BlowUp { .. } | Error::VacuumProximity { .. } => EXIT_BLOWUP,
        Error::Io { .. } | Error::Snapshot(_) | Error::Series(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

/// Parse argv and execute; returns the process exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // Help and version are successful terminations.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Run(a) => cmd_run(&a.config),
        Command::LinearVerify(a) => cmd_linear_verify(&a.config),
        Command::Fit(a) => cmd_fit(&a.series, &a.column, &a.window),
        Command::Lp(a) => cmd_lp(&a.snapshot, a.s),
        Command::Analyze(a) => cmd_analyze(&a.series),
    }
}

fn load_config(path: &Path) -> Result<(String, RunConfig)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let cfg = parse_config(&text)?;
    Ok((text, cfg))
}

fn cmd_run(path: &Path) -> Result<i32> {
    let (text, config) = load_config(path)?;
    let out = integrator::run(&config)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    integrator::write_outputs(&text, &out, &config.output_dir)?;
    eprintln!(
        "run complete: {} rows, E0(0) = {:.6e}, E0(end) = {:.6e}",
        out.records.len(),
        out.records.first().map(|r| r.e0).unwrap_or(0.0),
        out.records.last().map(|r| r.e0).unwrap_or(0.0),
    );

    if !config.fit_windows.is_empty() {
        println!("column,exponent,intercept,residual_rms,t0,t1,samples");
        for window in &config.fit_windows {
            for col in ["l2_rho_u", "l2_extra", "h1_grad"] {
                let series: Vec<(f64, f64)> = out
                    .records
                    .iter()
                    .map(|r| (r.t, r.column(col).unwrap()))
                    .collect();
                match fit_decay(&series, *window) {
                    Ok(fit) => println!(
                        "{col},{:.6},{:.6},{:.3e},{},{},{}",
                        fit.exponent, fit.intercept, fit.residual_rms, window.0, window.1, fit.samples
                    ),
                    Err(e) => eprintln!("warning: fit of {col} over {}:{} failed: {e}", window.0, window.1),
                }
            }
        }
    }
    Ok(0)
}

fn cmd_linear_verify(path: &Path) -> Result<i32> {
    let (_, mut config) = load_config(path)?;
    config.nonlinear = false;
    let grid = config.grid()?;
    let n_steps = config.n_steps();
    let t_total = n_steps as f64 * config.dt;

    let state = crate::initial_data::generate(
        &config.ic,
        grid,
        config.model,
        config.gamma,
        config.b,
        config.hall,
    )?;

    let defect = match (&state, integrator::build_propagators(&config)?) {
        (ModelState::Oldroyd(s), Propagators::Oldroyd(table)) => {
            let reference = PropagatorTable::<6>::build(
                grid,
                t_total,
                |xi| crate::oldroyd::linear_symbol(xi, config.gamma),
                false,
            );
            linear_defect_against(s, &table, n_steps, |m| *reference.exp_at(m))
        }
        (ModelState::HallMhd(s), Propagators::HallMhd(table)) => {
            let reference = PropagatorTable::<5>::build(
                grid,
                t_total,
                |xi| crate::hallmhd::linear_symbol(xi, config.gamma),
                false,
            );
            linear_defect_against(s, &table, n_steps, |m| *reference.exp_at(m))
        }
        _ => unreachable!("state and table come from one config"),
    };

    println!("linear-verify max relative error: {defect:.3e} over {n_steps} steps to t = {t_total}");
    Ok(if defect <= LINEAR_VERIFY_TOL { 0 } else { 1 })
}

fn cmd_fit(series: &Path, column: &str, window: &str) -> Result<i32> {
    let records = diagnostics::read_csv(series)?;
    let (a, b) = window
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("--window {window:?} must look like t0:t1")))?;
    let t0: f64 = a
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("--window start {a:?} is not a number")))?;
    let t1: f64 = b
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("--window end {b:?} is not a number")))?;
    let mut data = Vec::with_capacity(records.len());
    for r in &records {
        let v = r
            .column(column)
            .ok_or_else(|| Error::Config(format!("--column {column:?} is not a series column")))?;
        data.push((r.t, v));
    }
    let fit = fit_decay(&data, (t0, t1))?;
    println!("column,exponent,intercept,residual_rms,t0,t1,samples");
    println!(
        "{column},{:.12},{:.12},{:.6e},{t0},{t1},{}",
        fit.exponent, fit.intercept, fit.residual_rms, fit.samples
    );
    Ok(0)
}

fn cmd_lp(snapshot: &Path, s: f64) -> Result<i32> {
    let snap = read_snapshot(snapshot)?;
    let bank = FilterBank::build(snap.state.grid());
    // Per block: the max over component fields, matching the state Besov
    // convention max_fields max_j 2^{js} ||block||.
    let mut per_block = vec![0.0f64; (bank.j_max() - bank.j_min() + 1) as usize];
    for f in snap.state.fields() {
        for (slot, norm) in per_block.iter_mut().zip(bank.block_norms(f)?) {
            *slot = slot.max(norm);
        }
    }
    println!("j,scale,block_l2,weighted");
    for (j, norm) in bank.j_range().zip(per_block) {
        let scale = 2f64.powi(j);
        println!("{j},{scale:.16e},{norm:.16e},{:.16e}", scale.powf(s) * norm);
    }
    Ok(0)
}

fn cmd_analyze(series: &Path) -> Result<i32> {
    let records = diagnostics::read_csv(series)?;
    if records.is_empty() {
        return Err(Error::Series("series holds no rows".into()));
    }
    let (n, m) = update_trackers(&records);
    let last = records.last().unwrap();
    let trackers_ok = (n - last.n_tracker).abs() <= 1e-12 * n.abs().max(1.0)
        && (m - last.m_tracker).abs() <= 1e-12 * m.abs().max(1.0);
    println!("n_tracker recomputed = {n:.16e} (stored {:.16e})", last.n_tracker);
    println!("m_tracker recomputed = {m:.16e} (stored {:.16e})", last.m_tracker);

    let mut all_ok = trackers_ok;
    if records.len() >= 2 {
        let dt = records[1].t - records[0].t;
        for sigma in [0u8, 1] {
            let worst = energy_inequality_check(&records, sigma)?;
            let e_init = if sigma == 0 { records[0].e0 } else { records[0].e1 };
            let tol = INEQUALITY_COEFF * e_init / dt;
            let ok = worst <= tol;
            println!(
                "energy inequality sigma={sigma}: worst violation {worst:.6e}, tolerance {tol:.6e}: {}",
                if ok { "ok" } else { "VIOLATED" }
            );
            all_ok &= ok;
        }
    }
    if !trackers_ok {
        println!("tracker recomputation DIVERGES from stored columns");
    }
    Ok(if all_ok { 0 } else { 1 })
}
