//! Command implementations behind the `psiflow` binary.
//!
//! Each command returns a [`CliError`] whose [`CliError::exit_code`] is the
//! process status: 1 for a failed check, 2 for bad configuration or an
//! inadmissible model, 3 for solver and I/O failures.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod plot;

use std::path::PathBuf;

use psiflow::verify::{self, VerifySettings};
use psiflow::{picard_solve, rk_solve, VorticityModel};

use config::{RunConfig, SolverKind};
use output::Outputs;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("model error: {0}")]
    Model(psiflow::Error),

    #[error("solver error: {0}")]
    Solver(psiflow::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("check failed: {}", .0.join(", "))]
    CheckFailed(Vec<&'static str>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Config(_) | CliError::Model(_) => 2,
            CliError::Solver(_) | CliError::Io(_) => 3,
        }
    }
}

/// Text printed to stdout and files written by a successful command.
#[derive(Debug, Default)]
pub struct Report {
    pub stdout: String,
    pub written: Vec<PathBuf>,
}

fn build_model(cfg: &RunConfig) -> Result<VorticityModel, CliError> {
    cfg.model.build().map_err(CliError::Model)
}

/// Solves with the configured solver and writes `traj.csv` plus the
/// solver's diagnostics file.
pub fn cmd_integrate(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let model = build_model(cfg)?;
    let r_end = cfg.r_end();
    let grid = cfg.grid(r_end)?;
    let mut out = Outputs::default();
    let traj = match cfg.solver.kind {
        SolverKind::Picard => {
            let (traj, diag) =
                picard_solve(&model, cfg.r0, cfg.psi1, &grid, &cfg.picard_options()).map_err(CliError::Solver)?;
            out.add("picard_diagnostics.txt", diag.to_kv_string());
            traj
        }
        SolverKind::Rk => {
            let ctrl = cfg.step_control(r_end)?;
            let (traj, log) = rk_solve(&model, cfg.r0, cfg.psi1, r_end, &ctrl, &grid, cfg.allow_unvalidated)
                .map_err(CliError::Solver)?;
            out.add("rk_log.txt", log.to_kv_string());
            traj
        }
    };
    out.add("traj.csv", traj.to_csv_string());
    let stdout = format!(
        "method = {}\nwindow_end = {:.16e}\npsi(r_max) = {:.16e}\n",
        traj.method.as_str(),
        traj.window_end,
        traj.psi.last().copied().unwrap_or(f64::NAN)
    );
    let written = out.commit(&cfg.output)?;
    Ok(Report { stdout, written })
}

/// Runs the uniqueness checks and writes `report.txt` and `trace.csv`.
/// A false verdict is reported as [`CliError::CheckFailed`] after the files
/// are written.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let model = build_model(cfg)?;
    let settings = VerifySettings {
        n_nodes: cfg.n_nodes,
        picard: psiflow::PicardOptions {
            allow_unvalidated: false,
            ..cfg.picard_options()
        },
        rk_tol: cfg.solver.rel_tol,
        r_max: cfg.r_max,
        ..VerifySettings::default()
    };
    let report = verify::verify_uniqueness(&model, cfg.r0, cfg.psi1, &settings).map_err(CliError::Solver)?;
    let mut out = Outputs::default();
    out.add("report.txt", report.to_kv_string());
    out.add("trace.csv", report.trace_csv());
    let written = out.commit(&cfg.output)?;
    if report.verdict {
        Ok(Report {
            stdout: report.to_kv_string(),
            written,
        })
    } else {
        Err(CliError::CheckFailed(report.failures.clone()))
    }
}

/// Empirical continuity sweep over `values` (or the configured list);
/// writes `sweep.csv` and `sweep.svg`.
pub fn cmd_sweep(cfg: &RunConfig, values: Option<&[f64]>) -> Result<Report, CliError> {
    cfg.validate()?;
    let values = values.unwrap_or(&cfg.sweep_psi1);
    if values.len() < 2 {
        return Err(CliError::Config(format!(
            "sweep needs at least two psi1 values, got {}",
            values.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v != 0.0)) {
        return Err(CliError::Config(format!(
            "psi1 values must be finite and non-zero, got {v}"
        )));
    }
    let model = build_model(cfg)?;
    let sweep = verify::continuity_sweep(
        &model,
        cfg.r0,
        values,
        cfg.sweep_span,
        cfg.n_nodes,
        &cfg.picard_options(),
    )
    .map_err(CliError::Solver)?;
    let mut out = Outputs::default();
    out.add("sweep.csv", sweep.to_csv());
    out.add(
        "sweep.svg",
        plot::trajectories_svg(
            "Empirical continuity sweep: psi(r) per initial slope",
            &sweep.trajectories,
        ),
    );
    let mut stdout = format!(
        "empirical continuity sweep (not a proof)\ncommon_window = {:.16e}\n",
        sweep.common_window
    );
    for row in &sweep.rows {
        stdout.push_str(&format!(
            "psi1 = {} dpsi1 = {:.6e} sup_dev = {:.6e}\n",
            row.psi1, row.dpsi1, row.sup_dev
        ));
    }
    let written = out.commit(&cfg.output)?;
    Ok(Report { stdout, written })
}

/// Builds the model and writes its hypothesis report to `hypothesis.txt`.
pub fn cmd_validate_model(cfg: &RunConfig) -> Result<Report, CliError> {
    let model = build_model(cfg)?;
    let text = format!("model = {}\n{}", model.name(), model.report().to_kv_string());
    let mut out = Outputs::default();
    out.add("hypothesis.txt", text.clone());
    let written = out.commit(&cfg.output)?;
    match model.report().failure() {
        None => Ok(Report { stdout: text, written }),
        Some(name) => Err(CliError::CheckFailed(vec![name])),
    }
}
