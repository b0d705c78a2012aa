//! End-to-end pipeline: simulate, certify, write files, pick an exit status.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::certify::{check_corollary1, check_corollary2, Certificate, CertifyError};
use crate::output::{certificate_text, convergence_text, plot_data, trajectory_csv};
use crate::scenario::{Mode, Scenario};
use crate::simulate::{
    barbalat_report, energy_series, inclusion_check, integrate, ConvergenceReport, InclusionReport, SimulationError, Trajectory,
};

/// Minimum fraction of compliant samples for the inclusion check.
pub const INCLUSION_FRACTION: f64 = 0.99;

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const PLOT_FILE: &str = "plot.dat";
pub const CERTIFICATE_FILE: &str = "certificate.txt";
pub const CONVERGENCE_FILE: &str = "convergence.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass,
    CheckFailed,
    RuntimeError,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Pass => 0,
            ExitStatus::CheckFailed => 1,
            ExitStatus::RuntimeError => 2,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("mode {mode} needs a [{section}] section")]
    MissingSection { mode: Mode, section: &'static str },
    #[error(transparent)]
    Simulation(#[from] SimulationError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_status(&self) -> ExitStatus {
        ExitStatus::RuntimeError
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub mode: Mode,
    pub certificates: Vec<Certificate>,
    pub trajectory: Option<Trajectory>,
    pub convergence: Option<ConvergenceReport>,
    pub inclusion: Option<InclusionReport>,
    pub files: Vec<PathBuf>,
    /// Names of the checks that failed.
    pub failures: Vec<String>,
    pub exit: ExitStatus,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "mode: {}", self.mode)?;
        for cert in &self.certificates {
            writeln!(f, "{} certificate: {}", cert.kind, if cert.passed() { "pass" } else { "fail" })?;
            for h in cert.failures() {
                write!(f, "  failed {}: margin {:e}", h.name, h.worst_margin)?;
                if let Some(w) = &h.witness {
                    write!(f, " at x = {:?}, t = {:?}", w.x, w.t)?;
                }
                writeln!(f)?;
            }
        }
        if let Some(c) = &self.convergence {
            writeln!(
                f,
                "convergence: monotone {}, integral bounded {}, tail sup W {:e}",
                c.monotone, c.integral_bounded, c.tail_sup
            )?;
        }
        if let Some(i) = &self.inclusion {
            writeln!(f, "inclusion: {}/{} compliant", i.compliant, i.checked)?;
        }
        for p in &self.files {
            writeln!(f, "wrote {}", p.display())?;
        }
        write!(f, "exit status: {}", self.exit.code())
    }
}

fn write(dir: &Path, name: &str, contents: &str, files: &mut Vec<PathBuf>) -> Result<(), RunError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| RunError::Io { path: path.clone(), source })?;
    files.push(path);
    Ok(())
}

/// Runs the pipeline for `mode` and writes its files into `outdir`.
///
/// Check failures are reported through [`RunReport::exit`]; model and
/// integrator errors come back as `Err` and map to exit status 2.
pub fn run(scenario: &Scenario, mode: Mode, outdir: &Path) -> Result<RunReport, RunError> {
    fs::create_dir_all(outdir).map_err(|source| RunError::Io {
        path: outdir.to_path_buf(),
        source,
    })?;
    let mut files = Vec::new();
    let mut failures = Vec::new();
    let mut certificates = Vec::new();
    let (mut trajectory, mut convergence, mut inclusion) = (None, None, None);

    if mode.needs_trajectory() {
        let sim = scenario.simulate.as_ref().ok_or(RunError::MissingSection { mode, section: "simulate" })?;
        let traj = integrate(&scenario.field, &sim.x0, sim.t0, sim.tf, &sim.config)?;
        let energy = energy_series(&traj, &scenario.v, &scenario.triple.w).map_err(SimulationError::from)?;
        write(outdir, TRAJECTORY_FILE, &trajectory_csv(&traj, &energy), &mut files)?;
        write(outdir, PLOT_FILE, &plot_data(&traj, &energy), &mut files)?;
        let report = barbalat_report(&traj, &scenario.v, &scenario.triple.w, sim.tail_fraction, scenario.report_tol)?;
        let incl = inclusion_check(&scenario.field, &traj, scenario.inclusion_tol)?;
        write(outdir, CONVERGENCE_FILE, &convergence_text(&report, &incl, scenario.inclusion_tol), &mut files)?;
        if !report.monotone {
            failures.push("monotone".to_string());
        }
        if !report.integral_bounded {
            failures.push("integral_bounded".to_string());
        }
        if !report.converged {
            failures.push("converged".to_string());
        }
        if incl.fraction < INCLUSION_FRACTION {
            failures.push("inclusion".to_string());
        }
        trajectory = Some(traj);
        convergence = Some(report);
        inclusion = Some(incl);
    }

    if matches!(mode, Mode::Check2 | Mode::All) {
        let spec = scenario.domain.as_ref().ok_or(RunError::MissingSection { mode, section: "domain" })?;
        certificates.push(check_corollary2(
            &scenario.field,
            &scenario.v,
            &scenario.triple,
            spec,
            &scenario.t_grid,
            &scenario.tolerances,
        )?);
    }
    if matches!(mode, Mode::Check1 | Mode::All) {
        let spec = scenario.domain.as_ref().ok_or(RunError::MissingSection { mode, section: "domain" })?;
        let traj = trajectory.as_ref().expect("trajectory computed for this mode");
        certificates.push(check_corollary1(&scenario.field, &scenario.v, &scenario.triple, spec, traj, &scenario.tolerances)?);
    }
    if !certificates.is_empty() {
        let text: String = certificates.iter().map(certificate_text).collect::<Vec<_>>().join("\n");
        write(outdir, CERTIFICATE_FILE, &text, &mut files)?;
    }
    for cert in &certificates {
        failures.extend(cert.failures().map(|h| format!("{}.{}", cert.kind, h.name)));
    }

    let exit = if failures.is_empty() {
        ExitStatus::Pass
    } else {
        ExitStatus::CheckFailed
    };
    Ok(RunReport {
        mode,
        certificates,
        trajectory,
        convergence,
        inclusion,
        files,
        failures,
        exit,
    })
}
