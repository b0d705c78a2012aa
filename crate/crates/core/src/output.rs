//! Text renderings of trajectories, certificates and convergence reports.
//!
//! Every floating-point number is written with 17 significant digits
//! (`{:.16e}`), which round-trips an `f64` exactly.

use std::fmt::Write as _;

use crate::certify::{Certificate, HypothesisResult};
use crate::simulate::{ConvergenceReport, EnergySeries, InclusionReport, Trajectory};

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn nums(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

/// `t,x1..xn,region,sliding,V,W,intW`
pub fn trajectory_header(dimension: usize) -> String {
    let mut cols = vec!["t".to_string()];
    cols.extend((1..=dimension).map(|i| format!("x{i}")));
    cols.extend(["region", "sliding", "V", "W", "intW"].map(String::from));
    cols.join(",")
}

pub fn trajectory_csv(traj: &Trajectory, energy: &EnergySeries) -> String {
    let dimension = traj.states.first().map_or(0, Vec::len);
    let mut out = trajectory_header(dimension);
    out.push('\n');
    for k in 0..traj.len() {
        out.push_str(&num(traj.times[k]));
        for &x in &traj.states[k] {
            out.push(',');
            out.push_str(&num(x));
        }
        let _ = writeln!(
            out,
            ",{},{},{},{},{}",
            traj.regions[k],
            u8::from(traj.is_sliding(k)),
            num(energy.v[k]),
            num(energy.w[k]),
            num(energy.int_w[k])
        );
    }
    out
}

/// Whitespace-separated `t V W` columns for gnuplot and similar tools.
pub fn plot_data(traj: &Trajectory, energy: &EnergySeries) -> String {
    let mut out = String::from("# t V W\n");
    for k in 0..traj.len() {
        let _ = writeln!(out, "{} {} {}", num(traj.times[k]), num(energy.v[k]), num(energy.w[k]));
    }
    out
}

fn hypothesis_block(out: &mut String, h: &HypothesisResult) {
    let _ = writeln!(out, "  hypothesis {} {{", h.name);
    let _ = writeln!(out, "    passed = {}", h.passed);
    let _ = writeln!(out, "    worst_margin = {}", num(h.worst_margin));
    if let Some(w) = &h.witness {
        let _ = writeln!(out, "    witness.x = {}", nums(&w.x));
        let _ = writeln!(out, "    witness.t = {}", num(w.t));
    }
    let _ = writeln!(out, "    detail = {}", h.detail);
    out.push_str("  }\n");
}

pub fn certificate_text(cert: &Certificate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "certificate {} {{", cert.kind);
    let _ = writeln!(out, "  verdict = {}", if cert.passed() { "pass" } else { "fail" });
    let _ = writeln!(out, "  domain.lower = {}", nums(&cert.domain.lower));
    let _ = writeln!(out, "  domain.upper = {}", nums(&cert.domain.upper));
    let _ = writeln!(out, "  r = {}", num(cert.r));
    match cert.c {
        Some(c) => {
            let _ = writeln!(out, "  c = {}", num(c));
        }
        None => out.push_str("  c = none\n"),
    }
    if let (Some(min), Some(arg)) = (cert.sphere_min, &cert.sphere_argmin) {
        let _ = writeln!(out, "  sphere_min = {}", num(min));
        let _ = writeln!(out, "  sphere_argmin = {}", nums(arg));
    }
    let s = &cert.stats;
    let _ = writeln!(out, "  samples.grid_points = {}", s.grid_points);
    let _ = writeln!(out, "  samples.time_points = {}", s.time_points);
    let _ = writeln!(out, "  samples.sphere_points = {}", s.sphere_points);
    let _ = writeln!(out, "  samples.empty_derivative_sets = {}", s.empty_derivative_sets);
    let _ = writeln!(out, "  samples.trajectory = {}", s.trajectory_samples);
    let _ = writeln!(out, "  samples.excluded = {}", s.excluded_samples);
    let t = &cert.tolerances;
    let _ = writeln!(out, "  tolerance.surface = {}", num(t.surface_tol));
    let _ = writeln!(out, "  tolerance.derivative = {}", num(t.derivative));
    let _ = writeln!(out, "  tolerance.trajectory_derivative = {}", num(t.trajectory_derivative));
    let _ = writeln!(out, "  tolerance.bounds = {}", num(t.bounds));
    let _ = writeln!(out, "  tolerance.small_ball = {}", num(t.small_ball));
    let _ = writeln!(out, "  tolerance.safety = {}", num(t.safety));
    let _ = writeln!(out, "  tolerance.xi_resolution = {}", t.xi_resolution);
    let _ = writeln!(out, "  tolerance.exclusion_steps = {}", num(t.exclusion_steps));
    for h in &cert.hypotheses {
        hypothesis_block(&mut out, h);
    }
    for note in &cert.notes {
        let _ = writeln!(out, "  note = {note}");
    }
    out.push_str("}\n");
    out
}

pub fn convergence_text(report: &ConvergenceReport, inclusion: &InclusionReport, inclusion_tol: f64) -> String {
    let mut out = String::from("convergence {\n");
    let last = report.int_w.last().copied().unwrap_or(0.0);
    let _ = writeln!(out, "  v_initial = {}", num(report.v_initial));
    let _ = writeln!(out, "  max_step_increase = {}", num(report.max_step_increase));
    let _ = writeln!(out, "  max_rise = {}", num(report.max_rise));
    let _ = writeln!(out, "  monotone = {}", report.monotone);
    let _ = writeln!(out, "  integral_w = {}", num(last));
    let _ = writeln!(out, "  max_energy_excess = {}", num(report.max_energy_excess));
    let _ = writeln!(out, "  integral_bounded = {}", report.integral_bounded);
    let _ = writeln!(out, "  tail_start = {}", num(report.tail_start));
    let _ = writeln!(out, "  tail_samples = {}", report.tail_samples);
    let _ = writeln!(out, "  tail_sup_w = {}", num(report.tail_sup));
    let _ = writeln!(out, "  converged = {}", report.converged);
    let _ = writeln!(out, "  tolerance = {}", num(report.tolerance));
    out.push_str("  inclusion {\n");
    let _ = writeln!(out, "    tolerance = {}", num(inclusion_tol));
    let _ = writeln!(out, "    checked = {}", inclusion.checked);
    let _ = writeln!(out, "    compliant = {}", inclusion.compliant);
    let _ = writeln!(out, "    excluded = {}", inclusion.excluded);
    let _ = writeln!(out, "    fraction = {}", num(inclusion.fraction));
    let _ = writeln!(out, "    worst_distance = {}", num(inclusion.worst_distance));
    let _ = writeln!(out, "    worst_time = {}", num(inclusion.worst_time));
    out.push_str("  }\n");
    for note in &report.notes {
        let _ = writeln!(out, "  note = {note}");
    }
    out.push_str("}\n");
    out
}
