//! Event-driven integration of Filippov solutions, inclusion checks along
//! computed trajectories, and Barbalat-style convergence diagnostics.
//!
//! Inside a region the active piece is integrated with classical RK4. A sign
//! change of a switching function is located by bisection on the step
//! length. At the surface the one-sided rates `a± = grad g . f± + dg/dt`
//! decide the continuation: the solution crosses when both rates carry it
//! through, and slides when both pieces point at the surface
//! (`a- >= 0 >= a+`). Sliding uses the convex combination
//! `f_s = α f+ + (1 - α) f-` with `α = a- / (a- - a+)`, which is tangent to
//! the surface and belongs to `K[f]`. Sliding ends when `α` leaves `[0, 1]`.

use thiserror::Error;

use crate::expr::EvalError;
use crate::field::{ModelError, PiecewiseField, RegionKey, Side};
use crate::geometry::{axpy, dot};
use crate::lyapunov::PiecewiseScalar;

/// Slack for "V is non-increasing between samples".
pub const MONOTONE_TOL: f64 = 1e-6;
/// Default report-level tolerance for the integral bound and tail supremum.
pub const REPORT_TOL: f64 = 1e-4;
pub const DEFAULT_TAIL_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    /// Base step (time units); samples are written on this grid.
    pub h: f64,
    /// Width to which event times are bisected.
    pub event_tol: f64,
    /// `|g| <= surface_tol` counts as on the surface.
    pub surface_tol: f64,
    /// Bound on the number of (partial) steps, including event restarts.
    pub max_steps: usize,
    /// `α` is checked every this many sliding steps.
    pub sliding_exit_period: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            h: 1e-3,
            event_tol: 1e-12,
            surface_tol: crate::field::DEFAULT_SURFACE_TOL,
            max_steps: 10_000_000,
            sliding_exit_period: 1,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<(), SimulationError> {
        let bad = |m: &str| Err(SimulationError::InvalidConfig(m.into()));
        if !(self.h > 0.0 && self.h.is_finite()) {
            return bad("h must be positive");
        }
        if !(self.event_tol > 0.0) || self.event_tol >= self.h {
            return bad("event tolerance must be positive and smaller than h");
        }
        if !(self.surface_tol > 0.0) {
            return bad("surface tolerance must be positive");
        }
        if self.max_steps == 0 || self.sliding_exit_period == 0 {
            return bad("max_steps and sliding_exit_period must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulationError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid initial condition: {0}")]
    InvalidInitialState(String),
    #[error("maximum number of steps exceeded at t = {t}")]
    MaxStepsExceeded { t: f64 },
    #[error("simultaneous contact with switching surfaces {surfaces:?} at t = {t}; codimension-2 sliding is not supported")]
    MultiSurface { t: f64, surfaces: Vec<String> },
    #[error("trajectory was produced by a different field (id {trajectory:#x}, expected {field:#x})")]
    ProvenanceMismatch { trajectory: u64, field: u64 },
    #[error("tail window holds {got} samples; at least {needed} are required")]
    ShortTail { got: usize, needed: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<EvalError> for SimulationError {
    fn from(e: EvalError) -> Self {
        SimulationError::Model(ModelError::Eval(e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Crossing,
    SlidingOnset,
    SlidingExit,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Crossing => "crossing",
            EventKind::SlidingOnset => "sliding-onset",
            EventKind::SlidingExit => "sliding-exit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub surface: usize,
}

/// A computed Filippov solution sampled on the base grid plus event times.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Region of the active mode at each sample; sliding shows `0` on the sliding surface.
    pub regions: Vec<RegionKey>,
    /// `sliding[k][i]`: sample `k` is sliding on surface `i`.
    pub sliding: Vec<Vec<bool>>,
    pub events: Vec<Event>,
    /// Times where both sides repel and the arrival-side branch was chosen.
    pub non_unique_branches: Vec<(f64, usize)>,
    pub field_id: u64,
    pub config: IntegratorConfig,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn is_sliding(&self, k: usize) -> bool {
        self.sliding[k].iter().any(|&s| s)
    }

    /// True when `t` is within `2h` of a recorded event.
    pub fn near_event(&self, t: f64) -> bool {
        let window = 2.0 * self.config.h;
        self.events.iter().any(|e| (e.time - t).abs() <= window)
    }

    /// Index of the sample closest to `t`.
    pub fn sample_near(&self, t: f64) -> usize {
        let i = self.times.partition_point(|&s| s < t);
        if i == 0 {
            0
        } else if i >= self.times.len() {
            self.times.len() - 1
        } else if (self.times[i] - t).abs() < (t - self.times[i - 1]).abs() {
            i
        } else {
            i - 1
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Mode {
    Region(RegionKey),
    /// Sliding on `surface`; `base` holds the signs of the other surfaces.
    Sliding { surface: usize, base: RegionKey },
}

/// Sliding vector field on `surface` and its weight `α`.
pub fn sliding_field(
    field: &PiecewiseField,
    surface: usize,
    base: &RegionKey,
    x: &[f64],
    t: f64,
) -> Result<(Vec<f64>, f64), ModelError> {
    let s = &field.surfaces()[surface];
    let f_minus = field.piece_value(&base.with(surface, Side::Negative), x, t)?;
    let f_plus = field.piece_value(&base.with(surface, Side::Positive), x, t)?;
    let a_minus = s.rate_along(x, t, &f_minus, field.params())?;
    let a_plus = s.rate_along(x, t, &f_plus, field.params())?;
    let denom = a_minus - a_plus;
    let alpha = if denom == 0.0 { 0.5 } else { a_minus / denom };
    let fs = f_plus
        .iter()
        .zip(&f_minus)
        .map(|(p, m)| alpha * p + (1.0 - alpha) * m)
        .collect();
    Ok((fs, alpha))
}

fn rk4<F>(f: F, x: &[f64], t: f64, dt: f64) -> Result<Vec<f64>, ModelError>
where
    F: Fn(&[f64], f64) -> Result<Vec<f64>, ModelError>,
{
    let k1 = f(x, t)?;
    let k2 = f(&axpy(x, 0.5 * dt, &k1), t + 0.5 * dt)?;
    let k3 = f(&axpy(x, 0.5 * dt, &k2), t + 0.5 * dt)?;
    let k4 = f(&axpy(x, dt, &k3), t + dt)?;
    Ok((0..x.len())
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

struct Integrator<'a> {
    field: &'a PiecewiseField,
    cfg: &'a IntegratorConfig,
    steps: usize,
    traj: Trajectory,
}

enum Continuation {
    Enter(Side),
    Slide,
}

impl Integrator<'_> {
    fn region_step(&self, key: &RegionKey, x: &[f64], t: f64, dt: f64) -> Result<Vec<f64>, ModelError> {
        rk4(|y, s| self.field.piece_value(key, y, s), x, t, dt)
    }

    fn project(&self, surface: usize, x: &mut [f64], t: f64) -> Result<(), ModelError> {
        let s = &self.field.surfaces()[surface];
        let params = self.field.params();
        for _ in 0..3 {
            let g = s.value(x, t, params)?;
            if g == 0.0 {
                break;
            }
            let grad = s.gradient(x, t, params)?;
            let n2 = dot(&grad, &grad);
            if n2 == 0.0 {
                break;
            }
            for (xi, gi) in x.iter_mut().zip(&grad) {
                *xi -= g * gi / n2;
            }
        }
        Ok(())
    }

    fn sliding_step(&self, surface: usize, base: &RegionKey, x: &[f64], t: f64, dt: f64) -> Result<(Vec<f64>, f64), ModelError> {
        let mut y = rk4(|y, s| Ok(sliding_field(self.field, surface, base, y, s)?.0), x, t, dt)?;
        self.project(surface, &mut y, t + dt)?;
        let (_, alpha) = sliding_field(self.field, surface, base, &y, t + dt)?;
        Ok((y, alpha))
    }

    /// Continuation at a point on `surface` given the signs of the others.
    fn decide(&self, surface: usize, base: &RegionKey, x: &[f64], t: f64) -> Result<(Continuation, bool), ModelError> {
        let s = &self.field.surfaces()[surface];
        let params = self.field.params();
        let f_minus = self.field.piece_value(&base.with(surface, Side::Negative), x, t)?;
        let f_plus = self.field.piece_value(&base.with(surface, Side::Positive), x, t)?;
        let a_minus = s.rate_along(x, t, &f_minus, params)?;
        let a_plus = s.rate_along(x, t, &f_plus, params)?;
        Ok(if a_minus >= 0.0 && a_plus <= 0.0 {
            (Continuation::Slide, false)
        } else if a_plus > 0.0 && a_minus >= 0.0 {
            (Continuation::Enter(Side::Positive), false)
        } else if a_minus < 0.0 && a_plus <= 0.0 {
            (Continuation::Enter(Side::Negative), false)
        } else {
            // both sides repel: either branch is a Filippov solution
            let arrival = base.sides()[surface];
            let side = if arrival == Side::Negative { Side::Negative } else { Side::Positive };
            (Continuation::Enter(side), true)
        })
    }

    fn other_contacts(&self, skip: usize, x: &[f64], t: f64) -> Result<Vec<usize>, ModelError> {
        let key = self.field.region_of(x, t, self.cfg.surface_tol)?;
        Ok(key.on_surfaces().into_iter().filter(|&i| i != skip).collect())
    }

    fn multi_surface(&self, t: f64, surfaces: &[usize]) -> SimulationError {
        SimulationError::MultiSurface {
            t,
            surfaces: surfaces.iter().map(|&i| self.field.surfaces()[i].name.clone()).collect(),
        }
    }

    fn record(&mut self, t: f64, x: &[f64], mode: &Mode) {
        let m = self.field.surfaces().len();
        let (region, sliding) = match mode {
            Mode::Region(k) => (k.clone(), vec![false; m]),
            Mode::Sliding { surface, base } => {
                let mut flags = vec![false; m];
                flags[*surface] = true;
                (base.with(*surface, Side::OnSurface), flags)
            }
        };
        if let Some(&last) = self.traj.times.last() {
            if t - last <= self.cfg.event_tol {
                let k = self.traj.times.len() - 1;
                self.traj.states[k] = x.to_vec();
                self.traj.regions[k] = region;
                self.traj.sliding[k] = sliding;
                return;
            }
        }
        self.traj.times.push(t);
        self.traj.states.push(x.to_vec());
        self.traj.regions.push(region);
        self.traj.sliding.push(sliding);
    }

    fn push_event(&mut self, time: f64, kind: EventKind, surface: usize) {
        if let Some(last) = self.traj.events.last() {
            if time <= last.time {
                return;
            }
        }
        self.traj.events.push(Event { time, kind, surface });
    }

    /// Resolves the mode after reaching `surface` at `(x, t)`.
    fn arrive(&mut self, surface: usize, base: RegionKey, x: &mut Vec<f64>, t: f64) -> Result<Mode, SimulationError> {
        let others = self.other_contacts(surface, x, t)?;
        if !others.is_empty() {
            let mut all = vec![surface];
            all.extend(others);
            return Err(self.multi_surface(t, &all));
        }
        let arrival = base.sides()[surface];
        let (next, non_unique) = self.decide(surface, &base, x, t)?;
        if non_unique {
            self.traj.non_unique_branches.push((t, surface));
        }
        Ok(match next {
            Continuation::Slide => {
                self.project(surface, x, t)?;
                self.push_event(t, EventKind::SlidingOnset, surface);
                Mode::Sliding { surface, base }
            }
            Continuation::Enter(side) => {
                if side != arrival {
                    self.push_event(t, EventKind::Crossing, surface);
                }
                Mode::Region(base.with(surface, side))
            }
        })
    }

    fn bump(&mut self, t: f64) -> Result<(), SimulationError> {
        self.steps += 1;
        if self.steps > self.cfg.max_steps {
            return Err(SimulationError::MaxStepsExceeded { t });
        }
        Ok(())
    }

    /// Advances from `(x, t)` to `target`, resolving events on the way.
    fn advance(&mut self, mode: &mut Mode, x: &mut Vec<f64>, t: &mut f64, target: f64) -> Result<(), SimulationError> {
        let params = self.field.params();
        let mut sliding_steps = 0usize;
        while *t < target {
            self.bump(*t)?;
            let dt = target - *t;
            match mode.clone() {
                Mode::Region(key) => {
                    let x_new = self.region_step(&key, x, *t, dt)?;
                    let inside = |y: &[f64], s: f64, j: usize| -> Result<f64, ModelError> {
                        let sign = if key.sides()[j] == Side::Positive { 1.0 } else { -1.0 };
                        Ok(sign * self.field.surfaces()[j].value(y, s, params)?)
                    };
                    let mut earliest: Option<(f64, usize)> = None;
                    for j in 0..self.field.surfaces().len() {
                        if inside(&x_new, *t + dt, j)? > 0.0 {
                            continue;
                        }
                        let (mut lo, mut hi) = (0.0, dt);
                        while hi - lo > self.cfg.event_tol {
                            let mid = 0.5 * (lo + hi);
                            let y = self.region_step(&key, x, *t, mid)?;
                            if inside(&y, *t + mid, j)? > 0.0 {
                                lo = mid;
                            } else {
                                hi = mid;
                            }
                        }
                        if earliest.map_or(true, |(tau, _)| hi < tau) {
                            earliest = Some((hi, j));
                        }
                    }
                    match earliest {
                        None => {
                            *x = x_new;
                            *t = target;
                        }
                        Some((tau, j)) => {
                            let mut y = self.region_step(&key, x, *t, tau)?;
                            let te = if dt - tau <= self.cfg.event_tol { target } else { *t + tau };
                            let next = self.arrive(j, key.clone(), &mut y, te)?;
                            *x = y;
                            *t = te;
                            *mode = next;
                            self.record(*t, x, mode);
                        }
                    }
                }
                Mode::Sliding { surface, base } => {
                    let (y, alpha) = self.sliding_step(surface, &base, x, *t, dt)?;
                    let others = self.other_contacts(surface, &y, *t + dt)?;
                    let crossed_other = (0..self.field.surfaces().len())
                        .filter(|&j| j != surface)
                        .find(|&j| {
                            let sign = if base.sides()[j] == Side::Positive { 1.0 } else { -1.0 };
                            self.field.surfaces()[j]
                                .value(&y, *t + dt, params)
                                .map(|g| sign * g <= 0.0)
                                .unwrap_or(true)
                        });
                    if !others.is_empty() || crossed_other.is_some() {
                        let mut all = vec![surface];
                        all.extend(others);
                        all.extend(crossed_other);
                        return Err(self.multi_surface(*t + dt, &all));
                    }
                    sliding_steps += 1;
                    let check = sliding_steps % self.cfg.sliding_exit_period == 0;
                    if !check || (0.0..=1.0).contains(&alpha) {
                        *x = y;
                        *t = target;
                        continue;
                    }
                    let (mut lo, mut hi) = (0.0, dt);
                    let mut exit_state = y;
                    let mut exit_alpha = alpha;
                    while hi - lo > self.cfg.event_tol {
                        let mid = 0.5 * (lo + hi);
                        let (ym, am) = self.sliding_step(surface, &base, x, *t, mid)?;
                        if (0.0..=1.0).contains(&am) {
                            lo = mid;
                        } else {
                            hi = mid;
                            exit_state = ym;
                            exit_alpha = am;
                        }
                    }
                    let side = if exit_alpha > 1.0 { Side::Positive } else { Side::Negative };
                    let te = if dt - hi <= self.cfg.event_tol { target } else { *t + hi };
                    *x = exit_state;
                    *t = te;
                    self.push_event(te, EventKind::SlidingExit, surface);
                    *mode = Mode::Region(base.with(surface, side));
                    self.record(*t, x, mode);
                }
            }
        }
        Ok(())
    }
}

/// Integrates `field` from `(x0, t0)` to `tf`.
pub fn integrate(
    field: &PiecewiseField,
    x0: &[f64],
    t0: f64,
    tf: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, SimulationError> {
    cfg.validate()?;
    if x0.len() != field.dimension() {
        return Err(SimulationError::InvalidInitialState(format!(
            "x0 has {} components, field has dimension {}",
            x0.len(),
            field.dimension()
        )));
    }
    if !(tf > t0) {
        return Err(SimulationError::InvalidInitialState("tf must exceed t0".into()));
    }
    let mut it = Integrator {
        field,
        cfg,
        steps: 0,
        traj: Trajectory {
            times: Vec::new(),
            states: Vec::new(),
            regions: Vec::new(),
            sliding: Vec::new(),
            events: Vec::new(),
            non_unique_branches: Vec::new(),
            field_id: field.id(),
            config: cfg.clone(),
        },
    };
    let mut x = x0.to_vec();
    let mut t = t0;
    let key = field.region_of(&x, t, cfg.surface_tol)?;
    let on = key.on_surfaces();
    let mut mode = match on.as_slice() {
        [] => Mode::Region(key),
        [i] => {
            // the arrival side is irrelevant for a start on the surface
            let base = key.with(*i, Side::Positive);
            it.arrive(*i, base, &mut x, t)?
        }
        many => return Err(it.multi_surface(t, many)),
    };
    it.record(t, &x, &mode);

    let n_steps = (((tf - t0) / cfg.h) - 1e-9).ceil().max(1.0) as usize;
    for k in 1..=n_steps {
        let target = if k == n_steps { tf } else { t0 + k as f64 * cfg.h };
        it.advance(&mut mode, &mut x, &mut t, target)?;
        it.record(t, &x, &mode);
    }
    Ok(it.traj)
}

/// Fraction of interior samples whose finite-difference velocity lies in `K[f]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionReport {
    pub checked: usize,
    pub compliant: usize,
    pub excluded: usize,
    pub fraction: f64,
    pub worst_distance: f64,
    pub worst_time: f64,
}

/// Checks `dx/dt ∈ K[f](x, t)` at interior samples away from events.
pub fn inclusion_check(
    field: &PiecewiseField,
    traj: &Trajectory,
    tol: f64,
) -> Result<InclusionReport, SimulationError> {
    if traj.field_id != field.id() {
        return Err(SimulationError::ProvenanceMismatch {
            trajectory: traj.field_id,
            field: field.id(),
        });
    }
    let mut report = InclusionReport {
        checked: 0,
        compliant: 0,
        excluded: 0,
        fraction: 1.0,
        worst_distance: 0.0,
        worst_time: traj.times.first().copied().unwrap_or(0.0),
    };
    let surface_tol = 2.0 * traj.config.surface_tol;
    for k in 1..traj.len().saturating_sub(1) {
        let t = traj.times[k];
        if traj.near_event(t) {
            report.excluded += 1;
            continue;
        }
        let span = traj.times[k + 1] - traj.times[k - 1];
        let velocity: Vec<f64> = traj.states[k + 1]
            .iter()
            .zip(&traj.states[k - 1])
            .map(|(a, b)| (a - b) / span)
            .collect();
        let k_set = field.filippov_map(&traj.states[k], t, surface_tol)?;
        let d = k_set.distance_to(&velocity);
        report.checked += 1;
        if d <= tol {
            report.compliant += 1;
        }
        if d > report.worst_distance {
            report.worst_distance = d;
            report.worst_time = t;
        }
    }
    if report.checked > 0 {
        report.fraction = report.compliant as f64 / report.checked as f64;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub times: Vec<f64>,
    /// `V(x(t_k), t_k)`
    pub v: Vec<f64>,
    /// `W(x(t_k))`
    pub w: Vec<f64>,
    /// Trapezoid-rule integral of `W` from `t0` to `t_k`.
    pub int_w: Vec<f64>,
    pub v_initial: f64,
    /// Largest increase of `V` between consecutive samples.
    pub max_step_increase: f64,
    /// `max_k V_k - V_0`
    pub max_rise: f64,
    pub monotone: bool,
    /// `max_k (V_k + int_w_k) - V_0`
    pub max_energy_excess: f64,
    pub integral_bounded: bool,
    pub tail_start: f64,
    pub tail_samples: usize,
    pub tail_sup: f64,
    pub converged: bool,
    pub tolerance: f64,
    pub notes: Vec<String>,
}

/// `V`, `W` and the running trapezoid integral of `W` along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries {
    pub v: Vec<f64>,
    pub w: Vec<f64>,
    pub int_w: Vec<f64>,
}

pub fn energy_series(traj: &Trajectory, v: &PiecewiseScalar, w: &PiecewiseScalar) -> Result<EnergySeries, EvalError> {
    let vs = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, x)| v.value(x, t))
        .collect::<Result<Vec<_>, _>>()?;
    let ws = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(&t, x)| w.value(x, t))
        .collect::<Result<Vec<_>, _>>()?;
    let mut int_w = Vec::with_capacity(ws.len());
    int_w.push(0.0);
    for k in 1..ws.len() {
        let dt = traj.times[k] - traj.times[k - 1];
        int_w.push(int_w[k - 1] + 0.5 * dt * (ws[k] + ws[k - 1]));
    }
    Ok(EnergySeries { v: vs, w: ws, int_w })
}

/// Monotonicity of `V`, the integral bound on `W`, and a tail test for
/// `W(x(t)) -> 0` along `traj`.
pub fn barbalat_report(
    traj: &Trajectory,
    v: &PiecewiseScalar,
    w: &PiecewiseScalar,
    tail_fraction: f64,
    tol: f64,
) -> Result<ConvergenceReport, SimulationError> {
    let n = traj.len();
    let t0 = traj.times[0];
    let tf = traj.times[n - 1];
    let tail_start = tf - tail_fraction * (tf - t0);
    let tail_from = traj.times.partition_point(|&s| s < tail_start);
    let tail_samples = n - tail_from;
    if tail_samples < 100 {
        return Err(SimulationError::ShortTail {
            got: tail_samples,
            needed: 100,
        });
    }
    let EnergySeries { v: vs, w: ws, int_w } = energy_series(traj, v, w)?;
    let v0 = vs[0];
    let max_step_increase = vs.windows(2).map(|p| p[1] - p[0]).fold(f64::NEG_INFINITY, f64::max);
    let max_rise = vs.iter().map(|&x| x - v0).fold(f64::NEG_INFINITY, f64::max);
    let max_energy_excess = vs
        .iter()
        .zip(&int_w)
        .map(|(a, b)| a + b - v0)
        .fold(f64::NEG_INFINITY, f64::max);
    let tail_sup = ws[tail_from..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let monotone = max_step_increase <= MONOTONE_TOL && max_rise <= MONOTONE_TOL;
    let integral_bounded = int_w[n - 1] <= v0 + tol && max_energy_excess <= tol;
    let converged = tail_sup <= tol;
    Ok(ConvergenceReport {
        times: traj.times.clone(),
        v: vs,
        w: ws,
        int_w,
        v_initial: v0,
        max_step_increase,
        max_rise,
        monotone,
        max_energy_excess,
        integral_bounded,
        tail_start,
        tail_samples,
        tail_sup,
        converged,
        tolerance: tol,
        notes: vec!["uniform continuity of W(x(t)) is assumed, not verified".into()],
    })
}
