//! Sampling-based checks of the nonsmooth LaSalle-Yoshizawa hypotheses.
//!
//! Two entry points build a [`Certificate`]:
//! - [`check_corollary2`] checks the decay bound `max V̇̃(x, t) <= -W(x)`
//!   pointwise on a grid, which covers every Filippov solution at once;
//! - [`check_corollary1`] checks `dV/dt <= -W(x)` along one computed
//!   solution, skipping short windows around switching events.
//!
//! Both also check the sandwich `W1 <= V <= W2`, definiteness of the
//! comparison functions, boundedness of `K[f](0, t)`, the sphere constant
//! `c < min_{|x| = r} W1`, and the sublevel-set chain
//! `{W2 <= c} ⊂ {V <= c} ⊂ {W1 <= c} ⊂ B_r`. A passing certificate means no
//! violation was found at the recorded resolution, nothing more.

use std::fmt;

use thiserror::Error;

use crate::expr::EvalError;
use crate::field::{ModelError, PiecewiseField, ValidationConfig};
use crate::geometry::{norm, sphere_points, AxisBox};
use crate::lyapunov::{
    axis_directions, check_bounds, setvalued_derivative, ComparisonTriple, PiecewiseScalar, Verdict,
};
use crate::simulate::{SimulationError, Trajectory};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("W1 is not positive on the sphere of radius r: sampled minimum {min} at {at:?}")]
    Degenerate { min: f64, at: Vec<f64> },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
}

impl From<EvalError> for CertifyError {
    fn from(e: EvalError) -> Self {
        CertifyError::Model(ModelError::Eval(e))
    }
}

/// Working domain: the box `D`, the ball radius `r`, and sample densities.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub domain: AxisBox,
    pub r: f64,
    pub samples_per_axis: usize,
    pub sphere_samples: usize,
}

impl DomainSpec {
    pub fn new(domain: AxisBox, r: f64, samples_per_axis: usize, sphere_samples: usize) -> Result<Self, CertifyError> {
        let spec = DomainSpec {
            domain,
            r,
            samples_per_axis,
            sphere_samples,
        };
        if !(r > 0.0) {
            return Err(CertifyError::InvalidDomain("r must be positive".into()));
        }
        if samples_per_axis < 8 {
            return Err(CertifyError::InvalidDomain("at least 8 samples per axis are required".into()));
        }
        Ok(spec)
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    pub fn grid(&self) -> Vec<Vec<f64>> {
        self.domain.grid(self.samples_per_axis)
    }

    pub fn sphere(&self) -> Vec<Vec<f64>> {
        sphere_points(self.dimension(), self.r, self.sphere_samples)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub surface_tol: f64,
    /// Slack in `max V̇̃ <= -W` on the grid.
    pub derivative: f64,
    /// Slack in `dV/dt <= -W` along a trajectory (finite differences).
    pub trajectory_derivative: f64,
    pub bounds: f64,
    pub xi_resolution: usize,
    /// `c = safety * min_{|x| = r} W1`
    pub safety: f64,
    /// Radius of the ball around the origin exempt from strict positivity.
    pub small_ball: f64,
    /// Half-width of the exclusion window around events, in steps.
    pub exclusion_steps: f64,
    /// Grid points (at most) used for the regularity spot check.
    pub regularity_points: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            surface_tol: crate::field::DEFAULT_SURFACE_TOL,
            derivative: 1e-9,
            trajectory_derivative: 1e-5,
            bounds: 1e-9,
            xi_resolution: crate::lyapunov::DEFAULT_XI_RESOLUTION,
            safety: 0.9,
            small_ball: 1e-6,
            exclusion_steps: 2.0,
            regularity_points: 25,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub x: Vec<f64>,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisResult {
    pub name: String,
    pub passed: bool,
    /// Largest sampled value of `lhs - rhs` for the checked inequality.
    pub worst_margin: f64,
    pub witness: Option<Witness>,
    pub detail: String,
}

impl HypothesisResult {
    fn new(name: &str, passed: bool, worst_margin: f64, witness: Option<Witness>, detail: impl Into<String>) -> Self {
        HypothesisResult {
            name: name.into(),
            passed,
            worst_margin,
            witness,
            detail: detail.into(),
        }
    }
}

/// Largest margin seen so far and where.
struct Worst {
    margin: f64,
    witness: Option<Witness>,
}

impl Worst {
    fn new() -> Self {
        Worst {
            margin: f64::NEG_INFINITY,
            witness: None,
        }
    }

    /// Ties go to the point nearest the origin, then to the earliest sample.
    fn offer(&mut self, margin: f64, x: &[f64], t: f64) {
        let better = match &self.witness {
            None => true,
            Some(w) => margin > self.margin || (margin == self.margin && norm(x) < norm(&w.x)),
        };
        if better {
            self.margin = margin;
            self.witness = Some(Witness { x: x.to_vec(), t });
        }
    }

    /// Passes when the worst margin is at most `tol`.
    fn finish(self, name: &str, tol: f64, detail: impl Into<String>) -> HypothesisResult {
        let passed = self.margin <= tol;
        HypothesisResult::new(name, passed, self.margin, self.witness, detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Along a given solution.
    Trajectory,
    /// Pointwise, for all solutions.
    Pointwise,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::Trajectory => "trajectory",
            CheckKind::Pointwise => "pointwise",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleStats {
    pub grid_points: usize,
    pub time_points: usize,
    pub sphere_points: usize,
    /// Grid samples where the set-valued derivative was empty.
    pub empty_derivative_sets: usize,
    pub trajectory_samples: usize,
    pub excluded_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub kind: CheckKind,
    pub hypotheses: Vec<HypothesisResult>,
    pub r: f64,
    pub c: Option<f64>,
    pub sphere_min: Option<f64>,
    pub sphere_argmin: Option<Vec<f64>>,
    pub domain: AxisBox,
    pub stats: SampleStats,
    pub tolerances: Tolerances,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.hypotheses.iter().all(|h| h.passed)
    }

    pub fn hypothesis(&self, name: &str) -> Option<&HypothesisResult> {
        self.hypotheses.iter().find(|h| h.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &HypothesisResult> {
        self.hypotheses.iter().filter(|h| !h.passed)
    }
}

/// `c = safety * min_{|x| = r} W1(x)` from sphere samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereConstant {
    pub c: f64,
    pub sphere_min: f64,
    pub argmin: Vec<f64>,
}

pub fn compute_c(w1: &PiecewiseScalar, spec: &DomainSpec, safety: f64) -> Result<SphereConstant, CertifyError> {
    assert!(safety > 0.0 && safety < 1.0, "safety must lie in (0, 1)");
    let mut best = (f64::INFINITY, Vec::new());
    for p in spec.sphere() {
        let v = w1.value(&p, 0.0)?;
        if v < best.0 {
            best = (v, p);
        }
    }
    if !(best.0 > 0.0) {
        return Err(CertifyError::Degenerate { min: best.0, at: best.1 });
    }
    Ok(SphereConstant {
        c: safety * best.0,
        sphere_min: best.0,
        argmin: best.1,
    })
}

/// `W2(x0) <= c` and `|x0| < r`.
pub fn initial_set_membership(x0: &[f64], w2: &PiecewiseScalar, c: f64, r: f64) -> Result<bool, EvalError> {
    Ok(w2.value(x0, 0.0)? <= c && norm(x0) < r)
}

/// Samples the chain `{W2 <= c} ⊂ {V <= c} ⊂ {W1 <= c} ⊂ B_r` on the grid of
/// `D` plus the sphere of radius `r`, for every `t` in `t_grid`.
pub fn containment_check(
    v: &PiecewiseScalar,
    triple: &ComparisonTriple,
    c: f64,
    spec: &DomainSpec,
    t_grid: &[f64],
) -> Result<Vec<HypothesisResult>, CertifyError> {
    let mut points = spec.grid();
    points.extend(spec.sphere());
    let mut w2_in_v = Worst::new();
    let mut v_in_w1 = Worst::new();
    let mut w1_in_ball = Worst::new();
    for x in &points {
        let w1 = triple.w1.value(x, 0.0)?;
        let w2 = triple.w2.value(x, 0.0)?;
        if w1 <= c {
            w1_in_ball.offer(norm(x) - spec.r, x, t_grid.first().copied().unwrap_or(0.0));
        }
        for &t in t_grid {
            let vx = v.value(x, t)?;
            if w2 <= c {
                w2_in_v.offer(vx - c, x, t);
            }
            if vx <= c {
                v_in_w1.offer(w1 - c, x, t);
            }
        }
    }
    let mut ball = w1_in_ball.finish("containment_w1_in_ball", 0.0, "W1(x) <= c implies |x| < r");
    // strict inequality: the boundary |x| = r is a violation
    ball.passed = ball.worst_margin < 0.0;
    Ok(vec![
        w2_in_v.finish("containment_w2_in_v", 0.0, "W2(x) <= c implies V(x,t) <= c"),
        v_in_w1.finish("containment_v_in_w1", 0.0, "V(x,t) <= c implies W1(x) <= c"),
        ball,
    ])
}

fn domain_hypothesis(spec: &DomainSpec) -> HypothesisResult {
    let margin = spec
        .domain
        .lower
        .iter()
        .zip(&spec.domain.upper)
        .map(|(lo, hi)| (spec.r + lo).max(spec.r - hi))
        .fold(f64::NEG_INFINITY, f64::max);
    let witness = (margin > 0.0).then(|| {
        let axis = spec
            .domain
            .lower
            .iter()
            .zip(&spec.domain.upper)
            .map(|(lo, hi)| (spec.r + lo).max(spec.r - hi))
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut x = vec![0.0; spec.dimension()];
        x[axis] = if spec.r - spec.domain.upper[axis] >= spec.r + spec.domain.lower[axis] { spec.r } else { -spec.r };
        Witness { x, t: 0.0 }
    });
    HypothesisResult::new(
        "domain",
        spec.domain.contains_ball(spec.r),
        margin,
        witness,
        format!("B_r with r = {:?} inside D = {}", spec.r, spec.domain),
    )
}

fn smooth_hypothesis(v: &PiecewiseScalar) -> HypothesisResult {
    let passed = v.is_smooth_in_x();
    let witness = (!passed).then(|| Witness {
        x: vec![0.0; v.dimension()],
        t: 0.0,
    });
    HypothesisResult::new(
        "smooth_in_x",
        passed,
        if passed { 0.0 } else { (v.pieces().len() - 1) as f64 },
        witness,
        format!("V has {} piece(s); one piece means continuously differentiable in x", v.pieces().len()),
    )
}

fn definiteness_hypotheses(triple: &ComparisonTriple, grid: &[Vec<f64>], tol: &Tolerances) -> Result<Vec<HypothesisResult>, CertifyError> {
    let results = triple.check_definiteness(grid, tol.small_ball)?;
    Ok(results
        .into_iter()
        .map(|r| {
            let kind = if r.strict { "positive definite" } else { "positive semi-definite" };
            let margin = (-r.worst_value).max(r.value_at_origin.abs());
            HypothesisResult::new(
                &format!("definite_{}", r.name.to_lowercase()),
                r.passed,
                margin,
                if r.passed { None } else { r.witness.map(|x| Witness { x, t: 0.0 }) },
                format!("{} {kind}: value at origin {:?}, smallest sampled value {:?}", r.name, r.value_at_origin, r.worst_value),
            )
        })
        .collect())
}

fn field_hypothesis(field: &PiecewiseField, spec: &DomainSpec, t_grid: &[f64], tol: &Tolerances) -> HypothesisResult {
    let cfg = ValidationConfig {
        samples_per_axis: spec.samples_per_axis.min(17),
        surface_tol: tol.surface_tol,
        ..ValidationConfig::default()
    };
    let report = field.validate(&spec.domain, t_grid, &cfg);
    let witness = (!report.passed).then(|| {
        let t = report
            .origin_radii
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|r| r.0)
            .unwrap_or(0.0);
        Witness {
            x: vec![0.0; field.dimension()],
            t,
        }
    });
    let detail = if report.findings.is_empty() {
        format!("max piece norm {:?}; K[f](0,t) spread {:?}", report.max_norm, report.origin_growth)
    } else {
        report.findings.join("; ")
    };
    HypothesisResult::new("field_origin_bounded", report.passed, report.origin_growth, witness, detail)
}

fn regularity_hypothesis(v: &PiecewiseScalar, grid: &[Vec<f64>], t: f64, tol: &Tolerances) -> Result<HypothesisResult, CertifyError> {
    let stride = (grid.len() / tol.regularity_points.max(1)).max(1);
    let dirs = axis_directions(v.dimension());
    let mut worst = Worst::new();
    let mut inconclusive = 0;
    let mut checked = 0;
    for x in grid.iter().step_by(stride) {
        let report = v.check_regularity(x, t, &dirs)?;
        checked += 1;
        for d in &report.per_direction {
            match d.verdict {
                Verdict::Inconclusive => inconclusive += 1,
                _ => worst.offer((d.one_sided - d.generalized).abs(), x, t),
            }
        }
    }
    let mut result = worst.finish(
        "regularity",
        crate::lyapunov::REGULARITY_TOL,
        format!(
            "sampled {checked} points x {} axis directions; {inconclusive} inconclusive; finitely many directions only",
            dirs.len()
        ),
    );
    if result.passed {
        result.witness = None;
    }
    Ok(result)
}

fn sphere_hypothesis(triple: &ComparisonTriple, spec: &DomainSpec, tol: &Tolerances) -> Result<(HypothesisResult, Option<SphereConstant>), CertifyError> {
    match compute_c(&triple.w1, spec, tol.safety) {
        Ok(sc) => Ok((
            HypothesisResult::new(
                "sphere_constant",
                true,
                sc.c - sc.sphere_min,
                None,
                format!("c = {:?} * min W1 on |x| = r ({:?})", tol.safety, sc.sphere_min),
            ),
            Some(sc),
        )),
        Err(CertifyError::Degenerate { min, at }) => Ok((
            HypothesisResult::new(
                "sphere_constant",
                false,
                -min,
                Some(Witness { x: at, t: 0.0 }),
                "W1 is not positive on the sphere",
            ),
            None,
        )),
        Err(e) => Err(e),
    }
}

fn finish_containment(
    v: &PiecewiseScalar,
    triple: &ComparisonTriple,
    sc: &Option<SphereConstant>,
    spec: &DomainSpec,
    t_grid: &[f64],
) -> Result<Vec<HypothesisResult>, CertifyError> {
    match sc {
        Some(sc) => containment_check(v, triple, sc.c, spec, t_grid),
        None => Ok(vec![HypothesisResult::new(
            "containment",
            false,
            f64::INFINITY,
            Some(Witness {
                x: vec![0.0; spec.dimension()],
                t: 0.0,
            }),
            "no valid c",
        )]),
    }
}

fn check_dimensions(field: &PiecewiseField, v: &PiecewiseScalar, triple: &ComparisonTriple, spec: &DomainSpec) -> Result<(), CertifyError> {
    let n = field.dimension();
    if v.dimension() != n || triple.w.dimension() != n || spec.dimension() != n {
        return Err(CertifyError::Model(ModelError::Incompatible(
            "field, candidate, comparison functions and domain must share one dimension".into(),
        )));
    }
    Ok(())
}

/// Pointwise check of the decay bound on `D x t_grid`, plus the supporting hypotheses.
pub fn check_corollary2(
    field: &PiecewiseField,
    v: &PiecewiseScalar,
    triple: &ComparisonTriple,
    spec: &DomainSpec,
    t_grid: &[f64],
    tol: &Tolerances,
) -> Result<Certificate, CertifyError> {
    check_dimensions(field, v, triple, spec)?;
    let grid = spec.grid();
    let mut hyps = vec![domain_hypothesis(spec), smooth_hypothesis(v)];
    hyps.extend(definiteness_hypotheses(triple, &grid, tol)?);
    hyps.push(field_hypothesis(field, spec, t_grid, tol));

    let samples: Vec<(Vec<f64>, f64)> = t_grid
        .iter()
        .flat_map(|&t| grid.iter().map(move |x| (x.clone(), t)))
        .collect();
    let bounds = check_bounds(v, triple, &samples)?;
    hyps.push(bounds_hypothesis(&bounds, tol));
    hyps.push(regularity_hypothesis(v, &grid, t_grid.first().copied().unwrap_or(0.0), tol)?);

    let mut worst = Worst::new();
    let mut empty = 0;
    for (x, t) in &samples {
        let d = setvalued_derivative(v, field, x, *t, tol.surface_tol, tol.xi_resolution)?;
        if d.is_empty() {
            empty += 1;
            continue;
        }
        let w = triple.w.value(x, *t)?;
        worst.offer(d.upper + w, x, *t);
    }
    hyps.push(worst.finish(
        "derivative_bound",
        tol.derivative,
        "max of the set-valued derivative <= -W(x) on every grid sample",
    ));

    let (sphere, sc) = sphere_hypothesis(triple, spec, tol)?;
    hyps.push(sphere);
    hyps.extend(finish_containment(v, triple, &sc, spec, t_grid)?);

    let mut notes = vec![
        "sampling-based: no violation found at this resolution".to_string(),
        "regularity checked in finitely many directions only".to_string(),
    ];
    if empty > 0 {
        notes.push(format!("{empty} samples had an empty set-valued derivative (bound holds vacuously)"));
    }
    Ok(Certificate {
        kind: CheckKind::Pointwise,
        hypotheses: hyps,
        r: spec.r,
        c: sc.as_ref().map(|s| s.c),
        sphere_min: sc.as_ref().map(|s| s.sphere_min),
        sphere_argmin: sc.map(|s| s.argmin),
        domain: spec.domain.clone(),
        stats: SampleStats {
            grid_points: grid.len(),
            time_points: t_grid.len(),
            sphere_points: spec.sphere().len(),
            empty_derivative_sets: empty,
            trajectory_samples: 0,
            excluded_samples: 0,
        },
        tolerances: tol.clone(),
        notes,
    })
}

fn bounds_hypothesis(b: &crate::lyapunov::BoundsReport, tol: &Tolerances) -> HypothesisResult {
    let (margin, witness) = if b.lower_margin >= b.upper_margin {
        (b.lower_margin, b.lower_witness.clone())
    } else {
        (b.upper_margin, b.upper_witness.clone())
    };
    let passed = margin <= tol.bounds;
    HypothesisResult::new(
        "bounds",
        passed,
        margin,
        if passed { None } else { witness.map(|(x, t)| Witness { x, t }) },
        format!(
            "W1 <= V <= W2 on {} samples: max(W1-V) = {:?}, max(V-W2) = {:?}",
            b.samples, b.lower_margin, b.upper_margin
        ),
    )
}

/// Up to 11 evenly spaced sample times of `traj`.
fn trajectory_time_grid(traj: &Trajectory) -> Vec<f64> {
    let n = traj.len();
    let picks = 11.min(n);
    (0..picks)
        .map(|i| traj.times[if picks == 1 { 0 } else { i * (n - 1) / (picks - 1) }])
        .collect()
}

/// Checks the hypotheses along one computed solution.
pub fn check_corollary1(
    field: &PiecewiseField,
    v: &PiecewiseScalar,
    triple: &ComparisonTriple,
    spec: &DomainSpec,
    traj: &Trajectory,
    tol: &Tolerances,
) -> Result<Certificate, CertifyError> {
    if traj.field_id != field.id() {
        return Err(SimulationError::ProvenanceMismatch {
            trajectory: traj.field_id,
            field: field.id(),
        }
        .into());
    }
    check_dimensions(field, v, triple, spec)?;
    let grid = spec.grid();
    let t_grid = trajectory_time_grid(traj);
    let mut hyps = vec![domain_hypothesis(spec), smooth_hypothesis(v)];
    hyps.extend(definiteness_hypotheses(triple, &grid, tol)?);
    hyps.push(field_hypothesis(field, spec, &t_grid, tol));
    hyps.push(regularity_hypothesis(v, &grid, traj.times[0], tol)?);

    let (sphere, sc) = sphere_hypothesis(triple, spec, tol)?;
    hyps.push(sphere);

    let x0 = &traj.states[0];
    let t0 = traj.times[0];
    let initial = match &sc {
        Some(sc) => {
            let margin = (triple.w2.value(x0, t0)? - sc.c).max(norm(x0) - spec.r);
            let inside = initial_set_membership(x0, &triple.w2, sc.c, spec.r)?;
            HypothesisResult::new(
                "initial_set",
                inside,
                margin,
                (!inside).then(|| Witness { x: x0.clone(), t: t0 }),
                format!("W2(x0) = {:?} <= c and |x0| = {:?} < r", triple.w2.value(x0, t0)?, norm(x0)),
            )
        }
        None => HypothesisResult::new("initial_set", false, f64::INFINITY, Some(Witness { x: x0.clone(), t: t0 }), "no valid c"),
    };
    hyps.push(initial);

    let samples: Vec<(Vec<f64>, f64)> = traj.states.iter().cloned().zip(traj.times.iter().copied()).collect();
    let bounds = check_bounds(v, triple, &samples)?;
    hyps.push(bounds_hypothesis(&bounds, tol));

    let window = tol.exclusion_steps * traj.config.h;
    let mut excluded = 0;
    let mut worst = Worst::new();
    let vs = samples.iter().map(|(x, t)| v.value(x, *t)).collect::<Result<Vec<_>, _>>()?;
    for k in 1..traj.len().saturating_sub(1) {
        let t = traj.times[k];
        if traj.events.iter().any(|e| (e.time - t).abs() <= window) {
            excluded += 1;
            continue;
        }
        let dv = (vs[k + 1] - vs[k - 1]) / (traj.times[k + 1] - traj.times[k - 1]);
        let w = triple.w.value(&traj.states[k], t)?;
        worst.offer(dv + w, &traj.states[k], t);
    }
    hyps.push(worst.finish(
        "derivative_along_trajectory",
        tol.trajectory_derivative,
        format!("central-difference dV/dt <= -W(x) outside +-{window:?} of each event"),
    ));

    let mut confinement = Worst::new();
    for (x, t) in traj.states.iter().zip(&traj.times) {
        confinement.offer(norm(x) - spec.r, x, *t);
    }
    let mut conf = confinement.finish("confinement", 0.0, "|x(t)| < r along the trajectory");
    conf.passed = conf.worst_margin < 0.0;
    if conf.passed {
        conf.witness = None;
    }
    hyps.push(conf);

    hyps.extend(finish_containment(v, triple, &sc, spec, &t_grid)?);

    for h in hyps.iter_mut().filter(|h| h.passed) {
        if h.name.starts_with("derivative") || h.name.starts_with("containment") {
            h.witness = None;
        }
    }
    Ok(Certificate {
        kind: CheckKind::Trajectory,
        hypotheses: hyps,
        r: spec.r,
        c: sc.as_ref().map(|s| s.c),
        sphere_min: sc.as_ref().map(|s| s.sphere_min),
        sphere_argmin: sc.map(|s| s.argmin),
        domain: spec.domain.clone(),
        stats: SampleStats {
            grid_points: grid.len(),
            time_points: t_grid.len(),
            sphere_points: spec.sphere().len(),
            empty_derivative_sets: 0,
            trajectory_samples: traj.len(),
            excluded_samples: excluded,
        },
        tolerances: tol.clone(),
        notes: vec![
            "sampling-based: no violation found at this resolution".to_string(),
            "dV/dt <= -W is checked almost everywhere: samples near events are excluded".to_string(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Expression, Params};
    use crate::field::SwitchingSurface;
    use crate::simulate::{integrate, IntegratorConfig};
    use std::collections::BTreeMap;

    fn e(src: &str, n: usize) -> Expression {
        parse(src, n, &[]).unwrap()
    }

    fn scalar(src: &str, n: usize) -> PiecewiseScalar {
        PiecewiseScalar::smooth(e(src, n), n, Params::new()).unwrap()
    }

    fn triple(w1: &str, w2: &str, w: &str, n: usize) -> ComparisonTriple {
        ComparisonTriple::from_expressions(e(w1, n), e(w2, n), e(w, n), n, &Params::new()).unwrap()
    }

    fn sign_field() -> PiecewiseField {
        let s = SwitchingSurface::new("s", e("x1", 1), 1);
        let mut pieces = BTreeMap::new();
        pieces.insert("-".parse().unwrap(), vec![Expression::Const(1.0)]);
        pieces.insert("+".parse().unwrap(), vec![Expression::Const(-1.0)]);
        PiecewiseField::new(1, vec![s], pieces, Params::new()).unwrap()
    }

    fn adaptive_field() -> PiecewiseField {
        let s = SwitchingSurface::new("s", e("x1", 2), 2);
        let mut pieces = BTreeMap::new();
        pieces.insert("-".parse().unwrap(), vec![e("-x1 + 1 + x2", 2), e("-x1", 2)]);
        pieces.insert("+".parse().unwrap(), vec![e("-x1 - 1 + x2", 2), e("-x1", 2)]);
        PiecewiseField::new(2, vec![s], pieces, Params::new()).unwrap()
    }

    fn abs_scalar() -> PiecewiseScalar {
        let s = SwitchingSurface::new("s", e("x1", 1), 1);
        let mut pieces = BTreeMap::new();
        pieces.insert("-".parse().unwrap(), e("-x1", 1));
        pieces.insert("+".parse().unwrap(), e("x1", 1));
        PiecewiseScalar::new(1, vec![s], pieces, Params::new()).unwrap()
    }

    fn t_grid() -> Vec<f64> {
        (0..=10).map(f64::from).collect()
    }

    #[test]
    fn sphere_constant_of_round_quadratic() {
        let spec = DomainSpec::new(AxisBox::centered(2, 2.0), 1.0, 8, 360).unwrap();
        let sc = compute_c(&scalar("0.5*(x1^2 + x2^2)", 2), &spec, 0.9).unwrap();
        assert!((sc.c - 0.45).abs() < 1e-12);
        assert!(sc.c < sc.sphere_min);
    }

    #[test]
    fn sphere_constant_of_elliptic_quadratic() {
        let spec = DomainSpec::new(AxisBox::centered(2, 2.0), 1.0, 8, 360).unwrap();
        let sc = compute_c(&scalar("x1^2 + 4*x2^2", 2), &spec, 0.9).unwrap();
        assert!((sc.c - 0.9).abs() < 1e-12);
        assert!((sc.argmin[0].abs() - 1.0).abs() < 1e-12 && sc.argmin[1].abs() < 1e-12);
    }

    #[test]
    fn sphere_constant_rejects_negative_w1() {
        let spec = DomainSpec::new(AxisBox::centered(2, 2.0), 1.0, 8, 360).unwrap();
        assert!(matches!(
            compute_c(&scalar("-(x1^2 + x2^2)", 2), &spec, 0.9),
            Err(CertifyError::Degenerate { .. })
        ));
    }

    #[test]
    fn domain_spec_validation() {
        assert!(DomainSpec::new(AxisBox::centered(1, 1.0), 0.5, 7, 8).is_err());
        assert!(DomainSpec::new(AxisBox::centered(1, 1.0), 0.0, 8, 8).is_err());
        let spec = DomainSpec::new(AxisBox::centered(1, 1.0), 1.5, 8, 8).unwrap();
        let h = domain_hypothesis(&spec);
        assert!(!h.passed);
        assert_eq!(h.witness.unwrap().x.len(), 1);
    }

    #[test]
    fn pointwise_adaptive_passes() {
        let spec = DomainSpec::new(AxisBox::centered(2, 2.0), 1.5, 16, 360).unwrap();
        let cert = check_corollary2(
            &adaptive_field(),
            &scalar("0.5*(x1^2 + x2^2)", 2),
            &triple("0.4*(x1^2 + x2^2)", "x1^2 + x2^2", "x1^2", 2),
            &spec,
            &t_grid(),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(cert.passed(), "{:?}", cert.failures().collect::<Vec<_>>());
    }

    #[test]
    fn pointwise_sign_passes_on_unit_interval() {
        let spec = DomainSpec::new(AxisBox::centered(1, 1.0), 0.9, 64, 8).unwrap();
        let cert = check_corollary2(
            &sign_field(),
            &scalar("0.5*x1^2", 1),
            &triple("0.4*x1^2", "x1^2", "x1^2", 1),
            &spec,
            &t_grid(),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(cert.passed(), "{:?}", cert.failures().collect::<Vec<_>>());
    }

    #[test]
    fn pointwise_sign_fails_at_origin_with_offset_w() {
        let spec = DomainSpec::new(AxisBox::centered(1, 1.0), 0.9, 64, 8).unwrap();
        let t = triple("0.4*x1^2", "x1^2", "x1^2 + 0.5", 1);
        let cert = check_corollary2(&sign_field(), &scalar("0.5*x1^2", 1), &t, &spec, &t_grid(), &Tolerances::default()).unwrap();
        assert!(!cert.passed());
        let h = cert.hypothesis("derivative_bound").unwrap();
        assert!(!h.passed);
        let w = h.witness.as_ref().unwrap();
        assert_eq!(w.x, vec![0.0]);
        assert!((h.worst_margin - 0.5).abs() < 1e-12);
        // W(0) = 0.5 also breaks semi-definiteness
        assert!(!cert.hypothesis("definite_w").unwrap().passed);
        for f in cert.failures() {
            assert!(f.witness.is_some(), "{}", f.name);
        }
    }

    #[test]
    fn containment_examples() {
        let spec = DomainSpec::new(AxisBox::centered(2, 2.0), 1.0, 16, 360).unwrap();
        let v = scalar("0.5*(x1^2 + x2^2)", 2);
        let same = triple("0.5*(x1^2 + x2^2)", "0.5*(x1^2 + x2^2)", "0", 2);
        let c = compute_c(&same.w1, &spec, 0.9).unwrap().c;
        assert!(containment_check(&v, &same, c, &spec, &[0.0]).unwrap().iter().all(|h| h.passed));

        let t = triple("0.4*(x1^2 + x2^2)", "x1^2 + x2^2", "0", 2);
        assert!(containment_check(&v, &t, 0.45 * 0.4, &spec, &[0.0]).unwrap().iter().all(|h| h.passed));

        let sc = compute_c(&t.w1, &spec, 0.9).unwrap();
        let over = containment_check(&v, &t, 1.1 * sc.sphere_min, &spec, &[0.0]).unwrap();
        let ball = over.iter().find(|h| h.name == "containment_w1_in_ball").unwrap();
        assert!(!ball.passed);
        let w = ball.witness.as_ref().unwrap();
        assert!(norm(&w.x) >= spec.r);
        assert!(t.w1.value(&w.x, 0.0).unwrap() <= 1.1 * sc.sphere_min);
    }

    #[test]
    fn initial_membership() {
        let w2 = scalar("0.5*(x1^2 + x2^2)", 2);
        assert!(initial_set_membership(&[0.1, 0.1], &w2, 0.45, 1.0).unwrap());
        assert!(!initial_set_membership(&[1.0, 0.0], &w2, 10.0, 1.0).unwrap());
        let w2 = scalar("x1^2 + x2^2", 2);
        assert!(!initial_set_membership(&[1.0, 1.0], &w2, 0.45, 2.0).unwrap());
    }

    #[test]
    fn trajectory_sign_with_abs_decay() {
        let f = sign_field();
        let traj = integrate(&f, &[0.5], 0.0, 2.0, &IntegratorConfig::default()).unwrap();
        let spec = DomainSpec::new(AxisBox::centered(1, 2.0), 1.5, 16, 8).unwrap();
        let t = ComparisonTriple::new(scalar("0.4*x1^2", 1), scalar("0.6*x1^2", 1), abs_scalar()).unwrap();
        let cert = check_corollary1(&f, &scalar("0.5*x1^2", 1), &t, &spec, &traj, &Tolerances::default()).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures().collect::<Vec<_>>());
        assert!(cert.stats.excluded_samples > 0);
        // dV/dt = -|x| exactly: the bound is tight
        assert!(cert.hypothesis("derivative_along_trajectory").unwrap().worst_margin.abs() < 1e-9);
    }

    #[test]
    fn trajectory_adaptive_passes() {
        let f = adaptive_field();
        let traj = integrate(&f, &[1.0, 1.0], 0.0, 20.0, &IntegratorConfig::default()).unwrap();
        let spec = DomainSpec::new(AxisBox::centered(2, 2.0), 1.9, 16, 360).unwrap();
        let t = triple("0.4*(x1^2 + x2^2)", "0.6*(x1^2 + x2^2)", "x1^2", 2);
        let cert = check_corollary1(&f, &scalar("0.5*(x1^2 + x2^2)", 2), &t, &spec, &traj, &Tolerances::default()).unwrap();
        assert!(cert.passed(), "{:?}", cert.failures().collect::<Vec<_>>());
    }

    #[test]
    fn trajectory_rejects_start_outside_initial_set() {
        let f = adaptive_field();
        let traj = integrate(&f, &[1.0, 1.0], 0.0, 2.0, &IntegratorConfig::default()).unwrap();
        let spec = DomainSpec::new(AxisBox::centered(2, 2.0), 1.5, 16, 360).unwrap();
        let t = triple("0.4*(x1^2 + x2^2)", "x1^2 + x2^2", "x1^2", 2);
        let cert = check_corollary1(&f, &scalar("0.5*(x1^2 + x2^2)", 2), &t, &spec, &traj, &Tolerances::default()).unwrap();
        let h = cert.hypothesis("initial_set").unwrap();
        assert!(!h.passed);
        assert_eq!(h.witness.as_ref().unwrap().x, vec![1.0, 1.0]);
    }

    #[test]
    fn trajectory_rejects_foreign_trajectory() {
        let traj = integrate(&sign_field(), &[0.5], 0.0, 1.0, &IntegratorConfig::default()).unwrap();
        let other = PiecewiseField::smooth(vec![Expression::Const(0.0)], Params::new()).unwrap();
        let spec = DomainSpec::new(AxisBox::centered(1, 2.0), 1.5, 16, 8).unwrap();
        let t = triple("0.4*x1^2", "0.6*x1^2", "0", 1);
        let err = check_corollary1(&other, &scalar("0.5*x1^2", 1), &t, &spec, &traj, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, CertifyError::Simulation(SimulationError::ProvenanceMismatch { .. })));
    }

    #[test]
    fn nonsmooth_candidate_is_flagged() {
        let spec = DomainSpec::new(AxisBox::centered(1, 1.0), 0.9, 16, 8).unwrap();
        let cert = check_corollary2(
            &sign_field(),
            &abs_scalar(),
            &triple("0.5*x1^2", "2*x1^2", "0", 1),
            &spec,
            &[0.0],
            &Tolerances::default(),
        )
        .unwrap();
        let h = cert.hypothesis("smooth_in_x").unwrap();
        assert!(!h.passed && h.witness.is_some());
    }
}
