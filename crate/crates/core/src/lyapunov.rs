//! Piecewise-smooth Lyapunov candidates and the nonsmooth calculus built on
//! them: Clarke generalized gradients, right and generalized directional
//! derivatives, regularity, and the set-valued time derivative
//! `intersection over xi in dV of xi^T (K[f]; 1)`.

use std::collections::BTreeMap;

use crate::convex::ConvexSet;
use crate::expr::{EvalError, Expression, Params, Symbol};
use crate::field::{classify, ModelError, PiecewiseField, RegionKey, SwitchingSurface, DEFAULT_SURFACE_TOL};
use crate::geometry::{axpy, cartesian, dot, norm, AxisBox};

/// Tolerance for comparing `f'(x, v)` and `f°(x, v)`.
pub const REGULARITY_TOL: f64 = 1e-6;
/// Allowed jump between adjacent pieces on a surface.
pub const CONTINUITY_TOL: f64 = 1e-8;
/// Below this width an interval or set counts as a single point.
pub const SINGLETON_TOL: f64 = 1e-9;
/// Default number of grid points per free dimension of the gradient polytope.
pub const DEFAULT_XI_RESOLUTION: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPiece {
    pub value: Expression,
    pub grad: Vec<Expression>,
    pub dt: Expression,
}

impl ScalarPiece {
    fn new(value: Expression, dimension: usize) -> Self {
        ScalarPiece {
            grad: value.gradient(dimension),
            dt: value.differentiate(Symbol::Time),
            value,
        }
    }

    /// `(grad_x V, dV/dt)` as one vector of length `n + 1`.
    pub fn augmented_gradient(&self, x: &[f64], t: f64, params: &Params) -> Result<Vec<f64>, EvalError> {
        let mut g = self
            .grad
            .iter()
            .map(|e| e.evaluate(x, t, params))
            .collect::<Result<Vec<_>, _>>()?;
        g.push(self.dt.evaluate(x, t, params)?);
        Ok(g)
    }
}

/// A scalar function `V(x, t)` made of smooth pieces over the sign regions
/// of its own switching surfaces.
#[derive(Debug, Clone)]
pub struct PiecewiseScalar {
    dimension: usize,
    surfaces: Vec<SwitchingSurface>,
    pieces: BTreeMap<RegionKey, ScalarPiece>,
    params: Params,
}

impl PiecewiseScalar {
    pub fn new(
        dimension: usize,
        surfaces: Vec<SwitchingSurface>,
        pieces: BTreeMap<RegionKey, Expression>,
        params: Params,
    ) -> Result<Self, ModelError> {
        let m = surfaces.len();
        for (key, e) in &pieces {
            if key.len() != m {
                return Err(ModelError::ArityMismatch {
                    pattern: key.to_string(),
                    got: key.len(),
                    expected: m,
                });
            }
            if !key.is_interior() {
                return Err(ModelError::OnSurfaceKey(key.to_string()));
            }
            if let Some(index) = e.max_state_index().filter(|&i| i >= dimension) {
                return Err(ModelError::StateIndex { index, dimension });
            }
        }
        if let Some(missing) = RegionKey::all(m).into_iter().find(|k| !pieces.contains_key(k)) {
            return Err(ModelError::MissingRegion(missing.to_string()));
        }
        let pieces = pieces
            .into_iter()
            .map(|(k, e)| (k, ScalarPiece::new(e, dimension)))
            .collect();
        Ok(PiecewiseScalar {
            dimension,
            surfaces,
            pieces,
            params,
        })
    }

    /// Single-piece candidate; continuously differentiable in `x`.
    pub fn smooth(value: Expression, dimension: usize, params: Params) -> Result<Self, ModelError> {
        let mut pieces = BTreeMap::new();
        pieces.insert(RegionKey(Vec::new()), value);
        PiecewiseScalar::new(dimension, Vec::new(), pieces, params)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn surfaces(&self) -> &[SwitchingSurface] {
        &self.surfaces
    }

    pub fn pieces(&self) -> &BTreeMap<RegionKey, ScalarPiece> {
        &self.pieces
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn is_smooth_in_x(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn depends_on_time(&self) -> bool {
        self.pieces.values().any(|p| p.value.depends_on_time())
            || self.surfaces.iter().any(|s| s.g.depends_on_time())
    }

    pub fn region_of(&self, x: &[f64], t: f64, surface_tol: f64) -> Result<RegionKey, EvalError> {
        classify(&self.surfaces, x, t, &self.params, surface_tol)
    }

    /// `V(x, t)`. On a surface any adjacent piece is used; candidates are
    /// continuous, so the choice does not matter beyond `CONTINUITY_TOL`.
    pub fn value(&self, x: &[f64], t: f64) -> Result<f64, EvalError> {
        let key = self.region_of(x, t, DEFAULT_SURFACE_TOL)?;
        let first = key.adjacent().swap_remove(0);
        self.pieces[&first].value.evaluate(x, t, &self.params)
    }

    /// Clarke generalized gradient in `R^{n+1}` (space gradient followed by
    /// the time partial): hull of the gradients of every adjacent piece.
    pub fn clarke_gradient(&self, x: &[f64], t: f64, surface_tol: f64) -> Result<ConvexSet, EvalError> {
        let key = self.region_of(x, t, surface_tol)?;
        let grads = key
            .adjacent()
            .iter()
            .map(|k| self.pieces[k].augmented_gradient(x, t, &self.params))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConvexSet::new(grads))
    }

    /// Right directional derivative `V'(x, v)` in `x`, from one-sided
    /// difference quotients on a halving step sequence with Richardson
    /// extrapolation.
    pub fn directional_derivative(&self, x: &[f64], t: f64, v: &[f64]) -> Result<LimitEstimate, EvalError> {
        check_direction(v);
        let base = self.value(x, t)?;
        let raw = step_sequence()
            .map(|h| Ok((self.value(&axpy(x, h, v), t)? - base) / h))
            .collect::<Result<Vec<_>, EvalError>>()?;
        Ok(LimitEstimate::from_sequence(raw, REGULARITY_TOL))
    }

    /// Generalized directional derivative `V°(x, v)`: the difference quotient
    /// maximised over a stencil of base points `y` in a shrinking
    /// neighbourhood of `x`, extrapolated as the neighbourhood and step
    /// shrink together. The support function of the Clarke gradient is
    /// returned alongside as an independent check.
    pub fn generalized_directional_derivative(
        &self,
        x: &[f64],
        t: f64,
        v: &[f64],
    ) -> Result<GeneralizedEstimate, EvalError> {
        check_direction(v);
        let stencil = base_stencil(self.dimension);
        let raw = step_sequence()
            .map(|rho| {
                let h = rho / 4.0;
                let mut best = f64::NEG_INFINITY;
                for s in &stencil {
                    let y = axpy(x, rho, s);
                    let q = (self.value(&axpy(&y, h, v), t)? - self.value(&y, t)?) / h;
                    best = best.max(q);
                }
                Ok(best)
            })
            .collect::<Result<Vec<_>, EvalError>>()?;
        let estimate = LimitEstimate::from_sequence(raw, REGULARITY_TOL);
        let mut augmented = v.to_vec();
        augmented.push(0.0);
        let support = self.clarke_gradient(x, t, DEFAULT_SURFACE_TOL)?.support(&augmented);
        Ok(GeneralizedEstimate { estimate, support })
    }

    /// Compares `V'(x, v)` with `V°(x, v)` for every direction.
    pub fn check_regularity(&self, x: &[f64], t: f64, directions: &[Vec<f64>]) -> Result<RegularityReport, EvalError> {
        assert!(!directions.is_empty(), "at least one direction is required");
        let mut per_direction = Vec::with_capacity(directions.len());
        for v in directions {
            let one_sided = self.directional_derivative(x, t, v)?;
            let generalized = self.generalized_directional_derivative(x, t, v)?.estimate;
            let verdict = if !one_sided.converged || !generalized.converged {
                Verdict::Inconclusive
            } else if (one_sided.value - generalized.value).abs() <= REGULARITY_TOL {
                Verdict::Regular
            } else {
                Verdict::NotRegular
            };
            per_direction.push(DirectionVerdict {
                direction: v.clone(),
                one_sided: one_sided.value,
                generalized: generalized.value,
                verdict,
            });
        }
        let overall = if per_direction.iter().any(|d| d.verdict == Verdict::NotRegular) {
            Verdict::NotRegular
        } else if per_direction.iter().all(|d| d.verdict == Verdict::Regular) {
            Verdict::Regular
        } else {
            Verdict::Inconclusive
        };
        Ok(RegularityReport { per_direction, overall })
    }

    /// Locates sign changes of each surface along grid lines of `domain`,
    /// bisects to the surface, and compares the adjacent pieces there.
    pub fn continuity_check(&self, domain: &AxisBox, t_grid: &[f64], samples_per_axis: usize) -> Result<ContinuityReport, EvalError> {
        let mut report = ContinuityReport {
            points_checked: 0,
            max_jump: 0.0,
            witness: None,
            passed: true,
        };
        let grid = domain.grid(samples_per_axis);
        let n = self.dimension;
        for &t in t_grid {
            for (si, surface) in self.surfaces.iter().enumerate() {
                for p in &grid {
                    for axis in 0..n {
                        let step = (domain.upper[axis] - domain.lower[axis]) / (samples_per_axis.max(2) - 1) as f64;
                        let mut q = p.clone();
                        q[axis] += step;
                        if q[axis] > domain.upper[axis] + 1e-12 {
                            continue;
                        }
                        let ga = surface.value(p, t, &self.params)?;
                        let gb = surface.value(&q, t, &self.params)?;
                        if ga * gb > 0.0 {
                            continue;
                        }
                        let mut lo = p.clone();
                        let mut hi = q.clone();
                        let mut g_lo = ga;
                        for _ in 0..80 {
                            let mid: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
                            let gm = surface.value(&mid, t, &self.params)?;
                            if gm == 0.0 {
                                lo = mid.clone();
                                hi = mid;
                                break;
                            }
                            if (gm > 0.0) == (g_lo > 0.0) {
                                lo = mid;
                                g_lo = gm;
                            } else {
                                hi = mid;
                            }
                        }
                        let root: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
                        let mut key = self.region_of(&root, t, DEFAULT_SURFACE_TOL)?;
                        key = key.with(si, crate::field::Side::OnSurface);
                        let values = key
                            .adjacent()
                            .iter()
                            .map(|k| self.pieces[k].value.evaluate(&root, t, &self.params))
                            .collect::<Result<Vec<_>, _>>()?;
                        let hi_v = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                        let lo_v = values.iter().cloned().fold(f64::INFINITY, f64::min);
                        report.points_checked += 1;
                        if hi_v - lo_v > report.max_jump {
                            report.max_jump = hi_v - lo_v;
                            report.witness = Some((root, t));
                        }
                    }
                }
            }
        }
        report.passed = report.max_jump <= CONTINUITY_TOL;
        Ok(report)
    }
}

fn check_direction(v: &[f64]) {
    assert!(norm(v) > 0.0, "direction must be nonzero");
}

/// Halving steps from 1e-3 down to about 1e-6.
fn step_sequence() -> impl Iterator<Item = f64> {
    (0..11).map(|k| 1e-3 / f64::from(1u32 << k))
}

fn base_stencil(dimension: usize) -> Vec<Vec<f64>> {
    let offsets = [-1.0, -0.5, 0.0, 0.5, 1.0];
    if dimension <= 3 {
        cartesian(&vec![offsets.to_vec(); dimension])
    } else {
        let mut pts = vec![vec![0.0; dimension]];
        for i in 0..dimension {
            for s in [-1.0, -0.5, 0.5, 1.0] {
                let mut p = vec![0.0; dimension];
                p[i] = s;
                pts.push(p);
            }
        }
        pts
    }
}

/// Result of a numerically taken limit.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitEstimate {
    pub value: f64,
    /// Declared agreement required between the last extrapolated estimates.
    pub tolerance: f64,
    pub converged: bool,
    /// Raw quotients, one per step.
    pub raw: Vec<f64>,
}

impl LimitEstimate {
    /// Richardson extrapolation for first-order errors on a halving
    /// sequence, `R_k = 2 q_k - q_{k-1}`; converged when the last three
    /// extrapolants agree within `tolerance`.
    fn from_sequence(raw: Vec<f64>, tolerance: f64) -> Self {
        let extrapolated: Vec<f64> = raw.windows(2).map(|w| 2.0 * w[1] - w[0]).collect();
        let tail = &extrapolated[extrapolated.len().saturating_sub(3)..];
        let spread = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - tail.iter().cloned().fold(f64::INFINITY, f64::min);
        LimitEstimate {
            value: *extrapolated.last().unwrap_or(&raw[0]),
            tolerance,
            converged: spread.is_finite() && spread <= tolerance,
            raw,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedEstimate {
    pub estimate: LimitEstimate,
    /// `max over xi in dV(x, t) of xi . (v, 0)`
    pub support: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Regular,
    NotRegular,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionVerdict {
    pub direction: Vec<f64>,
    pub one_sided: f64,
    pub generalized: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub per_direction: Vec<DirectionVerdict>,
    pub overall: Verdict,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.overall == Verdict::Regular
    }
}

/// `+e_i` and `-e_i` for every axis.
pub fn axis_directions(dimension: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * dimension);
    for i in 0..dimension {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; dimension];
            v[i] = s;
            out.push(v);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    pub points_checked: usize,
    pub max_jump: f64,
    pub witness: Option<(Vec<f64>, f64)>,
    pub passed: bool,
}

/// A closed real interval, empty when `lower > upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeInterval {
    pub lower: f64,
    pub upper: f64,
}

impl DerivativeInterval {
    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
    }

    pub fn is_singleton(&self) -> bool {
        !self.is_empty() && self.upper - self.lower <= SINGLETON_TOL
    }

    pub fn contains(&self, value: f64, tol: f64) -> bool {
        !self.is_empty() && self.lower - tol <= value && value <= self.upper + tol
    }
}

/// The set-valued derivative of `v` along `field` at `(x, t)`.
///
/// For each candidate `xi` in the Clarke gradient the interval
/// `[min, max] of xi . (w, 1)` over the vertices `w` of `K[f](x, t)` is
/// formed, and the candidates' intervals are intersected. Candidates are the
/// polytope vertices, a barycentric grid with `xi_resolution` points per
/// free dimension, and, on every edge of the polytope, the points where a
/// coordinate of `xi` vanishes or two vertices of `K[f]` tie. The envelopes
/// are piecewise linear with kinks only at such ties, so the result is exact
/// whenever the gradient is a segment.
pub fn setvalued_derivative(
    v: &PiecewiseScalar,
    field: &PiecewiseField,
    x: &[f64],
    t: f64,
    surface_tol: f64,
    xi_resolution: usize,
) -> Result<DerivativeInterval, ModelError> {
    if v.dimension() != field.dimension() {
        return Err(ModelError::Incompatible(format!(
            "candidate has dimension {}, field has {}",
            v.dimension(),
            field.dimension()
        )));
    }
    let grad = v.clarke_gradient(x, t, surface_tol)?;
    let k = field.filippov_map(x, t, surface_tol)?;
    let velocities: Vec<Vec<f64>> = k
        .vertices()
        .iter()
        .map(|w| {
            let mut a = w.clone();
            a.push(1.0);
            a
        })
        .collect();

    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    let mut consider = |xi: &[f64]| {
        let (lo, hi) = velocities.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), w| {
            let d = dot(xi, w);
            (lo.min(d), hi.max(d))
        });
        lower = lower.max(lo);
        upper = upper.min(hi);
    };

    let verts = grad.vertices();
    for xi in verts {
        consider(xi);
    }
    if verts.len() > 1 {
        for weights in barycentric_grid(verts.len(), xi_resolution) {
            let xi = combine(verts, &weights);
            consider(&xi);
        }
        for a in 0..verts.len() {
            for b in (a + 1)..verts.len() {
                let (p, q) = (&verts[a], &verts[b]);
                let mut crossings = Vec::new();
                for c in 0..p.len() {
                    crossings.push(zero_crossing(p[c], q[c]));
                }
                for i in 0..velocities.len() {
                    for j in (i + 1)..velocities.len() {
                        let diff: Vec<f64> = velocities[i].iter().zip(&velocities[j]).map(|(u, w)| u - w).collect();
                        crossings.push(zero_crossing(dot(p, &diff), dot(q, &diff)));
                    }
                }
                for s in crossings.into_iter().flatten() {
                    let xi: Vec<f64> = p.iter().zip(q).map(|(u, w)| (1.0 - s) * u + s * w).collect();
                    consider(&xi);
                }
            }
        }
    }

    if lower > upper && lower - upper <= SINGLETON_TOL {
        let mid = 0.5 * (lower + upper);
        lower = mid;
        upper = mid;
    }
    Ok(DerivativeInterval { lower, upper })
}

/// Parameter `s` in (0, 1) where `(1-s) a + s b = 0`, if any.
fn zero_crossing(a: f64, b: f64) -> Option<f64> {
    if (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0) {
        Some(a / (a - b))
    } else {
        None
    }
}

fn combine(verts: &[Vec<f64>], weights: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; verts[0].len()];
    for (w, v) in weights.iter().zip(verts) {
        for (o, c) in out.iter_mut().zip(v) {
            *o += w * c;
        }
    }
    out
}

/// Barycentric weights `k/(res-1)` over `m` vertices; resolution is reduced
/// if the grid would exceed 50 000 points.
fn barycentric_grid(m: usize, resolution: usize) -> Vec<Vec<f64>> {
    let mut divisions = resolution.max(2) - 1;
    while divisions > 1 && binomial(divisions + m - 1, m - 1) > 50_000 {
        divisions -= 1;
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; m];
    compositions(divisions, 0, &mut current, &mut out);
    out.into_iter()
        .map(|c| c.iter().map(|&k| k as f64 / divisions as f64).collect())
        .collect()
}

fn compositions(remaining: usize, index: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if index == current.len() - 1 {
        current[index] = remaining;
        out.push(current.clone());
        return;
    }
    for k in 0..=remaining {
        current[index] = k;
        compositions(remaining - k, index + 1, current, out);
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Comparison functions for the sandwich `W1 <= V <= W2` and the decay bound `W`.
#[derive(Debug, Clone)]
pub struct ComparisonTriple {
    pub w1: PiecewiseScalar,
    pub w2: PiecewiseScalar,
    pub w: PiecewiseScalar,
}

impl ComparisonTriple {
    /// All three must be independent of `t`.
    pub fn new(w1: PiecewiseScalar, w2: PiecewiseScalar, w: PiecewiseScalar) -> Result<Self, ModelError> {
        for (name, f) in [("W1", &w1), ("W2", &w2), ("W", &w)] {
            if f.depends_on_time() {
                return Err(ModelError::Incompatible(format!("{name} must not depend on t")));
            }
        }
        if w1.dimension() != w2.dimension() || w1.dimension() != w.dimension() {
            return Err(ModelError::Incompatible("comparison functions differ in dimension".into()));
        }
        Ok(ComparisonTriple { w1, w2, w })
    }

    pub fn from_expressions(
        w1: Expression,
        w2: Expression,
        w: Expression,
        dimension: usize,
        params: &Params,
    ) -> Result<Self, ModelError> {
        ComparisonTriple::new(
            PiecewiseScalar::smooth(w1, dimension, params.clone())?,
            PiecewiseScalar::smooth(w2, dimension, params.clone())?,
            PiecewiseScalar::smooth(w, dimension, params.clone())?,
        )
    }

    /// Sampled (semi-)definiteness: all three vanish at the origin and are
    /// nonnegative on `samples`; `W1` and `W2` are strictly positive at
    /// samples farther than `small_ball` from the origin.
    pub fn check_definiteness(&self, samples: &[Vec<f64>], small_ball: f64) -> Result<Vec<DefinitenessResult>, EvalError> {
        let n = self.w.dimension();
        let origin = vec![0.0; n];
        let mut out = Vec::new();
        for (name, f, strict) in [("W1", &self.w1, true), ("W2", &self.w2, true), ("W", &self.w, false)] {
            let at_origin = f.value(&origin, 0.0)?;
            let mut result = DefinitenessResult {
                name,
                strict,
                value_at_origin: at_origin,
                worst_value: f64::INFINITY,
                witness: None,
                passed: at_origin.abs() <= SINGLETON_TOL,
            };
            if !result.passed {
                result.witness = Some(origin.clone());
            }
            for x in samples {
                if strict && norm(x) <= small_ball {
                    continue;
                }
                let value = f.value(x, 0.0)?;
                let bad = if strict { value <= 0.0 } else { value < 0.0 };
                if value < result.worst_value {
                    result.worst_value = value;
                    if bad || result.passed {
                        result.witness = Some(x.clone());
                    }
                }
                if bad && result.passed {
                    result.passed = false;
                    result.witness = Some(x.clone());
                }
            }
            out.push(result);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefinitenessResult {
    pub name: &'static str,
    pub strict: bool,
    pub value_at_origin: f64,
    /// Smallest sampled value (excluding the small ball for strict checks).
    pub worst_value: f64,
    pub witness: Option<Vec<f64>>,
    pub passed: bool,
}

/// Outcome of checking `W1(x) <= V(x, t) <= W2(x)` on samples.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    /// `max (W1 - V)`; at most zero when the lower bound holds.
    pub lower_margin: f64,
    pub lower_witness: Option<(Vec<f64>, f64)>,
    /// `max (V - W2)`
    pub upper_margin: f64,
    pub upper_witness: Option<(Vec<f64>, f64)>,
    pub violations: Vec<(Vec<f64>, f64)>,
    pub samples: usize,
    pub passed: bool,
}

/// Checks the sandwich bound at every `(x, t)` sample, allowing `SINGLETON_TOL` slack.
pub fn check_bounds(
    v: &PiecewiseScalar,
    triple: &ComparisonTriple,
    samples: &[(Vec<f64>, f64)],
) -> Result<BoundsReport, EvalError> {
    let mut report = BoundsReport {
        lower_margin: f64::NEG_INFINITY,
        lower_witness: None,
        upper_margin: f64::NEG_INFINITY,
        upper_witness: None,
        violations: Vec::new(),
        samples: samples.len(),
        passed: true,
    };
    for (x, t) in samples {
        let value = v.value(x, *t)?;
        let lower = triple.w1.value(x, *t)? - value;
        let upper = value - triple.w2.value(x, *t)?;
        if lower > report.lower_margin {
            report.lower_margin = lower;
            report.lower_witness = Some((x.clone(), *t));
        }
        if upper > report.upper_margin {
            report.upper_margin = upper;
            report.upper_witness = Some((x.clone(), *t));
        }
        if lower > SINGLETON_TOL || upper > SINGLETON_TOL {
            report.violations.push((x.clone(), *t));
        }
    }
    report.passed = report.violations.is_empty();
    Ok(report)
}
