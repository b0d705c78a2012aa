//! Piecewise-smooth right-hand sides and their Filippov set-valued map.
//!
//! A field is described by `m` switching surfaces `g_i(x, t)` and one smooth
//! vector field per sign pattern in `{-, +}^m`. At a point lying on one or
//! more surfaces, `K[f]` is the convex hull of the limits of all adjacent
//! pieces, which for this class coincides with Filippov's construction.

use std::collections::BTreeMap;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use thiserror::Error;

use crate::convex::ConvexSet;
use crate::expr::{EvalError, Expression, Params, Symbol};
use crate::geometry::{norm, AxisBox};

pub const DEFAULT_SURFACE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Negative,
    Positive,
    /// Transient marker for `|g| <= surface_tol`; never a key of a piece.
    OnSurface,
}

impl Side {
    pub fn symbol(self) -> char {
        match self {
            Side::Negative => '-',
            Side::Positive => '+',
            Side::OnSurface => '0',
        }
    }
}

/// Sign pattern, one entry per switching surface.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegionKey(pub Vec<Side>);

impl RegionKey {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sides(&self) -> &[Side] {
        &self.0
    }

    /// Indices of on-surface coordinates.
    pub fn on_surfaces(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Side::OnSurface)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_interior(&self) -> bool {
        !self.0.contains(&Side::OnSurface)
    }

    pub fn with(&self, index: usize, side: Side) -> RegionKey {
        let mut sides = self.0.clone();
        sides[index] = side;
        RegionKey(sides)
    }

    /// All full sign patterns obtained by resolving each on-surface
    /// coordinate to `-` and `+`, in lexicographic order.
    pub fn adjacent(&self) -> Vec<RegionKey> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for side in &self.0 {
            let choices: &[Side] = match side {
                Side::OnSurface => &[Side::Negative, Side::Positive],
                Side::Negative => &[Side::Negative],
                Side::Positive => &[Side::Positive],
            };
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Side>| {
                    choices.iter().map(move |c| {
                        let mut p = prefix.clone();
                        p.push(*c);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(RegionKey).collect()
    }

    /// Every full sign pattern of the given length.
    pub fn all(len: usize) -> Vec<RegionKey> {
        RegionKey(vec![Side::OnSurface; len]).adjacent()
    }
}

impl fmt::Display for RegionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("*");
        }
        for s in &self.0 {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for RegionKey {
    type Err = String;

    /// `"+-"` style patterns; `"*"` is the single region of a field with no surfaces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "*" {
            return Ok(RegionKey(Vec::new()));
        }
        s.chars()
            .map(|c| match c {
                '-' => Ok(Side::Negative),
                '+' => Ok(Side::Positive),
                '0' => Ok(Side::OnSurface),
                other => Err(format!("invalid sign `{other}` in region pattern `{s}`")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(RegionKey)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingSurface {
    pub name: String,
    pub g: Expression,
    /// `grad_g[i] = dg/dx_{i+1}`
    pub grad_g: Vec<Expression>,
    pub dg_dt: Expression,
}

impl SwitchingSurface {
    pub fn new(name: impl Into<String>, g: Expression, dimension: usize) -> Self {
        let grad_g = g.gradient(dimension);
        let dg_dt = g.differentiate(Symbol::Time);
        SwitchingSurface {
            name: name.into(),
            g,
            grad_g,
            dg_dt,
        }
    }

    pub fn value(&self, x: &[f64], t: f64, params: &Params) -> Result<f64, EvalError> {
        self.g.evaluate(x, t, params)
    }

    pub fn gradient(&self, x: &[f64], t: f64, params: &Params) -> Result<Vec<f64>, EvalError> {
        self.grad_g.iter().map(|e| e.evaluate(x, t, params)).collect()
    }

    pub fn time_partial(&self, x: &[f64], t: f64, params: &Params) -> Result<f64, EvalError> {
        self.dg_dt.evaluate(x, t, params)
    }

    /// `grad g . v + dg/dt`: rate of change of `g` along velocity `v`.
    pub fn rate_along(
        &self,
        x: &[f64],
        t: f64,
        v: &[f64],
        params: &Params,
    ) -> Result<f64, EvalError> {
        let grad = self.gradient(x, t, params)?;
        Ok(crate::geometry::dot(&grad, v) + self.time_partial(x, t, params)?)
    }
}

/// Sign pattern of `surfaces` at `(x, t)`.
pub(crate) fn classify(
    surfaces: &[SwitchingSurface],
    x: &[f64],
    t: f64,
    params: &Params,
    surface_tol: f64,
) -> Result<RegionKey, EvalError> {
    surfaces
        .iter()
        .map(|s| {
            let g = s.value(x, t, params)?;
            Ok(if g.abs() <= surface_tol {
                Side::OnSurface
            } else if g > 0.0 {
                Side::Positive
            } else {
                Side::Negative
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(RegionKey)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("point lies on switching surface(s) {surfaces:?}; use filippov_map for the set-valued value")]
    OnDiscontinuity { surfaces: Vec<String> },
    #[error("no piece declared for region {0}")]
    MissingRegion(String),
    #[error("region pattern `{pattern}` has {got} signs but there are {expected} surfaces")]
    ArityMismatch {
        pattern: String,
        got: usize,
        expected: usize,
    },
    #[error("piece for region {region} has {got} components, expected {expected}")]
    DimensionMismatch {
        region: String,
        got: usize,
        expected: usize,
    },
    #[error("region key {0} contains an on-surface marker")]
    OnSurfaceKey(String),
    #[error("expression references x{} but the system has dimension {dimension}", .index + 1)]
    StateIndex { index: usize, dimension: usize },
    #[error("{0}")]
    Incompatible(String),
}

/// The right-hand side `f(x, t)` as finitely many smooth pieces.
#[derive(Debug, Clone)]
pub struct PiecewiseField {
    dimension: usize,
    surfaces: Vec<SwitchingSurface>,
    pieces: BTreeMap<RegionKey, Vec<Expression>>,
    params: Params,
    id: u64,
}

impl PiecewiseField {
    /// Validates arity, dimension and that every sign pattern has a piece.
    pub fn new(
        dimension: usize,
        surfaces: Vec<SwitchingSurface>,
        pieces: BTreeMap<RegionKey, Vec<Expression>>,
        params: Params,
    ) -> Result<Self, ModelError> {
        let m = surfaces.len();
        for (key, comps) in &pieces {
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
            if comps.len() != dimension {
                return Err(ModelError::DimensionMismatch {
                    region: key.to_string(),
                    got: comps.len(),
                    expected: dimension,
                });
            }
            check_indices(comps.iter(), dimension)?;
        }
        check_indices(surfaces.iter().map(|s| &s.g), dimension)?;
        if let Some(missing) = RegionKey::all(m).into_iter().find(|k| !pieces.contains_key(k)) {
            return Err(ModelError::MissingRegion(missing.to_string()));
        }
        let id = provenance_id(dimension, &surfaces, &pieces, &params);
        Ok(PiecewiseField {
            dimension,
            surfaces,
            pieces,
            params,
            id,
        })
    }

    /// A field with no switching surfaces.
    pub fn smooth(components: Vec<Expression>, params: Params) -> Result<Self, ModelError> {
        let dimension = components.len();
        let mut pieces = BTreeMap::new();
        pieces.insert(RegionKey(Vec::new()), components);
        PiecewiseField::new(dimension, Vec::new(), pieces, params)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn surfaces(&self) -> &[SwitchingSurface] {
        &self.surfaces
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn pieces(&self) -> &BTreeMap<RegionKey, Vec<Expression>> {
        &self.pieces
    }

    /// Stable fingerprint of the field definition, carried by trajectories.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn region_of(&self, x: &[f64], t: f64, surface_tol: f64) -> Result<RegionKey, EvalError> {
        classify(&self.surfaces, x, t, &self.params, surface_tol)
    }

    /// Value of the piece for `key` (a full sign pattern), evaluated at any point.
    pub fn piece_value(&self, key: &RegionKey, x: &[f64], t: f64) -> Result<Vec<f64>, ModelError> {
        let comps = self
            .pieces
            .get(key)
            .ok_or_else(|| ModelError::MissingRegion(key.to_string()))?;
        Ok(comps
            .iter()
            .map(|e| e.evaluate(x, t, &self.params))
            .collect::<Result<Vec<_>, _>>()?)
    }

    /// Classical value of `f` away from every surface.
    pub fn evaluate_field(&self, x: &[f64], t: f64) -> Result<Vec<f64>, ModelError> {
        self.evaluate_field_with_tol(x, t, DEFAULT_SURFACE_TOL)
    }

    pub fn evaluate_field_with_tol(
        &self,
        x: &[f64],
        t: f64,
        surface_tol: f64,
    ) -> Result<Vec<f64>, ModelError> {
        let key = self.region_of(x, t, surface_tol)?;
        let on = key.on_surfaces();
        if !on.is_empty() {
            return Err(ModelError::OnDiscontinuity {
                surfaces: on.iter().map(|&i| self.surfaces[i].name.clone()).collect(),
            });
        }
        self.piece_value(&key, x, t)
    }

    /// `K[f](x, t)`: hull of the values of every piece adjacent to `(x, t)`.
    pub fn filippov_map(&self, x: &[f64], t: f64, surface_tol: f64) -> Result<ConvexSet, ModelError> {
        let key = self.region_of(x, t, surface_tol)?;
        let values = key
            .adjacent()
            .iter()
            .map(|k| self.piece_value(k, x, t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConvexSet::new(values))
    }

    /// Samples every piece on the part of `domain` where it is active and
    /// tracks the size of `K[f](0, t)` across `t_grid`.
    pub fn validate(&self, domain: &AxisBox, t_grid: &[f64], config: &ValidationConfig) -> FieldValidation {
        let mut report = FieldValidation {
            piece_max_norms: BTreeMap::new(),
            max_norm: 0.0,
            origin_radii: Vec::new(),
            origin_growth: 0.0,
            passed: true,
            findings: Vec::new(),
        };
        if domain.dimension() != self.dimension {
            report.fail(format!(
                "domain has dimension {}, field has {}",
                domain.dimension(),
                self.dimension
            ));
            return report;
        }
        if !domain.contains(&vec![0.0; self.dimension]) {
            report.fail("domain does not contain the origin".into());
        }
        let grid = domain.grid(config.samples_per_axis);
        for &t in t_grid {
            for x in &grid {
                let key = match self.region_of(x, t, config.surface_tol) {
                    Ok(k) => k,
                    Err(e) => {
                        report.fail(format!("surface evaluation failed at x={x:?}, t={t}: {e}"));
                        continue;
                    }
                };
                for adj in key.adjacent() {
                    match self.piece_value(&adj, x, t) {
                        Ok(v) if v.iter().all(|c| c.is_finite()) => {
                            let n = norm(&v);
                            let slot = report.piece_max_norms.entry(adj.clone()).or_insert(0.0);
                            *slot = slot.max(n);
                            report.max_norm = report.max_norm.max(n);
                        }
                        Ok(v) => report.fail(format!(
                            "piece {adj} is not finite at x={x:?}, t={t}: {v:?}"
                        )),
                        Err(e) => report.fail(format!("piece {adj} failed at x={x:?}, t={t}: {e}")),
                    }
                }
            }
        }
        let origin = vec![0.0; self.dimension];
        for &t in t_grid {
            match self.filippov_map(&origin, t, config.surface_tol) {
                Ok(k) => report.origin_radii.push((t, k.max_norm())),
                Err(e) => report.fail(format!("K[f](0, {t}) failed: {e}")),
            }
        }
        if let (Some(lo), Some(hi)) = (
            report.origin_radii.iter().map(|r| r.1).reduce(f64::min),
            report.origin_radii.iter().map(|r| r.1).reduce(f64::max),
        ) {
            report.origin_growth = hi - lo;
            if report.origin_growth > config.origin_growth_bound {
                report.fail(format!(
                    "K[f](0, t) grows by {} across the time grid (bound {})",
                    report.origin_growth, config.origin_growth_bound
                ));
            }
        }
        report
    }
}

fn check_indices<'a>(
    exprs: impl Iterator<Item = &'a Expression>,
    dimension: usize,
) -> Result<(), ModelError> {
    for e in exprs {
        if let Some(index) = e.max_state_index().filter(|&i| i >= dimension) {
            return Err(ModelError::StateIndex { index, dimension });
        }
    }
    Ok(())
}

fn provenance_id(
    dimension: usize,
    surfaces: &[SwitchingSurface],
    pieces: &BTreeMap<RegionKey, Vec<Expression>>,
    params: &Params,
) -> u64 {
    let mut h = DefaultHasher::new();
    dimension.hash(&mut h);
    for s in surfaces {
        s.name.hash(&mut h);
        s.g.to_string().hash(&mut h);
    }
    for (k, comps) in pieces {
        k.hash(&mut h);
        for c in comps {
            c.to_string().hash(&mut h);
        }
    }
    for (name, v) in params {
        name.hash(&mut h);
        v.to_bits().hash(&mut h);
    }
    h.finish()
}

#[derive(Debug, Clone)]
pub struct ValidationConfig {
    pub samples_per_axis: usize,
    pub surface_tol: f64,
    /// Allowed spread of `max |K[f](0, t)|` over the time grid.
    pub origin_growth_bound: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            samples_per_axis: 9,
            surface_tol: DEFAULT_SURFACE_TOL,
            origin_growth_bound: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FieldValidation {
    pub piece_max_norms: BTreeMap<RegionKey, f64>,
    pub max_norm: f64,
    /// `(t, max vertex norm of K[f](0, t))`
    pub origin_radii: Vec<(f64, f64)>,
    pub origin_growth: f64,
    pub passed: bool,
    pub findings: Vec<String>,
}

impl FieldValidation {
    fn fail(&mut self, finding: String) {
        self.passed = false;
        self.findings.push(finding);
    }
}
