//! Scenario files: a sectioned, line-oriented text format.
//!
//! ```text
//! # comments start with '#'
//! [system]
//! dimension = 2
//! mode = all                      # check1 | check2 | simulate | all
//!
//! [parameters]
//! k = 1.5
//!
//! [surfaces]
//! s = x1                          # name = g(x, t)
//!
//! [regions]
//! - = -x1 + 1 + x2, -x1           # sign pattern = f1, f2, ...
//! + = -x1 - 1 + x2, -x1
//!
//! [lyapunov]
//! V = 0.5*(x1^2 + x2^2)           # or piecewise, see below
//! W1 = 0.4*(x1^2 + x2^2)
//! W2 = 0.6*(x1^2 + x2^2)
//! W = x1^2
//!
//! [domain]
//! box = -2 2, -2 2
//! r = 1.9
//! samples = 64
//! sphere_samples = 720
//! t_grid = 0:1:10                 # start:step:stop, or a comma list
//! safety = 0.9
//!
//! [simulate]
//! x0 = 1, 1
//! t0 = 0
//! tf = 30
//! h = 1e-3
//!
//! [tolerances]
//! derivative = 1e-9
//! ```
//!
//! A piecewise candidate or comparison function lists its own surfaces with
//! `surface name = g` inside `[lyapunov]` and one piece per sign pattern,
//! written `V[+] = x1`, `V[-] = -x1`. `W1`, `W2` and `W` accept the same
//! bracket form and share those surfaces.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::certify::{DomainSpec, Tolerances};
use crate::expr::{parse, Expression, Params};
use crate::field::{FieldValidation, ModelError, PiecewiseField, RegionKey, SwitchingSurface, ValidationConfig};
use crate::geometry::AxisBox;
use crate::lyapunov::{ComparisonTriple, PiecewiseScalar};
use crate::simulate::{IntegratorConfig, DEFAULT_TAIL_FRACTION, REPORT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Decay bound along the simulated solution.
    Check1,
    /// Pointwise decay bound on the grid.
    Check2,
    Simulate,
    All,
}

impl Mode {
    pub fn needs_trajectory(self) -> bool {
        !matches!(self, Mode::Check2)
    }

    pub fn needs_domain(self) -> bool {
        !matches!(self, Mode::Simulate)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "check1" => Ok(Mode::Check1),
            "check2" => Ok(Mode::Check2),
            "simulate" => Ok(Mode::Simulate),
            "all" => Ok(Mode::All),
            other => Err(format!("unknown mode `{other}` (expected check1, check2, simulate or all)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Check1 => "check1",
            Mode::Check2 => "check2",
            Mode::Simulate => "simulate",
            Mode::All => "all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadErrorKind {
    Io,
    Syntax,
    Expression,
    Model,
    Missing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadError {
    pub file: String,
    pub line: Option<usize>,
    pub kind: LoadErrorKind,
    pub message: String,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "{}:{}: {}", self.file, line, self.message),
            None => write!(f, "{}: {}", self.file, self.message),
        }
    }
}

impl std::error::Error for LoadError {}

#[derive(Debug, Clone)]
pub struct SimulateSpec {
    pub x0: Vec<f64>,
    pub t0: f64,
    pub tf: f64,
    pub config: IntegratorConfig,
    pub tail_fraction: f64,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub dimension: usize,
    pub mode: Mode,
    pub params: Params,
    pub field: PiecewiseField,
    pub v: PiecewiseScalar,
    pub triple: ComparisonTriple,
    pub domain: Option<DomainSpec>,
    pub t_grid: Vec<f64>,
    pub simulate: Option<SimulateSpec>,
    pub tolerances: Tolerances,
    /// Compliance threshold distance for the inclusion check.
    pub inclusion_tol: f64,
    /// Slack for the integral and tail criteria of the convergence report.
    pub report_tol: f64,
    pub field_validation: FieldValidation,
}

impl Scenario {
    pub fn surface_count(&self) -> usize {
        self.field.surfaces().len()
    }

    pub fn region_count(&self) -> usize {
        self.field.pieces().len()
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, LoadError> {
    let path = path.as_ref();
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| LoadError {
        file: file.clone(),
        line: None,
        kind: LoadErrorKind::Io,
        message: e.to_string(),
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| file.clone());
    parse_scenario(&text, &file, &name)
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

struct Section {
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

struct Loader<'a> {
    file: &'a str,
}

impl Loader<'_> {
    fn err(&self, line: impl Into<Option<usize>>, kind: LoadErrorKind, message: impl Into<String>) -> LoadError {
        LoadError {
            file: self.file.to_string(),
            line: line.into(),
            kind,
            message: message.into(),
        }
    }

    fn sections(&self, text: &str) -> Result<BTreeMap<String, Section>, LoadError> {
        const KNOWN: [&str; 8] = [
            "system",
            "parameters",
            "surfaces",
            "regions",
            "lyapunov",
            "domain",
            "simulate",
            "tolerances",
        ];
        let mut sections: BTreeMap<String, Section> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| self.err(line, LoadErrorKind::Syntax, "unterminated section header"))?
                    .trim();
                if !KNOWN.contains(&name) {
                    return Err(self.err(line, LoadErrorKind::Syntax, format!("unknown section [{name}]")));
                }
                if sections.contains_key(name) {
                    return Err(self.err(line, LoadErrorKind::Syntax, format!("duplicate section [{name}]")));
                }
                sections.insert(name.to_string(), Section { line, entries: Vec::new() });
                current = Some(name.to_string());
                continue;
            }
            let section = current
                .as_ref()
                .ok_or_else(|| self.err(line, LoadErrorKind::Syntax, "entry before any section header"))?;
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| self.err(line, LoadErrorKind::Syntax, "expected `key = value`"))?;
            let key = key.split_whitespace().collect::<Vec<_>>().join(" ");
            if key.is_empty() {
                return Err(self.err(line, LoadErrorKind::Syntax, "empty key"));
            }
            let entries = &mut sections.get_mut(section).expect("current section exists").entries;
            if entries.iter().any(|e| e.key == key) {
                return Err(self.err(line, LoadErrorKind::Syntax, format!("duplicate key `{key}`")));
            }
            entries.push(Entry {
                line,
                key,
                value: value.trim().to_string(),
            });
        }
        Ok(sections)
    }

    fn expect_keys(&self, section: &Section, name: &str, allowed: &[&str]) -> Result<(), LoadError> {
        match section.entries.iter().find(|e| !allowed.contains(&e.key.as_str())) {
            Some(e) => Err(self.err(e.line, LoadErrorKind::Syntax, format!("unknown key `{}` in [{name}]", e.key))),
            None => Ok(()),
        }
    }

    fn number(&self, e: &Entry) -> Result<f64, LoadError> {
        e.value
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.err(e.line, LoadErrorKind::Syntax, format!("`{}` is not a finite number", e.value)))
    }

    fn count(&self, e: &Entry) -> Result<usize, LoadError> {
        e.value
            .parse::<usize>()
            .map_err(|_| self.err(e.line, LoadErrorKind::Syntax, format!("`{}` is not a nonnegative integer", e.value)))
    }

    fn numbers(&self, e: &Entry, separator: char) -> Result<Vec<f64>, LoadError> {
        e.value
            .split(separator)
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| self.err(e.line, LoadErrorKind::Syntax, format!("`{}` is not a finite number", s.trim())))
            })
            .collect()
    }

    fn expression(&self, line: usize, text: &str, dimension: usize, names: &[String]) -> Result<Expression, LoadError> {
        parse(text, dimension, names).map_err(|e| self.err(line, LoadErrorKind::Expression, format!("in `{text}`: {e}")))
    }

    fn model(&self, line: usize, e: ModelError) -> LoadError {
        self.err(line, LoadErrorKind::Model, e.to_string())
    }

    fn pattern(&self, line: usize, text: &str) -> Result<RegionKey, LoadError> {
        let key: RegionKey = text
            .parse()
            .map_err(|_| self.err(line, LoadErrorKind::Syntax, format!("`{text}` is not a sign pattern of + and -")))?;
        if !key.is_interior() {
            return Err(self.err(line, LoadErrorKind::Syntax, format!("region pattern `{text}` must not contain 0")));
        }
        Ok(key)
    }

    fn t_grid(&self, e: &Entry) -> Result<Vec<f64>, LoadError> {
        if e.value.contains(':') {
            let parts = self.numbers(e, ':')?;
            let [start, step, stop] = parts[..] else {
                return Err(self.err(e.line, LoadErrorKind::Syntax, "range must be start:step:stop"));
            };
            if !(step > 0.0) || stop < start {
                return Err(self.err(e.line, LoadErrorKind::Syntax, "range needs step > 0 and stop >= start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            Ok((0..=count).map(|k| start + k as f64 * step).collect())
        } else {
            self.numbers(e, ',')
        }
    }
}

/// Splits `V[+-]` into `("V", Some("+-"))`.
fn bracketed(key: &str) -> (&str, Option<&str>) {
    match key.split_once('[') {
        Some((name, rest)) => (name.trim(), rest.strip_suffix(']').map(str::trim)),
        None => (key, None),
    }
}

/// Parses scenario text; `file` is used in diagnostics only.
pub fn parse_scenario(text: &str, file: &str, name: &str) -> Result<Scenario, LoadError> {
    let ld = Loader { file };
    let sections = ld.sections(text)?;
    let need = |name: &str| {
        sections
            .get(name)
            .ok_or_else(|| ld.err(None, LoadErrorKind::Missing, format!("missing section [{name}]")))
    };

    let system = need("system")?;
    ld.expect_keys(system, "system", &["dimension", "mode"])?;
    let dim_entry = system
        .get("dimension")
        .ok_or_else(|| ld.err(system.line, LoadErrorKind::Missing, "missing `dimension`"))?;
    let dimension = ld.count(dim_entry)?;
    if dimension == 0 {
        return Err(ld.err(dim_entry.line, LoadErrorKind::Syntax, "dimension must be at least 1"));
    }
    let mode = match system.get("mode") {
        Some(e) => e.value.parse().map_err(|m: String| ld.err(e.line, LoadErrorKind::Syntax, m))?,
        None => Mode::All,
    };

    let mut params = Params::new();
    if let Some(section) = sections.get("parameters") {
        for e in &section.entries {
            let valid = e.key.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && e.key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(ld.err(e.line, LoadErrorKind::Syntax, format!("`{}` is not a valid parameter name", e.key)));
            }
            params.insert(e.key.clone(), ld.number(e)?);
        }
    }
    let names: Vec<String> = params.keys().cloned().collect();

    let mut surfaces = Vec::new();
    if let Some(section) = sections.get("surfaces") {
        for e in &section.entries {
            let g = ld.expression(e.line, &e.value, dimension, &names)?;
            surfaces.push(SwitchingSurface::new(e.key.clone(), g, dimension));
        }
    }

    let regions = need("regions")?;
    let mut pieces = BTreeMap::new();
    for e in &regions.entries {
        let key = if e.key == "*" && surfaces.is_empty() {
            RegionKey(Vec::new())
        } else {
            ld.pattern(e.line, &e.key)?
        };
        let comps = e
            .value
            .split(',')
            .map(|c| ld.expression(e.line, c.trim(), dimension, &names))
            .collect::<Result<Vec<_>, _>>()?;
        if key.len() != surfaces.len() {
            return Err(ld.model(
                e.line,
                ModelError::ArityMismatch {
                    pattern: e.key.clone(),
                    got: key.len(),
                    expected: surfaces.len(),
                },
            ));
        }
        pieces.insert(key, comps);
    }
    let field = PiecewiseField::new(dimension, surfaces, pieces, params.clone()).map_err(|e| ld.model(regions.line, e))?;

    let lyapunov = need("lyapunov")?;
    let (v, triple) = load_lyapunov(&ld, lyapunov, dimension, &params, &names)?;

    let domain_section = sections.get("domain");
    let mut t_grid = vec![0.0];
    let mut safety = Tolerances::default().safety;
    let domain = match domain_section {
        Some(section) => {
            ld.expect_keys(section, "domain", &["box", "r", "samples", "sphere_samples", "t_grid", "safety"])?;
            let box_entry = section
                .get("box")
                .ok_or_else(|| ld.err(section.line, LoadErrorKind::Missing, "missing `box`"))?;
            let (mut lower, mut upper) = (Vec::new(), Vec::new());
            for axis in box_entry.value.split(',') {
                let bounds = ld.numbers(
                    &Entry {
                        line: box_entry.line,
                        key: String::new(),
                        value: axis.split_whitespace().collect::<Vec<_>>().join(","),
                    },
                    ',',
                )?;
                let [lo, hi] = bounds[..] else {
                    return Err(ld.err(box_entry.line, LoadErrorKind::Syntax, "each box axis is `lo hi`"));
                };
                if !(lo < hi) {
                    return Err(ld.err(box_entry.line, LoadErrorKind::Syntax, "box axis needs lo < hi"));
                }
                lower.push(lo);
                upper.push(hi);
            }
            if lower.len() != dimension {
                return Err(ld.err(
                    box_entry.line,
                    LoadErrorKind::Syntax,
                    format!("box has {} axes, expected {dimension}", lower.len()),
                ));
            }
            let r_entry = section
                .get("r")
                .ok_or_else(|| ld.err(section.line, LoadErrorKind::Missing, "missing `r`"))?;
            let r = ld.number(r_entry)?;
            let samples = section.get("samples").map(|e| ld.count(e)).transpose()?.unwrap_or(64);
            let sphere = section.get("sphere_samples").map(|e| ld.count(e)).transpose()?.unwrap_or(720);
            if let Some(e) = section.get("t_grid") {
                t_grid = ld.t_grid(e)?;
                if t_grid.is_empty() {
                    return Err(ld.err(e.line, LoadErrorKind::Syntax, "t_grid is empty"));
                }
            }
            if let Some(e) = section.get("safety") {
                safety = ld.number(e)?;
                if !(safety > 0.0 && safety < 1.0) {
                    return Err(ld.err(e.line, LoadErrorKind::Syntax, "safety must lie in (0, 1)"));
                }
            }
            Some(
                DomainSpec::new(AxisBox::new(lower, upper), r, samples, sphere)
                    .map_err(|e| ld.err(r_entry.line, LoadErrorKind::Syntax, e.to_string()))?,
            )
        }
        None if mode.needs_domain() => {
            return Err(ld.err(None, LoadErrorKind::Missing, format!("mode {mode} needs a [domain] section")));
        }
        None => None,
    };

    let simulate = match sections.get("simulate") {
        Some(section) => Some(load_simulate(&ld, section, dimension)?),
        None if mode.needs_trajectory() => {
            return Err(ld.err(None, LoadErrorKind::Missing, format!("mode {mode} needs a [simulate] section")));
        }
        None => None,
    };

    let mut tolerances = Tolerances {
        safety,
        ..Tolerances::default()
    };
    let mut inclusion_tol = 1e-3;
    let mut report_tol = REPORT_TOL;
    if let Some(section) = sections.get("tolerances") {
        ld.expect_keys(
            section,
            "tolerances",
            &["surface", "derivative", "trajectory_derivative", "bounds", "xi_resolution", "small_ball", "inclusion", "report"],
        )?;
        for e in &section.entries {
            match e.key.as_str() {
                "xi_resolution" => tolerances.xi_resolution = ld.count(e)?,
                key => {
                    let value = ld.number(e)?;
                    if value < 0.0 {
                        return Err(ld.err(e.line, LoadErrorKind::Syntax, "tolerances must be nonnegative"));
                    }
                    match key {
                        "surface" => tolerances.surface_tol = value,
                        "derivative" => tolerances.derivative = value,
                        "trajectory_derivative" => tolerances.trajectory_derivative = value,
                        "bounds" => tolerances.bounds = value,
                        "small_ball" => tolerances.small_ball = value,
                        "inclusion" => inclusion_tol = value,
                        _ => report_tol = value,
                    }
                }
            }
        }
    }

    let validation_box = domain
        .as_ref()
        .map(|d| d.domain.clone())
        .unwrap_or_else(|| AxisBox::centered(dimension, 1.0));
    for (label, s) in [("V", &v), ("W1", &triple.w1), ("W2", &triple.w2), ("W", &triple.w)] {
        if s.is_smooth_in_x() {
            continue;
        }
        let report = s
            .continuity_check(&validation_box, &t_grid, 33)
            .map_err(|e| ld.err(lyapunov.line, LoadErrorKind::Expression, e.to_string()))?;
        if !report.passed {
            let at = report.witness.map(|(x, t)| format!(" at x = {x:?}, t = {t}")).unwrap_or_default();
            return Err(ld.err(
                lyapunov.line,
                LoadErrorKind::Model,
                format!("pieces of {label} jump by {:e} across a surface{at}", report.max_jump),
            ));
        }
    }
    let field_validation = field.validate(
        &validation_box,
        &t_grid,
        &ValidationConfig {
            surface_tol: tolerances.surface_tol,
            ..ValidationConfig::default()
        },
    );

    Ok(Scenario {
        name: name.to_string(),
        dimension,
        mode,
        params,
        field,
        v,
        triple,
        domain,
        t_grid,
        simulate,
        tolerances,
        inclusion_tol,
        report_tol,
        field_validation,
    })
}

fn load_lyapunov(
    ld: &Loader<'_>,
    section: &Section,
    dimension: usize,
    params: &Params,
    names: &[String],
) -> Result<(PiecewiseScalar, ComparisonTriple), LoadError> {
    let mut surfaces = Vec::new();
    let mut smooth: BTreeMap<&str, (usize, Expression)> = BTreeMap::new();
    let mut pieces: BTreeMap<&str, (usize, BTreeMap<RegionKey, Expression>)> = BTreeMap::new();
    for e in &section.entries {
        if let Some(name) = e.key.strip_prefix("surface ") {
            let g = ld.expression(e.line, &e.value, dimension, names)?;
            surfaces.push(SwitchingSurface::new(name.trim(), g, dimension));
            continue;
        }
        let (name, pattern) = bracketed(&e.key);
        let name = match name {
            "V" => "V",
            "W1" => "W1",
            "W2" => "W2",
            "W" => "W",
            _ => return Err(ld.err(e.line, LoadErrorKind::Syntax, format!("unknown key `{}` in [lyapunov]", e.key))),
        };
        let expr = ld.expression(e.line, &e.value, dimension, names)?;
        match pattern {
            None => {
                smooth.insert(name, (e.line, expr));
            }
            Some(p) => {
                let key = ld.pattern(e.line, p)?;
                let slot = pieces.entry(name).or_insert_with(|| (e.line, BTreeMap::new()));
                if slot.1.insert(key, expr).is_some() {
                    return Err(ld.err(e.line, LoadErrorKind::Syntax, format!("duplicate piece `{}`", e.key)));
                }
            }
        }
    }
    let build = |name: &str| -> Result<PiecewiseScalar, LoadError> {
        match (smooth.get(name).cloned(), pieces.get(name)) {
            (Some(_), Some((line, _))) => Err(ld.err(*line, LoadErrorKind::Syntax, format!("{name} is given both as one expression and as pieces"))),
            (Some((line, e)), None) => PiecewiseScalar::smooth(e, dimension, params.clone()).map_err(|err| ld.model(line, err)),
            (None, Some((line, map))) => {
                if surfaces.is_empty() {
                    return Err(ld.err(*line, LoadErrorKind::Missing, format!("{name} has pieces but [lyapunov] declares no `surface`")));
                }
                PiecewiseScalar::new(dimension, surfaces.clone(), map.clone(), params.clone()).map_err(|err| ld.model(*line, err))
            }
            (None, None) => Err(ld.err(section.line, LoadErrorKind::Missing, format!("[lyapunov] is missing {name}"))),
        }
    };
    let v = build("V")?;
    let w1 = build("W1")?;
    let w2 = build("W2")?;
    let w = build("W")?;
    let triple = ComparisonTriple::new(w1, w2, w).map_err(|e| ld.model(section.line, e))?;
    Ok((v, triple))
}

fn load_simulate(ld: &Loader<'_>, section: &Section, dimension: usize) -> Result<SimulateSpec, LoadError> {
    ld.expect_keys(
        section,
        "simulate",
        &["x0", "t0", "tf", "h", "event_tol", "surface_tol", "max_steps", "sliding_exit_period", "tail_fraction"],
    )?;
    let x0_entry = section
        .get("x0")
        .ok_or_else(|| ld.err(section.line, LoadErrorKind::Missing, "missing `x0`"))?;
    let x0 = ld.numbers(x0_entry, ',')?;
    if x0.len() != dimension {
        return Err(ld.err(
            x0_entry.line,
            LoadErrorKind::Syntax,
            format!("x0 has {} entries, expected {dimension}", x0.len()),
        ));
    }
    let tf_entry = section
        .get("tf")
        .ok_or_else(|| ld.err(section.line, LoadErrorKind::Missing, "missing `tf`"))?;
    let tf = ld.number(tf_entry)?;
    let t0 = section.get("t0").map(|e| ld.number(e)).transpose()?.unwrap_or(0.0);
    if !(tf > t0) {
        return Err(ld.err(tf_entry.line, LoadErrorKind::Syntax, "tf must exceed t0"));
    }
    let mut config = IntegratorConfig::default();
    for e in &section.entries {
        match e.key.as_str() {
            "h" => config.h = ld.number(e)?,
            "event_tol" => config.event_tol = ld.number(e)?,
            "surface_tol" => config.surface_tol = ld.number(e)?,
            "max_steps" => config.max_steps = ld.count(e)?,
            "sliding_exit_period" => config.sliding_exit_period = ld.count(e)?,
            _ => {}
        }
    }
    config
        .validate()
        .map_err(|e| ld.err(section.line, LoadErrorKind::Syntax, e.to_string()))?;
    let tail_fraction = match section.get("tail_fraction") {
        Some(e) => {
            let f = ld.number(e)?;
            if !(f > 0.0 && f <= 1.0) {
                return Err(ld.err(e.line, LoadErrorKind::Syntax, "tail_fraction must lie in (0, 1]"));
            }
            f
        }
        None => DEFAULT_TAIL_FRACTION,
    };
    Ok(SimulateSpec {
        x0,
        t0,
        tf,
        config,
        tail_fraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIGN: &str = "
[system]
dimension = 1
mode = all
[surfaces]
s = x1
[regions]
- = 1
+ = -1
[lyapunov]
V = 0.5*x1^2
W1 = 0.4*x1^2
W2 = 0.6*x1^2
W = 0.5*x1^2
[domain]
box = -2 2
r = 1.5
t_grid = 0:1:10
[simulate]
x0 = 1
tf = 2
";

    fn load(text: &str) -> Result<Scenario, LoadError> {
        parse_scenario(text, "test.scn", "test")
    }

    #[test]
    fn sign_scenario_loads() {
        let s = load(SIGN).unwrap();
        assert_eq!(s.surface_count(), 1);
        assert_eq!(s.region_count(), 2);
        assert_eq!(s.t_grid.len(), 11);
        assert_eq!(s.mode, Mode::All);
        assert!(s.field_validation.passed);
        assert_eq!(s.simulate.as_ref().unwrap().config.h, 1e-3);
    }

    #[test]
    fn missing_region_is_named() {
        let text = "
[system]
dimension = 2
mode = simulate
[surfaces]
a = x1
b = x2
[regions]
++ = 1, 1
-- = 1, 1
-+ = 1, 1
[lyapunov]
V = x1^2
W1 = x1^2
W2 = x1^2
W = 0
[simulate]
x0 = 1, 1
tf = 1
";
        let err = load(text).unwrap_err();
        assert_eq!(err.kind, LoadErrorKind::Model);
        assert!(err.message.contains("+-"), "{err}");
        assert_eq!(err.line, Some(8));
    }

    #[test]
    fn out_of_range_variable_reports_line() {
        let text = SIGN.replace("W = 0.5*x1^2", "W = x3");
        let err = load(&text).unwrap_err();
        assert_eq!(err.kind, LoadErrorKind::Expression);
        assert_eq!(err.line, Some(14));
        assert!(err.to_string().starts_with("test.scn:14:"));
    }

    #[test]
    fn arity_mismatch() {
        let text = SIGN.replace("+ = -1", "++ = -1");
        let err = load(&text).unwrap_err();
        assert_eq!(err.kind, LoadErrorKind::Model);
    }

    #[test]
    fn parameters_and_piecewise_candidate() {
        let text = SIGN
            .replace("[surfaces]", "[parameters]\nk = 2\n[surfaces]")
            .replace("- = 1", "- = k")
            .replace("V = 0.5*x1^2", "surface s = x1\nV[+] = x1\nV[-] = -x1")
            .replace("W1 = 0.4*x1^2", "W1 = 0.4*x1^2");
        let s = load(&text).unwrap();
        assert_eq!(s.params["k"], 2.0);
        assert!(!s.v.is_smooth_in_x());
        assert_eq!(s.v.value(&[-0.5], 0.0).unwrap(), 0.5);
        assert_eq!(s.field.evaluate_field(&[-1.0], 0.0).unwrap(), vec![2.0]);
    }

    #[test]
    fn discontinuous_candidate_is_rejected() {
        let text = SIGN.replace("V = 0.5*x1^2", "surface s = x1\nV[+] = x1 + 1\nV[-] = -x1");
        let err = load(&text).unwrap_err();
        assert_eq!(err.kind, LoadErrorKind::Model);
        assert!(err.message.contains("pieces of V jump"), "{err}");
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(load("dimension = 1").unwrap_err().kind, LoadErrorKind::Syntax);
        assert_eq!(load("[nope]").unwrap_err().kind, LoadErrorKind::Syntax);
        let err = load(&SIGN.replace("r = 1.5", "r = 1.5\nr = 2")).unwrap_err();
        assert!(err.message.contains("duplicate"));
        let err = load(&SIGN.replace("[simulate]\nx0 = 1\ntf = 2\n", "")).unwrap_err();
        assert_eq!(err.kind, LoadErrorKind::Missing);
        let err = load(&SIGN.replace("mode = all", "mode = fast")).unwrap_err();
        assert_eq!(err.line, Some(4));
    }

    #[test]
    fn nonexistent_path_is_io_error() {
        let err = load_scenario("/definitely/not/here.scn").unwrap_err();
        assert_eq!(err.kind, LoadErrorKind::Io);
    }

    #[test]
    fn time_grid_forms() {
        let s = load(&SIGN.replace("t_grid = 0:1:10", "t_grid = 0, 0.5, 2")).unwrap();
        assert_eq!(s.t_grid, vec![0.0, 0.5, 2.0]);
        let s = load(&SIGN.replace("t_grid = 0:1:10", "t_grid = 0:0.1:1")).unwrap();
        assert_eq!(s.t_grid.len(), 11);
    }
}
