#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use filippov::expr::{parse, Expression, Params};
use filippov::field::{PiecewiseField, RegionKey, SwitchingSurface};
use filippov::lyapunov::PiecewiseScalar;

pub fn expr(src: &str, n: usize) -> Expression {
    parse(src, n, &[]).unwrap_or_else(|e| panic!("`{src}`: {e}"))
}

pub fn surface(name: &str, g: &str, n: usize) -> SwitchingSurface {
    SwitchingSurface::new(name, expr(g, n), n)
}

/// `pieces`: (sign pattern, components)
pub fn field(n: usize, surfaces: &[(&str, &str)], pieces: &[(&str, &[&str])]) -> PiecewiseField {
    let surfaces = surfaces.iter().map(|(name, g)| surface(name, g, n)).collect();
    let pieces: BTreeMap<RegionKey, Vec<Expression>> = pieces
        .iter()
        .map(|(k, comps)| (k.parse().unwrap(), comps.iter().map(|c| expr(c, n)).collect()))
        .collect();
    PiecewiseField::new(n, surfaces, pieces, Params::new()).unwrap()
}

pub fn scalar(src: &str, n: usize) -> PiecewiseScalar {
    PiecewiseScalar::smooth(expr(src, n), n, Params::new()).unwrap()
}

pub fn piecewise_scalar(n: usize, surfaces: &[(&str, &str)], pieces: &[(&str, &str)]) -> PiecewiseScalar {
    let surfaces = surfaces.iter().map(|(name, g)| surface(name, g, n)).collect();
    let pieces = pieces.iter().map(|(k, e)| (k.parse().unwrap(), expr(e, n))).collect();
    PiecewiseScalar::new(n, surfaces, pieces, Params::new()).unwrap()
}

/// f = -sign(x)
pub fn sign_field() -> PiecewiseField {
    field(1, &[("s", "x1")], &[("-", &["1"]), ("+", &["-1"])])
}

/// e' = -e + x2 - sign(e), x2' = -e
pub fn adaptive_field() -> PiecewiseField {
    field(2, &[("e", "x1")], &[("-", &["-x1 + x2 + 1", "-x1"]), ("+", &["-x1 + x2 - 1", "-x1"])])
}

/// f = (-sign(x1), -2 sign(x2)): two crossing surfaces.
pub fn corner_field() -> PiecewiseField {
    field(
        2,
        &[("a", "x1"), ("b", "x2")],
        &[
            ("--", &["1", "2"]),
            ("-+", &["1", "-2"]),
            ("+-", &["-1", "2"]),
            ("++", &["-1", "-2"]),
        ],
    )
}

/// A moving surface x1 = sin(t) with different pieces on each side.
pub fn moving_field() -> PiecewiseField {
    field(
        2,
        &[("m", "x1 - sin(t)")],
        &[("-", &["1 + x2", "cos(t)"]), ("+", &["-1 - x2^2", "x1"])],
    )
}

pub fn frozen_field() -> PiecewiseField {
    PiecewiseField::smooth(vec![Expression::constant(0.0)], Params::new()).unwrap()
}

/// V = |x|
pub fn abs_scalar() -> PiecewiseScalar {
    piecewise_scalar(1, &[("s", "x1")], &[("+", "x1"), ("-", "-x1")])
}

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures").join(name)
}
