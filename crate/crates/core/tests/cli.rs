mod common;

use std::path::Path;
use std::process::Command;

use common::{fixture_path, scenario_path};
use filippov::certify::compute_c;
use filippov::lyapunov::setvalued_derivative;
use filippov::run::{run, ExitStatus, CERTIFICATE_FILE, TRAJECTORY_FILE};
use filippov::scenario::{load_scenario, parse_scenario, LoadErrorKind, Mode};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_filippov"))
}

fn exit_code(args: &[&str], out: &Path) -> i32 {
    bin().args(args).arg("-o").arg(out).output().unwrap().status.code().unwrap()
}

#[test]
fn bundled_sign_scenario_shape() {
    let s = load_scenario(scenario_path("sign.scn")).unwrap();
    assert_eq!(s.surface_count(), 1);
    assert_eq!(s.region_count(), 2);
    assert_eq!(s.name, "sign");
}

#[test]
fn load_errors_name_the_problem() {
    let text = std::fs::read_to_string(scenario_path("adaptive.scn")).unwrap();
    let two = text
        .replace("[surfaces]\ne = x1", "[surfaces]\ne = x1\nq = x2")
        .replace("- = -x1 + x2 + 1, -x1\n+ = -x1 + x2 - 1, -x1", "-- = 0, 0\n-+ = 0, 0\n++ = 0, 0");
    let err = parse_scenario(&two, "two.scn", "two").unwrap_err();
    assert_eq!(err.kind, LoadErrorKind::Model);
    assert!(err.message.contains("+-"), "{err}");

    let x3 = text.replace("W = x1^2", "W = x3^2");
    let err = parse_scenario(&x3, "x3.scn", "x3").unwrap_err();
    assert_eq!(err.kind, LoadErrorKind::Expression);
    assert!(err.message.contains("x3"));
    assert!(err.line.is_some());
}

#[test]
fn sign_all_writes_closed_form_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let s = load_scenario(scenario_path("sign.scn")).unwrap();
    let report = run(&s, Mode::All, dir.path()).unwrap();
    assert_eq!(report.exit, ExitStatus::Pass);
    let csv = std::fs::read_to_string(dir.path().join(TRAJECTORY_FILE)).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,x1,region,sliding,V,W,intW");
    let last: Vec<&str> = csv.lines().skip(1).find(|l| l.split(',').next().unwrap().parse::<f64>().unwrap() == 2.0).unwrap().split(',').collect();
    assert!(last[1].parse::<f64>().unwrap().abs() <= 1e-6);
    assert_eq!(last[3], "1");
    for line in lines {
        let t: f64 = line.split(',').next().unwrap().parse().unwrap();
        let x: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((x - (1.0 - t).max(0.0)).abs() <= 1e-6);
    }
    assert!(dir.path().join("plot.dat").exists());
    assert!(dir.path().join("convergence.txt").exists());
}

#[test]
fn exit_codes_for_bundled_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    for (path, expected) in [
        (scenario_path("sign.scn"), 0),
        (scenario_path("adaptive.scn"), 0),
        (scenario_path("frozen.scn"), 0),
        (fixture_path("adaptive_tampered.scn"), 1),
    ] {
        let name = path.file_name().unwrap().to_str().unwrap();
        let code = exit_code(&["report", path.to_str().unwrap()], &dir.path().join(name));
        assert_eq!(code, expected, "{name}");
    }
    let missing = exit_code(&["report", "/no/such/scenario.scn"], dir.path());
    assert_eq!(missing, 2);
    let sign = scenario_path("sign.scn");
    assert_eq!(exit_code(&["simulate", sign.to_str().unwrap()], dir.path()), 0);
    assert_eq!(exit_code(&["check", "--kind", "trajectory", sign.to_str().unwrap()], dir.path()), 0);
    // a step the integrator rejects is a runtime error
    assert_eq!(exit_code(&["simulate", sign.to_str().unwrap(), "--h", "-1"], dir.path()), 2);
    // coarser than the minimum sample density
    assert_eq!(exit_code(&["check", sign.to_str().unwrap(), "--samples", "4"], dir.path()), 2);
}

#[test]
fn tampered_adaptive_fails_on_the_surface() {
    let dir = tempfile::tempdir().unwrap();
    let s = load_scenario(fixture_path("adaptive_tampered.scn")).unwrap();
    let report = run(&s, Mode::Check2, dir.path()).unwrap();
    assert_eq!(report.exit, ExitStatus::CheckFailed);
    let h = report.certificates[0].hypothesis("derivative_bound").unwrap();
    assert!(!h.passed);
    assert_eq!(h.witness.as_ref().unwrap().x[0], 0.0);
    let text = std::fs::read_to_string(dir.path().join(CERTIFICATE_FILE)).unwrap();
    assert!(text.contains("verdict = fail"));
    assert!(text.contains("hypothesis derivative_bound {\n    passed = false"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let path = scenario_path("adaptive.scn");
        assert_eq!(exit_code(&["report", path.to_str().unwrap(), "--samples", "16"], dir.path()), 0);
    }
    for file in [TRAJECTORY_FILE, CERTIFICATE_FILE, "plot.dat", "convergence.txt"] {
        let x = std::fs::read(a.path().join(file)).unwrap();
        let y = std::fs::read(b.path().join(file)).unwrap();
        assert!(x == y, "{file} differs");
    }
}

fn field_value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .map(str::trim)
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("no {key}"))
}

#[test]
fn certificate_numbers_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let s = load_scenario(fixture_path("adaptive_tampered.scn")).unwrap();
    run(&s, Mode::Check2, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join(CERTIFICATE_FILE)).unwrap();

    let c: f64 = field_value(&text, "c").parse().unwrap();
    let spec = s.domain.as_ref().unwrap();
    assert_eq!(c, compute_c(&s.triple.w1, spec, s.tolerances.safety).unwrap().c);

    let block = text.split("hypothesis derivative_bound {").nth(1).unwrap();
    let margin: f64 = field_value(block, "worst_margin").parse().unwrap();
    let x: Vec<f64> = field_value(block, "witness.x").split(", ").map(|v| v.parse().unwrap()).collect();
    let t: f64 = field_value(block, "witness.t").parse().unwrap();
    let d = setvalued_derivative(&s.v, &s.field, &x, t, s.tolerances.surface_tol, s.tolerances.xi_resolution).unwrap();
    assert_eq!(d.upper + s.triple.w.value(&x, t).unwrap(), margin);
}
