mod common;

use common::*;
use filippov::certify::{
    check_corollary1, check_corollary2, compute_c, containment_check, initial_set_membership, Certificate, DomainSpec,
    HypothesisResult, Tolerances,
};
use filippov::expr::Params;
use filippov::field::PiecewiseField;
use filippov::geometry::{norm, AxisBox};
use filippov::lyapunov::{setvalued_derivative, ComparisonTriple, PiecewiseScalar};
use filippov::simulate::{integrate, IntegratorConfig};
use proptest::prelude::*;

fn triple(w1: &str, w2: &str, w: &str, n: usize) -> ComparisonTriple {
    ComparisonTriple::from_expressions(expr(w1, n), expr(w2, n), expr(w, n), n, &Params::new()).unwrap()
}

/// Recomputes the violated quantity at a failure witness from the public operations.
fn recheck(h: &HypothesisResult, f: &PiecewiseField, v: &PiecewiseScalar, tr: &ComparisonTriple, c: Option<f64>, r: f64) -> f64 {
    let w = h.witness.as_ref().unwrap_or_else(|| panic!("{} failed without a witness", h.name));
    let (x, t) = (&w.x, w.t);
    match h.name.as_str() {
        "derivative_bound" => {
            let d = setvalued_derivative(v, f, x, t, 1e-9, 32).unwrap();
            d.upper + tr.w.value(x, t).unwrap()
        }
        "bounds" => {
            let vx = v.value(x, t).unwrap();
            (tr.w1.value(x, t).unwrap() - vx).max(vx - tr.w2.value(x, t).unwrap())
        }
        "definite_w" => -tr.w.value(x, t).unwrap().min(0.0) + if norm(x) == 0.0 { tr.w.value(x, t).unwrap().abs() } else { 0.0 },
        "containment_w2_in_v" => v.value(x, t).unwrap() - c.unwrap(),
        "containment_v_in_w1" => tr.w1.value(x, t).unwrap() - c.unwrap(),
        "containment_w1_in_ball" => norm(x) - r,
        other => panic!("no recheck for {other}"),
    }
}

fn assert_sound(cert: &Certificate, f: &PiecewiseField, v: &PiecewiseScalar, tr: &ComparisonTriple) {
    let mut failures = 0;
    for h in cert.failures() {
        failures += 1;
        let again = recheck(h, f, v, tr, cert.c, cert.r);
        assert!(again >= 0.5 * h.worst_margin, "{}: {again} vs {}", h.name, h.worst_margin);
        if h.name != "containment_w1_in_ball" {
            assert!(again > 0.0, "{}", h.name);
        }
    }
    assert!(failures > 0);
}

#[test]
fn failure_witnesses_are_sound() {
    let tol = Tolerances::default();
    let spec2 = DomainSpec::new(AxisBox::centered(2, 2.0), 1.9, 16, 360).unwrap();
    let v2 = scalar("0.5*(x1^2 + x2^2)", 2);
    let f = adaptive_field();

    let offset = triple("0.4*(x1^2 + x2^2)", "0.6*(x1^2 + x2^2)", "x1^2 + 0.5", 2);
    let cert = check_corollary2(&f, &v2, &offset, &spec2, &[0.0, 1.0], &tol).unwrap();
    assert_sound(&cert, &f, &v2, &offset);
    assert_eq!(cert.hypothesis("derivative_bound").unwrap().witness.as_ref().unwrap().x[0], 0.0);

    let too_fast = triple("0.4*(x1^2 + x2^2)", "0.6*(x1^2 + x2^2)", "x1^2 + 0.1*x2^2", 2);
    let cert = check_corollary2(&f, &v2, &too_fast, &spec2, &[0.0], &tol).unwrap();
    assert_sound(&cert, &f, &v2, &too_fast);

    let loose = triple("0.6*(x1^2 + x2^2)", "0.55*(x1^2 + x2^2)", "x1^2", 2);
    let cert = check_corollary2(&f, &v2, &loose, &spec2, &[0.0], &tol).unwrap();
    assert!(!cert.hypothesis("bounds").unwrap().passed);
    assert_sound(&cert, &f, &v2, &loose);

    let sign = sign_field();
    let v1 = scalar("0.5*x1^2", 1);
    let spec1 = DomainSpec::new(AxisBox::centered(1, 2.0), 1.5, 32, 2).unwrap();
    let steep = triple("0.4*x1^2", "0.6*x1^2", "0.7*x1^2", 1);
    let cert = check_corollary2(&sign, &v1, &steep, &spec1, &[0.0], &tol).unwrap();
    let h = cert.hypothesis("derivative_bound").unwrap();
    assert!(norm(&h.witness.as_ref().unwrap().x) > 1.0 / 0.7);
    assert_sound(&cert, &sign, &v1, &steep);
}

#[test]
fn containment_witness_is_sound() {
    let spec = DomainSpec::new(AxisBox::centered(2, 2.0), 1.0, 16, 360).unwrap();
    let v = scalar("0.5*(x1^2 + x2^2)", 2);
    let tr = triple("0.4*(x1^2 + x2^2)", "x1^2 + x2^2", "0", 2);
    let results = containment_check(&v, &tr, 0.6, &spec, &[0.0]).unwrap();
    for h in results.iter().filter(|h| !h.passed) {
        let again = recheck(h, &frozen_field(), &v, &tr, Some(0.6), spec.r);
        assert!(again >= 0.5 * h.worst_margin);
    }
    assert!(results.iter().any(|h| !h.passed));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn doubling_density_never_turns_a_failure_into_a_pass(a in 0.3..0.8f64, half in 1.5..2.5f64, n in 8usize..24) {
        let spec = |samples| DomainSpec::new(AxisBox::centered(1, half), 1.0, samples, 2).unwrap();
        let tr = triple("0.4*x1^2", "0.6*x1^2", &format!("{a}*x1^2"), 1);
        let v = scalar("0.5*x1^2", 1);
        let run = |samples| check_corollary2(&sign_field(), &v, &tr, &spec(samples), &[0.0], &Tolerances::default()).unwrap();
        let coarse = run(n);
        let fine = run(2 * n - 1);
        if !coarse.passed() {
            prop_assert!(!fine.passed());
        }
        let fm = fine.hypothesis("derivative_bound").unwrap().worst_margin;
        let cm = coarse.hypothesis("derivative_bound").unwrap().worst_margin;
        prop_assert!(fm >= cm);
    }

    #[test]
    fn sphere_constant_is_below_the_sphere_minimum(a in 0.05..5.0f64, b in 0.05..5.0f64, r in 0.2..3.0f64, safety in 0.1..0.99f64) {
        let spec = DomainSpec::new(AxisBox::centered(2, 4.0), r, 8, 180).unwrap();
        let sc = compute_c(&scalar(&format!("{a}*x1^2 + {b}*x2^2"), 2), &spec, safety).unwrap();
        prop_assert!(sc.c < sc.sphere_min);
        prop_assert!((sc.sphere_min - a.min(b) * r * r).abs() <= 1e-9 * r * r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn pointwise_certificate_carries_over_to_trajectories(angle in 0.0..std::f64::consts::TAU, scale in 0.05..1.0f64) {
        let f = adaptive_field();
        let v = scalar("0.5*(x1^2 + x2^2)", 2);
        let tr = triple("0.4*(x1^2 + x2^2)", "0.6*(x1^2 + x2^2)", "x1^2", 2);
        let spec = DomainSpec::new(AxisBox::centered(2, 2.0), 1.9, 16, 360).unwrap();
        let tol = Tolerances::default();
        let cert2 = check_corollary2(&f, &v, &tr, &spec, &[0.0, 5.0, 10.0], &tol).unwrap();
        prop_assert!(cert2.passed());
        let c = cert2.c.unwrap();
        // largest radius with W2 <= c
        let radius = scale * (c / 0.6).sqrt();
        let x0 = [radius * angle.cos(), radius * angle.sin()];
        prop_assert!(initial_set_membership(&x0, &tr.w2, c, spec.r).unwrap());
        let traj = integrate(&f, &x0, 0.0, 10.0, &IntegratorConfig::default()).unwrap();
        let cert1 = check_corollary1(&f, &v, &tr, &spec, &traj, &tol).unwrap();
        prop_assert!(cert1.passed(), "{:?}", cert1.failures().collect::<Vec<_>>());
    }
}
