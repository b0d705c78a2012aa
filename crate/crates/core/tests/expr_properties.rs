use filippov::expr::{parse, BinaryOp, EvalError, Expression, Params, Symbol, UnaryOp};
use proptest::prelude::*;

const DIM: usize = 2;

fn params() -> Params {
    Params::from([("k".to_string(), 0.75)])
}

fn names() -> Vec<String> {
    vec!["k".to_string()]
}

fn leaf() -> impl Strategy<Value = Expression> {
    prop_oneof![
        (-3.0..3.0f64).prop_map(Expression::constant),
        (0..DIM).prop_map(Expression::state),
        Just(Expression::Time),
        Just(Expression::param("k")),
    ]
}

fn expression() -> impl Strategy<Value = Expression> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / b),
            inner.clone().prop_map(|a| -a),
            inner.clone().prop_map(Expression::sin),
            inner.clone().prop_map(Expression::cos),
            inner.clone().prop_map(Expression::tanh),
            inner.clone().prop_map(|a| Expression::exp(Expression::tanh(a))),
            inner.clone().prop_map(|a| Expression::sqrt(Expression::powi(a, 2) + Expression::constant(0.5))),
            (inner, -3i32..=3).prop_map(|(a, n)| Expression::powi(a, n)),
        ]
    })
}

fn point() -> impl Strategy<Value = (Vec<f64>, f64)> {
    (prop::collection::vec(-1.5..1.5f64, DIM), -1.0..1.0f64)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn central(e: &Expression, wrt: Symbol, x: &[f64], t: f64, h: f64) -> Result<f64, EvalError> {
    let p = params();
    let (mut xp, mut xm, mut tp, mut tm) = (x.to_vec(), x.to_vec(), t, t);
    match wrt {
        Symbol::State(i) => {
            xp[i] += h;
            xm[i] -= h;
        }
        Symbol::Time => {
            tp += h;
            tm -= h;
        }
    }
    Ok((e.evaluate(&xp, tp, &p)? - e.evaluate(&xm, tm, &p)?) / (2.0 * h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printed_expressions_reparse_to_the_same_function(e in expression(), points in prop::collection::vec(point(), 100)) {
        let text = e.to_string();
        let back = parse(&text, DIM, &names()).unwrap_or_else(|err| panic!("`{text}`: {err}"));
        for (x, t) in points {
            match (e.evaluate(&x, t, &params()), back.evaluate(&x, t, &params())) {
                (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() => prop_assert!(close(a, b, 1e-12), "`{}`: {} vs {}", text, a, b),
                (Err(_), Err(_)) | (Ok(_), Ok(_)) => {}
                (a, b) => prop_assert!(false, "`{}`: {:?} vs {:?}", text, a, b),
            }
        }
    }

    #[test]
    fn derivatives_match_central_differences(e in expression(), (x, t) in point(), which in 0..=DIM) {
        let wrt = if which == DIM { Symbol::Time } else { Symbol::State(which) };
        let symbolic = e.differentiate(wrt).evaluate(&x, t, &params());
        let coarse = central(&e, wrt, &x, t, 2e-5);
        let fine = central(&e, wrt, &x, t, 1e-5);
        if let (Ok(s), Ok(c), Ok(f)) = (symbolic, coarse, fine) {
            // singular neighbourhoods show up as disagreement between step sizes
            prop_assume!(s.is_finite() && c.is_finite() && f.is_finite());
            prop_assume!(close(c, f, 1e-8) && f.abs() < 1e6);
            prop_assert!(close(s, f, 1e-6), "d/d{:?} of `{}` at {:?}, {}: {} vs {}", wrt, e, x, t, s, f);
        }
    }

    #[test]
    fn differentiation_is_linear(a in expression(), b in expression(), (x, t) in point(), i in 0..DIM) {
        let wrt = Symbol::State(i);
        let lhs = (a.clone() + b.clone()).differentiate(wrt).evaluate(&x, t, &params());
        let rhs = (a.differentiate(wrt) + b.differentiate(wrt)).evaluate(&x, t, &params());
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l.is_finite() && r.is_finite() => prop_assert!(close(l, r, 1e-12)),
            _ => {}
        }
    }
}

#[test]
fn every_construct_is_printed_and_reparsed() {
    let srcs = [
        "x1 + x2 - t",
        "-x1^2",
        "(-x1)^2",
        "x1^-2",
        "x1 / (x2 * k)",
        "sin(x1) * cos(t) + exp(-x2) - tanh(k*x1) + sqrt(1 + x2^2)",
        "x1^2^3",
        "-(x1 - (x2 - t))",
    ];
    for src in srcs {
        let e = parse(src, DIM, &names()).unwrap();
        let back = parse(&e.to_string(), DIM, &names()).unwrap();
        let (x, t) = ([0.3, -0.7], 0.4);
        assert_eq!(e.evaluate(&x, t, &params()), back.evaluate(&x, t, &params()), "{src}");
    }
}

#[test]
fn unary_and_binary_ops_are_reachable_directly() {
    let e = Expression::binary(BinaryOp::Mul, Expression::unary(UnaryOp::Sin, Expression::state(0)), Expression::constant(2.0));
    let d = e.differentiate(Symbol::State(0));
    assert!((d.evaluate(&[0.0], 0.0, &Params::new()).unwrap() - 2.0).abs() < 1e-15);
}
