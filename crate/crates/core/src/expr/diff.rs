use super::{BinaryOp, Expression, Symbol, UnaryOp};

pub(super) fn derivative(e: &Expression, wrt: Symbol) -> Expression {
    match e {
        Expression::Const(_) | Expression::Param(_) => Expression::Const(0.0),
        Expression::State(i) => Expression::Const(f64::from(u8::from(wrt == Symbol::State(*i)))),
        Expression::Time => Expression::Const(f64::from(u8::from(wrt == Symbol::Time))),
        Expression::Unary(op, arg) => {
            let da = derivative(arg, wrt);
            if da.is_zero() {
                return Expression::Const(0.0);
            }
            let a = (**arg).clone();
            let outer = match op {
                UnaryOp::Neg => return -da,
                UnaryOp::Sin => a.cos(),
                UnaryOp::Cos => -a.sin(),
                UnaryOp::Exp => a.exp(),
                UnaryOp::Tanh => Expression::Const(1.0) - Expression::powi(a.tanh(), 2),
                UnaryOp::Sqrt => Expression::Const(0.5) / a.sqrt(),
            };
            outer * da
        }
        Expression::Binary(op, lhs, rhs) => {
            let da = derivative(lhs, wrt);
            let db = derivative(rhs, wrt);
            let a = (**lhs).clone();
            let b = (**rhs).clone();
            match op {
                BinaryOp::Add => da + db,
                BinaryOp::Sub => da - db,
                BinaryOp::Mul => da * b + a * db,
                BinaryOp::Div => {
                    if db.is_zero() {
                        da / b
                    } else {
                        (da * b.clone() - a * db) / Expression::powi(b, 2)
                    }
                }
            }
        }
        Expression::Pow(base, n) => {
            let db = derivative(base, wrt);
            if db.is_zero() {
                return Expression::Const(0.0);
            }
            Expression::Const(f64::from(*n)) * Expression::powi((**base).clone(), n - 1) * db
        }
    }
}
