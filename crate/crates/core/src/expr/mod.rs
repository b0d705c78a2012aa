//! Smooth scalar expressions over the state `x1..xn`, time `t` and named
//! parameters.
//!
//! The grammar is deliberately closed under differentiation and contains no
//! nonsmooth primitives (`abs`, `sign`, `min`, `max`); every kink or jump in a
//! model is expressed through the region structure of a
//! [`PiecewiseField`](crate::field::PiecewiseField) or
//! [`PiecewiseScalar`](crate::lyapunov::PiecewiseScalar).

mod diff;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops;

use thiserror::Error;

pub use parse::{parse, ParseDiagnostic, ParseError};

/// Parameter bindings, looked up by name during evaluation.
pub type Params = BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Tanh,
    Sqrt,
}

impl UnaryOp {
    pub(crate) fn function_name(self) -> Option<&'static str> {
        match self {
            UnaryOp::Neg => None,
            UnaryOp::Sin => Some("sin"),
            UnaryOp::Cos => Some("cos"),
            UnaryOp::Exp => Some("exp"),
            UnaryOp::Tanh => Some("tanh"),
            UnaryOp::Sqrt => Some("sqrt"),
        }
    }

    pub(crate) fn from_function_name(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(UnaryOp::Sin),
            "cos" => Some(UnaryOp::Cos),
            "exp" => Some(UnaryOp::Exp),
            "tanh" => Some(UnaryOp::Tanh),
            "sqrt" => Some(UnaryOp::Sqrt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A variable that an expression can be differentiated against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// Zero-based state index: `State(0)` is `x1`.
    State(usize),
    Time,
}

/// Expression tree. State indices are zero-based internally and printed
/// one-based (`x1`, `x2`, ...).
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Const(f64),
    State(usize),
    Time,
    Param(String),
    Unary(UnaryOp, Box<Expression>),
    Binary(BinaryOp, Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, i32),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of negative value {0}")]
    NegativeSqrt(f64),
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("expression references x{} but the state has dimension {dimension}", .index + 1)]
    StateIndex { index: usize, dimension: usize },
}

impl Expression {
    pub fn constant(value: f64) -> Self {
        Expression::Const(value)
    }

    /// State variable by zero-based index.
    pub fn state(index: usize) -> Self {
        Expression::State(index)
    }

    pub fn param(name: impl Into<String>) -> Self {
        Expression::Param(name.into())
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expression::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn unary(op: UnaryOp, arg: Expression) -> Self {
        if let Expression::Const(c) = arg {
            let folded = match op {
                UnaryOp::Neg => Some(-c),
                UnaryOp::Sin => Some(c.sin()),
                UnaryOp::Cos => Some(c.cos()),
                UnaryOp::Exp => Some(c.exp()),
                UnaryOp::Tanh => Some(c.tanh()),
                UnaryOp::Sqrt if c >= 0.0 => Some(c.sqrt()),
                UnaryOp::Sqrt => None,
            };
            if let Some(v) = folded.filter(|v| v.is_finite()) {
                return Expression::Const(v);
            }
        }
        if op == UnaryOp::Neg {
            if let Expression::Unary(UnaryOp::Neg, inner) = arg {
                return *inner;
            }
        }
        Expression::Unary(op, Box::new(arg))
    }

    /// Builds `lhs op rhs` with constant folding of the trivial identities.
    pub fn binary(op: BinaryOp, lhs: Expression, rhs: Expression) -> Self {
        use BinaryOp::*;
        match (op, lhs.as_const(), rhs.as_const()) {
            (Div, _, Some(b)) if b == 0.0 => {}
            (_, Some(a), Some(b)) => {
                let v = match op {
                    Add => a + b,
                    Sub => a - b,
                    Mul => a * b,
                    Div => a / b,
                };
                if v.is_finite() {
                    return Expression::Const(v);
                }
            }
            (Add, Some(a), _) if a == 0.0 => return rhs,
            (Add | Sub, _, Some(b)) if b == 0.0 => return lhs,
            (Sub, Some(a), _) if a == 0.0 => return Expression::unary(UnaryOp::Neg, rhs),
            (Mul, Some(a), _) | (Mul, _, Some(a)) if a == 0.0 => return Expression::Const(0.0),
            (Mul, Some(a), _) if a == 1.0 => return rhs,
            (Mul | Div, _, Some(b)) if b == 1.0 => return lhs,
            (Div, Some(a), _) if a == 0.0 => return Expression::Const(0.0),
            _ => {}
        }
        Expression::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn powi(base: Expression, exponent: i32) -> Self {
        match (exponent, base.as_const()) {
            (0, _) => Expression::Const(1.0),
            (1, _) => base,
            (_, Some(c)) if c != 0.0 || exponent > 0 => Expression::Const(c.powi(exponent)),
            _ => Expression::Pow(Box::new(base), exponent),
        }
    }

    pub fn sin(self) -> Self {
        Expression::unary(UnaryOp::Sin, self)
    }

    pub fn cos(self) -> Self {
        Expression::unary(UnaryOp::Cos, self)
    }

    pub fn exp(self) -> Self {
        Expression::unary(UnaryOp::Exp, self)
    }

    pub fn tanh(self) -> Self {
        Expression::unary(UnaryOp::Tanh, self)
    }

    pub fn sqrt(self) -> Self {
        Expression::unary(UnaryOp::Sqrt, self)
    }

    pub fn evaluate(&self, x: &[f64], t: f64, params: &Params) -> Result<f64, EvalError> {
        Ok(match self {
            Expression::Const(c) => *c,
            Expression::State(i) => *x.get(*i).ok_or(EvalError::StateIndex {
                index: *i,
                dimension: x.len(),
            })?,
            Expression::Time => t,
            Expression::Param(name) => *params
                .get(name)
                .ok_or_else(|| EvalError::UnboundParameter(name.clone()))?,
            Expression::Unary(op, arg) => {
                let a = arg.evaluate(x, t, params)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Sin => a.sin(),
                    UnaryOp::Cos => a.cos(),
                    UnaryOp::Exp => a.exp(),
                    UnaryOp::Tanh => a.tanh(),
                    UnaryOp::Sqrt if a < 0.0 => return Err(EvalError::NegativeSqrt(a)),
                    UnaryOp::Sqrt => a.sqrt(),
                }
            }
            Expression::Binary(op, lhs, rhs) => {
                let a = lhs.evaluate(x, t, params)?;
                let b = rhs.evaluate(x, t, params)?;
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div if b == 0.0 => return Err(EvalError::DivisionByZero),
                    BinaryOp::Div => a / b,
                }
            }
            Expression::Pow(base, n) => {
                let b = base.evaluate(x, t, params)?;
                if b == 0.0 && *n < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                b.powi(*n)
            }
        })
    }

    /// Exact symbolic derivative with respect to `wrt`.
    pub fn differentiate(&self, wrt: Symbol) -> Expression {
        diff::derivative(self, wrt)
    }

    /// Gradient in the state variables `x1..x{dimension}`.
    pub fn gradient(&self, dimension: usize) -> Vec<Expression> {
        (0..dimension)
            .map(|i| self.differentiate(Symbol::State(i)))
            .collect()
    }

    pub fn depends_on_time(&self) -> bool {
        self.any_node(&|e| matches!(e, Expression::Time))
    }

    /// Largest zero-based state index referenced, if any.
    pub fn max_state_index(&self) -> Option<usize> {
        match self {
            Expression::State(i) => Some(*i),
            Expression::Unary(_, a) | Expression::Pow(a, _) => a.max_state_index(),
            Expression::Binary(_, a, b) => a.max_state_index().max(b.max_state_index()),
            _ => None,
        }
    }

    fn any_node(&self, pred: &dyn Fn(&Expression) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        match self {
            Expression::Unary(_, a) | Expression::Pow(a, _) => a.any_node(pred),
            Expression::Binary(_, a, b) => a.any_node(pred) || b.any_node(pred),
            _ => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expression::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
            Expression::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
            Expression::Unary(UnaryOp::Neg, _) => 3,
            Expression::Pow(..) => 4,
            Expression::Const(c) if *c < 0.0 || c.is_sign_negative() => 3,
            _ => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expression, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // `{:?}` is the shortest representation that parses back exactly.
            Expression::Const(c) => write!(f, "{c:?}"),
            Expression::State(i) => write!(f, "x{}", i + 1),
            Expression::Time => f.write_str("t"),
            Expression::Param(name) => f.write_str(name),
            Expression::Unary(UnaryOp::Neg, a) => {
                f.write_str("-")?;
                write_operand(f, a, a.precedence() < 3)
            }
            Expression::Unary(op, a) => {
                write!(f, "{}({a})", op.function_name().unwrap_or_default())
            }
            Expression::Binary(op, a, b) => {
                let (own, sym) = match op {
                    BinaryOp::Add => (1, " + "),
                    BinaryOp::Sub => (1, " - "),
                    BinaryOp::Mul => (2, "*"),
                    BinaryOp::Div => (2, "/"),
                };
                write_operand(f, a, a.precedence() < own)?;
                f.write_str(sym)?;
                write_operand(f, b, b.precedence() <= own)
            }
            Expression::Pow(base, n) => {
                write_operand(f, base, base.precedence() < 5)?;
                write!(f, "^{n}")
            }
        }
    }
}

impl ops::Add for Expression {
    type Output = Expression;
    fn add(self, rhs: Expression) -> Expression {
        Expression::binary(BinaryOp::Add, self, rhs)
    }
}

impl ops::Sub for Expression {
    type Output = Expression;
    fn sub(self, rhs: Expression) -> Expression {
        Expression::binary(BinaryOp::Sub, self, rhs)
    }
}

impl ops::Mul for Expression {
    type Output = Expression;
    fn mul(self, rhs: Expression) -> Expression {
        Expression::binary(BinaryOp::Mul, self, rhs)
    }
}

impl ops::Div for Expression {
    type Output = Expression;
    fn div(self, rhs: Expression) -> Expression {
        Expression::binary(BinaryOp::Div, self, rhs)
    }
}

impl ops::Neg for Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression::unary(UnaryOp::Neg, self)
    }
}
