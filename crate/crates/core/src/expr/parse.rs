//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' '-'? integer)*
//! primary := number | 't' | 'x'<index> | parameter | function '(' sum ')' | '(' sum ')'
//! ```
//!
//! Power binds tighter than unary minus, so `-x1^2` is `-(x1^2)`. Repeated
//! powers associate left: `x1^2^3` is `(x1^2)^3`.

use std::fmt;

use thiserror::Error;

use super::{BinaryOp, Expression, UnaryOp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    /// Byte offset into the source text; equals the text length for errors at end of input.
    pub offset: usize,
    pub message: String,
    pub token: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.token.is_empty() {
            write!(f, "at offset {}: {}", self.offset, self.message)
        } else {
            write!(
                f,
                "at offset {} (`{}`): {}",
                self.offset, self.token, self.message
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error {0}")]
    Syntax(ParseDiagnostic),
    #[error("unknown identifier {0}")]
    UnknownIdentifier(ParseDiagnostic),
    #[error("variable out of range {0}")]
    VariableOutOfRange(ParseDiagnostic),
}

impl ParseError {
    pub fn diagnostic(&self) -> &ParseDiagnostic {
        match self {
            ParseError::Syntax(d) | ParseError::UnknownIdentifier(d) | ParseError::VariableOutOfRange(d) => d,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
    text: String,
}

fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| {
                ParseError::Syntax(ParseDiagnostic {
                    offset: start,
                    message: "malformed number".into(),
                    token: text.into(),
                })
            })?;
            out.push(Token {
                tok: Tok::Number(value),
                offset: start,
                text: text.into(),
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let text = &src[start..i];
            out.push(Token {
                tok: Tok::Ident(text.into()),
                offset: start,
                text: text.into(),
            });
        } else if "+-*/^()".contains(c) {
            i += 1;
            out.push(Token {
                tok: Tok::Sym(c),
                offset: start,
                text: c.to_string(),
            });
        } else {
            let ch = src[start..].chars().next().unwrap_or(c);
            return Err(ParseError::Syntax(ParseDiagnostic {
                offset: start,
                message: "unexpected character".into(),
                token: ch.to_string(),
            }));
        }
    }
    out.push(Token {
        tok: Tok::End,
        offset: src.len(),
        text: String::new(),
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    dimension: usize,
    params: &'a [String],
}

fn syntax(tok: &Token, message: impl Into<String>) -> ParseError {
    ParseError::Syntax(ParseDiagnostic {
        offset: tok.offset,
        message: message.into(),
        token: tok.text.clone(),
    })
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, sym: char) -> bool {
        if self.peek().tok == Tok::Sym(sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym('+') => BinaryOp::Add,
                Tok::Sym('-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn product(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym('*') => BinaryOp::Mul,
                Tok::Sym('/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expression, ParseError> {
        if self.eat('-') {
            return Ok(Expression::unary(UnaryOp::Neg, self.unary()?));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ParseError> {
        let mut base = self.primary()?;
        while self.eat('^') {
            let negative = self.eat('-');
            let tok = self.bump();
            let exponent = match tok.tok {
                Tok::Number(v)
                    if tok.text.bytes().all(|b| b.is_ascii_digit()) && v <= i32::MAX as f64 =>
                {
                    v as i32
                }
                _ => return Err(syntax(&tok, "exponent must be an integer literal")),
            };
            base = Expression::powi(base, if negative { -exponent } else { exponent });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expression, ParseError> {
        let tok = self.bump();
        match &tok.tok {
            Tok::Number(v) => Ok(Expression::Const(*v)),
            Tok::Sym('(') => {
                let inner = self.sum()?;
                let close = self.bump();
                if close.tok != Tok::Sym(')') {
                    return Err(syntax(&close, "expected `)`"));
                }
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(&tok, name),
            Tok::End => Err(syntax(&tok, "unexpected end of input")),
            Tok::Sym(_) => Err(syntax(&tok, "expected an operand")),
        }
    }

    fn identifier(&mut self, tok: &Token, name: &str) -> Result<Expression, ParseError> {
        if self.peek().tok == Tok::Sym('(') {
            let Some(op) = UnaryOp::from_function_name(name) else {
                let message = if matches!(name, "abs" | "sign" | "min" | "max") {
                    "nonsmooth functions are not part of the grammar; use regions instead"
                } else {
                    "unknown function"
                };
                return Err(ParseError::UnknownIdentifier(ParseDiagnostic {
                    offset: tok.offset,
                    message: message.into(),
                    token: name.into(),
                }));
            };
            self.bump();
            let arg = self.sum()?;
            let close = self.bump();
            if close.tok != Tok::Sym(')') {
                return Err(syntax(&close, "expected `)`"));
            }
            return Ok(Expression::unary(op, arg));
        }
        if UnaryOp::from_function_name(name).is_some() {
            return Err(syntax(tok, "function name must be followed by `(`"));
        }
        if name == "t" {
            return Ok(Expression::Time);
        }
        if let Some(digits) = name.strip_prefix('x') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let index: usize = digits.parse().unwrap_or(0);
                if index == 0 || index > self.dimension {
                    return Err(ParseError::VariableOutOfRange(ParseDiagnostic {
                        offset: tok.offset,
                        message: format!("state variables are x1..x{}", self.dimension),
                        token: name.into(),
                    }));
                }
                return Ok(Expression::State(index - 1));
            }
        }
        if self.params.iter().any(|p| p == name) {
            return Ok(Expression::Param(name.into()));
        }
        Err(ParseError::UnknownIdentifier(ParseDiagnostic {
            offset: tok.offset,
            message: "not a state variable, `t`, or a declared parameter".into(),
            token: name.into(),
        }))
    }
}

/// Parses `text` into an [`Expression`] over `x1..x{dimension}`, `t` and the
/// declared parameter names.
pub fn parse(text: &str, dimension: usize, params: &[String]) -> Result<Expression, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        dimension,
        params,
    };
    let expr = parser.sum()?;
    let rest = parser.peek();
    if rest.tok != Tok::End {
        return Err(syntax(rest, "unexpected trailing input"));
    }
    Ok(expr)
}
