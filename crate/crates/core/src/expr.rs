//! Expression language shared by model files: scalars, forms, frame vectors
//! and bracketed lists.
//!
//! ```text
//! expr   = term  { ("+" | "-") term }
//! term   = unary { ("*" | "/") unary }
//! unary  = "-" unary | wedge
//! wedge  = atom  { "^" atom }          (atom ^ n with n a natural number is a power)
//! atom   = number | "i" | ident | "@" ident | "(" expr ")" | "[" [expr {"," expr}] "]"
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::exterior::{Form, VectorField};
use crate::scalar::{GaussianRational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError {
    /// 1-based column within the expression text.
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ExprError {}

fn err(col: usize, message: impl Into<String>) -> ExprError {
    ExprError { col, message: message.into(), expected: Vec::new() }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Vector(String),
    Op(char),
    Comma,
    Open(char),
    Close(char),
}

fn describe(t: Option<&(Tok, usize)>) -> String {
    match t {
        None => "end of input".into(),
        Some((Tok::Num(n), _)) => format!("number `{n}`"),
        Some((Tok::Ident(s), _)) => format!("`{s}`"),
        Some((Tok::Vector(s), _)) => format!("`@{s}`"),
        Some((Tok::Op(c), _)) | Some((Tok::Open(c), _)) | Some((Tok::Close(c), _)) => format!("`{c}`"),
        Some((Tok::Comma, _)) => "`,`".into(),
    }
}

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            out.push((Tok::Num(digits.parse().expect("digits")), col));
        } else if is_ident_start(c) {
            let start = k;
            while k < chars.len() && is_ident_char(chars[k]) {
                k += 1;
            }
            out.push((Tok::Ident(chars[start..k].iter().collect()), col));
        } else if c == '@' {
            k += 1;
            let start = k;
            while k < chars.len() && is_ident_char(chars[k]) {
                k += 1;
            }
            if start == k {
                return Err(ExprError { col, message: "`@` must be followed by a frame name".into(), expected: vec!["identifier".into()] });
            }
            out.push((Tok::Vector(chars[start..k].iter().collect()), col));
        } else if "+-*/^".contains(c) {
            out.push((Tok::Op(c), col));
            k += 1;
        } else if c == '(' || c == '[' {
            out.push((Tok::Open(c), col));
            k += 1;
        } else if c == ')' || c == ']' {
            out.push((Tok::Close(c), col));
            k += 1;
        } else if c == ',' {
            out.push((Tok::Comma, col));
            k += 1;
        } else {
            return Err(err(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// A typed expression value.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(Scalar),
    Form(Form),
    Vector(VectorField),
    List(Vec<Value>),
}

impl Value {
    fn kind(&self) -> String {
        match self {
            Value::Scalar(_) => "scalar".into(),
            Value::Form(f) => format!("{}-form", f.degree()),
            Value::Vector(_) => "vector".into(),
            Value::List(_) => "list".into(),
        }
    }
}

/// Names visible to an expression.
#[derive(Clone, Copy, Default)]
pub struct Scope<'a> {
    pub coframe: &'a [String],
    pub coordinates: &'a [String],
    pub forms: &'a [(String, Form)],
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    scope: Scope<'a>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.pos)
    }

    fn col(&self) -> usize {
        self.peek().map_or(self.end_col, |t| t.1)
    }

    fn expect_close(&mut self, close: char) -> Result<(), ExprError> {
        match self.peek() {
            Some((Tok::Close(c), _)) if *c == close => {
                self.pos += 1;
                Ok(())
            }
            other => Err(ExprError {
                col: self.col(),
                message: format!("found {}", describe(other)),
                expected: vec![format!("`{close}`")],
            }),
        }
    }

    fn expr(&mut self) -> Result<Value, ExprError> {
        let mut acc = self.term()?;
        while let Some((Tok::Op(op @ ('+' | '-')), col)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { add(acc, rhs, col)? } else { add(acc, neg(rhs), col)? };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, ExprError> {
        let mut acc = self.unary()?;
        while let Some((Tok::Op(op @ ('*' | '/')), col)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' { mul(acc, rhs, col)? } else { div(acc, rhs, col)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Value, ExprError> {
        if let Some((Tok::Op('-'), _)) = self.peek() {
            self.pos += 1;
            return Ok(neg(self.unary()?));
        }
        self.wedge()
    }

    fn wedge(&mut self) -> Result<Value, ExprError> {
        let mut acc = self.atom()?;
        while let Some((Tok::Op('^'), col)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.atom()?;
            acc = wedge(acc, rhs, col)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Value, ExprError> {
        let col = self.col();
        let Some((tok, _)) = self.peek().cloned() else {
            return Err(ExprError {
                col,
                message: "unexpected end of expression".into(),
                expected: vec!["number".into(), "identifier".into(), "`(`".into()],
            });
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Value::Scalar(Scalar::from(GaussianRational::real(BigRational::from_integer(n))))),
            Tok::Ident(name) => self.resolve(&name, col),
            Tok::Vector(name) => match self.scope.coframe.iter().position(|c| *c == name) {
                Some(k) => Ok(Value::Vector(VectorField::frame(k, self.scope.coframe.len()))),
                None => Err(err(col, format!("unknown frame vector `@{name}`"))),
            },
            Tok::Open('(') => {
                let v = self.expr()?;
                self.expect_close(')')?;
                Ok(v)
            }
            Tok::Open(_) => {
                let mut items = Vec::new();
                if let Some((Tok::Close(']'), _)) = self.peek() {
                    self.pos += 1;
                    return Ok(Value::List(items));
                }
                loop {
                    items.push(self.expr()?);
                    match self.peek() {
                        Some((Tok::Comma, _)) => self.pos += 1,
                        _ => break,
                    }
                }
                self.expect_close(']')?;
                Ok(Value::List(items))
            }
            other => {
                self.pos -= 1;
                let _ = other;
                Err(ExprError {
                    col,
                    message: format!("unexpected {}", describe(self.peek())),
                    expected: vec!["number".into(), "identifier".into(), "`(`".into()],
                })
            }
        }
    }

    fn resolve(&self, name: &str, col: usize) -> Result<Value, ExprError> {
        if name == "i" {
            return Ok(Value::Scalar(Scalar::i()));
        }
        if let Some(k) = self.scope.coframe.iter().position(|c| c == name) {
            return Ok(Value::Form(Form::generator(k)));
        }
        if self.scope.coordinates.iter().any(|c| c == name) {
            return Ok(Value::Scalar(Scalar::var(name)));
        }
        if let Some((_, f)) = self.scope.forms.iter().find(|(n, _)| n == name) {
            return Ok(Value::Form(f.clone()));
        }
        Err(err(col, format!("unknown symbol `{name}`")))
    }
}

fn type_error(col: usize, op: &str, a: &Value, b: &Value) -> ExprError {
    err(col, format!("cannot {op} {} and {}", a.kind(), b.kind()))
}

fn add(a: Value, b: Value, col: usize) -> Result<Value, ExprError> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x + &y)),
        (Value::Form(x), Value::Form(y)) => x.try_add(&y).map(Value::Form).map_err(|e| err(col, e.to_string())),
        (Value::Scalar(x), Value::Form(y)) | (Value::Form(y), Value::Scalar(x)) if y.degree() == 0 || y.is_zero() => {
            Form::function(x).try_add(&y).map(Value::Form).map_err(|e| err(col, e.to_string()))
        }
        (Value::Vector(x), Value::Vector(y)) => Ok(Value::Vector(x.add(&y))),
        (a, b) => Err(type_error(col, "add", &a, &b)),
    }
}

fn neg(a: Value) -> Value {
    match a {
        Value::Scalar(x) => Value::Scalar(-x),
        Value::Form(f) => Value::Form(f.neg()),
        Value::Vector(v) => Value::Vector(v.neg()),
        Value::List(items) => Value::List(items.into_iter().map(neg).collect()),
    }
}

fn mul(a: Value, b: Value, col: usize) -> Result<Value, ExprError> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x * &y)),
        (Value::Scalar(x), Value::Form(f)) | (Value::Form(f), Value::Scalar(x)) => Ok(Value::Form(f.scale(&x))),
        (Value::Scalar(x), Value::Vector(v)) | (Value::Vector(v), Value::Scalar(x)) => Ok(Value::Vector(v.scale(&x))),
        (Value::Form(_), Value::Form(_)) => Err(err(col, "forms multiply with `^`, not `*`")),
        (a, b) => Err(type_error(col, "multiply", &a, &b)),
    }
}

fn div(a: Value, b: Value, col: usize) -> Result<Value, ExprError> {
    let Value::Scalar(d) = b else {
        return Err(err(col, format!("cannot divide by a {}", b.kind())));
    };
    let inv = d.inverse().map_err(|_| err(col, "division by zero"))?;
    mul(a, Value::Scalar(inv), col)
}

fn natural(v: &Value) -> Option<u32> {
    match v {
        Value::Scalar(s) => {
            let c = s.as_constant()?;
            if !c.is_real() || !c.re().is_integer() {
                return None;
            }
            c.re().to_integer().to_u32()
        }
        _ => None,
    }
}

fn wedge(a: Value, b: Value, col: usize) -> Result<Value, ExprError> {
    if let Some(n) = natural(&b) {
        return match a {
            Value::Scalar(x) => Ok(Value::Scalar(x.pow(n))),
            Value::Form(f) => Ok(Value::Form(f.pow(n))),
            other => Err(err(col, format!("cannot raise a {} to a power", other.kind()))),
        };
    }
    match (a, b) {
        (Value::Form(x), Value::Form(y)) => Ok(Value::Form(x.wedge(&y))),
        (Value::Scalar(x), Value::Form(f)) | (Value::Form(f), Value::Scalar(x)) => Ok(Value::Form(f.scale(&x))),
        (Value::Scalar(_), Value::Scalar(_)) => Err(err(col, "exponents must be natural numbers")),
        (a, b) => Err(type_error(col, "wedge", &a, &b)),
    }
}

/// Parses a complete expression.
pub fn parse_value(src: &str, scope: Scope<'_>) -> Result<Value, ExprError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end_col: src.chars().count() + 1, scope };
    let v = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(ExprError {
            col: p.col(),
            message: format!("unexpected {}", describe(p.peek())),
            expected: vec!["operator".into(), "end of expression".into()],
        });
    }
    Ok(v)
}

/// A scalar expression in the given coordinates.
pub fn parse_scalar(src: &str, coordinates: &[String]) -> Result<Scalar, ExprError> {
    match parse_value(src, Scope { coordinates, ..Scope::default() })? {
        Value::Scalar(s) => Ok(s),
        other => Err(err(1, format!("expected a scalar, found a {}", other.kind()))),
    }
}

pub fn expect_form(v: Value) -> Result<Form, String> {
    match v {
        Value::Form(f) => Ok(f),
        Value::Scalar(s) if s.is_zero() => Ok(Form::zero(0)),
        Value::Scalar(s) => Ok(Form::function(s)),
        other => Err(format!("expected a form, found a {}", other.kind())),
    }
}

pub fn expect_vector(v: Value, dim: usize) -> Result<VectorField, String> {
    match v {
        Value::Vector(x) => Ok(x),
        Value::Scalar(s) if s.is_zero() => Ok(VectorField::zero(dim)),
        other => Err(format!("expected a vector, found a {}", other.kind())),
    }
}

pub fn expect_list(v: Value) -> Result<Vec<Value>, String> {
    match v {
        Value::List(items) => Ok(items),
        other => Err(format!("expected a bracketed list, found a {}", other.kind())),
    }
}

pub fn expect_scalar(v: Value) -> Result<Scalar, String> {
    match v {
        Value::Scalar(s) => Ok(s),
        Value::Form(f) if f.is_zero() => Ok(Scalar::zero()),
        other => Err(format!("expected a scalar, found a {}", other.kind())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn precedence_of_wedge_over_product() {
        let coframe = names(&["e1", "e2", "e3"]);
        let coords = names(&["x"]);
        let scope = Scope { coframe: &coframe, coordinates: &coords, forms: &[] };
        let v = parse_value("2*x*e1^e3 - e1^e2/x", scope).unwrap();
        let expected = Form::basis(0b101)
            .scale(&(&Scalar::from(2) * &Scalar::var("x")))
            .sub(&Form::basis(0b011).scale(&Scalar::var("x").inverse().unwrap()));
        assert_eq!(v, Value::Form(expected));
        let v = parse_value("-e1^e2", scope).unwrap();
        assert_eq!(v, Value::Form(Form::basis(0b011).neg()));
    }

    #[test]
    fn powers_and_complex_units() {
        let coords = names(&["x0"]);
        let s = parse_scalar("(1 + i)/x0^2", &coords).unwrap();
        assert_eq!(s.to_string(), "(1 + i)/(x0*x0)");
        assert_eq!(parse_scalar("(1/2 - 1/2*i)", &[]).unwrap().to_string(), "(1/2 - 1/2*i)");
    }

    #[test]
    fn unknown_symbol_is_named() {
        let coframe = names(&["e1"]);
        let e = parse_value("e1 + e9", Scope { coframe: &coframe, ..Scope::default() }).unwrap_err();
        assert_eq!(e.col, 6);
        assert!(e.message.contains("e9"));
    }

    #[test]
    fn mixed_degrees_are_rejected() {
        let coframe = names(&["e1", "e2"]);
        let e = parse_value("e1 + e1^e2", Scope { coframe: &coframe, ..Scope::default() }).unwrap_err();
        assert!(e.message.contains("degree"));
    }

    #[test]
    fn lists_and_vectors() {
        let coframe = names(&["b0", "b1"]);
        let v = parse_value("[@b1, -@b0]", Scope { coframe: &coframe, ..Scope::default() }).unwrap();
        let items = expect_list(v).unwrap();
        assert_eq!(items.len(), 2);
        assert_eq!(items[1], Value::Vector(VectorField::frame(0, 2).neg()));
    }

    #[test]
    fn trailing_garbage_reports_expected_tokens() {
        let e = parse_scalar("1 2", &[]).unwrap_err();
        assert_eq!(e.col, 3);
        assert!(!e.expected.is_empty());
    }
}
