//! One-variable curve expressions.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?          right-associative
//! primary := NUMBER | VAR | 'pi' | FUNC '(' expr ')' | '(' expr ')'
//! ```
//!
//! `VAR` is any of `x`, `t`, `s` (all denote the single free variable).
//! `FUNC` is one of `exp ln log sin cos atan sqrt abs`. Implicit
//! multiplication is rejected, so `2x` is an error.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{GraphJet, Jet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnaryOp {
    Neg,
    Exp,
    Ln,
    Sin,
    Cos,
    Atan,
    Sqrt,
    Abs,
}

impl UnaryOp {
    fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Exp => "exp",
            UnaryOp::Ln => "ln",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Atan => "atan",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => UnaryOp::Exp,
            "ln" | "log" => UnaryOp::Ln,
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "atan" => UnaryOp::Atan,
            "sqrt" => UnaryOp::Sqrt,
            "abs" => UnaryOp::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Expr {
    Const(f64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("parse error at byte {offset}: expected {}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
}

impl ParseError {
    fn new(offset: usize, expected: &[&str]) -> Self {
        Self {
            offset,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Returns the next token and its starting byte offset.
    fn next(&mut self) -> std::result::Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == '.' {
            let bytes = rest.as_bytes();
            let mut i = 0;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                let digits = j;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == digits {
                    return Err(ParseError::new(start + digits, &["exponent digits"]));
                }
                i = j;
            }
            let text = &rest[..i];
            let v: f64 = text
                .parse()
                .map_err(|_| ParseError::new(start, &["number"]))?;
            self.pos += i;
            return Ok((Tok::Num(v), start));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            self.pos += len;
            return Ok((Tok::Ident(rest[..len].to_string()), start));
        }
        if "+-*/^()".contains(c) {
            self.pos += 1;
            return Ok((Tok::Sym(c), start));
        }
        Err(ParseError::new(
            start,
            &["number", "variable", "function", "'('", "operator"],
        ))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> std::result::Result<(), ParseError> {
        let (tok, at) = self.lex.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn expr(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Sym('+') => BinaryOp::Add,
                Tok::Sym('-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> std::result::Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Sym('*') => BinaryOp::Mul,
                Tok::Sym('/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> std::result::Result<Expr, ParseError> {
        if self.tok == Tok::Sym('-') {
            self.bump()?;
            let inner = self.unary()?;
            return Ok(Expr::Unary(UnaryOp::Neg, Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.tok == Tok::Sym('^') {
            self.bump()?;
            let exp = self.unary()?;
            return Ok(Expr::Binary(BinaryOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> std::result::Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Const(v))
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.bump()?;
                match name.as_str() {
                    "x" | "t" | "s" => return Ok(Expr::Var),
                    "pi" => return Ok(Expr::Const(std::f64::consts::PI)),
                    _ => {}
                }
                let Some(op) = UnaryOp::from_name(&name) else {
                    return Err(ParseError::new(
                        at,
                        &["variable (x, t, s)", "pi", "function name"],
                    ));
                };
                if self.tok != Tok::Sym('(') {
                    return Err(ParseError::new(self.at, &["'('"]));
                }
                self.bump()?;
                let arg = self.expr()?;
                self.expect_close()?;
                Ok(Expr::Unary(op, Box::new(arg)))
            }
            Tok::Sym('(') => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect_close()?;
                Ok(inner)
            }
            _ => Err(ParseError::new(
                self.at,
                &["number", "variable", "function", "'('", "'-'"],
            )),
        }
    }

    fn expect_close(&mut self) -> std::result::Result<(), ParseError> {
        if self.tok != Tok::Sym(')') {
            return Err(ParseError::new(self.at, &["')'", "operator"]));
        }
        self.bump()
    }
}

pub fn parse(src: &str) -> std::result::Result<Expr, ParseError> {
    let mut p = Parser {
        lex: Lexer { src, pos: 0 },
        tok: Tok::End,
        at: 0,
    };
    p.bump()?;
    if p.tok == Tok::End {
        return Err(ParseError::new(p.at, &["expression"]));
    }
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(ParseError::new(p.at, &["operator", "end of input"]));
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse(s)
    }
}

// Binding strength used by the printer.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Const(v) if *v < 0.0 || v.is_sign_negative() => 2,
        Expr::Const(_) | Expr::Var => 5,
        Expr::Unary(UnaryOp::Neg, _) => 3,
        Expr::Unary(..) => 5,
        Expr::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
        Expr::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
        Expr::Binary(BinaryOp::Pow, ..) => 4,
    }
}

fn write_wrapped(f: &mut fmt::Formatter<'_>, e: &Expr, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) => write!(f, "{v:?}"),
            Expr::Var => f.write_str("x"),
            Expr::Unary(UnaryOp::Neg, a) => {
                f.write_str("-")?;
                write_wrapped(f, a, prec(a) < 3)
            }
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Binary(op, a, b) => {
                let p = prec(self);
                let (wrap_l, wrap_r) = match op {
                    BinaryOp::Pow => (prec(a) <= p, prec(b) < 3),
                    BinaryOp::Add | BinaryOp::Mul => (prec(a) < p, prec(b) <= p),
                    BinaryOp::Sub | BinaryOp::Div => (prec(a) < p, prec(b) <= p),
                };
                write_wrapped(f, a, wrap_l)?;
                write!(f, " {} ", op.symbol())?;
                write_wrapped(f, b, wrap_r)
            }
        }
    }
}

fn domain(sub: &Expr, err: Error) -> Error {
    match err {
        Error::Domain(msg) => Error::Domain(format!("{msg} in `{sub}`")),
        Error::DivisionByZeroJet => Error::Domain(format!("division by zero in `{sub}`")),
        other => other,
    }
}

impl Expr {
    /// Evaluates the expression as a jet, with `var` substituted for the free variable.
    pub fn eval_series(&self, var: &Jet) -> Result<Jet> {
        match self {
            Expr::Const(v) => Ok(Jet::constant(*v)),
            Expr::Var => Ok(*var),
            Expr::Unary(op, a) => {
                let x = a.eval_series(var)?;
                let r = match op {
                    UnaryOp::Neg => Ok(-x),
                    UnaryOp::Exp => Ok(x.exp()),
                    UnaryOp::Ln => x.ln(),
                    UnaryOp::Sin => Ok(x.sin()),
                    UnaryOp::Cos => Ok(x.cos()),
                    UnaryOp::Atan => Ok(x.atan()),
                    UnaryOp::Sqrt => x.sqrt(),
                    UnaryOp::Abs => x.abs(),
                };
                r.map_err(|e| domain(self, e))
            }
            Expr::Binary(op, a, b) => {
                let x = a.eval_series(var)?;
                let y = b.eval_series(var)?;
                let r = match op {
                    BinaryOp::Add => Ok(x + y),
                    BinaryOp::Sub => Ok(x - y),
                    BinaryOp::Mul => Ok(x * y),
                    BinaryOp::Div => x.checked_div(&y),
                    BinaryOp::Pow if y.is_constant() => x.powf(y.value()),
                    BinaryOp::Pow => {
                        if x.value() <= 0.0 {
                            Err(Error::Domain(
                                "variable exponent needs a positive base".into(),
                            ))
                        } else {
                            x.ln().map(|l| (l * y).exp())
                        }
                    }
                };
                r.map_err(|e| domain(self, e))
            }
        }
    }

    /// Plain value at `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.eval_series(&Jet::constant(x))?.value())
    }

    /// Graph jet of the curve `y = e(x)` at `x0`.
    pub fn eval_jet(&self, x0: f64) -> Result<GraphJet> {
        let f = self.eval_series(&Jet::variable(x0))?;
        if !f.is_finite() {
            return Err(Error::Domain(format!("non-finite derivatives of `{self}` at {x0}")));
        }
        Ok(GraphJet::from_function_jet(x0, &f))
    }
}

pub fn eval_jet(e: &Expr, x0: f64) -> Result<GraphJet> {
    e.eval_jet(x0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(v: f64) -> Box<Expr> {
        Box::new(Expr::Const(v))
    }

    fn var() -> Box<Expr> {
        Box::new(Expr::Var)
    }

    #[test]
    fn parses_power() {
        assert_eq!(
            parse("x^3").unwrap(),
            Expr::Binary(BinaryOp::Pow, var(), c(3.0))
        );
    }

    #[test]
    fn parses_product_with_call() {
        let want = Expr::Binary(
            BinaryOp::Mul,
            Box::new(Expr::Binary(BinaryOp::Mul, c(2.0), var())),
            Box::new(Expr::Unary(
                UnaryOp::Ln,
                Box::new(Expr::Unary(UnaryOp::Abs, var())),
            )),
        );
        assert_eq!(parse("2*x*ln(abs(x))").unwrap(), want);
    }

    #[test]
    fn precedence_and_associativity() {
        // -x^2 is -(x^2)
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::Unary(
                UnaryOp::Neg,
                Box::new(Expr::Binary(BinaryOp::Pow, var(), c(2.0)))
            )
        );
        // 2^3^2 is 2^(3^2)
        let e = parse("2^3^2").unwrap();
        assert_eq!(e.eval(0.0).unwrap(), 512.0);
        // a - b - c is left-associative
        assert_eq!(parse("10 - 4 - 3").unwrap().eval(0.0).unwrap(), 3.0);
        assert_eq!(parse("8 / 4 / 2").unwrap().eval(0.0).unwrap(), 1.0);
        assert_eq!(parse("2^-1").unwrap().eval(0.0).unwrap(), 0.5);
    }

    #[test]
    fn reciprocal_derivative() {
        let g = parse("1/x").unwrap().eval_jet(2.0).unwrap();
        assert_eq!(g.y, 0.5);
        assert_relative_eq!(g.y(1), -0.25, epsilon = 1e-15);
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let err = parse("2x").unwrap_err();
        assert_eq!(err.offset, 1);
    }

    #[test]
    fn error_offsets() {
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("x +").unwrap_err().offset, 3);
        assert_eq!(parse("sin x").unwrap_err().offset, 4);
        assert_eq!(parse("(x").unwrap_err().offset, 2);
        assert_eq!(parse("foo(x)").unwrap_err().offset, 0);
        assert_eq!(parse("x # 2").unwrap_err().offset, 2);
        assert_eq!(parse("1e+").unwrap_err().offset, 3);
    }

    #[test]
    fn exp_derivatives_are_one() {
        let g = parse("exp(x)").unwrap().eval_jet(0.0).unwrap();
        assert_eq!(g.y, 1.0);
        for k in 1..=6 {
            assert_relative_eq!(g.y(k), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn cubic_derivatives() {
        let g = parse("x^3").unwrap().eval_jet(1.0).unwrap();
        assert_eq!((g.y, g.d), (1.0, [3.0, 6.0, 6.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn x_log_x() {
        let g = parse("x*ln(abs(x))").unwrap().eval_jet(2.0).unwrap();
        let ln2 = 2f64.ln();
        assert_relative_eq!(g.y, 2.0 * ln2, epsilon = 1e-15);
        assert_relative_eq!(g.y(1), ln2 + 1.0, epsilon = 1e-15);
        assert_relative_eq!(g.y(2), 0.5, epsilon = 1e-15);
        // y_k = (-1)^k (k-2)! / x^(k-1) for k >= 2
        assert_relative_eq!(g.y(3), -0.25, epsilon = 1e-15);
        assert_relative_eq!(g.y(4), 2.0 / 8.0, epsilon = 1e-15);
        assert_relative_eq!(g.y(5), -6.0 / 16.0, epsilon = 1e-15);
        assert_relative_eq!(g.y(6), 24.0 / 32.0, epsilon = 1e-14);
    }

    #[test]
    fn non_integer_power_of_negative_is_domain_error() {
        let e = parse("x^1.5").unwrap();
        let err = e.eval_jet(-1.0).unwrap_err();
        match err {
            Error::Domain(msg) => assert!(msg.contains("x ^ 1.5"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
        // integral exponent is fine
        assert!(parse("x^3").unwrap().eval_jet(-1.0).is_ok());
        assert!(matches!(
            parse("ln(x)").unwrap().eval_jet(0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn variable_exponent() {
        // x^x at 1: derivative 1
        let g = parse("x^x").unwrap().eval_jet(1.0).unwrap();
        assert_relative_eq!(g.y(1), 1.0, epsilon = 1e-15);
        assert_relative_eq!(g.y(2), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn print_then_parse() {
        for src in [
            "x^3",
            "-x^2",
            "(-x)^2",
            "2*x*ln(abs(x))",
            "1 - (x - 2)",
            "1 / (x / 2)",
            "(x^2)^3",
            "2^-x",
            "exp(0.5*t)*cos(t)",
            "--x",
            "-(1 + x)*3",
            "1.5e-7*x + pi",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }
}
