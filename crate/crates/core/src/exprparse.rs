//! Parser for the one-variable expressions accepted on the command line.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := unary ('^' factor)?
//! unary   := '-' unary | primary
//! primary := number | 'x' | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and `-x^2` is `(-x)^2`. The Unicode minus sign
//! is accepted wherever `-` is.

use std::fmt;

use crate::error::{Error, Result};
use crate::function::RealFunction;

pub const FUNCTIONS: [&str; 7] = ["sqrt", "ln", "exp", "sin", "cos", "atan", "abs"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Ln,
    Exp,
    Sin,
    Cos,
    Atan,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "ln" => Func::Ln,
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "atan" => Func::Atan,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Atan => "atan",
            Func::Abs => "abs",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sqrt => v.sqrt(),
            Func::Ln => v.ln(),
            Func::Exp => v.exp(),
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Atan => v.atan(),
            Func::Abs => v.abs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates at `x`; any non-finite intermediate is an
    /// [`Error::EvaluationFailure`].
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Num(c) => *c,
            Expr::X => x,
            Expr::Neg(e) => -e.evaluate(x)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.evaluate(x)?, b.evaluate(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(f, e) => f.apply(e.evaluate(x)?),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::EvaluationFailure { x })
        }
    }
}

impl RealFunction for Expr {
    fn eval(&self, x: f64) -> Result<f64> {
        self.evaluate(x)
    }
}

/// Canonical, fully parenthesised form; parsing it gives back the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c}"),
            Expr::X => f.write_str("x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src, pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.syntax(&["expression"]));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax(&["operator", "end of input"]));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn syntax(&self, expected: &[&str]) -> Error {
        Error::Syntax {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Consumes one of `ops` (after whitespace) and returns it.
    fn eat(&mut self, ops: &[char]) -> Option<char> {
        self.skip_ws();
        let c = self.peek()?;
        let norm = if c == '\u{2212}' { '-' } else { c };
        if ops.contains(&norm) {
            self.pos += c.len_utf8();
            Some(norm)
        } else {
            None
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Some(op) = self.eat(&['+', '-']) {
            let rhs = self.term()?;
            let op = if op == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while let Some(op) = self.eat(&['*', '/']) {
            let rhs = self.factor()?;
            let op = if op == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        if self.eat(&['^']).is_some() {
            let exp = self.factor()?;
            return Ok(Expr::Bin(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&['-']).is_some() {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_close()?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => Err(self.syntax(&["number", "'x'", "function", "'('", "'-'"])),
        }
    }

    fn expect_close(&mut self) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(')') {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&["operator", "')'"]))
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let digits = |mut i: usize| {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        let mut end = digits(start);
        let int_digits = end - start;
        let mut frac_digits = 0;
        if end < bytes.len() && bytes[end] == b'.' {
            let f = digits(end + 1);
            frac_digits = f - end - 1;
            end = f;
        }
        if int_digits + frac_digits == 0 {
            return Err(self.syntax(&["digit"]));
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut i = end + 1;
            if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                i += 1;
            }
            let j = digits(i);
            if j == i {
                self.pos = i;
                return Err(self.syntax(&["exponent digits"]));
            }
            end = j;
        }
        let text = &self.src[start..end];
        self.pos = end;
        text.parse::<f64>()
            .map(Expr::Num)
            .map_err(|_| Error::Syntax { offset: start, expected: vec!["number".into()] })
    }

    fn ident(&mut self) -> Result<Expr> {
        let start = self.pos;
        let len = self
            .rest()
            .bytes()
            .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
            .count();
        let name = &self.src[start..start + len];
        self.pos += len;
        if name == "x" {
            return Ok(Expr::X);
        }
        let Some(func) = Func::from_name(name) else {
            return Err(Error::UnknownFunction { name: name.to_string(), offset: start });
        };
        self.skip_ws();
        if self.peek() != Some('(') {
            return Err(self.syntax(&["'('"]));
        }
        self.pos += 1;
        let arg = self.expr()?;
        self.expect_close()?;
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64) -> f64 {
        parse(s).unwrap().evaluate(x).unwrap()
    }

    #[test]
    fn examples() {
        assert!((ev("x^3-2/(x+5)+1/(x^2+3)", 1.0) - 11.0 / 12.0).abs() < 1e-15);
        assert_eq!(ev("x", 0.37), 0.37);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("sqrt(1-x^2)", 0.0), 1.0);
        assert_eq!(ev("1/(1+x^2)", 1.0), 0.5);
        assert!((ev("ln(x/(1-x))", 0.25) - (1.0f64 / 3.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn unary_minus_binds_to_the_base() {
        assert_eq!(ev("-x^2", 3.0), 9.0);
        assert_eq!(ev("-(x^2)", 3.0), -9.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("\u{2212}x \u{2212} 1", 1.0), -2.0);
        assert_eq!(ev("--x", 2.0), 2.0);
        assert_eq!(ev("-sqrt(4)^2", 0.0), 4.0);
    }

    #[test]
    fn numbers() {
        assert_eq!(ev("1.5e2", 0.0), 150.0);
        assert_eq!(ev(".25", 0.0), 0.25);
        assert_eq!(ev("3.", 0.0), 3.0);
        assert_eq!(ev("2E-1", 0.0), 0.2);
        assert!(matches!(parse("1e"), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn errors_carry_offsets() {
        match parse("x + * 2") {
            Err(Error::Syntax { offset, expected }) => {
                assert_eq!(offset, 4);
                assert!(expected.iter().any(|e| e == "number"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(x+1"), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { offset: 0, .. })));
        assert!(matches!(parse("2x"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse("x y"), Err(Error::Syntax { offset: 2, .. })));
        match parse("1 + tan(x)") {
            Err(Error::UnknownFunction { name, offset }) => {
                assert_eq!(name, "tan");
                assert_eq!(offset, 4);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("pi"), Err(Error::UnknownFunction { .. })));
        assert!(matches!(parse("sqrt x"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn evaluation_failures() {
        for (s, x) in [("1/x", 0.0), ("ln(x)", 0.0), ("ln(x)", -1.0), ("sqrt(x)", -1.0), ("x^0.5", -2.0)] {
            assert!(
                matches!(parse(s).unwrap().evaluate(x), Err(Error::EvaluationFailure { .. })),
                "{s} at {x}"
            );
        }
    }

    #[test]
    fn canonical_form_round_trips() {
        for s in ["x^3-2/(x+5)+1/(x^2+3)", "-x^2", "2^3^2", "atan(abs(x))*exp(-x)", "1e-7*x", "cos(sin(x))/3"] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s} -> {e}");
        }
    }
}
