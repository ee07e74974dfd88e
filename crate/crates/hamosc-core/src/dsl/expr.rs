//! Scalar expression language for time-dependent coefficients.
//!
//! Grammar: decimal literals, `pi`, `e`, the variable `t`, binary
//! `+ - * / ^` (with `^` right-associative), unary minus, and the functions
//! `sin cos tan exp log sqrt sinh cosh abs`. Parsing is recursive descent
//! with binding powers; errors carry byte positions.
//!
//! The printer emits only the parentheses required by precedence, so
//! `parse(print(parse(s)))` reproduces the same tree. Symbolic
//! differentiation stays inside the grammar (`abs` differentiates to
//! `u/abs(u) * u'`, undefined at zero crossings like the function itself).

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// Expression tree over the variable `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    E,
    Time,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        // normalize -0.0 so folded constants print/reparse cleanly
        Expr::Num(if v == 0.0 { 0.0 } else { v })
    }

    /// True when the expression references the variable `t`.
    pub fn depends_on_t(&self) -> bool {
        match self {
            Expr::Time => true,
            Expr::Num(_) | Expr::Pi | Expr::E => false,
            Expr::Neg(u) | Expr::Call(_, u) => u.depends_on_t(),
            Expr::Bin(_, a, b) => a.depends_on_t() || b.depends_on_t(),
        }
    }
}

// ---------------------------------------------------------------------------
// lexing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
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
                    // exponent only counts if digits follow (possibly signed);
                    // otherwise leave the `e` for the identifier lexer
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Syntax {
                    position: start,
                    expected: format!("a valid number, found `{text}`"),
                })?;
                toks.push((Tok::Num(value), start));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            other => {
                return Err(Error::Syntax {
                    position: i,
                    expected: format!("a token, found `{other}`"),
                });
            }
        }
    }
    Ok(toks)
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

const BP_ADD: (u8, u8) = (1, 2);
const BP_MUL: (u8, u8) = (3, 4);
const BP_NEG: u8 = 5;
const BP_POW: (u8, u8) = (8, 7);

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect_rparen(&mut self) -> Result<()> {
        match self.peek() {
            Some(Tok::RParen) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(Error::Syntax {
                position: self.here(),
                expected: "`)`".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let position = self.here();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "t" => Ok(Expr::Time),
                "pi" => Ok(Expr::Pi),
                "e" => Ok(Expr::E),
                other => {
                    if let Some(f) = Func::from_name(other) {
                        match self.peek() {
                            Some(Tok::LParen) => {
                                self.pos += 1;
                                let arg = self.expr(0)?;
                                self.expect_rparen()?;
                                Ok(Expr::Call(f, Box::new(arg)))
                            }
                            _ => Err(Error::Syntax {
                                position: self.here(),
                                expected: format!("`(` after function `{other}`"),
                            }),
                        }
                    } else {
                        Err(Error::UnknownIdentifier {
                            position,
                            name: name.clone(),
                        })
                    }
                }
            },
            Some(Tok::Minus) => {
                let operand = self.expr(BP_NEG)?;
                Ok(Expr::Neg(Box::new(operand)))
            }
            Some(Tok::LParen) => {
                let inner = self.expr(0)?;
                self.expect_rparen()?;
                Ok(inner)
            }
            _ => Err(Error::Syntax {
                position,
                expected: "a number, `t`, `pi`, `e`, a function call, `(` or unary `-`".into(),
            }),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.atom()?;
        loop {
            let (op, (lbp, rbp)) = match self.peek() {
                Some(Tok::Plus) => (BinOp::Add, BP_ADD),
                Some(Tok::Minus) => (BinOp::Sub, BP_ADD),
                Some(Tok::Star) => (BinOp::Mul, BP_MUL),
                Some(Tok::Slash) => (BinOp::Div, BP_MUL),
                Some(Tok::Caret) => (BinOp::Pow, BP_POW),
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            self.pos += 1;
            let rhs = self.expr(rbp)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }
}

/// Parses expression text into an [`Expr`].
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = parser.expr(0)?;
    if parser.pos != parser.toks.len() {
        return Err(Error::Syntax {
            position: parser.here(),
            expected: "an operator or end of expression".into(),
        });
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

const PREC_ATOM: u8 = 9;
const PREC_POW: u8 = 7;
const PREC_NEG: u8 = 5;
const PREC_MUL: u8 = 3;
const PREC_ADD: u8 = 1;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Num(v) if *v < 0.0 => PREC_NEG,
        Expr::Num(_) | Expr::Pi | Expr::E | Expr::Time | Expr::Call(..) => PREC_ATOM,
        Expr::Neg(_) => PREC_NEG,
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => PREC_ADD,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => PREC_MUL,
        Expr::Bin(BinOp::Pow, ..) => PREC_POW,
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    let own = prec(e);
    if own < min {
        write!(f, "(")?;
        write_expr(f, e, 0)?;
        return write!(f, ")");
    }
    match e {
        Expr::Num(v) => write!(f, "{v:?}"),
        Expr::Pi => write!(f, "pi"),
        Expr::E => write!(f, "e"),
        Expr::Time => write!(f, "t"),
        Expr::Neg(u) => {
            write!(f, "-")?;
            write_expr(f, u, PREC_NEG)
        }
        Expr::Bin(op, a, b) => {
            let (sym, lmin, rmin) = match op {
                BinOp::Add => (" + ", PREC_ADD, PREC_ADD + 1),
                BinOp::Sub => (" - ", PREC_ADD, PREC_ADD + 1),
                BinOp::Mul => ("*", PREC_MUL, PREC_MUL + 1),
                BinOp::Div => ("/", PREC_MUL, PREC_MUL + 1),
                BinOp::Pow => ("^", PREC_POW + 1, PREC_POW),
            };
            write_expr(f, a, lmin)?;
            write!(f, "{sym}")?;
            write_expr(f, b, rmin)
        }
        Expr::Call(func, arg) => {
            write!(f, "{}(", func.name())?;
            write_expr(f, arg, 0)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, 0)
    }
}

/// Renders the expression with minimal parentheses.
pub fn print_expr(e: &Expr) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

/// Evaluates the expression at time `t`.
///
/// Domain faults (division by zero, `log` of a non-positive value, `sqrt` of
/// a negative, non-finite powers) surface as [`Error::Domain`] carrying `t`.
pub fn eval_expr(e: &Expr, t: f64) -> Result<f64> {
    let v = eval_inner(e, t)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain {
            t,
            what: "expression value is not finite".into(),
        })
    }
}

fn eval_inner(e: &Expr, t: f64) -> Result<f64> {
    let fail = |what: String| Error::Domain { t, what };
    let v = match e {
        Expr::Num(v) => *v,
        Expr::Pi => std::f64::consts::PI,
        Expr::E => std::f64::consts::E,
        Expr::Time => t,
        Expr::Neg(u) => -eval_inner(u, t)?,
        Expr::Bin(op, a, b) => {
            let x = eval_inner(a, t)?;
            let y = eval_inner(b, t)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == 0.0 {
                        return Err(fail("division by zero".into()));
                    }
                    x / y
                }
                BinOp::Pow => {
                    let p = x.powf(y);
                    if !p.is_finite() {
                        return Err(fail(format!("power {x}^{y} is not finite")));
                    }
                    p
                }
            }
        }
        Expr::Call(func, arg) => {
            let u = eval_inner(arg, t)?;
            match func {
                Func::Sin => u.sin(),
                Func::Cos => u.cos(),
                Func::Tan => u.tan(),
                Func::Exp => u.exp(),
                Func::Log => {
                    if u <= 0.0 {
                        return Err(fail(format!("log of non-positive value {u}")));
                    }
                    u.ln()
                }
                Func::Sqrt => {
                    if u < 0.0 {
                        return Err(fail(format!("sqrt of negative value {u}")));
                    }
                    u.sqrt()
                }
                Func::Sinh => u.sinh(),
                Func::Cosh => u.cosh(),
                Func::Abs => u.abs(),
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(fail("intermediate value is not finite".into()))
    }
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Num(v) if *v == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Num(v) if *v == 1.0)
}

fn num2(op: BinOp, a: f64, b: f64) -> Option<Expr> {
    let v = match op {
        BinOp::Add => a + b,
        BinOp::Sub => a - b,
        BinOp::Mul => a * b,
        BinOp::Div => {
            if b == 0.0 {
                return None;
            }
            a / b
        }
        BinOp::Pow => a.powf(b),
    };
    v.is_finite().then(|| Expr::num(v))
}

fn add(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    if let (Expr::Num(x), Expr::Num(y)) = (&a, &b) {
        if let Some(v) = num2(BinOp::Add, *x, *y) {
            return v;
        }
    }
    Expr::Bin(BinOp::Add, Box::new(a), Box::new(b))
}

fn sub(a: Expr, b: Expr) -> Expr {
    if is_zero(&b) {
        return a;
    }
    if let (Expr::Num(x), Expr::Num(y)) = (&a, &b) {
        if let Some(v) = num2(BinOp::Sub, *x, *y) {
            return v;
        }
    }
    if is_zero(&a) {
        return neg(b);
    }
    Expr::Bin(BinOp::Sub, Box::new(a), Box::new(b))
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_zero(&a) || is_zero(&b) {
        return Expr::num(0.0);
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    if let (Expr::Num(x), Expr::Num(y)) = (&a, &b) {
        if let Some(v) = num2(BinOp::Mul, *x, *y) {
            return v;
        }
    }
    Expr::Bin(BinOp::Mul, Box::new(a), Box::new(b))
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_one(&b) {
        return a;
    }
    if is_zero(&a) && !is_zero(&b) {
        return Expr::num(0.0);
    }
    if let (Expr::Num(x), Expr::Num(y)) = (&a, &b) {
        if let Some(v) = num2(BinOp::Div, *x, *y) {
            return v;
        }
    }
    Expr::Bin(BinOp::Div, Box::new(a), Box::new(b))
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => Expr::num(-v),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    if is_one(&b) {
        return a;
    }
    if is_zero(&b) {
        return Expr::num(1.0);
    }
    if let (Expr::Num(x), Expr::Num(y)) = (&a, &b) {
        if let Some(v) = num2(BinOp::Pow, *x, *y) {
            return v;
        }
    }
    Expr::Bin(BinOp::Pow, Box::new(a), Box::new(b))
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

/// Symbolic derivative with respect to `t`; the result stays inside the
/// expression grammar. Constant subexpressions are folded on the fly.
pub fn diff_expr(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::Pi | Expr::E => Expr::num(0.0),
        Expr::Time => Expr::num(1.0),
        Expr::Neg(u) => neg(diff_expr(u)),
        Expr::Bin(op, a, b) => {
            let (da, db) = (diff_expr(a), diff_expr(b));
            let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
            match op {
                BinOp::Add => add(da, db),
                BinOp::Sub => sub(da, db),
                BinOp::Mul => add(mul(da, b), mul(a, db)),
                BinOp::Div => div(
                    sub(mul(da, b.clone()), mul(a, db)),
                    pow(b, Expr::num(2.0)),
                ),
                BinOp::Pow => {
                    if let Expr::Num(c) = b {
                        // d/dt f^c = c f^(c-1) f'
                        mul(mul(Expr::num(c), pow(a, Expr::num(c - 1.0))), da)
                    } else {
                        // d/dt f^g = f^g (g' log f + g f'/f)
                        mul(
                            pow(a.clone(), b.clone()),
                            add(
                                mul(db, call(Func::Log, a.clone())),
                                mul(b, div(da, a)),
                            ),
                        )
                    }
                }
            }
        }
        Expr::Call(func, arg) => {
            let du = diff_expr(arg);
            let u = arg.as_ref().clone();
            let outer = match func {
                Func::Sin => call(Func::Cos, u),
                Func::Cos => neg(call(Func::Sin, u)),
                Func::Tan => div(Expr::num(1.0), pow(call(Func::Cos, u), Expr::num(2.0))),
                Func::Exp => call(Func::Exp, u),
                Func::Log => div(Expr::num(1.0), u),
                Func::Sqrt => div(Expr::num(1.0), mul(Expr::num(2.0), call(Func::Sqrt, u))),
                Func::Sinh => call(Func::Cosh, u),
                Func::Cosh => call(Func::Sinh, u),
                Func::Abs => div(u.clone(), call(Func::Abs, u)),
            };
            mul(outer, du)
        }
    }
}
