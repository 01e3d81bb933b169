//! Meromorphic expressions in one complex variable `z`.
//!
//! Expressions are parsed from a small grammar (`z`, complex literals with
//! `i`, `+ - * /`, integer powers `^`, `exp`, `log`), evaluated pointwise and
//! differentiated symbolically. Every [`MeroExpr`] caches its own derivative,
//! so repeated grid evaluation of `h_z`, `h_zz`, ... never re-derives.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

pub use num_complex::Complex64 as Complex;

/// Denominator magnitudes at or below this are treated as poles.
pub const POLE_TOL: f64 = 1e-14;

/// Raised when evaluation hits a division by (numerical) zero, `log 0`, or
/// overflows to a non-finite value.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("pole at `{location}`")]
pub struct PoleSignal {
    /// The sub-expression whose evaluation failed, printed in the input grammar.
    pub location: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => {
                *offset
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Var,
    Const(Complex),
    Neg(MeroExpr),
    Add(MeroExpr, MeroExpr),
    Sub(MeroExpr, MeroExpr),
    Mul(MeroExpr, MeroExpr),
    Div(MeroExpr, MeroExpr),
    Pow(MeroExpr, i32),
    Exp(MeroExpr),
    Log(MeroExpr),
}

#[derive(Debug)]
struct Inner {
    node: Node,
    deriv: OnceLock<MeroExpr>,
}

/// Immutable, cheaply clonable expression tree.
#[derive(Clone)]
pub struct MeroExpr {
    inner: Arc<Inner>,
}

impl fmt::Debug for MeroExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MeroExpr({self})")
    }
}

impl PartialEq for MeroExpr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.node == other.inner.node
    }
}

impl MeroExpr {
    fn from_node(node: Node) -> Self {
        MeroExpr {
            inner: Arc::new(Inner {
                node,
                deriv: OnceLock::new(),
            }),
        }
    }

    fn node(&self) -> &Node {
        &self.inner.node
    }

    /// The variable `z`.
    pub fn var() -> Self {
        Self::from_node(Node::Var)
    }

    pub fn constant(c: Complex) -> Self {
        Self::from_node(Node::Const(c))
    }

    pub fn real(x: f64) -> Self {
        Self::constant(Complex::new(x, 0.0))
    }

    fn as_const(&self) -> Option<Complex> {
        match self.node() {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_const(&self, value: f64) -> bool {
        self.as_const() == Some(Complex::new(value, 0.0))
    }

    pub fn parse(src: &str) -> Result<Self, ParseError> {
        parse_expr(src)
    }

    // Smart constructors: fold constants and drop neutral elements so that
    // symbolic derivatives stay small and print readably.

    pub fn neg(a: &MeroExpr) -> Self {
        match a.node() {
            Node::Const(c) => Self::constant(-*c),
            Node::Neg(inner) => inner.clone(),
            _ => Self::from_node(Node::Neg(a.clone())),
        }
    }

    pub fn add(a: &MeroExpr, b: &MeroExpr) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Self::constant(x + y),
            _ if a.is_const(0.0) => b.clone(),
            _ if b.is_const(0.0) => a.clone(),
            _ => Self::from_node(Node::Add(a.clone(), b.clone())),
        }
    }

    pub fn sub(a: &MeroExpr, b: &MeroExpr) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Self::constant(x - y),
            _ if b.is_const(0.0) => a.clone(),
            _ if a.is_const(0.0) => Self::neg(b),
            _ => Self::from_node(Node::Sub(a.clone(), b.clone())),
        }
    }

    pub fn mul(a: &MeroExpr, b: &MeroExpr) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => return Self::constant(x * y),
            _ if a.is_const(0.0) || b.is_const(0.0) => return Self::real(0.0),
            _ if a.is_const(1.0) => return b.clone(),
            _ if b.is_const(1.0) => return a.clone(),
            (None, Some(_)) => return Self::mul(b, a),
            _ => {}
        }
        // c1 * (c2 * x) -> (c1 c2) * x
        if let (Some(c1), Node::Mul(l, r)) = (a.as_const(), b.node()) {
            if let Some(c2) = l.as_const() {
                return Self::mul(&Self::constant(c1 * c2), r);
            }
        }
        Self::from_node(Node::Mul(a.clone(), b.clone()))
    }

    pub fn div(a: &MeroExpr, b: &MeroExpr) -> Self {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if y.norm() > POLE_TOL => Self::constant(x / y),
            _ if b.is_const(1.0) => a.clone(),
            _ if a.is_const(0.0) && !b.is_const(0.0) => Self::real(0.0),
            _ => Self::from_node(Node::Div(a.clone(), b.clone())),
        }
    }

    pub fn powi(a: &MeroExpr, n: i32) -> Self {
        match (a.as_const(), n) {
            (_, 0) => Self::real(1.0),
            (_, 1) => a.clone(),
            (Some(c), n) if n > 0 || c.norm() > POLE_TOL => Self::constant(c.powi(n)),
            _ => match a.node() {
                Node::Pow(base, m) => match m.checked_mul(n) {
                    Some(k) => Self::powi(base, k),
                    None => Self::from_node(Node::Pow(a.clone(), n)),
                },
                _ => Self::from_node(Node::Pow(a.clone(), n)),
            },
        }
    }

    pub fn exp(a: &MeroExpr) -> Self {
        match a.as_const() {
            Some(c) => Self::constant(c.exp()),
            None => Self::from_node(Node::Exp(a.clone())),
        }
    }

    pub fn log(a: &MeroExpr) -> Self {
        match a.as_const() {
            Some(c) if c.norm() > POLE_TOL => Self::constant(c.ln()),
            _ => Self::from_node(Node::Log(a.clone())),
        }
    }

    /// Evaluate at `z`.
    pub fn eval(&self, z: Complex) -> Result<Complex, PoleSignal> {
        let pole = |e: &MeroExpr| PoleSignal {
            location: e.to_string(),
        };
        let value = match self.node() {
            Node::Var => z,
            Node::Const(c) => *c,
            Node::Neg(a) => -a.eval(z)?,
            Node::Add(a, b) => a.eval(z)? + b.eval(z)?,
            Node::Sub(a, b) => a.eval(z)? - b.eval(z)?,
            Node::Mul(a, b) => a.eval(z)? * b.eval(z)?,
            Node::Div(a, b) => {
                let num = a.eval(z)?;
                let den = b.eval(z)?;
                if den.norm() <= POLE_TOL {
                    return Err(pole(self));
                }
                num / den
            }
            Node::Pow(a, n) => {
                let base = a.eval(z)?;
                if *n < 0 && base.norm() <= POLE_TOL {
                    return Err(pole(self));
                }
                base.powi(*n)
            }
            Node::Exp(a) => a.eval(z)?.exp(),
            Node::Log(a) => {
                let arg = a.eval(z)?;
                if arg.norm() <= POLE_TOL {
                    return Err(pole(self));
                }
                arg.ln()
            }
        };
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(pole(self))
        }
    }

    /// Symbolic derivative d/dz, computed once and cached.
    pub fn derivative(&self) -> &MeroExpr {
        self.inner.deriv.get_or_init(|| self.derive())
    }

    /// Owned copy of [`MeroExpr::derivative`].
    pub fn differentiate(&self) -> MeroExpr {
        self.derivative().clone()
    }

    fn derive(&self) -> MeroExpr {
        match self.node() {
            Node::Var => Self::real(1.0),
            Node::Const(_) => Self::real(0.0),
            Node::Neg(a) => Self::neg(a.derivative()),
            Node::Add(a, b) => Self::add(a.derivative(), b.derivative()),
            Node::Sub(a, b) => Self::sub(a.derivative(), b.derivative()),
            Node::Mul(a, b) => Self::add(
                &Self::mul(a.derivative(), b),
                &Self::mul(a, b.derivative()),
            ),
            Node::Div(a, b) => {
                let num = Self::sub(
                    &Self::mul(a.derivative(), b),
                    &Self::mul(a, b.derivative()),
                );
                Self::div(&num, &Self::powi(b, 2))
            }
            Node::Pow(a, n) => Self::mul(
                &Self::mul(&Self::real(f64::from(*n)), &Self::powi(a, n - 1)),
                a.derivative(),
            ),
            Node::Exp(a) => Self::mul(self, a.derivative()),
            Node::Log(a) => Self::div(a.derivative(), a),
        }
    }

    /// `{e : z} = e'''/e' - 3/2 (e''/e')^2`.
    pub fn schwarzian(&self) -> MeroExpr {
        let d1 = self.derivative();
        let d2 = d1.derivative();
        let d3 = d2.derivative();
        let ratio = Self::div(d2, d1);
        Self::sub(
            &Self::div(d3, d1),
            &Self::mul(&Self::real(1.5), &Self::powi(&ratio, 2)),
        )
    }

    /// `d self / d other`, i.e. `self_z / other_z`.
    pub fn deriv_wrt(&self, other: &MeroExpr) -> MeroExpr {
        Self::div(self.derivative(), other.derivative())
    }

    fn precedence(&self) -> u8 {
        match self.node() {
            Node::Add(..) | Node::Sub(..) => 1,
            Node::Mul(..) | Node::Div(..) => 2,
            Node::Neg(_) => 3,
            Node::Pow(..) => 4,
            Node::Var | Node::Const(_) | Node::Exp(_) | Node::Log(_) => 5,
        }
    }
}

/// Parse `src` into an expression tree.
pub fn parse_expr(src: &str) -> Result<MeroExpr, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(expr)
}

/// Free-function form of [`MeroExpr::eval`].
pub fn eval(e: &MeroExpr, z: Complex) -> Result<Complex, PoleSignal> {
    e.eval(z)
}

pub fn differentiate(e: &MeroExpr) -> MeroExpr {
    e.differentiate()
}

pub fn schwarzian(e: &MeroExpr) -> MeroExpr {
    e.schwarzian()
}

pub fn deriv_wrt(f: &MeroExpr, g: &MeroExpr) -> MeroExpr {
    f.deriv_wrt(g)
}

fn fmt_real(x: f64) -> String {
    // Rust's shortest round-trip form; never uses exponent notation.
    format!("{x}")
}

fn fmt_const(c: Complex, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match (c.re, c.im) {
        (re, im) if im == 0.0 && re >= 0.0 && !(re == 0.0 && re.is_sign_negative()) => {
            write!(f, "{}", fmt_real(re))
        }
        (re, 0.0) => write!(f, "(-{})", fmt_real(-re)),
        (re, im) if re == 0.0 && im > 0.0 => write!(f, "{}i", fmt_real(im)),
        (0.0, im) => write!(f, "(-{}i)", fmt_real(-im)),
        (re, im) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            let re_s = if re < 0.0 {
                format!("-{}", fmt_real(-re))
            } else {
                fmt_real(re)
            };
            write!(f, "({re_s} {sign} {}i)", fmt_real(im.abs()))
        }
    }
}

impl fmt::Display for MeroExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |e: &MeroExpr, min: u8, f: &mut fmt::Formatter<'_>| {
            if e.precedence() < min {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self.node() {
            Node::Var => write!(f, "z"),
            Node::Const(c) => fmt_const(*c, f),
            Node::Neg(a) => {
                write!(f, "-")?;
                child(a, 4, f)
            }
            Node::Add(a, b) => {
                child(a, 1, f)?;
                write!(f, " + ")?;
                child(b, 2, f)
            }
            Node::Sub(a, b) => {
                child(a, 1, f)?;
                write!(f, " - ")?;
                child(b, 2, f)
            }
            Node::Mul(a, b) => {
                child(a, 2, f)?;
                write!(f, "*")?;
                child(b, 3, f)
            }
            Node::Div(a, b) => {
                child(a, 2, f)?;
                write!(f, "/")?;
                child(b, 3, f)
            }
            Node::Pow(a, n) => {
                child(a, 5, f)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Node::Exp(a) => write!(f, "exp({a})"),
            Node::Log(a) => write!(f, "log({a})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<MeroExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = MeroExpr::add(&lhs, &self.term()?);
            } else if self.eat('-') {
                lhs = MeroExpr::sub(&lhs, &self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<MeroExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = MeroExpr::mul(&lhs, &self.unary()?);
            } else if self.eat('/') {
                lhs = MeroExpr::div(&lhs, &self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<MeroExpr, ParseError> {
        if self.eat('-') {
            Ok(MeroExpr::neg(&self.unary()?))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<MeroExpr, ParseError> {
        let base = self.primary()?;
        if self.eat('^') {
            let n = self.exponent()?;
            Ok(MeroExpr::powi(&base, n))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        if self.eat('(') {
            let n = self.exponent()?;
            self.expect(')')?;
            return Ok(n);
        }
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("exponent must be an integer literal"));
        }
        if self.peek() == Some('.') {
            return Err(self.error("exponent must be an integer literal"));
        }
        let n: i32 = self.src[start..self.pos].parse().map_err(|_| ParseError::Syntax {
            offset: start,
            message: "exponent out of range".into(),
        })?;
        Ok(if negative { -n } else { n })
    }

    fn number(&mut self) -> Result<MeroExpr, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos].is_ascii_digit() || bytes[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < bytes.len() && (bytes[self.pos] == b'e' || bytes[self.pos] == b'E') {
            // Exponent only if followed by digits (optionally signed); `2exp` is not a number.
            let mut look = self.pos + 1;
            if look < bytes.len() && (bytes[look] == b'+' || bytes[look] == b'-') {
                look += 1;
            }
            if look < bytes.len() && bytes[look].is_ascii_digit() {
                self.pos = look;
                while self.pos < bytes.len() && bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = &self.src[start..self.pos];
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })?;
        // `2i` is an imaginary literal.
        if self.pos < bytes.len()
            && bytes[self.pos] == b'i'
            && !matches!(bytes.get(self.pos + 1), Some(c) if c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
            return Ok(MeroExpr::constant(Complex::new(0.0, value)));
        }
        Ok(MeroExpr::real(value))
    }

    fn primary(&mut self) -> Result<MeroExpr, ParseError> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input"));
        };
        if c.is_ascii_digit() || c == '.' {
            return self.number();
        }
        if c == '(' {
            self.pos += 1;
            let inner = self.expr()?;
            self.expect(')')?;
            return Ok(inner);
        }
        if c.is_ascii_alphabetic() {
            let start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                self.pos += 1;
            }
            let name = &self.src[start..self.pos];
            return match name {
                "z" => Ok(MeroExpr::var()),
                "i" => Ok(MeroExpr::constant(Complex::new(0.0, 1.0))),
                "exp" | "log" => {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(if name == "exp" {
                        MeroExpr::exp(&arg)
                    } else {
                        MeroExpr::log(&arg)
                    })
                }
                _ => Err(ParseError::UnknownIdentifier {
                    name: name.to_string(),
                    offset: start,
                }),
            };
        }
        Err(self.error(&format!("unexpected character `{c}`")))
    }
}
