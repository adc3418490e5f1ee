//! Recursive-descent parser for coefficient expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' INT)?
//! atom   := NUMBER | 'pi' | coord | ('sin' | 'cos') '(' expr ')' | '(' expr ')'
//! ```
//!
//! On periodic charts a bare coordinate is not a function, so coordinates
//! may only occur inside `sin`/`cos`, as integer-linear combinations. The
//! only `/` accepted there is inside a rational literal such as `1/2`.

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::poly::Poly;
use super::trig::TrigPoly;
use super::{Chart, ChartKind, Coefficient, Scalar, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("division is not allowed on a periodic chart (at byte {0})")]
    DivisionOnPeriodic(usize),
    #[error("{0} is not allowed on an affine chart")]
    TrigOnAffine(String),
    #[error("division by zero")]
    ZeroDenominator,
    #[error("coordinate {0:?} must appear inside sin or cos on a periodic chart")]
    BareAngle(String),
    #[error("argument of {0} must be an integer combination of coordinates")]
    BadTrigArgument(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            let s = &text[start..i];
            out.push((start, Tok::Num(parse_decimal(s).ok_or_else(|| syntax(start, "malformed number"))?)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(syntax(i, &format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

fn parse_decimal(s: &str) -> Option<Q> {
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let n: num_bigint::BigInt = digits.parse().ok()?;
    let d = num_bigint::BigInt::from(10u32).pow(frac.len() as u32);
    Some(Q::new(n, d))
}

fn syntax(pos: usize, msg: &str) -> ParseError {
    ParseError::Syntax {
        pos,
        msg: msg.to_string(),
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    chart: &'a Chart,
    end: usize,
}

pub(super) fn parse(text: &str, chart: &Chart) -> Result<Coefficient, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(syntax(0, "empty expression"));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        chart,
        end: text.len(),
    };
    let c = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.toks[p.pos].0, "unexpected trailing input"));
    }
    Ok(c)
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.here(), &format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Coefficient, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Coefficient, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.here();
                if self.chart.kind() == ChartKind::Periodic {
                    return Err(ParseError::DivisionOnPeriodic(at));
                }
                self.pos += 1;
                let d = self.unary()?;
                let inv = d.inverse().ok_or(ParseError::ZeroDenominator)?;
                acc = &acc * &inv;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Coefficient, ParseError> {
        if self.eat('-') {
            Ok(-&self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Coefficient, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.here();
        match self.toks.get(self.pos) {
            Some((_, Tok::Num(k))) if k.is_integer() && !k.is_negative() => {
                let k = k.to_integer().to_u32().ok_or_else(|| syntax(at, "exponent too large"))?;
                self.pos += 1;
                Ok(base.pow(k))
            }
            _ => Err(syntax(at, "exponent must be a nonnegative integer")),
        }
    }

    fn atom(&mut self) -> Result<Coefficient, ParseError> {
        let at = self.here();
        let Some((_, tok)) = self.toks.get(self.pos).cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(q) => self.rational_literal(q),
            Tok::Op('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Op(c) => Err(syntax(at, &format!("unexpected '{c}'"))),
            Tok::Ident(name) => match name.as_str() {
                "pi" => Ok(Coefficient::scalar(Scalar::pi(), self.chart)),
                "sin" | "cos" => self.trig_call(&name),
                _ => {
                    let i = self
                        .chart
                        .index_of(&name)
                        .ok_or_else(|| ParseError::UnknownIdentifier(name.clone()))?;
                    match self.chart.kind() {
                        ChartKind::Affine => Ok(self.chart.coordinate(i)),
                        ChartKind::Periodic => Err(ParseError::BareAngle(name)),
                    }
                }
            },
        }
    }

    /// `INT/INT` is one literal on periodic charts.
    fn rational_literal(&mut self, q: Q) -> Result<Coefficient, ParseError> {
        if self.chart.kind() == ChartKind::Periodic && self.peek() == Some(&Tok::Op('/')) {
            if let Some((_, Tok::Num(d))) = self.toks.get(self.pos + 1).cloned() {
                if q.is_integer() && d.is_integer() {
                    self.pos += 2;
                    if d.is_zero() {
                        return Err(ParseError::ZeroDenominator);
                    }
                    return Ok(Coefficient::Const(q / d));
                }
            }
        }
        Ok(Coefficient::Const(q))
    }

    fn trig_call(&mut self, f: &str) -> Result<Coefficient, ParseError> {
        if self.chart.kind() == ChartKind::Affine {
            return Err(ParseError::TrigOnAffine(format!("{f}()")));
        }
        self.expect('(')?;
        // The argument is read as a polynomial on an affine copy of the chart.
        let flat = Chart::new(self.chart.names().to_vec(), ChartKind::Affine)
            .expect("names already validated");
        let mut inner = Parser {
            toks: self.toks.clone(),
            pos: self.pos,
            chart: &flat,
            end: self.end,
        };
        let arg = inner.expr()?;
        self.pos = inner.pos;
        self.expect(')')?;
        let k = linear_frequency(&arg, self.chart.dim())
            .ok_or_else(|| ParseError::BadTrigArgument(f.to_string()))?;
        let n = self.chart.dim();
        Ok(match f {
            "sin" => Coefficient::Trig(TrigPoly::sin(n, k)),
            _ => Coefficient::Trig(TrigPoly::cos(n, k)),
        }
        .normalize())
    }
}

fn linear_frequency(arg: &Coefficient, n: usize) -> Option<Vec<i32>> {
    match arg {
        Coefficient::Const(c) => c.is_zero().then(|| vec![0; n]),
        Coefficient::Trig(_) => None,
        Coefficient::Rat(r) => {
            if !r.denominator_atoms().is_empty() {
                return None;
            }
            linear_poly(r.numerator(), n)
        }
    }
}

fn linear_poly(p: &Poly, n: usize) -> Option<Vec<i32>> {
    let mut k = vec![0i32; n];
    for (e, c) in p.terms() {
        let deg: u32 = e.iter().map(|&x| x as u32).sum();
        if deg != 1 || e[n] != 0 || !c.is_integer() {
            return None;
        }
        let i = e.iter().position(|&x| x == 1)?;
        k[i] = c.to_integer().to_i32()?;
    }
    Some(k)
}
