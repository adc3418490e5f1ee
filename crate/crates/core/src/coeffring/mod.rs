//! Exact coefficient rings over a coordinate chart.
//!
//! Affine charts carry rational functions over ℚ in the coordinates (with π
//! as an extra, transcendental variable). Periodic charts carry
//! trigonometric polynomials whose coefficients live in ℚ[π, π⁻¹].

mod parse;
mod poly;
mod ratfunc;
mod scalar;
mod trig;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parse::ParseError;
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use scalar::Scalar;
pub use trig::TrigPoly;

pub(crate) use scalar::fmt_rational;

pub type Q = num_rational::BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RingError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("{0} requires a periodic chart")]
    NotPeriodic(&'static str),
    #[error("pole: denominator vanishes at the evaluation point")]
    Pole,
    #[error("coefficient depends on coordinate {0} besides the integration variable")]
    ExtraDependence(String),
    #[error("substitution is not exact at the requested angle")]
    NotExact,
    #[error("point has {got} entries, chart has {expected}")]
    PointDimension { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    Affine,
    Periodic,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    names: Vec<String>,
    kind: ChartKind,
}

impl Chart {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        kind: ChartKind,
    ) -> Result<Chart, RingError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(RingError::InvalidChart("no coordinates".into()));
        }
        for (i, n) in names.iter().enumerate() {
            let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(RingError::InvalidChart(format!("bad coordinate name {n:?}")));
            }
            if matches!(n.as_str(), "pi" | "sin" | "cos") {
                return Err(RingError::InvalidChart(format!("reserved name {n:?}")));
            }
            if names[..i].contains(n) {
                return Err(RingError::InvalidChart(format!("duplicate coordinate {n:?}")));
            }
        }
        Ok(Chart { names, kind })
    }

    pub fn affine<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Chart {
        Chart::new(names, ChartKind::Affine).expect("valid affine chart")
    }

    pub fn periodic<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Chart {
        Chart::new(names, ChartKind::Periodic).expect("valid periodic chart")
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn parse(&self, text: &str) -> Result<Coefficient, ParseError> {
        parse::parse(text, self)
    }

    /// The coordinate function x_i (affine charts only).
    pub fn coordinate(&self, i: usize) -> Coefficient {
        assert_eq!(self.kind, ChartKind::Affine, "coordinates are not functions on a torus");
        Coefficient::Rat(RatFunc::from_poly(Poly::var(self.dim() + 1, i)))
    }

    fn display_names(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.names.iter().map(String::as_str).collect();
        v.push("pi");
        v
    }
}

/// A value produced by evaluation or integration.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Scalar),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(s) => s.to_f64(),
            Value::Float(f) => *f,
        }
    }

    pub fn as_rational(&self) -> Option<Q> {
        match self {
            Value::Exact(s) => s.as_rational(),
            Value::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(s) => write!(f, "{s}"),
            Value::Float(x) => write!(f, "{x:.12}"),
        }
    }
}

/// An element of the chart's coefficient ring.
///
/// Rational constants are always stored as `Const`, which keeps the
/// representation canonical regardless of which ring produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Const(Q),
    Rat(RatFunc),
    Trig(TrigPoly),
}

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient::zero()
    }
}

impl From<Q> for Coefficient {
    fn from(q: Q) -> Self {
        Coefficient::Const(q)
    }
}

impl From<i64> for Coefficient {
    fn from(n: i64) -> Self {
        Coefficient::Const(qi(n))
    }
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::Const(Q::zero())
    }

    pub fn one() -> Self {
        Coefficient::Const(Q::one())
    }

    pub fn scalar(s: Scalar, chart: &Chart) -> Self {
        match s.as_rational() {
            Some(q) => Coefficient::Const(q),
            None => match chart.kind {
                ChartKind::Periodic => Coefficient::Trig(TrigPoly::constant(chart.dim(), s)),
                ChartKind::Affine => {
                    let n = chart.dim() + 1;
                    let pi = Poly::var(n, n - 1);
                    let mut num = Poly::zero(n);
                    let mut lowest = 0;
                    for (k, _) in s.terms() {
                        lowest = lowest.min(k);
                    }
                    for (k, c) in s.terms() {
                        num = num.add(&pi.pow((k - lowest) as u32).scale(c));
                    }
                    let den = pi.pow((-lowest) as u32);
                    Coefficient::Rat(RatFunc::quotient(num, &den).expect("nonzero"))
                }
            },
        }
    }

    pub fn from_ratfunc(r: RatFunc) -> Self {
        Coefficient::Rat(r).normalize()
    }

    pub fn from_trig(t: TrigPoly) -> Self {
        Coefficient::Trig(t).normalize()
    }

    fn normalize(self) -> Self {
        let c = match &self {
            Coefficient::Const(_) => None,
            Coefficient::Rat(r) => r.constant_value(),
            Coefficient::Trig(t) => t.constant_value().and_then(|s| s.as_rational()),
        };
        match c {
            Some(q) => Coefficient::Const(q),
            None => self,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Const(q) => q.is_zero(),
            Coefficient::Rat(r) => r.is_zero(),
            Coefficient::Trig(t) => t.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coefficient::Const(q) if q.is_one())
    }

    pub fn as_constant(&self) -> Option<&Q> {
        match self {
            Coefficient::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Q) -> Coefficient {
        match self {
            Coefficient::Const(q) => Coefficient::Const(q * c),
            Coefficient::Rat(r) => Coefficient::Rat(r.scale(c)).normalize(),
            Coefficient::Trig(t) => {
                Coefficient::Trig(t.scale(&Scalar::rational(c.clone()))).normalize()
            }
        }
    }

    fn binary(
        &self,
        other: &Coefficient,
        fq: impl Fn(&Q, &Q) -> Q,
        fr: impl Fn(&RatFunc, &RatFunc) -> RatFunc,
        ft: impl Fn(&TrigPoly, &TrigPoly) -> TrigPoly,
    ) -> Coefficient {
        use Coefficient::*;
        let out = match (self, other) {
            (Const(a), Const(b)) => Const(fq(a, b)),
            (Rat(a), Rat(b)) => Rat(fr(a, b)),
            (Trig(a), Trig(b)) => Trig(ft(a, b)),
            (Const(a), Rat(b)) => Rat(fr(&RatFunc::constant(b.nvars(), a.clone()), b)),
            (Rat(a), Const(b)) => Rat(fr(a, &RatFunc::constant(a.nvars(), b.clone()))),
            (Const(a), Trig(b)) => Trig(ft(&TrigPoly::constant(b.dim(), a.clone().into()), b)),
            (Trig(a), Const(b)) => Trig(ft(a, &TrigPoly::constant(a.dim(), b.clone().into()))),
            _ => panic!("coefficients from an affine and a periodic chart were combined"),
        };
        out.normalize()
    }

    pub fn partial(&self, i: usize) -> Coefficient {
        match self {
            Coefficient::Const(_) => Coefficient::zero(),
            Coefficient::Rat(r) => Coefficient::Rat(r.partial(i)).normalize(),
            Coefficient::Trig(t) => Coefficient::Trig(t.partial(i)).normalize(),
        }
    }

    pub fn depends_on(&self, i: usize) -> bool {
        match self {
            Coefficient::Const(_) => false,
            Coefficient::Rat(r) => {
                r.numerator().depends_on(i)
                    || r.denominator_atoms().iter().any(|(p, _)| p.depends_on(i))
            }
            Coefficient::Trig(t) => t.depends_on(i),
        }
    }

    /// Multiplicative inverse when this is a unit of the ring.
    ///
    /// Units: nonzero rational functions on affine charts; constants
    /// c·π^k on periodic charts.
    pub fn inverse(&self) -> Option<Coefficient> {
        match self {
            Coefficient::Const(q) => (!q.is_zero()).then(|| Coefficient::Const(q.recip())),
            Coefficient::Rat(r) => r.inverse().map(|r| Coefficient::Rat(r).normalize()),
            Coefficient::Trig(t) => {
                let s = t.constant_value()?.inverse()?;
                Some(Coefficient::Trig(TrigPoly::constant(t.dim(), s)).normalize())
            }
        }
    }

    pub fn pow(&self, k: u32) -> Coefficient {
        let mut out = Coefficient::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Evaluates at a point: rationals on affine charts, multiples of π on periodic ones.
    pub fn eval(&self, chart: &Chart, point: &[Q]) -> Result<Value, RingError> {
        if point.len() != chart.dim() {
            return Err(RingError::PointDimension {
                expected: chart.dim(),
                got: point.len(),
            });
        }
        match self {
            Coefficient::Const(q) => Ok(Value::Exact(Scalar::rational(q.clone()))),
            Coefficient::Rat(r) => {
                let mut sub: Vec<Option<Q>> = point.iter().cloned().map(Some).collect();
                sub.push(None);
                let den = r.denominator().eval_partial(&sub);
                if den.is_zero() {
                    return Err(RingError::Pole);
                }
                let reduced = r.eval_partial(&sub).ok_or(RingError::Pole)?;
                match reduced.constant_value() {
                    Some(q) => Ok(Value::Exact(Scalar::rational(q))),
                    None => {
                        let pi = std::f64::consts::PI;
                        let nv = r.nvars();
                        let evalf = |p: &Poly| -> f64 {
                            p.terms()
                                .map(|(e, c)| {
                                    let mut t = c.to_f64().unwrap_or(f64::NAN);
                                    for (j, &k) in e.iter().enumerate() {
                                        let x = if j == nv - 1 {
                                            pi
                                        } else {
                                            point[j].to_f64().unwrap_or(f64::NAN)
                                        };
                                        t *= x.powi(k as i32);
                                    }
                                    t
                                })
                                .sum()
                        };
                        Ok(Value::Float(evalf(r.numerator()) / evalf(&r.denominator())))
                    }
                }
            }
            Coefficient::Trig(t) => Ok(t.eval(point)),
        }
    }

    /// Substitutes some coordinates exactly, keeping the rest symbolic.
    pub fn substitute(&self, chart: &Chart, point: &[Option<Q>]) -> Result<Coefficient, RingError> {
        match self {
            Coefficient::Const(_) => Ok(self.clone()),
            Coefficient::Rat(r) => {
                let mut sub = point.to_vec();
                sub.resize(chart.dim(), None);
                sub.push(None);
                let out = r.eval_partial(&sub).ok_or(RingError::Pole)?;
                Ok(Coefficient::Rat(out).normalize())
            }
            Coefficient::Trig(t) => {
                let out = t.eval_partial_exact(point).ok_or(RingError::NotExact)?;
                Ok(Coefficient::Trig(out).normalize())
            }
        }
    }

    /// ∫ over the circle in coordinate `i`.
    pub fn circle_integral(&self, chart: &Chart, i: usize) -> Result<Coefficient, RingError> {
        if chart.kind != ChartKind::Periodic {
            return Err(RingError::NotPeriodic("circle integral"));
        }
        let t = self.as_trig(chart);
        Ok(Coefficient::Trig(t.circle_integral(i)).normalize())
    }

    /// ∫_a^b dθ_i with endpoints in units of π; `b < a` wraps to `b + 2`.
    pub fn arc_integral(&self, chart: &Chart, i: usize, a: &Q, b: &Q) -> Result<Value, RingError> {
        if chart.kind != ChartKind::Periodic {
            return Err(RingError::NotPeriodic("arc integral"));
        }
        let b = if b < a { b + qi(2) } else { b.clone() };
        let t = self.as_trig(chart);
        for j in 0..chart.dim() {
            if j != i && t.depends_on(j) {
                return Err(RingError::ExtraDependence(chart.names[j].clone()));
            }
        }
        Ok(t.arc_integral(i, a, &b).expect("dependence checked"))
    }

    fn as_trig(&self, chart: &Chart) -> TrigPoly {
        match self {
            Coefficient::Const(q) => TrigPoly::constant(chart.dim(), q.clone().into()),
            Coefficient::Trig(t) => t.clone(),
            Coefficient::Rat(_) => panic!("rational function on a periodic chart"),
        }
    }

    /// Canonical text in the parser's grammar.
    pub fn render(&self, chart: &Chart) -> String {
        let names = chart.display_names();
        match self {
            Coefficient::Const(q) => fmt_rational(q),
            Coefficient::Rat(r) => r.display_with(&names),
            Coefficient::Trig(t) => t.display_with(&names),
        }
    }

    /// Whether the printed form needs parentheses when used as a factor.
    pub fn is_compound(&self, chart: &Chart) -> bool {
        let s = self.render(chart);
        s[1..].contains(" + ") || s[1..].contains(" - ")
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        self.binary(rhs, |a, b| a + b, RatFunc::add, TrigPoly::add)
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self.binary(rhs, |a, b| a - b, RatFunc::sub, TrigPoly::sub)
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        if self.is_zero() || rhs.is_zero() {
            return Coefficient::zero();
        }
        if let Coefficient::Const(c) = self {
            return rhs.scale(c);
        }
        if let Coefficient::Const(c) = rhs {
            return self.scale(c);
        }
        self.binary(rhs, |a, b| a * b, RatFunc::mul, TrigPoly::mul)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        match self {
            Coefficient::Const(q) => Coefficient::Const(-q),
            Coefficient::Rat(r) => Coefficient::Rat(r.neg()),
            Coefficient::Trig(t) => Coefficient::Trig(t.neg()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Coefficient {
            type Output = Coefficient;
            fn $m(self, rhs: Coefficient) -> Coefficient {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        -&self
    }
}
