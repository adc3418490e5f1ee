//! Trigonometric polynomials on a torus with ℚ[π] coefficients.

use std::collections::BTreeMap;

use num_traits::{Signed, ToPrimitive, Zero};

use super::scalar::Scalar;
use super::{Value, Q};

/// Σ_k a_k cos⟨k,θ⟩ + b_k sin⟨k,θ⟩ with the first nonzero entry of every
/// stored k positive (or k = 0, which carries no sine part).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrigPoly {
    n: usize,
    terms: BTreeMap<Vec<i32>, (Scalar, Scalar)>,
}

fn is_canonical(k: &[i32]) -> bool {
    k.iter().find(|&&x| x != 0).is_none_or(|&x| x > 0)
}

impl TrigPoly {
    pub fn zero(n: usize) -> Self {
        TrigPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, s: Scalar) -> Self {
        let mut t = TrigPoly::zero(n);
        t.add_term(vec![0; n], s, Scalar::zero());
        t
    }

    pub fn cos(n: usize, k: Vec<i32>) -> Self {
        let mut t = TrigPoly::zero(n);
        t.add_term(k, Scalar::one(), Scalar::zero());
        t
    }

    pub fn sin(n: usize, k: Vec<i32>) -> Self {
        let mut t = TrigPoly::zero(n);
        t.add_term(k, Scalar::zero(), Scalar::one());
        t
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &(Scalar, Scalar))> {
        self.terms.iter()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (k, (a, _)) = self.terms.iter().next().unwrap();
                k.iter().all(|&x| x == 0).then(|| a.clone())
            }
            _ => None,
        }
    }

    /// Adds a cos·a + sin·b term at an arbitrary frequency, canonicalizing it.
    fn add_term(&mut self, mut k: Vec<i32>, a: Scalar, mut b: Scalar) {
        if !is_canonical(&k) {
            for x in k.iter_mut() {
                *x = -*x;
            }
            b = -&b;
        }
        if k.iter().all(|&x| x == 0) {
            b = Scalar::zero();
        }
        if a.is_zero() && b.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(k.clone())
            .or_insert_with(|| (Scalar::zero(), Scalar::zero()));
        entry.0 = &entry.0 + &a;
        entry.1 = &entry.1 + &b;
        if entry.0.is_zero() && entry.1.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &TrigPoly) -> TrigPoly {
        let mut out = self.clone();
        for (k, (a, b)) in &other.terms {
            out.add_term(k.clone(), a.clone(), b.clone());
        }
        out
    }

    pub fn neg(&self) -> TrigPoly {
        TrigPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, (a, b))| (k.clone(), (-a, -b)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &TrigPoly) -> TrigPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> TrigPoly {
        let mut out = TrigPoly::zero(self.n);
        for (k, (a, b)) in &self.terms {
            out.add_term(k.clone(), a * s, b * s);
        }
        out
    }

    /// Product-to-sum expansion.
    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        let half = Q::new(1.into(), 2.into());
        let mut out = TrigPoly::zero(self.n);
        for (k1, (a1, b1)) in &self.terms {
            for (k2, (a2, b2)) in &other.terms {
                let plus: Vec<i32> = k1.iter().zip(k2).map(|(x, y)| x + y).collect();
                let minus: Vec<i32> = k1.iter().zip(k2).map(|(x, y)| x - y).collect();
                let aa = (a1 * a2).scale(&half);
                let bb = (b1 * b2).scale(&half);
                let ab = (a1 * b2).scale(&half);
                let ba = (b1 * a2).scale(&half);
                // cos·cos, sin·sin
                out.add_term(minus.clone(), &aa + &bb, Scalar::zero());
                out.add_term(plus.clone(), &aa - &bb, Scalar::zero());
                // sin A cos B = ½[sin(A+B) + sin(A−B)], cos A sin B = ½[sin(A+B) − sin(A−B)]
                out.add_term(plus, Scalar::zero(), &ba + &ab);
                out.add_term(minus, Scalar::zero(), &ba - &ab);
            }
        }
        out
    }

    pub fn partial(&self, i: usize) -> TrigPoly {
        let mut out = TrigPoly::zero(self.n);
        for (k, (a, b)) in &self.terms {
            if k[i] == 0 {
                continue;
            }
            let ki = Q::from_integer(k[i].into());
            out.add_term(k.clone(), b.scale(&ki), (-a).scale(&ki));
        }
        out
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|k| k[i] != 0)
    }

    /// 2π times the part not oscillating in coordinate `i`.
    pub fn circle_integral(&self, i: usize) -> TrigPoly {
        let two_pi = Scalar::monomial(Q::from_integer(2.into()), 1);
        let mut out = TrigPoly::zero(self.n);
        for (k, (a, b)) in &self.terms {
            if k[i] == 0 {
                out.add_term(k.clone(), a * &two_pi, b * &two_pi);
            }
        }
        out
    }

    /// Substitutes θ_i = q_i·π for the coordinates given as `Some`.
    ///
    /// Exact when every affected phase is a multiple of π/2; `None` otherwise.
    pub fn eval_partial_exact(&self, angles: &[Option<Q>]) -> Option<TrigPoly> {
        let mut out = TrigPoly::zero(self.n);
        for (k, (a, b)) in &self.terms {
            let mut phase = Q::zero();
            let mut rest = k.clone();
            for (i, ang) in angles.iter().enumerate() {
                if let Some(q) = ang {
                    phase += q * Q::from_integer(k[i].into());
                    rest[i] = 0;
                }
            }
            let (c, s) = quarter_turn(&phase)?;
            // cos(r + p) = cos r cos p − sin r sin p; sin(r + p) = sin r cos p + cos r sin p
            let c = Q::from_integer(c.into());
            let s = Q::from_integer(s.into());
            let na = &a.scale(&c) + &b.scale(&s);
            let nb = &b.scale(&c) - &a.scale(&s);
            out.add_term(rest, na, nb);
        }
        Some(out)
    }

    /// Full evaluation at θ = q·π.
    pub fn eval(&self, angles: &[Q]) -> Value {
        let some: Vec<Option<Q>> = angles.iter().cloned().map(Some).collect();
        if let Some(t) = self.eval_partial_exact(&some) {
            return Value::Exact(t.constant_value().expect("all coordinates substituted"));
        }
        let theta: Vec<f64> = angles
            .iter()
            .map(|q| q.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI)
            .collect();
        let mut total = 0.0;
        for (k, (a, b)) in &self.terms {
            let phase: f64 = k.iter().zip(&theta).map(|(&ki, t)| ki as f64 * t).sum();
            total += a.to_f64() * phase.cos() + b.to_f64() * phase.sin();
        }
        Value::Float(total)
    }

    /// ∫_a^b along coordinate `i`, endpoints in units of π. Requires no other dependence.
    pub fn arc_integral(&self, i: usize, a: &Q, b: &Q) -> Option<Value> {
        if (0..self.n).any(|j| j != i && self.depends_on(j)) {
            return None;
        }
        let mut exact = Some(Scalar::zero());
        let mut float = 0.0;
        let pi = std::f64::consts::PI;
        for (k, (ca, cb)) in &self.terms {
            let m = k[i];
            if m == 0 {
                let len = Scalar::monomial(b - a, 1);
                float += ca.to_f64() * len.to_f64();
                exact = exact.map(|e| &e + &(ca * &len));
                continue;
            }
            let mq = Q::from_integer(m.into());
            let inv = Scalar::rational(mq.recip());
            // antiderivative: (ca sin mθ − cb cos mθ)/m
            let fa = (m as f64) * a.to_f64().unwrap_or(f64::NAN) * pi;
            let fb = (m as f64) * b.to_f64().unwrap_or(f64::NAN) * pi;
            float += (ca.to_f64() * (fb.sin() - fa.sin()) - cb.to_f64() * (fb.cos() - fa.cos()))
                / m as f64;
            exact = match (exact, quarter_turn(&(a * &mq)), quarter_turn(&(b * &mq))) {
                (Some(e), Some((cos_a, sin_a)), Some((cos_b, sin_b))) => {
                    let ds = Q::from_integer((sin_b - sin_a).into());
                    let dc = Q::from_integer((cos_b - cos_a).into());
                    let term = &ca.scale(&ds) - &cb.scale(&dc);
                    Some(&e + &(&term * &inv))
                }
                _ => None,
            };
        }
        Some(match exact {
            Some(s) => Value::Exact(s),
            None => Value::Float(float),
        })
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, (a, b)) in &self.terms {
            let arg = phase_text(k, names);
            for (s, f) in [(a, "cos"), (b, "sin")] {
                if s.is_zero() {
                    continue;
                }
                let coeff = s.to_string();
                let coeff = if coeff.contains(' ') {
                    format!("({coeff})")
                } else {
                    coeff
                };
                if arg.is_empty() {
                    parts.push(coeff);
                } else if coeff == "1" {
                    parts.push(format!("{f}({arg})"));
                } else if coeff == "-1" {
                    parts.push(format!("-{f}({arg})"));
                } else {
                    parts.push(format!("{coeff}*{f}({arg})"));
                }
            }
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    s.push_str(" - ");
                    s.push_str(rest);
                }
                None => {
                    s.push_str(" + ");
                    s.push_str(p);
                }
            }
        }
        s
    }
}

fn phase_text(k: &[i32], names: &[&str]) -> String {
    let mut s = String::new();
    for (i, &ki) in k.iter().enumerate() {
        if ki == 0 {
            continue;
        }
        let sign = if ki < 0 { "-" } else { "+" };
        if s.is_empty() {
            if ki < 0 {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        if ki.abs() != 1 {
            s.push_str(&format!("{}*", ki.abs()));
        }
        s.push_str(names[i]);
    }
    s
}

/// (cos, sin) of q·π when q is a multiple of 1/2.
pub(crate) fn quarter_turn(q: &Q) -> Option<(i32, i32)> {
    let twice = q * Q::from_integer(2.into());
    if !twice.is_integer() {
        return None;
    }
    let r = twice.to_integer() % num_bigint::BigInt::from(4);
    let r = if r.is_negative() { r + 4 } else { r };
    Some(match r.to_i32().unwrap() {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    })
}
