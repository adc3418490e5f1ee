//! Sparse multivariate polynomials over ℚ.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use super::scalar::fmt_rational;
use super::Q;

pub(crate) type Exponents = Vec<u16>;

/// Terms are keyed by exponent vectors; the map's last key is the
/// lexicographic leading monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, q: Q) -> Self {
        let mut p = Poly::zero(nvars);
        if !q.is_zero() {
            p.terms.insert(vec![0; nvars], q);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, Q::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn constant_value(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, q) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| q.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Exponents, &Q)> {
        self.terms.iter().next_back()
    }

    /// Whether variable `i` occurs.
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    fn add_term(&mut self, e: Exponents, q: Q) {
        if q.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, q) in &other.terms {
            out.add_term(e.clone(), q.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, q) in &other.terms {
            out.add_term(e.clone(), -q);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, q)| (e.clone(), -q)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, q)| (e.clone(), q * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, q1) in &self.terms {
            for (e2, q2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, q1 * q2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(self.nvars, Q::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, q) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, q * Q::from_integer(e[i].into()));
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn try_div(&self, divisor: &Poly) -> Option<Poly> {
        let (lead_e, lead_q) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((e, q)) = rem.leading() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let shift: Exponents = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let c = q / lead_q;
            let mut mono = Poly::zero(self.nvars);
            mono.terms.insert(shift.clone(), c.clone());
            rem = rem.sub(&divisor.mul(&mono));
            quot.add_term(shift, c);
        }
        Some(quot)
    }

    /// Scales so the leading coefficient is one; returns the removed factor.
    pub fn monic(&self) -> (Q, Poly) {
        match self.leading() {
            None => (Q::one(), self.clone()),
            Some((_, lc)) => {
                let lc = lc.clone();
                (lc.clone(), self.scale(&lc.recip()))
            }
        }
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut total = Q::zero();
        for (e, q) in &self.terms {
            let mut term = q.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += term;
        }
        total
    }

    /// Substitutes the variables given as `Some`, keeping the others.
    pub fn eval_partial(&self, point: &[Option<Q>]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, q) in &self.terms {
            let mut c = q.clone();
            let mut e2 = e.clone();
            for (i, v) in point.iter().enumerate() {
                if let Some(x) = v {
                    if e[i] > 0 {
                        c *= num_traits::pow(x.clone(), e[i] as usize);
                    }
                    e2[i] = 0;
                }
            }
            out.add_term(e2, c);
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Canonical text: leading monomial first.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (e, q)) in self.terms.iter().rev().enumerate() {
            let neg = q.is_negative();
            let abs = q.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].to_string()
                    } else {
                        format!("{}^{}", names[i], k)
                    }
                })
                .collect();
            if mono.is_empty() {
                s.push_str(&fmt_rational(&abs));
            } else {
                if !abs.is_one() {
                    let _ = write!(s, "{}*", fmt_rational(&abs));
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}
