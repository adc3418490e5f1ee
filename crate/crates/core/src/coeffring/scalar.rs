//! Scalars in ℚ[π, π⁻¹].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Q;

/// A finite ℚ-linear combination of integer powers of π.
///
/// Canonical: one rational per power, zero coefficients pruned.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Scalar {
    terms: BTreeMap<i32, Q>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::rational(Q::one())
    }

    pub fn rational(q: Q) -> Self {
        Scalar::monomial(q, 0)
    }

    pub fn integer(n: i64) -> Self {
        Scalar::rational(Q::from_integer(n.into()))
    }

    /// `q · π^k`.
    pub fn monomial(q: Q, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(k, q);
        }
        Scalar { terms }
    }

    pub fn pi() -> Self {
        Scalar::monomial(Q::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Q)> {
        self.terms.iter().map(|(k, q)| (*k, q))
    }

    /// The rational value when no power of π other than π⁰ occurs.
    pub fn as_rational(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// Units of ℚ[π, π⁻¹] are exactly the nonzero monomials.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, q) = self.terms.iter().next().unwrap();
        Some(Scalar::monomial(q.recip(), -k))
    }

    pub fn scale(&self, q: &Q) -> Scalar {
        if q.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(k, c)| (*k, c * q)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(k, q)| q.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi(*k))
            .sum()
    }

    fn insert_add(terms: &mut BTreeMap<i32, Q>, k: i32, q: Q) {
        let entry = terms.entry(k).or_insert_with(Q::zero);
        *entry += q;
        if entry.is_zero() {
            terms.remove(&k);
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (k, q) in &rhs.terms {
            Scalar::insert_add(&mut terms, *k, q.clone());
        }
        Scalar { terms }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(k, q)| (*k, -q)).collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut terms = BTreeMap::new();
        for (k1, q1) in &self.terms {
            for (k2, q2) in &rhs.terms {
                Scalar::insert_add(&mut terms, k1 + k2, q1 * q2);
            }
        }
        Scalar { terms }
    }
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Self {
        Scalar::rational(q)
    }
}

pub(crate) fn fmt_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Highest π-power first, e.g. `-16*pi^2`, `1/2*pi + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, q) in self.terms.iter().rev() {
            let neg = q.is_negative();
            let abs = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let pi = match k {
                0 => String::new(),
                1 => "pi".to_string(),
                k => format!("pi^{k}"),
            };
            if pi.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{pi}")?;
            } else {
                write!(f, "{}*{pi}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}
