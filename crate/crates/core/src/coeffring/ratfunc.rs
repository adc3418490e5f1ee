//! Rational functions kept as a numerator over a product of monic atoms.
//!
//! There is no gcd engine. Atoms are split against each other by exact
//! division when they enter, and after every operation the numerator is
//! divided by each atom for as long as that is exact. Zero testing only
//! needs the numerator, so equality is always decided correctly; the
//! printed form is merely deterministic.

use num_traits::{One, Zero};

use super::poly::Poly;
use super::Q;

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: Poly,
    /// Sorted, monic, nonconstant, positive exponents.
    den: Vec<(Poly, u32)>,
}

/// Equality of functions, decided by cross-multiplication.
impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.denominator()) == other.num.mul(&self.denominator())
    }
}

impl Eq for RatFunc {}

impl RatFunc {
    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, q: Q) -> Self {
        RatFunc::from_poly(Poly::constant(nvars, q))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_atoms(&self) -> &[(Poly, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> Poly {
        let mut d = Poly::constant(self.nvars(), Q::one());
        for (p, e) in &self.den {
            d = d.mul(&p.pow(*e));
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.constant_value()
        } else if self.num.is_zero() {
            Some(Q::zero())
        } else {
            None
        }
    }

    /// Builds `num / den`; `None` when `den` is the zero polynomial.
    pub fn quotient(num: Poly, den: &Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (lc, monic) = den.monic();
        let mut r = RatFunc {
            num: num.scale(&lc.recip()),
            den: Vec::new(),
        };
        if monic.constant_value().is_none() {
            insert_atom(&mut r.den, monic, 1);
        }
        r.reduce();
        Some(r)
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (atom, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.try_div(atom) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.combine(other, true)
    }

    fn combine(&self, other: &RatFunc, negate: bool) -> RatFunc {
        // Split both factor lists against a common atom base first.
        let mut base: Vec<(Poly, u32)> = Vec::new();
        for (p, _) in self.den.iter().chain(&other.den) {
            insert_atom(&mut base, p.clone(), 0);
        }
        let a = self.rebase(&base);
        let b = other.rebase(&base);
        let mut den = Vec::new();
        let mut na = self.num.clone();
        let mut nb = other.num.clone();
        for (i, (p, _)) in base.iter().enumerate() {
            let (ea, eb) = (a[i], b[i]);
            let e = ea.max(eb);
            if e > ea {
                na = na.mul(&p.pow(e - ea));
            }
            if e > eb {
                nb = nb.mul(&p.pow(e - eb));
            }
            if e > 0 {
                den.push((p.clone(), e));
            }
        }
        let num = if negate { na.sub(&nb) } else { na.add(&nb) };
        let mut r = RatFunc { num, den };
        r.reduce();
        r
    }

    /// Exponents of `self.den` expressed over `base`.
    fn rebase(&self, base: &[(Poly, u32)]) -> Vec<u32> {
        let mut out = vec![0u32; base.len()];
        for (p, e) in &self.den {
            let mut rest = p.clone();
            for (i, (b, _)) in base.iter().enumerate() {
                while let Some(q) = rest.try_div(b) {
                    rest = q;
                    out[i] += e;
                }
            }
            debug_assert!(rest.constant_value().is_some());
        }
        out
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        let mut r = RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        };
        if r.num.is_zero() {
            r.den.clear();
        }
        r
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        for (p, e) in &other.den {
            insert_atom(&mut den, p.clone(), *e);
        }
        let mut r = RatFunc {
            num: self.num.mul(&other.num),
            den,
        };
        r.reduce();
        r
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        RatFunc::quotient(self.denominator(), &self.num)
    }

    pub fn partial(&self, i: usize) -> RatFunc {
        let n = self.nvars();
        let involved: Vec<usize> = (0..self.den.len())
            .filter(|&j| self.den[j].0.depends_on(i))
            .collect();
        if involved.is_empty() {
            let mut r = RatFunc {
                num: self.num.partial(i),
                den: self.den.clone(),
            };
            r.reduce();
            return r;
        }
        let mut prod_all = Poly::constant(n, Q::one());
        for &j in &involved {
            prod_all = prod_all.mul(&self.den[j].0);
        }
        let mut num = self.num.partial(i).mul(&prod_all);
        for &j in &involved {
            let (p, e) = &self.den[j];
            let mut others = Poly::constant(n, Q::from_integer((*e).into()));
            for &k in &involved {
                if k != j {
                    others = others.mul(&self.den[k].0);
                }
            }
            num = num.sub(&self.num.mul(&p.partial(i)).mul(&others));
        }
        let mut den = self.den.clone();
        for &j in &involved {
            den[j].1 += 1;
        }
        let mut r = RatFunc { num, den };
        r.reduce();
        r
    }

    /// Substitutes the given variables. `None` when the denominator vanishes identically afterwards.
    pub fn eval_partial(&self, point: &[Option<Q>]) -> Option<RatFunc> {
        let num = self.num.eval_partial(point);
        let mut out = RatFunc::from_poly(num);
        for (p, e) in &self.den {
            let d = p.eval_partial(point);
            let inv = RatFunc::quotient(Poly::constant(self.nvars(), Q::one()), &d)?;
            for _ in 0..*e {
                out = out.mul(&inv);
            }
        }
        Some(out)
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        let num = self.num.display_with(names);
        if self.den.is_empty() {
            return num;
        }
        let num = if self.num.terms().count() > 1 {
            format!("({num})")
        } else {
            num
        };
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(p, e)| {
                let base = if p.terms().count() > 1 {
                    format!("({})", p.display_with(names))
                } else {
                    p.display_with(names)
                };
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        if den.len() == 1 {
            format!("{num}/{}", den[0])
        } else {
            format!("{num}/({})", den.join("*"))
        }
    }
}

/// Adds `p^e` to a factor list, splitting `p` against atoms already present.
fn insert_atom(den: &mut Vec<(Poly, u32)>, p: Poly, e: u32) {
    let mut rest = p;
    for (atom, ea) in den.iter_mut() {
        while let Some(q) = rest.try_div(atom) {
            rest = q;
            *ea += e;
        }
    }
    // Leftover constants are 1 because every atom is monic.
    if rest.constant_value().is_some() {
        return;
    }
    // The new atom may properly divide an existing one.
    let mut split = Vec::new();
    for (atom, ea) in den.iter_mut() {
        if let Some(q) = atom.try_div(&rest) {
            split.push((q, *ea));
            *atom = rest.clone();
        }
    }
    den.push((rest, e));
    merge_duplicates(den);
    for (q, ea) in split {
        insert_atom(den, q, ea);
    }
}

fn merge_duplicates(den: &mut Vec<(Poly, u32)>) {
    den.sort();
    let mut out: Vec<(Poly, u32)> = Vec::with_capacity(den.len());
    for (p, e) in den.drain(..) {
        match out.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => out.push((p, e)),
        }
    }
    *den = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn one_plus_x() -> Poly {
        Poly::var(2, 0).add(&Poly::constant(2, c(1)))
    }

    #[test]
    fn quotient_rule() {
        let r = RatFunc::quotient(Poly::constant(2, c(1)), &one_plus_x()).unwrap();
        let d = r.partial(0);
        let expect = RatFunc::quotient(Poly::constant(2, c(-1)), &one_plus_x().pow(2)).unwrap();
        assert!(d.sub(&expect).is_zero());
        assert_eq!(d.display_with(&["x", "pi"]), "-1/(x + 1)^2");
    }

    #[test]
    fn cancels_common_atom() {
        let r = RatFunc::quotient(one_plus_x().scale(&c(2)), &one_plus_x()).unwrap();
        assert_eq!(r.constant_value(), Some(c(2)));
    }

    #[test]
    fn sum_over_power_and_atom() {
        // 1/(1+x) - 1/(1+x)^2 = x/(1+x)^2
        let a = RatFunc::quotient(Poly::constant(2, c(1)), &one_plus_x()).unwrap();
        let b = RatFunc::quotient(Poly::constant(2, c(1)), &one_plus_x().pow(2)).unwrap();
        let s = a.sub(&b);
        let expect = RatFunc::quotient(Poly::var(2, 0), &one_plus_x().pow(2)).unwrap();
        assert!(s.sub(&expect).is_zero());
        assert_eq!(s, expect);
        assert_eq!(s.display_with(&["x", "pi"]), "x/(x + 1)^2");
    }

    #[test]
    fn inverse_roundtrip() {
        let a = RatFunc::quotient(Poly::var(2, 1), &one_plus_x()).unwrap();
        let prod = a.mul(&a.inverse().unwrap());
        assert_eq!(prod.constant_value(), Some(c(1)));
    }
}
