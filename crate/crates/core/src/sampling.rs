//! Seeded generators for coefficients, forms and multivectors.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cartan::{Blade, Form, Kind, MultiVector, Tensor};
use crate::coeffring::{q, Chart, ChartKind, Coefficient, Poly, RatFunc, Scalar, TrigPoly, Q};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// n/d with |n| ≤ 3, 1 ≤ d ≤ 3.
    pub fn small_q(&mut self) -> Q {
        q(self.rng.gen_range(-3..=3), self.rng.gen_range(1..=3))
    }

    pub fn nonzero_q(&mut self) -> Q {
        loop {
            let v = self.small_q();
            if v != Q::from_integer(0.into()) {
                return v;
            }
        }
    }

    pub fn small_int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn poly(&mut self, chart: &Chart, terms: usize, max_deg: u16) -> Poly {
        let n = chart.dim() + 1;
        let mut p = Poly::zero(n);
        for _ in 0..terms {
            let mut m = Poly::constant(n, self.small_q());
            for _ in 0..self.rng.gen_range(0..=max_deg) {
                m = m.mul(&Poly::var(n, self.rng.gen_range(0..chart.dim())));
            }
            p = p.add(&m);
        }
        p
    }

    fn trig(&mut self, chart: &Chart, terms: usize) -> TrigPoly {
        let n = chart.dim();
        let mut t = TrigPoly::zero(n);
        for _ in 0..terms {
            let mut k = vec![0i32; n];
            for _ in 0..self.rng.gen_range(0..=2) {
                let i = self.rng.gen_range(0..n);
                k[i] += self.rng.gen_range(-1..=1);
            }
            let c = Scalar::rational(self.small_q());
            let term = if self.rng.gen_bool(0.5) {
                TrigPoly::cos(n, k)
            } else {
                TrigPoly::sin(n, k)
            };
            t = t.add(&term.scale(&c));
        }
        t
    }

    /// A random element of the chart's ring. Affine coefficients are
    /// polynomials, occasionally divided by a linear factor.
    pub fn coefficient(&mut self, chart: &Chart) -> Coefficient {
        match chart.kind() {
            ChartKind::Affine => {
                let terms = self.rng.gen_range(1..=3);
                let num = self.poly(chart, terms, 2);
                let r = if self.rng.gen_bool(0.25) {
                    let n = chart.dim() + 1;
                    let i = self.rng.gen_range(0..chart.dim());
                    let den = Poly::var(n, i).add(&Poly::constant(n, q(self.rng.gen_range(1..=3), 1)));
                    RatFunc::quotient(num, &den).expect("nonzero denominator")
                } else {
                    RatFunc::from_poly(num)
                };
                Coefficient::from_ratfunc(r)
            }
            ChartKind::Periodic => {
                let terms = self.rng.gen_range(1..=3);
                Coefficient::from_trig(self.trig(chart, terms))
            }
        }
    }

    /// A polynomial (affine) or trig polynomial coefficient with no denominators.
    pub fn polynomial_coefficient(&mut self, chart: &Chart, terms: usize) -> Coefficient {
        match chart.kind() {
            ChartKind::Affine => Coefficient::from_ratfunc(RatFunc::from_poly(self.poly(chart, terms, 2))),
            ChartKind::Periodic => Coefficient::from_trig(self.trig(chart, terms)),
        }
    }

    pub fn blade(&mut self, n: usize, degree: usize) -> Blade {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut self.rng);
        let mut b: Vec<usize> = idx.into_iter().take(degree).collect();
        b.sort();
        b
    }

    /// A homogeneous tensor with up to `max_terms` terms.
    pub fn tensor<K: Kind>(&mut self, chart: &Arc<Chart>, degree: usize, max_terms: usize) -> Tensor<K> {
        let n = chart.dim();
        let mut t = Tensor::zero(chart, degree);
        if degree > n {
            return t;
        }
        let terms = self.rng.gen_range(1..=max_terms.max(1));
        for _ in 0..terms {
            let b = self.blade(n, degree);
            let c = self.coefficient(chart);
            t.add_term(b, c);
        }
        t
    }

    pub fn form(&mut self, chart: &Arc<Chart>, degree: usize, max_terms: usize) -> Form {
        self.tensor(chart, degree, max_terms)
    }

    pub fn multivector(&mut self, chart: &Arc<Chart>, degree: usize, max_terms: usize) -> MultiVector {
        self.tensor(chart, degree, max_terms)
    }
}

/// All basis blades of the given degree in lexicographic order.
pub fn blades(n: usize, degree: usize) -> Vec<Blade> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Blade>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if degree <= n {
        rec(0, n, degree, &mut Vec::new(), &mut out);
    }
    out
}

/// Monomial test forms: every basis blade of every degree, times each of
/// the coefficients 1, x_i (affine) or 1, cos θ_i, sin θ_i (periodic).
pub fn monomial_forms(chart: &Arc<Chart>) -> Vec<Form> {
    let n = chart.dim();
    let mut coeffs = vec![Coefficient::one()];
    for i in 0..n {
        let name = &chart.names()[i];
        match chart.kind() {
            ChartKind::Affine => coeffs.push(chart.parse(name).unwrap()),
            ChartKind::Periodic => {
                coeffs.push(chart.parse(&format!("cos({name})")).unwrap());
                coeffs.push(chart.parse(&format!("sin({name})")).unwrap());
            }
        }
    }
    let mut out = Vec::new();
    for deg in 0..=n {
        for b in blades(n, deg) {
            for c in &coeffs {
                out.push(Form::monomial(chart, &b, c.clone()));
            }
        }
    }
    out
}
