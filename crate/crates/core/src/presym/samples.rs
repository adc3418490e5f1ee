//! Seeded deformations of a model for the main-theorem checks.

use num_traits::Zero;

use super::{PreSymplecticModel, PresymError};
use crate::cartan::{d, Form};
use crate::coeffring::{fmt_rational, q, ChartKind, Coefficient, Q};
use crate::koszul::{f_inverse_section, iz_determinant};
use crate::sampling::Sampler;

/// A random function of the listed coordinates only.
fn function_of(s: &mut Sampler, model: &PreSymplecticModel, vars: &[usize]) -> Coefficient {
    let ch = model.chart();
    let names = ch.names();
    let mut text = String::from("0");
    for _ in 0..s.small_int(1, 2) {
        let c = fmt_rational(&s.nonzero_q());
        let term = match ch.kind() {
            ChartKind::Affine => {
                let mut t = format!("({c})");
                for &v in vars {
                    let e = s.small_int(0, 2);
                    if e > 0 {
                        t.push_str(&format!("*{}^{e}", names[v]));
                    }
                }
                t
            }
            ChartKind::Periodic => {
                let mut arg = String::from("0");
                for &v in vars {
                    let k = s.small_int(-1, 1);
                    if k != 0 {
                        arg.push_str(&format!("+({k})*{}", names[v]));
                    }
                }
                let f = if s.chance(0.5) { "cos" } else { "sin" };
                format!("({c})*{f}({arg})")
            }
        };
        text.push('+');
        text.push_str(&term);
    }
    ch.parse(&text).expect("generated expression parses")
}

/// A Maurer-Cartan element β = F⁻¹(du∧dv − η) with du = σ₁ + dp and
/// dv = σ₂ + dq + r·dh, where η = σ₁∧σ₂, p and q depend on `k_vars` and h
/// on `twist_var` alone.
pub fn darboux_mc(
    s: &mut Sampler,
    model: &PreSymplecticModel,
    sigma: (&Form, &Form),
    k_vars: &[usize],
    twist_var: usize,
) -> Result<Form, PresymError> {
    let ch = model.chart();
    let func = |c: Coefficient| Form::function(ch, c);
    let p = func(function_of(s, model, k_vars));
    let qf = func(function_of(s, model, k_vars));
    let h = func(function_of(s, model, &[twist_var]));
    let r = s.small_q();
    let du = sigma.0 + &d(&p);
    let dv = &(sigma.1 + &d(&qf)) + &d(&h).scale_q(&r);
    let alpha = &du.wedge(&dv) - model.eta();
    Ok(f_inverse_section(model.koszul(), &alpha)?)
}

/// A horizontal 2-form with random K*∧G* part and constant G-block,
/// resampled until β ∈ I_Z in the ring.
pub fn horizontal_sample(s: &mut Sampler, model: &PreSymplecticModel) -> Form {
    let ch = model.chart();
    let (k, n) = (model.k_dim(), model.dim());
    let theta: Vec<Form> = (0..n).map(|a| model.coframe(a)).collect();
    loop {
        let mut beta = Form::zero(ch, 2);
        for a in 0..k {
            for b in k..n {
                if s.chance(0.6) {
                    let c = s.polynomial_coefficient(ch, 2);
                    beta = &beta + &theta[a].wedge(&theta[b]).scale(&c);
                }
            }
        }
        for a in k..n {
            for b in (a + 1)..n {
                if s.chance(0.7) {
                    beta = &beta + &theta[a].wedge(&theta[b]).scale_q(&s.small_q());
                }
            }
        }
        let det = iz_determinant(model.koszul(), &beta).expect("2-form");
        if det.inverse().is_some() {
            return beta;
        }
    }
}

/// Sample points: multiples of π/2 on periodic charts, small positive
/// rationals on affine ones.
pub fn default_points(model: &PreSymplecticModel) -> Vec<Vec<Q>> {
    let n = model.dim();
    let pool: Vec<Q> = match model.chart().kind() {
        ChartKind::Periodic => vec![Q::zero(), q(1, 2), q(1, 1), q(3, 2)],
        ChartKind::Affine => vec![Q::zero(), q(1, 2), q(1, 1), q(2, 1), q(1, 3)],
    };
    (0..6)
        .map(|i| (0..n).map(|j| pool[(i * (j + 1) + j) % pool.len()].clone()).collect())
        .collect()
}

/// A random element of F¹Ω^degree: coframe monomials with at least one G factor.
pub fn horizontal_form(s: &mut Sampler, model: &PreSymplecticModel, degree: usize, max_terms: usize) -> Form {
    let ch = model.chart();
    let (k, n) = (model.k_dim(), model.dim());
    let mut out = Form::zero(ch, degree);
    if degree == 0 || degree > n || k == n {
        return out;
    }
    for _ in 0..s.small_int(1, max_terms.max(1) as i64) {
        let mut blade = s.blade(n, degree);
        while blade.iter().all(|&a| a < k) {
            blade = s.blade(n, degree);
        }
        let c = s.polynomial_coefficient(ch, 2);
        let mut t = Form::function(ch, c);
        for a in blade {
            t = t.wedge(&model.coframe(a));
        }
        out = &out + &t;
    }
    out
}
