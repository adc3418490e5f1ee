//! The Koszul L∞[1]-algebra (Ω(M)[2], λ₁, λ₂, λ₃) of a bivector field.
//!
//! Sign ledger, with |α| the unshifted form degree:
//! - [α,β]_Z = (−1)^{|α|+1}(𝓛_Z(α∧β) − 𝓛_Zα∧β − (−1)^{|α|}α∧𝓛_Zβ)
//! - [α,β,γ]_Z = (α♯∧β♯∧γ♯)(½[Z,Z])
//! - λ₂(α,β) = (−1)^{|α|}[α,β]_Z, λ₃(α,β,γ) = (−1)^{|β|+1}[α,β,γ]_Z
//! - MC residual dβ + ½[β,β]_Z − ⅙[β,β,β]_Z on 2-forms.

mod bv;
mod higher;
mod linf;

use std::sync::Arc;

use thiserror::Error;

use crate::cartan::{
    d, lie, multi_sharp, schouten, sharp, unsharp, CartanError, Form, FormKind, MultiVector, RingMatrix,
};
use crate::coeffring::{q, Chart, Coefficient, Q};

pub use bv::{bv_coefficient, bv_square_check, BvReport};
pub use higher::{higher_koszul, koszul_brackets, koszul_unshuffle, unshuffles};
pub use linf::{relation_samples, koszul_sign, linf_relation, linf_relation_check, LinfAlgebra, RelationOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KoszulError {
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("expected a form of degree {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("bracket of arity {0} is not defined")]
    Arity(usize),
    #[error("det(id + Z♯β♯) = {det} is not a unit; pointwise-only, evaluate the fiber map at sample points")]
    NotUnit { det: String },
}

/// A bivector field with its cached self-bracket.
#[derive(Clone, Debug)]
pub struct KoszulStructure {
    z: MultiVector,
    zz: MultiVector,
    half_zz: MultiVector,
    z_sharp: RingMatrix,
}

impl KoszulStructure {
    pub fn new(z: MultiVector) -> Result<Self, KoszulError> {
        if z.degree() != 2 && !z.is_zero() {
            return Err(KoszulError::WrongDegree {
                expected: 2,
                got: z.degree(),
            });
        }
        let zz = schouten(&z, &z);
        let half_zz = zz.scale_q(&q(1, 2));
        let z_sharp = sharp(&z)?;
        Ok(KoszulStructure {
            z,
            zz,
            half_zz,
            z_sharp,
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.z.chart()
    }

    pub fn z(&self) -> &MultiVector {
        &self.z
    }

    /// [Z,Z]
    pub fn zz(&self) -> &MultiVector {
        &self.zz
    }

    pub fn z_sharp(&self) -> &RingMatrix {
        &self.z_sharp
    }

    pub fn is_poisson(&self) -> bool {
        self.zz.is_zero()
    }

    /// Recomputes [Z,Z] and compares with the cache.
    pub fn cache_consistent(&self) -> bool {
        schouten(&self.z, &self.z) == self.zz
    }

    fn check(&self, f: &Form) -> Result<(), KoszulError> {
        if !crate::cartan::same_chart(self.chart(), f.chart()) {
            return Err(CartanError::ChartMismatch.into());
        }
        Ok(())
    }
}

fn parity_sign(e: usize) -> Q {
    if e % 2 == 1 {
        q(-1, 1)
    } else {
        q(1, 1)
    }
}

/// The Koszul bracket [α,β]_Z.
pub fn koszul2(k: &KoszulStructure, a: &Form, b: &Form) -> Result<Form, KoszulError> {
    k.check(a)?;
    k.check(b)?;
    let z = &k.z;
    let pa = a.degree();
    let ab = lie(z, &a.wedge(b));
    let la_b = lie(z, a).wedge(b);
    let a_lb = a.wedge(&lie(z, b));
    let inner = if pa % 2 == 1 { &(&ab - &la_b) + &a_lb } else { &(&ab - &la_b) - &a_lb };
    Ok(inner.scale_q(&parity_sign(pa + 1)))
}

/// The trinary bracket (α♯∧β♯∧γ♯)(½[Z,Z]).
pub fn koszul3(k: &KoszulStructure, a: &Form, b: &Form, c: &Form) -> Result<Form, KoszulError> {
    for f in [a, b, c] {
        k.check(f)?;
    }
    Ok(multi_sharp(&[a.clone(), b.clone(), c.clone()], &k.half_zz)?)
}

/// An element α[2] of Ω(M)[2].
#[derive(Clone, Debug, PartialEq)]
pub struct Shifted {
    form: Form,
    degree: i64,
}

impl Shifted {
    pub fn new(form: Form) -> Self {
        let degree = form.degree() as i64 - 2;
        Shifted { form, degree }
    }

    fn with_degree(form: Form, degree: i64) -> Self {
        Shifted { form, degree }
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn into_form(self) -> Form {
        self.form
    }

    /// Degree in Ω(M)[2]: form degree − 2.
    pub fn degree(&self) -> i64 {
        self.degree
    }

    fn form_degree(&self) -> usize {
        (self.degree + 2) as usize
    }
}

/// λ₁, λ₂ or λ₃ on shifted elements.
pub fn lambda(k: &KoszulStructure, args: &[Shifted]) -> Result<Shifted, KoszulError> {
    let out_deg = args.iter().map(Shifted::degree).sum::<i64>() + 1;
    let f = match args {
        [a] => {
            k.check(a.form())?;
            d(a.form())
        }
        [a, b] => koszul2(k, a.form(), b.form())?.scale_q(&parity_sign(a.form_degree())),
        [a, b, c] => koszul3(k, a.form(), b.form(), c.form())?.scale_q(&parity_sign(b.form_degree() + 1)),
        _ => return Err(KoszulError::Arity(args.len())),
    };
    Ok(Shifted::with_degree(f, out_deg))
}

fn require_two_form(beta: &Form) -> Result<(), KoszulError> {
    if beta.degree() != 2 && !beta.is_zero() {
        return Err(KoszulError::WrongDegree {
            expected: 2,
            got: beta.degree(),
        });
    }
    Ok(())
}

/// dβ + ½[β,β]_Z − ⅙[β,β,β]_Z, evaluated unshifted.
pub fn mc_residual(k: &KoszulStructure, beta: &Form) -> Result<Form, KoszulError> {
    require_two_form(beta)?;
    k.check(beta)?;
    let db = d(beta);
    let b2 = koszul2(k, beta, beta)?.scale_q(&q(1, 2));
    let b3 = koszul3(k, beta, beta, beta)?.scale_q(&q(1, 6));
    Ok(&(&db + &b2) - &b3)
}

/// λ₁(β) + ½λ₂(β,β) + ⅙λ₃(β,β,β), evaluated through [`lambda`].
pub fn mc_residual_shifted(k: &KoszulStructure, beta: &Form) -> Result<Form, KoszulError> {
    require_two_form(beta)?;
    let s = Shifted::new(beta.clone());
    let l1 = lambda(k, std::slice::from_ref(&s))?.into_form();
    let l2 = lambda(k, &[s.clone(), s.clone()])?.into_form().scale_q(&q(1, 2));
    let l3 = lambda(k, &[s.clone(), s.clone(), s])?.into_form().scale_q(&q(1, 6));
    Ok(&(&l1 + &l2) + &l3)
}

/// β♯(id + s·Z♯β♯)⁻¹ in the ring, s = ±1.
fn twisted(k: &KoszulStructure, beta: &Form, negate: bool) -> Result<Form, KoszulError> {
    require_two_form(beta)?;
    k.check(beta)?;
    let n = k.chart().dim();
    let b = sharp(beta)?;
    let zb = k.z_sharp.mul(&b);
    let m = if negate {
        RingMatrix::identity(n).sub(&zb)
    } else {
        RingMatrix::identity(n).add(&zb)
    };
    let det = m.det();
    let inv = det.inverse().ok_or_else(|| KoszulError::NotUnit {
        det: det.render(k.chart()),
    })?;
    let f = b.mul(&m.adjugate()).scale(&inv);
    Ok(unsharp::<FormKind>(k.chart(), &f))
}

/// F(β) with F(β)♯ = β♯(id + Z♯β♯)⁻¹, when det(id + Z♯β♯) is a unit.
pub fn f_section(k: &KoszulStructure, beta: &Form) -> Result<Form, KoszulError> {
    twisted(k, beta, false)
}

/// F⁻¹(α)♯ = α♯(id − Z♯α♯)⁻¹.
pub fn f_inverse_section(k: &KoszulStructure, alpha: &Form) -> Result<Form, KoszulError> {
    twisted(k, alpha, true)
}

/// det(id + Z♯β♯).
pub fn iz_determinant(k: &KoszulStructure, beta: &Form) -> Result<Coefficient, KoszulError> {
    require_two_form(beta)?;
    let n = k.chart().dim();
    Ok(RingMatrix::identity(n).add(&k.z_sharp.mul(&sharp(beta)?)).det())
}

/// Σ_{j≤N} α_j where e^{R_Z} e^β = e^{α}, computed through the recursion
/// α_j = (1/j)·½ Σ_{r+s=j−1} 𝒦(ι_Z)₂(α_r, α_s).
pub fn psi_partial_sum(k: &KoszulStructure, beta: &Form, n: usize) -> Form {
    let mut alphas = vec![beta.clone()];
    for j in 1..=n {
        let mut acc = Form::zero(k.chart(), 2);
        for r in 0..j {
            let s = j - 1 - r;
            let term = higher_koszul(&k.z, &[alphas[r].clone(), alphas[s].clone()]).expect("arity 2");
            acc = &acc + &term;
        }
        alphas.push(acc.scale_q(&q(1, 2 * j as i64)));
    }
    alphas.iter().fold(Form::zero(k.chart(), 2), |a, b| &a + b)
}

/// (Σ_{j≤N} α_j)♯(id + Z♯β♯) − β♯ − (−1)^N β♯(Z♯β♯)^{N+1}; vanishes identically.
pub fn telescoping_residual(k: &KoszulStructure, beta: &Form, n: usize) -> RingMatrix {
    let dim = k.chart().dim();
    let b = sharp(beta).expect("2-form");
    let zb = k.z_sharp.mul(&b);
    let s = sharp(&psi_partial_sum(k, beta, n)).expect("2-form");
    let lhs = s.mul(&RingMatrix::identity(dim).add(&zb));
    let mut tail = b.clone();
    for _ in 0..=n {
        tail = tail.mul(&zb);
    }
    let tail = if n % 2 == 1 { tail.neg() } else { tail };
    lhs.sub(&b).sub(&tail)
}

impl LinfAlgebra for KoszulStructure {
    type Elem = Shifted;

    fn degree(&self, x: &Shifted) -> i64 {
        x.degree()
    }

    fn max_arity(&self) -> usize {
        3
    }

    fn bracket(&self, args: &[Shifted]) -> Shifted {
        lambda(self, args).expect("arity within range")
    }

    fn add(&self, a: &Shifted, b: &Shifted) -> Shifted {
        Shifted::with_degree(a.form() + b.form(), a.degree())
    }

    fn neg(&self, a: &Shifted) -> Shifted {
        Shifted::with_degree(-a.form(), a.degree())
    }

    fn is_zero(&self, a: &Shifted) -> bool {
        a.form().is_zero()
    }
}
