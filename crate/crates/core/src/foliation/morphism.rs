//! q = Z♯ ∘ (projection to Γ(∧K*⊗G*)) and the Kuranishi cochains.

use super::{FoliationAlgebra, FoliationError, VectorValuedForm};
use crate::cartan::{d, iota_form, Form};
use crate::koszul::{lambda, KoszulStructure, Shifted};
use crate::presym::horizontal_form;
use crate::sampling::Sampler;
use crate::presym::PresymError;

/// q(β) for horizontal β; Ω^{•,≥2} is the kernel.
pub fn q_morphism(alg: &FoliationAlgebra, beta: &Form) -> Result<VectorValuedForm, FoliationError> {
    let model = alg.model();
    if !model.is_horizontal(beta) {
        return Err(PresymError::NotHorizontal.into());
    }
    let k = alg.k();
    let degree = beta.degree().saturating_sub(1);
    let mut out = VectorValuedForm::zero(alg, degree);
    let framed = model.to_frame_form(beta);
    let images: Vec<Vec<_>> = (0..alg.g())
        .map(|b| alg.split(&iota_form(&model.coframe(k + b), model.z())).1)
        .collect();
    for (blade, c) in framed.terms() {
        let (last, head) = blade.split_last().expect("horizontal forms have degree ≥ 1");
        if *last < k || head.iter().any(|&a| a >= k) {
            continue;
        }
        for (g, zc) in images[*last - k].iter().enumerate() {
            if !zc.is_zero() {
                out.add_term(head.to_vec(), g, c * zc);
            }
        }
    }
    Ok(out)
}

/// λ₂(w,w) for a λ₁-closed 2-form w.
pub fn kuranishi(k: &KoszulStructure, w: &Form) -> Result<Form, FoliationError> {
    if !d(w).is_zero() {
        return Err(FoliationError::NotClosed("w"));
    }
    let s = Shifted::new(w.clone());
    let out = lambda(k, &[s.clone(), s]).map_err(PresymError::from)?;
    Ok(out.into_form())
}

/// −l₂(φ,φ) for an l₁-closed φ.
pub fn kuranishi_fol(alg: &FoliationAlgebra, phi: &VectorValuedForm) -> Result<VectorValuedForm, FoliationError> {
    if !alg.l1(phi)?.is_zero() {
        return Err(FoliationError::NotClosed("φ"));
    }
    Ok(alg.l2(phi, phi)?.neg())
}

/// A failed intertwining identity q∘λ_n = ±l_n∘q^{⊗n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictnessFailure {
    pub sample: usize,
    pub arity: usize,
}

/// Checks q∘λ₁ = l₁∘q, q∘λ₂ = −l₂∘(q⊗q) and q∘λ₃ = l₃∘(q⊗q⊗q) on
/// `samples` seeded horizontal triples of degree 1 or 2.
pub fn q_strictness_check(
    alg: &FoliationAlgebra,
    s: &mut Sampler,
    samples: usize,
) -> Result<Vec<StrictnessFailure>, FoliationError> {
    let model = alg.model();
    let k = model.koszul();
    let lam = |args: &[&Form]| -> Result<Form, FoliationError> {
        let sh: Vec<Shifted> = args.iter().map(|f| Shifted::new((*f).clone())).collect();
        Ok(lambda(k, &sh).map_err(PresymError::from)?.into_form())
    };
    let mut failures = Vec::new();
    for i in 0..samples {
        let forms: Vec<Form> = (0..3)
            .map(|_| {
                let deg = s.small_int(1, 2) as usize;
                horizontal_form(s, model, deg, 2)
            })
            .collect();
        let qs = forms
            .iter()
            .map(|f| q_morphism(alg, f))
            .collect::<Result<Vec<_>, _>>()?;
        let (a, b, c) = (&forms[0], &forms[1], &forms[2]);
        if q_morphism(alg, &lam(&[a])?)? != alg.l1(&qs[0])? {
            failures.push(StrictnessFailure { sample: i, arity: 1 });
        }
        if q_morphism(alg, &lam(&[a, b])?)? != alg.l2(&qs[0], &qs[1])?.neg() {
            failures.push(StrictnessFailure { sample: i, arity: 2 });
        }
        if q_morphism(alg, &lam(&[a, b, c])?)? != alg.l3(&qs[0], &qs[1], &qs[2])? {
            failures.push(StrictnessFailure { sample: i, arity: 3 });
        }
    }
    Ok(failures)
}
