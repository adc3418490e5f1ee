//! The L∞[1]-algebra (Γ(∧K*⊗G)[1], l₁, −l₂, l₃) of the characteristic
//! foliation, the strict morphism q from horizontal forms, and the
//! obstruction certificates on T⁴.
//!
//! A vector-valued form is stored against the model's frames: the term
//! ((i₁..i_j), b) is θ^{i₁}∧…∧θ^{i_j} ⊗ g_b with θ the K-coframe and g the
//! G-frame. Evaluation on K-vectors uses the determinant convention
//! (θ^1∧θ^2)(X₁, X₂) = 1.
//!
//! l₃ is completed cyclically with Koszul signs in the shifted degrees:
//! l₃(ξ,ψ,φ) = T(ξ,ψ,φ) + (−1)^{|ξ|(|ψ|+|φ|)}T(ψ,φ,ξ) + (−1)^{|φ|(|ξ|+|ψ|)}T(φ,ξ,ψ),
//! T being the displayed pr_K-insertion sum.

mod integrals;
mod morphism;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cartan::{bracket, iota, permutations, Form, MultiVector};
use crate::coeffring::{q, Chart, Coefficient};
use crate::koszul::{unshuffles, LinfAlgebra};
use crate::presym::{PreSymplecticModel, PresymError};
use crate::sampling::Sampler;

pub use integrals::{cycle_integral_fol, cycle_integral_presym, CycleValue};
pub use morphism::{kuranishi, kuranishi_fol, q_morphism, q_strictness_check, StrictnessFailure};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FoliationError {
    #[error(transparent)]
    Presym(#[from] PresymError),
    #[error("expected K-degree {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("vector-valued forms belong to different models")]
    ModelMismatch,
    #[error("K is not involutive: [X_{0}, X_{1}] leaves K")]
    NotInvolutive(usize, usize),
    #[error("{0} is not closed")]
    NotClosed(&'static str),
    #[error("{0}")]
    Integral(String),
}

/// An element of Γ(∧^j K*⊗G).
#[derive(Clone)]
pub struct VectorValuedForm {
    chart: Arc<Chart>,
    k: usize,
    g: usize,
    degree: usize,
    terms: BTreeMap<(Vec<usize>, usize), Coefficient>,
}

impl VectorValuedForm {
    pub fn zero(alg: &FoliationAlgebra, degree: usize) -> Self {
        VectorValuedForm {
            chart: alg.chart().clone(),
            k: alg.k(),
            g: alg.g(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// θ^I ⊗ c·g_b for an unsorted index list I.
    pub fn monomial(alg: &FoliationAlgebra, idx: &[usize], b: usize, c: Coefficient) -> Self {
        let mut v = VectorValuedForm::zero(alg, idx.len());
        if let Some((sorted, odd)) = crate::cartan::sort_blade(idx) {
            assert!(sorted.iter().all(|&i| i < alg.k()) && b < alg.g(), "index out of range");
            v.add_term(sorted, b, if odd { -c } else { c });
        }
        v
    }

    fn add_term(&mut self, idx: Vec<usize>, b: usize, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        let key = (idx, b);
        let sum = match self.terms.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    /// K-degree j.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Degree in Γ(∧K*⊗G)[1].
    pub fn shifted_degree(&self) -> i64 {
        self.degree as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: &[usize], b: usize) -> Coefficient {
        self.terms
            .get(&(idx.to_vec(), b))
            .cloned()
            .unwrap_or_else(Coefficient::zero)
    }

    pub fn terms(&self) -> &BTreeMap<(Vec<usize>, usize), Coefficient> {
        &self.terms
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn add(&self, o: &VectorValuedForm) -> VectorValuedForm {
        let mut out = self.clone();
        if self.is_zero() {
            out.degree = o.degree;
        }
        for ((i, b), c) in &o.terms {
            out.add_term(i.clone(), *b, c.clone());
        }
        out
    }

    pub fn neg(&self) -> VectorValuedForm {
        self.scale(&-Coefficient::one())
    }

    pub fn sub(&self, o: &VectorValuedForm) -> VectorValuedForm {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Coefficient) -> VectorValuedForm {
        let mut out = VectorValuedForm {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for ((i, b), v) in &self.terms {
            out.add_term(i.clone(), *b, v * c);
        }
        out
    }

    /// α·ξ for α ∈ Γ(∧K*), given as a frame-index form on the K-indices.
    pub fn left_mul(&self, alpha: &Form) -> VectorValuedForm {
        let mut out = VectorValuedForm {
            degree: alpha.degree() + self.degree,
            terms: BTreeMap::new(),
            ..self.clone()
        };
        for (ia, ca) in alpha.terms() {
            for ((ix, b), cx) in &self.terms {
                let mut idx = ia.clone();
                idx.extend(ix);
                if let Some((sorted, odd)) = crate::cartan::sort_blade(&idx) {
                    let c = ca * cx;
                    out.add_term(sorted, *b, if odd { -c } else { c });
                }
            }
        }
        out
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((i, b), c)| {
                let th: Vec<String> = i.iter().map(|a| format!("θ{}", a + 1)).collect();
                let th = if th.is_empty() { "1".into() } else { th.join("^") };
                format!("{th}⊗({})g{}", c.render(&self.chart), b + 1)
            })
            .collect();
        parts.join(" + ")
    }
}

impl PartialEq for VectorValuedForm {
    fn eq(&self, o: &Self) -> bool {
        if self.is_zero() || o.is_zero() {
            return self.is_zero() && o.is_zero();
        }
        self.degree == o.degree && *self.chart == *o.chart && self.sub(o).is_zero()
    }
}

impl fmt::Debug for VectorValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for VectorValuedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn sign(odd: bool) -> Coefficient {
    if odd {
        -Coefficient::one()
    } else {
        Coefficient::one()
    }
}

fn pow_odd(e: usize) -> bool {
    e % 2 == 1
}

/// Subsets of 0..k of size j in lexicographic order.
fn tuples(k: usize, j: usize) -> Vec<Vec<usize>> {
    crate::sampling::blades(k, j)
}

/// K-vectors as K-frame component lists.
type KVec = Vec<Coefficient>;

/// The foliation side of a pre-symplectic model.
#[derive(Clone, Debug)]
pub struct FoliationAlgebra {
    model: PreSymplecticModel,
    /// [X_i, X_j] in K-frame components
    k_brackets: Vec<Vec<KVec>>,
}

fn add_vec(a: &mut [Coefficient], b: &[Coefficient], s: &Coefficient) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = &*x + &(y * s);
    }
}

impl FoliationAlgebra {
    pub fn new(model: &PreSymplecticModel) -> Result<Self, FoliationError> {
        let k = model.k_dim();
        let mut alg = FoliationAlgebra {
            model: model.clone(),
            k_brackets: Vec::new(),
        };
        let mut kb = vec![vec![Vec::new(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let v = bracket(&model.k_frame()[i], &model.k_frame()[j]);
                let (kc, gc) = alg.split(&v);
                if gc.iter().any(|c| !c.is_zero()) {
                    return Err(FoliationError::NotInvolutive(i, j));
                }
                kb[i][j] = kc;
            }
        }
        alg.k_brackets = kb;
        Ok(alg)
    }

    pub fn model(&self) -> &PreSymplecticModel {
        &self.model
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.model.chart()
    }

    pub fn k(&self) -> usize {
        self.model.k_dim()
    }

    pub fn g(&self) -> usize {
        self.model.rank()
    }

    /// Frame components of a vector field: (K part, G part).
    pub fn split(&self, v: &MultiVector) -> (KVec, Vec<Coefficient>) {
        let framed = self.model.to_frame_vector(v);
        let k = self.k();
        let n = self.model.dim();
        let all: Vec<Coefficient> = (0..n).map(|a| framed.coeff(&[a])).collect();
        (all[..k].to_vec(), all[k..].to_vec())
    }

    fn unit(&self, i: usize) -> KVec {
        let mut v = vec![Coefficient::zero(); self.k()];
        v[i] = Coefficient::one();
        v
    }

    fn g_field(&self, comps: &[Coefficient]) -> MultiVector {
        let mut out = MultiVector::zero(self.chart(), 1);
        for (c, x) in comps.iter().zip(self.model.g_frame()) {
            if !c.is_zero() {
                out = &out + &x.scale(c);
            }
        }
        out
    }

    fn check(&self, x: &VectorValuedForm) -> Result<(), FoliationError> {
        if **self.chart() != *x.chart || x.k != self.k() || x.g != self.g() {
            return Err(FoliationError::ModelMismatch);
        }
        Ok(())
    }

    /// ξ(V₁, …, V_j) as G-frame components.
    pub fn value(&self, xi: &VectorValuedForm, args: &[KVec]) -> Vec<Coefficient> {
        let j = xi.degree;
        let mut out = vec![Coefficient::zero(); self.g()];
        if args.len() != j {
            return out;
        }
        let perms = permutations(j);
        for ((idx, b), c) in &xi.terms {
            let mut det = Coefficient::zero();
            for (p, odd) in &perms {
                let mut t = Coefficient::one();
                for r in 0..j {
                    t = &t * &args[r][idx[p[r]]];
                    if t.is_zero() {
                        break;
                    }
                }
                if !t.is_zero() {
                    det = if *odd { &det - &t } else { &det + &t };
                }
            }
            if !det.is_zero() {
                out[*b] = &out[*b] + &(&det * c);
            }
        }
        out
    }

    fn value_field(&self, xi: &VectorValuedForm, args: &[KVec]) -> MultiVector {
        self.g_field(&self.value(xi, args))
    }

    fn assemble(&self, degree: usize, f: impl Fn(&[usize]) -> Vec<Coefficient>) -> VectorValuedForm {
        let mut out = VectorValuedForm {
            chart: self.chart().clone(),
            k: self.k(),
            g: self.g(),
            degree,
            terms: BTreeMap::new(),
        };
        if degree > self.k() {
            return out;
        }
        for t in tuples(self.k(), degree) {
            for (b, c) in f(&t).into_iter().enumerate() {
                out.add_term(t.clone(), b, c);
            }
        }
        out
    }

    /// l₁(ξ)(X₁..X_{k+1}) = Σ (−1)^{i+1} pr_G[X_i, ξ(..X̂_i..)]
    ///                     + Σ_{i<j} (−1)^{i+j} ξ([X_i,X_j], ..X̂_i..X̂_j..).
    pub fn l1(&self, xi: &VectorValuedForm) -> Result<VectorValuedForm, FoliationError> {
        self.check(xi)?;
        let k = xi.degree;
        Ok(self.assemble(k + 1, |t| {
            let mut acc = vec![Coefficient::zero(); self.g()];
            for i in 0..=k {
                let others: Vec<KVec> = t.iter().enumerate().filter(|&(r, _)| r != i).map(|(_, &a)| self.unit(a)).collect();
                let v = self.value_field(xi, &others);
                let (_, gc) = self.split(&bracket(&self.model.k_frame()[t[i]], &v));
                add_vec(&mut acc, &gc, &sign(pow_odd(i)));
            }
            for i in 0..=k {
                for j in (i + 1)..=k {
                    let mut args = vec![self.k_brackets[t[i]][t[j]].clone()];
                    args.extend(t.iter().enumerate().filter(|&(r, _)| r != i && r != j).map(|(_, &a)| self.unit(a)));
                    add_vec(&mut acc, &self.value(xi, &args), &sign(pow_odd(i + j)));
                }
            }
            acc
        }))
    }

    fn pr_k_bracket(&self, a: &MultiVector, b: &MultiVector) -> KVec {
        self.split(&bracket(a, b)).0
    }

    /// Σ_{τ∈S_{l,1,k−1}} (−1)^τ ξ(pr_K[ψ(X_τ(1..l)), X_τ(l+1)], X_τ(l+2..)).
    fn insertion(&self, xi: &VectorValuedForm, psi: &VectorValuedForm, t: &[usize]) -> Vec<Coefficient> {
        let (k, l) = (xi.degree, psi.degree);
        let mut acc = vec![Coefficient::zero(); self.g()];
        if k == 0 {
            return acc;
        }
        for (s, odd) in unshuffles(&[l, 1, k - 1]) {
            let pa: Vec<KVec> = s[..l].iter().map(|&r| self.unit(t[r])).collect();
            let pv = self.value_field(psi, &pa);
            let kb = self.pr_k_bracket(&pv, &self.model.k_frame()[t[s[l]]]);
            let mut args = vec![kb];
            args.extend(s[l + 1..].iter().map(|&r| self.unit(t[r])));
            add_vec(&mut acc, &self.value(xi, &args), &sign(odd));
        }
        acc
    }

    /// The binary bracket l₂ (the algebra uses −l₂).
    pub fn l2(&self, xi: &VectorValuedForm, psi: &VectorValuedForm) -> Result<VectorValuedForm, FoliationError> {
        self.check(xi)?;
        self.check(psi)?;
        let (k, l) = (xi.degree, psi.degree);
        Ok(self.assemble(k + l, |t| {
            let mut acc = vec![Coefficient::zero(); self.g()];
            for (s, odd) in unshuffles(&[k, l]) {
                let a: Vec<KVec> = s[..k].iter().map(|&r| self.unit(t[r])).collect();
                let b: Vec<KVec> = s[k..].iter().map(|&r| self.unit(t[r])).collect();
                let (_, gc) = self.split(&bracket(&self.value_field(xi, &a), &self.value_field(psi, &b)));
                add_vec(&mut acc, &gc, &sign(odd ^ pow_odd(k)));
            }
            add_vec(&mut acc, &self.insertion(xi, psi, t), &sign(pow_odd(k * (l + 1))));
            // − (−1)^k (ξ ↔ ψ, k ↔ l)
            add_vec(&mut acc, &self.insertion(psi, xi, t), &sign(!pow_odd(k + l * (k + 1))));
            acc
        }))
    }

    /// (−1)^{m+k(l+m)} Σ_{τ∈S_{l,m,k−1}} (−1)^τ ξ(pr_K[ψ(..), φ(..)], ..).
    fn l3_term(&self, xi: &VectorValuedForm, psi: &VectorValuedForm, phi: &VectorValuedForm, t: &[usize]) -> Vec<Coefficient> {
        let (k, l, m) = (xi.degree, psi.degree, phi.degree);
        let mut acc = vec![Coefficient::zero(); self.g()];
        if k == 0 {
            return acc;
        }
        let pre = pow_odd(m + k * (l + m));
        for (s, odd) in unshuffles(&[l, m, k - 1]) {
            let a: Vec<KVec> = s[..l].iter().map(|&r| self.unit(t[r])).collect();
            let b: Vec<KVec> = s[l..l + m].iter().map(|&r| self.unit(t[r])).collect();
            let kb = self.pr_k_bracket(&self.value_field(psi, &a), &self.value_field(phi, &b));
            let mut args = vec![kb];
            args.extend(s[l + m..].iter().map(|&r| self.unit(t[r])));
            add_vec(&mut acc, &self.value(xi, &args), &sign(odd ^ pre));
        }
        acc
    }

    pub fn l3(
        &self,
        xi: &VectorValuedForm,
        psi: &VectorValuedForm,
        phi: &VectorValuedForm,
    ) -> Result<VectorValuedForm, FoliationError> {
        for x in [xi, psi, phi] {
            self.check(x)?;
        }
        let (dx, dp, df) = (xi.shifted_degree(), psi.shifted_degree(), phi.shifted_degree());
        let s2 = (dx * (dp + df)).rem_euclid(2) == 1;
        let s3 = (df * (dx + dp)).rem_euclid(2) == 1;
        let out = xi.degree + psi.degree + phi.degree;
        if out == 0 {
            return Ok(VectorValuedForm::zero(self, 0));
        }
        Ok(self.assemble(out - 1, |t| {
            let mut acc = self.l3_term(xi, psi, phi, t);
            add_vec(&mut acc, &self.l3_term(psi, phi, xi, t), &sign(s2));
            add_vec(&mut acc, &self.l3_term(phi, xi, psi, t), &sign(s3));
            acc
        }))
    }

    /// l₁(φ) − ½l₂(φ,φ) + ⅙l₃(φ,φ,φ).
    pub fn mc_residual_fol(&self, phi: &VectorValuedForm) -> Result<VectorValuedForm, FoliationError> {
        if phi.degree != 1 && !phi.is_zero() {
            return Err(FoliationError::WrongDegree {
                expected: 1,
                got: phi.degree,
            });
        }
        let a = self.l1(phi)?;
        let b = self.l2(phi, phi)?.scale(&Coefficient::from(q(-1, 2)));
        let c = self.l3(phi, phi, phi)?.scale(&Coefficient::from(q(1, 6)));
        Ok(a.add(&b).add(&c))
    }

    /// Checks involutivity of graph(φ) pair by pair on the K-frame.
    pub fn involutivity_oracle(&self, phi: &VectorValuedForm) -> Result<Involutivity, FoliationError> {
        self.check(phi)?;
        if phi.degree != 1 && !phi.is_zero() {
            return Err(FoliationError::WrongDegree {
                expected: 1,
                got: phi.degree,
            });
        }
        let k = self.k();
        let lift = |i: usize| &self.model.k_frame()[i] + &self.value_field(phi, &[self.unit(i)]);
        for i in 0..k {
            for j in (i + 1)..k {
                let (kc, gc) = self.split(&bracket(&lift(i), &lift(j)));
                let want = self.value(phi, &[kc]);
                if gc != want {
                    return Ok(Involutivity {
                        involutive: false,
                        witness: Some((i, j)),
                    });
                }
            }
        }
        Ok(Involutivity {
            involutive: true,
            witness: None,
        })
    }

    /// A coordinate form α ∈ Γ(∧K*) restricted to K, as a frame-index form.
    pub fn restrict_to_k(&self, alpha: &Form) -> Form {
        let k = self.k();
        self.model
            .to_frame_form(alpha)
            .filter_blades(|b| b.iter().all(|&a| a < k))
    }

    /// The coordinate form of a frame-index form on the K-indices.
    pub fn k_form_coords(&self, alpha: &Form) -> Form {
        self.model.from_frame_form(alpha)
    }

    /// ι_ξ ω = Σ c θ^I ∧ ι_{g_b} ω, a coordinate form.
    pub fn insert(&self, xi: &VectorValuedForm, omega: &Form) -> Form {
        let ch = self.chart();
        let theta: Vec<Form> = (0..self.k()).map(|a| self.model.coframe(a)).collect();
        let mut out = Form::zero(ch, (xi.degree + omega.degree()).saturating_sub(1));
        for ((idx, b), c) in &xi.terms {
            let mut th = Form::function(ch, c.clone());
            for &i in idx {
                th = th.wedge(&theta[i]);
            }
            out = &out + &th.wedge(&iota(&self.model.g_frame()[*b], omega));
        }
        out
    }

    /// A vector-valued form whose values are the given G-valued vector
    /// fields on each sorted K-tuple.
    pub fn from_values(&self, degree: usize, f: impl Fn(&[usize]) -> MultiVector) -> VectorValuedForm {
        self.assemble(degree, |t| self.split(&f(t)).1)
    }
}

/// Seeded degree-1 elements. Every other one has a single row on the first
/// K-frame field, constant along the coordinates the other K-frame fields
/// move, which is MC when the K-frame is a coordinate frame.
pub fn sample_phis(s: &mut Sampler, alg: &FoliationAlgebra, count: usize) -> Vec<VectorValuedForm> {
    let ch = alg.chart();
    (0..count)
        .map(|i| {
            if i % 2 == 1 || alg.k() < 2 {
                return sample_vvf(s, alg, 1, 3);
            }
            // coordinates the other K-frame fields differentiate along
            let frozen: Vec<Option<crate::coeffring::Q>> = (0..ch.dim())
                .map(|j| {
                    let moved = alg.model().k_frame()[1..].iter().any(|x| !x.coeff(&[j]).is_zero());
                    moved.then(|| crate::coeffring::qi(0))
                })
                .collect();
            let mut f = VectorValuedForm::zero(alg, 1);
            for b in 0..alg.g() {
                let c = s
                    .polynomial_coefficient(ch, 2)
                    .substitute(ch, &frozen)
                    .expect("polynomials substitute exactly");
                f.add_term(vec![0], b, c);
            }
            f
        })
        .collect()
}

/// Indices of the samples where mc_residual_fol = 0 and the involutivity
/// oracle disagree.
pub fn oracle_disagreements(alg: &FoliationAlgebra, phis: &[VectorValuedForm]) -> Result<Vec<usize>, FoliationError> {
    let mut out = Vec::new();
    for (i, phi) in phis.iter().enumerate() {
        if alg.mc_residual_fol(phi)?.is_zero() != alg.involutivity_oracle(phi)?.involutive {
            out.push(i);
        }
    }
    Ok(out)
}

/// A random element of Γ(∧^degree K*⊗G) with polynomial coefficients.
pub fn sample_vvf(s: &mut Sampler, alg: &FoliationAlgebra, degree: usize, max_terms: usize) -> VectorValuedForm {
    let mut out = VectorValuedForm::zero(alg, degree);
    if degree > alg.k() || alg.g() == 0 {
        return out;
    }
    for _ in 0..s.small_int(1, max_terms.max(1) as i64) {
        let idx = s.blade(alg.k(), degree);
        let b = s.small_int(0, alg.g() as i64 - 1) as usize;
        let c = s.polynomial_coefficient(alg.chart(), 2);
        out.add_term(idx, b, c);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involutivity {
    pub involutive: bool,
    /// first K-frame pair whose lifted bracket leaves the graph
    pub witness: Option<(usize, usize)>,
}

impl LinfAlgebra for FoliationAlgebra {
    type Elem = VectorValuedForm;

    fn degree(&self, x: &VectorValuedForm) -> i64 {
        x.shifted_degree()
    }

    fn max_arity(&self) -> usize {
        3
    }

    /// l₁, −l₂, l₃.
    fn bracket(&self, args: &[VectorValuedForm]) -> VectorValuedForm {
        match args {
            [a] => self.l1(a),
            [a, b] => self.l2(a, b).map(|v| v.neg()),
            [a, b, c] => self.l3(a, b, c),
            _ => panic!("arity {} out of range", args.len()),
        }
        .expect("same model")
    }

    fn add(&self, a: &VectorValuedForm, b: &VectorValuedForm) -> VectorValuedForm {
        a.add(b)
    }

    fn neg(&self, a: &VectorValuedForm) -> VectorValuedForm {
        a.neg()
    }

    fn is_zero(&self, a: &VectorValuedForm) -> bool {
        a.is_zero()
    }
}
