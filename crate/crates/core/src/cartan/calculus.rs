//! de Rham differential, contraction, Lie derivative and Schouten bracket.

use std::collections::HashMap;

use super::tensor::{same_chart, wedge_blades, Blade, Form, Kind, MultiVector, Tensor};
use super::CartanError;
use crate::coeffring::Coefficient;

/// ι_{∂_J} applied to the basis element on `inner`, with ι_{X∧X̃} = ι_X∘ι_X̃:
/// the last index of `outer` is inserted first.
pub fn contract_blades(outer: &[usize], inner: &[usize]) -> Option<(Blade, bool)> {
    let mut cur = inner.to_vec();
    let mut odd = false;
    for j in outer.iter().rev() {
        let p = cur.iter().position(|x| x == j)?;
        cur.remove(p);
        if p % 2 == 1 {
            odd = !odd;
        }
    }
    Some((cur, odd))
}

/// Contraction of `w` by `y`; the two must be of dual kinds, which callers
/// guarantee by using [`iota`] or [`iota_form`].
fn contract<A: Kind, B: Kind>(y: &Tensor<A>, w: &Tensor<B>) -> Tensor<B> {
    assert!(
        same_chart(y.chart(), w.chart()),
        "tensors live on different charts"
    );
    if y.degree() > w.degree() {
        return Tensor::zero(w.chart(), 0);
    }
    let mut out = Tensor::zero(w.chart(), w.degree() - y.degree());
    for (j, cy) in y.terms() {
        for (i, cw) in w.terms() {
            if let Some((b, odd)) = contract_blades(j, i) {
                let c = cy * cw;
                out.add_term(b, if odd { -&c } else { c });
            }
        }
    }
    out
}

/// ι_Y ω.
pub fn iota(y: &MultiVector, w: &Form) -> Form {
    contract(y, w)
}

/// ι_ξ Y: a form inserted into a multivector, used for Z♯ξ = ι_ξ Z.
pub fn iota_form(xi: &Form, y: &MultiVector) -> MultiVector {
    contract(xi, y)
}

pub fn try_iota(y: &MultiVector, w: &Form) -> Result<Form, CartanError> {
    if !same_chart(y.chart(), w.chart()) {
        return Err(CartanError::ChartMismatch);
    }
    Ok(iota(y, w))
}

/// d(f dx^I) = Σ_j ∂_j f dx^j ∧ dx^I.
pub fn d(w: &Form) -> Form {
    let n = w.chart().dim();
    let mut out = Tensor::zero(w.chart(), w.degree() + 1);
    for (blade, c) in w.terms() {
        for j in 0..n {
            if blade.contains(&j) || !c.depends_on(j) {
                continue;
            }
            let dc = c.partial(j);
            if let Some((b, odd)) = wedge_blades(&[j], blade) {
                out.add_term(b, if odd { -&dc } else { dc });
            }
        }
    }
    out
}

fn sign(odd: bool) -> i64 {
    if odd {
        -1
    } else {
        1
    }
}

/// 𝓛_Y = ι_Y∘d − (−1)^{|Y|} d∘ι_Y.
pub fn lie(y: &MultiVector, w: &Form) -> Form {
    let a = iota(y, &d(w));
    let b = d(&iota(y, w));
    if y.degree() % 2 == 0 {
        &a - &b
    } else {
        &a + &b
    }
}

pub fn try_lie(y: &MultiVector, w: &Form) -> Result<Form, CartanError> {
    if !same_chart(y.chart(), w.chart()) {
        return Err(CartanError::ChartMismatch);
    }
    Ok(lie(y, w))
}

/// One half of the Schouten bracket: Σ_i (∂P/∂ξ_i from the right) ∧ ∂_i Q.
fn schouten_half(p: &MultiVector, q: &MultiVector, out: &mut MultiVector, sgn: i64) {
    let mut partials: HashMap<(usize, usize), Coefficient> = HashMap::new();
    let q_terms: Vec<(&Blade, &Coefficient)> = q.terms().iter().collect();
    for (pi, pc) in p.terms() {
        let k = pi.len();
        for (m, &i) in pi.iter().enumerate() {
            // ∂_{P} = (−1)^{k−1−m} ∂_{P∖i} ∧ ∂_i
            let s_right = if (k - 1 - m) % 2 == 1 { -1 } else { 1 };
            let mut rest = pi.clone();
            rest.remove(m);
            for (t, (qj, qc)) in q_terms.iter().enumerate() {
                let dq = partials
                    .entry((t, i))
                    .or_insert_with(|| qc.partial(i))
                    .clone();
                if dq.is_zero() {
                    continue;
                }
                if let Some((b, odd)) = wedge_blades(&rest, qj) {
                    let c = (pc * &dq).scale(&crate::coeffring::qi(s_right * sign(odd) * sgn));
                    out.add_term(b, c);
                }
            }
        }
    }
}

/// Schouten–Nijenhuis bracket, normalized so that [X, f] = X(f) and
/// ι_{[Y,Ỹ]} = [𝓛_Y, ι_Ỹ].
pub fn schouten(p: &MultiVector, q: &MultiVector) -> MultiVector {
    assert!(
        same_chart(p.chart(), q.chart()),
        "tensors live on different charts"
    );
    let deg = (p.degree() + q.degree()).saturating_sub(1);
    let mut out = Tensor::zero(p.chart(), deg);
    if p.degree() + q.degree() == 0 {
        return out;
    }
    schouten_half(p, q, &mut out, 1);
    let e = (p.degree() as i64 - 1) * (q.degree() as i64 - 1);
    schouten_half(q, p, &mut out, if e % 2 == 0 { -1 } else { 1 });
    out
}

pub fn try_schouten(p: &MultiVector, q: &MultiVector) -> Result<MultiVector, CartanError> {
    if !same_chart(p.chart(), q.chart()) {
        return Err(CartanError::ChartMismatch);
    }
    Ok(schouten(p, q))
}

/// Lie bracket of vector fields.
pub fn bracket(x: &MultiVector, y: &MultiVector) -> MultiVector {
    schouten(x, y)
}

/// X(f) for a vector field and a function given as a coefficient.
pub fn apply_vector(x: &MultiVector, f: &Coefficient) -> Coefficient {
    let mut out = Coefficient::zero();
    for (b, c) in x.terms() {
        out = &out + &(c * &f.partial(b[0]));
    }
    out
}
