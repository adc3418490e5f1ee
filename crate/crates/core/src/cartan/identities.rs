//! Residuals of the Cartan commutator rules, as operators applied to a form.
//!
//! Every function returns something that must vanish. Graded commutators
//! are [A, B] = AB − (−1)^{|A||B|} BA with |d| = 1, |ι_Y| = −|Y| and
//! |𝓛_Y| = 1 − |Y|.

use super::calculus::{d, iota, lie, schouten};
use super::tensor::{Form, MultiVector};

fn parity(e: i64) -> bool {
    e.rem_euclid(2) == 1
}

fn graded_sub(ab: &Form, ba: &Form, odd: bool) -> Form {
    if odd {
        ab + ba
    } else {
        ab - ba
    }
}

/// d∘d ω.
pub fn d_squared(w: &Form) -> Form {
    d(&d(w))
}

/// [𝓛_Y, d] ω.
pub fn lie_d(y: &MultiVector, w: &Form) -> Form {
    let ab = lie(y, &d(w));
    let ba = d(&lie(y, w));
    graded_sub(&ab, &ba, parity(1 - y.degree() as i64))
}

/// [ι_Y, ι_Ỹ] ω.
pub fn iota_iota(y: &MultiVector, yt: &MultiVector, w: &Form) -> Form {
    let ab = iota(y, &iota(yt, w));
    let ba = iota(yt, &iota(y, w));
    graded_sub(&ab, &ba, parity(y.degree() as i64 * yt.degree() as i64))
}

/// [𝓛_Y, ι_Ỹ] ω − ι_{[Y,Ỹ]} ω.
pub fn lie_iota(y: &MultiVector, yt: &MultiVector, w: &Form) -> Form {
    let ab = lie(y, &iota(yt, w));
    let ba = iota(yt, &lie(y, w));
    let comm = graded_sub(&ab, &ba, parity((1 - y.degree() as i64) * yt.degree() as i64));
    &comm - &iota(&schouten(y, yt), w)
}

/// [𝓛_Y, 𝓛_Ỹ] ω − 𝓛_{[Y,Ỹ]} ω.
pub fn lie_lie(y: &MultiVector, yt: &MultiVector, w: &Form) -> Form {
    let ab = lie(y, &lie(yt, w));
    let ba = lie(yt, &lie(y, w));
    let e = (1 - y.degree() as i64) * (1 - yt.degree() as i64);
    let comm = graded_sub(&ab, &ba, parity(e));
    &comm - &lie(&schouten(y, yt), w)
}

/// Graded skew-symmetry residual [P,Q] + (−1)^{(p−1)(q−1)} [Q,P].
pub fn schouten_skew(p: &MultiVector, q: &MultiVector) -> MultiVector {
    let a = schouten(p, q);
    let b = schouten(q, p);
    let e = (p.degree() as i64 - 1) * (q.degree() as i64 - 1);
    if parity(e) {
        &a - &b
    } else {
        &a + &b
    }
}

/// Graded Jacobi residual
/// (−1)^{(p−1)(r−1)}[P,[Q,R]] + (−1)^{(q−1)(p−1)}[Q,[R,P]] + (−1)^{(r−1)(q−1)}[R,[P,Q]].
pub fn schouten_jacobi(p: &MultiVector, q: &MultiVector, r: &MultiVector) -> MultiVector {
    let (dp, dq, dr) = (
        p.degree() as i64 - 1,
        q.degree() as i64 - 1,
        r.degree() as i64 - 1,
    );
    let t1 = schouten(p, &schouten(q, r));
    let t2 = schouten(q, &schouten(r, p));
    let t3 = schouten(r, &schouten(p, q));
    let signed = |t: MultiVector, e: i64| if parity(e) { -&t } else { t };
    let mut acc = signed(t1, dp * dr);
    acc = &acc + &signed(t2, dq * dp);
    &acc + &signed(t3, dr * dq)
}
