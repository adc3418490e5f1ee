#![allow(dead_code)]

use std::sync::Arc;

use presym_core::cartan::{Form, MultiVector};
use presym_core::coeffring::{Chart, Coefficient};
use presym_core::presym::PreSymplecticModel;

pub fn p(ch: &Chart, s: &str) -> Coefficient {
    ch.parse(s).unwrap()
}

pub fn dx(ch: &Arc<Chart>, idx: &[usize], c: &str) -> Form {
    Form::monomial(ch, idx, p(ch, c))
}

pub fn vf(ch: &Arc<Chart>, terms: &[(usize, &str)]) -> MultiVector {
    let mut v = MultiVector::zero(ch, 1);
    for (i, c) in terms {
        v = &v + &MultiVector::monomial(ch, &[*i], p(ch, c));
    }
    v
}

/// η = dθ₃∧dθ₄ on T⁴ with coordinate frames.
pub fn torus() -> PreSymplecticModel {
    let ch = Arc::new(Chart::periodic(["t1", "t2", "t3", "t4"]));
    PreSymplecticModel::build(
        dx(&ch, &[2, 3], "1"),
        vec![vf(&ch, &[(0, "1")]), vf(&ch, &[(1, "1")])],
        vec![vf(&ch, &[(2, "1")]), vf(&ch, &[(3, "1")])],
    )
    .unwrap()
}

/// η = dy∧dz on (x, y, z, w) with G spanned by ∂y and ∂z − y∂x.
pub fn twisted_r4() -> PreSymplecticModel {
    let ch = Arc::new(Chart::affine(["x", "y", "z", "w"]));
    PreSymplecticModel::build(
        dx(&ch, &[1, 2], "1"),
        vec![vf(&ch, &[(0, "1")]), vf(&ch, &[(3, "1")])],
        vec![vf(&ch, &[(1, "1")]), vf(&ch, &[(2, "1"), (0, "-y")])],
    )
    .unwrap()
}

/// B = cos θ₃ dθ₁∧dθ₃ + cos θ₄ dθ₂∧dθ₄.
pub fn obstruction_b(ch: &Arc<Chart>) -> Form {
    &dx(ch, &[0, 2], "cos(t3)") + &dx(ch, &[1, 3], "cos(t4)")
}
