//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use presym_core::cartan::{Form, MultiVector};
use presym_core::coeffring::Chart;
use presym_core::koszul::KoszulStructure;
use presym_core::presym::PreSymplecticModel;

pub fn r4() -> Arc<Chart> {
    Arc::new(Chart::affine(["x", "y", "z", "w"]))
}

pub fn form(ch: &Arc<Chart>, terms: &[(&[usize], &str)]) -> Form {
    let mut f = Form::zero(ch, terms[0].0.len());
    for (idx, s) in terms {
        f = &f + &Form::monomial(ch, idx, ch.parse(s).unwrap());
    }
    f
}

fn vf(ch: &Arc<Chart>, terms: &[(usize, &str)]) -> MultiVector {
    let mut v = MultiVector::zero(ch, 1);
    for (i, c) in terms {
        v = &v + &MultiVector::monomial(ch, &[*i], ch.parse(c).unwrap());
    }
    v
}

/// Z = ∂y∧(∂z − y∂x) and the cubic MC element for it.
pub fn cubic() -> (KoszulStructure, Form) {
    let ch = r4();
    let mut z = MultiVector::monomial(&ch, &[1, 2], ch.parse("1").unwrap());
    z = &z + &MultiVector::monomial(&ch, &[0, 1], ch.parse("y").unwrap());
    let beta = form(&ch, &[(&[0, 1], "1/(1+y)"), (&[0, 3], "1/(1+y)"), (&[2, 3], "1")]);
    (KoszulStructure::new(z).unwrap(), beta)
}

pub fn torus() -> PreSymplecticModel {
    let ch = Arc::new(Chart::periodic(["t1", "t2", "t3", "t4"]));
    PreSymplecticModel::build(
        form(&ch, &[(&[2, 3], "1")]),
        vec![vf(&ch, &[(0, "1")]), vf(&ch, &[(1, "1")])],
        vec![vf(&ch, &[(2, "1")]), vf(&ch, &[(3, "1")])],
    )
    .unwrap()
}

pub fn twisted() -> PreSymplecticModel {
    let ch = r4();
    PreSymplecticModel::build(
        form(&ch, &[(&[1, 2], "1")]),
        vec![vf(&ch, &[(0, "1")]), vf(&ch, &[(3, "1")])],
        vec![vf(&ch, &[(1, "1")]), vf(&ch, &[(2, "1"), (0, "-y")])],
    )
    .unwrap()
}
