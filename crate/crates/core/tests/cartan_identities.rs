//! Operator identities of the Cartan calculus, checked exactly.

use std::sync::Arc;

use presym_core::cartan::identities::*;
use presym_core::cartan::{iota, schouten, Form, MultiVector};
use presym_core::coeffring::Chart;
use presym_core::sampling::{monomial_forms, Sampler};

fn charts() -> Vec<Arc<Chart>> {
    vec![
        Arc::new(Chart::affine(["x", "y", "z"])),
        Arc::new(Chart::affine(["x", "y", "z", "w"])),
        Arc::new(Chart::periodic(["t1", "t2", "t3", "t4"])),
    ]
}

#[test]
fn commutators_on_monomials() {
    let mut s = Sampler::new(11);
    for ch in charts() {
        let n = ch.dim();
        let tests = monomial_forms(&ch);
        for round in 0..2 {
            let p = round + 1;
            let q = (round + 2) % 3;
            let y: MultiVector = s.multivector(&ch, p.min(n), 2);
            let yt: MultiVector = s.multivector(&ch, q.min(n), 2);
            for w in &tests {
                assert!(d_squared(w).is_zero());
                assert!(lie_d(&y, w).is_zero(), "[L_Y, d] on {w}");
                assert!(iota_iota(&y, &yt, w).is_zero(), "[i_Y, i_Y'] on {w}");
                assert!(lie_iota(&y, &yt, w).is_zero(), "[L_Y, i_Y'] on {w} with Y={y}, Y'={yt}");
                assert!(lie_lie(&y, &yt, w).is_zero(), "[L_Y, L_Y'] on {w}");
            }
        }
    }
}

#[test]
fn commutators_on_random_forms() {
    let mut s = Sampler::new(12);
    for ch in charts() {
        let n = ch.dim();
        for _ in 0..20 {
            let dy = s.small_int(0, 3) as usize;
            let dyt = s.small_int(0, 3) as usize;
            let y: MultiVector = s.multivector(&ch, dy.min(n), 2);
            let yt: MultiVector = s.multivector(&ch, dyt.min(n), 2);
            let dw = s.small_int(0, n as i64) as usize;
            let w: Form = s.form(&ch, dw, 3);
            assert!(d_squared(&w).is_zero());
            assert!(lie_d(&y, &w).is_zero());
            assert!(iota_iota(&y, &yt, &w).is_zero());
            assert!(lie_iota(&y, &yt, &w).is_zero(), "Y={y}\nY'={yt}\nw={w}");
            assert!(lie_lie(&y, &yt, &w).is_zero());
        }
    }
}

#[test]
fn schouten_graded_lie() {
    let mut s = Sampler::new(13);
    for ch in charts() {
        for _ in 0..15 {
            let dg = |s: &mut Sampler| s.small_int(0, 3) as usize;
            let (a, b, c) = (dg(&mut s), dg(&mut s), dg(&mut s));
            let p: MultiVector = s.multivector(&ch, a, 2);
            let q: MultiVector = s.multivector(&ch, b, 2);
            let r: MultiVector = s.multivector(&ch, c, 2);
            assert!(schouten_skew(&p, &q).is_zero());
            assert!(schouten_jacobi(&p, &q, &r).is_zero(), "P={p} Q={q} R={r}");
        }
    }
}

#[test]
fn schouten_reproduces_contraction_operator() {
    // ι_{[Y,Ỹ]} is fixed by [𝓛_Y, ι_Ỹ]; check the trivector for Z = ∂y∧(∂z − y∂x).
    let ch = Arc::new(Chart::affine(["x", "y", "z"]));
    let z = MultiVector::basis(&ch, 1).wedge(
        &(&MultiVector::basis(&ch, 2) - &MultiVector::basis(&ch, 0).scale(&ch.parse("y").unwrap())),
    );
    let vol = Form::monomial(&ch, &[0, 1, 2], presym_core::Coefficient::one());
    assert!(lie_iota(&z, &z, &vol).is_zero());
    assert_eq!(iota(&schouten(&z, &z), &vol).coeff(&[]), ch.parse("2").unwrap());
}
