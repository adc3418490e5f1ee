//! Pre-symplectic models, the bigrading and the main equivalence.

use std::sync::Arc;

use presym_core::cartan::{d, sharp, Form, MultiVector};
use presym_core::coeffring::{q, qi, Chart, Coefficient};
use presym_core::koszul::{koszul2, mc_residual};
use presym_core::presym::*;
use presym_core::sampling::Sampler;

fn p(ch: &Chart, s: &str) -> Coefficient {
    ch.parse(s).unwrap()
}

fn dx(ch: &Arc<Chart>, idx: &[usize], c: &str) -> Form {
    Form::monomial(ch, idx, p(ch, c))
}

fn vf(ch: &Arc<Chart>, terms: &[(usize, &str)]) -> MultiVector {
    let mut v = MultiVector::zero(ch, 1);
    for (i, c) in terms {
        v = &v + &MultiVector::monomial(ch, &[*i], p(ch, c));
    }
    v
}

fn torus() -> PreSymplecticModel {
    let ch = Arc::new(Chart::periodic(["t1", "t2", "t3", "t4"]));
    PreSymplecticModel::build(
        dx(&ch, &[2, 3], "1"),
        vec![vf(&ch, &[(0, "1")]), vf(&ch, &[(1, "1")])],
        vec![vf(&ch, &[(2, "1")]), vf(&ch, &[(3, "1")])],
    )
    .unwrap()
}

/// η = dy∧dz on (x, y, z, w) with G spanned by ∂y and ∂z − y∂x.
fn twisted_r4() -> PreSymplecticModel {
    let ch = Arc::new(Chart::affine(["x", "y", "z", "w"]));
    PreSymplecticModel::build(
        dx(&ch, &[1, 2], "1"),
        vec![vf(&ch, &[(0, "1")]), vf(&ch, &[(3, "1")])],
        vec![vf(&ch, &[(1, "1")]), vf(&ch, &[(2, "1"), (0, "-y")])],
    )
    .unwrap()
}

#[test]
fn torus_bivector() {
    let m = torus();
    let ch = m.chart().clone();
    assert_eq!(m.z(), &MultiVector::monomial(&ch, &[2, 3], Coefficient::one()));
    assert_eq!(m.rank(), 2);
    assert!(m.koszul().is_poisson());
}

#[test]
fn symplectic_torus_has_empty_kernel() {
    let ch = Arc::new(Chart::periodic(["t1", "t2", "t3", "t4"]));
    let eta = &dx(&ch, &[0, 1], "1") + &dx(&ch, &[2, 3], "1");
    let g: Vec<MultiVector> = (0..4).map(|i| vf(&ch, &[(i, "1")])).collect();
    let m = PreSymplecticModel::build(eta.clone(), vec![], g).unwrap();
    let want = &MultiVector::monomial(&ch, &[0, 1], Coefficient::one())
        + &MultiVector::monomial(&ch, &[2, 3], Coefficient::one());
    assert_eq!(m.z(), &want);
    let prod = sharp(m.z()).unwrap().mul(&sharp(&eta).unwrap());
    assert_eq!(prod, presym_core::cartan::RingMatrix::identity(4).neg());
    let b = m.decompose(&dx(&ch, &[0, 2], "cos(t1)")).unwrap();
    assert_eq!(b.pure(), Some((0, 2)));
}

#[test]
fn frame_errors() {
    let ch = Arc::new(Chart::affine(["x", "y", "z"]));
    let r = PreSymplecticModel::build(
        dx(&ch, &[0, 1], "1"),
        vec![vf(&ch, &[(0, "1")])],
        vec![vf(&ch, &[(1, "1")]), vf(&ch, &[(2, "1")])],
    );
    assert!(matches!(r, Err(PresymError::NotInKernel(0))));
    let r = PreSymplecticModel::build(dx(&ch, &[0, 1], "z"), vec![], vec![]);
    assert!(matches!(r, Err(PresymError::NotClosed(_))));
    let r = PreSymplecticModel::build(
        dx(&ch, &[1, 2], "1"),
        vec![vf(&ch, &[(0, "1")])],
        vec![vf(&ch, &[(1, "1")]), vf(&ch, &[(1, "2")])],
    );
    assert!(matches!(r, Err(PresymError::NonUnit { .. })));
}

#[test]
fn twisted_model_invariants() {
    let m = twisted_r4();
    let ch = m.chart().clone();
    let want = &MultiVector::monomial(&ch, &[1, 2], Coefficient::one())
        + &MultiVector::monomial(&ch, &[0, 1], p(&ch, "y"));
    assert_eq!(m.z(), &want);
    assert!(!m.koszul().is_poisson());
    assert_eq!(m.zz(), m.koszul().zz().clone());
    m.check_invariants().unwrap();
}

#[test]
fn bigraded_components() {
    let m = torus();
    let ch = m.chart().clone();
    let a = m.decompose(&dx(&ch, &[0, 1], "1")).unwrap();
    assert_eq!(a.pure(), Some((2, 0)));
    assert!(!a.is_horizontal());
    let b = &dx(&ch, &[0, 2], "cos(t3)") + &dx(&ch, &[1, 3], "cos(t4)");
    let bd = m.decompose(&b).unwrap();
    assert_eq!(bd.pure(), Some((1, 1)));
    assert!(bd.is_horizontal());
    assert_eq!(bd.filtration_degree(), Some(1));
    let c = m.decompose(&dx(&ch, &[2, 3], "1")).unwrap();
    assert_eq!((c.pure(), c.filtration_degree()), (Some((0, 2)), Some(2)));

    let tw = twisted_r4();
    let mut s = Sampler::new(31);
    for _ in 0..20 {
        let deg = s.small_int(0, 4) as usize;
        let f = s.form(tw.chart(), deg, 4);
        let dec = tw.decompose(&f).unwrap();
        assert_eq!(dec.recompose(), f);
    }
    // dx is not a G*-form here: dx = θ^x − y θ^z
    let dxf = dx(tw.chart(), &[0], "1");
    let dec = tw.decompose(&dxf).unwrap();
    assert_eq!(dec.components().len(), 2);
}

#[test]
fn exponential_map_on_sections() {
    let ch = Arc::new(Chart::affine(["x", "y", "z"]));
    let m = PreSymplecticModel::build(
        dx(&ch, &[1, 2], "1"),
        vec![vf(&ch, &[(0, "1")])],
        vec![vf(&ch, &[(1, "1")]), vf(&ch, &[(2, "1")])],
    )
    .unwrap();
    assert_eq!(m.exp_eta_section(&Form::zero(&ch, 2)).unwrap(), m.eta().clone());
    let beta = &dx(&ch, &[1, 2], "x/(1+x)") + &dx(&ch, &[0, 2], "y/(1+x)");
    let out = m.exp_eta_section(&beta).unwrap();
    let want = &dx(&ch, &[1, 2], "x") + &dx(&ch, &[0, 2], "y");
    assert_eq!(&out - m.eta(), want);
    // pointwise agrees with the ring computation
    let pt = vec![q(1, 2), qi(2), qi(-1)];
    let at = m.exp_eta_at(&beta, &pt).unwrap();
    let ring = sharp(&out).unwrap().eval(&ch, &pt).unwrap();
    assert_eq!(at.sharp().to_rows(), ring);

    let t = torus();
    let tch = t.chart().clone();
    let h = dx(&tch, &[0, 2], "sin(t2)");
    assert!(!d(&t.exp_eta_section(&h).unwrap()).is_zero());
}

#[test]
fn main_theorem_examples() {
    let m = torus();
    let ch = m.chart().clone();
    let pts = default_points(&m);
    let c = dx(&ch, &[2, 3], "3/5");
    let r = m.verify_main_theorem(&c, &pts).unwrap();
    assert!(r.mc && r.closed && r.rank_ok && r.agree());
    let b = &dx(&ch, &[0, 2], "cos(t3)") + &dx(&ch, &[1, 3], "cos(t4)");
    assert!(d(&b).is_zero());
    let r = m.verify_main_theorem(&b, &pts).unwrap();
    assert!(!r.mc && !r.closed && r.agree());
    let half = koszul2(m.koszul(), &b, &b).unwrap().scale_q(&q(1, 2));
    assert_eq!(mc_residual(m.koszul(), &b).unwrap(), half);
    let r = m.verify_main_theorem(&Form::zero(&ch, 2), &pts).unwrap();
    assert!(r.mc && r.closed && r.rank_ok);
    assert!(matches!(
        m.verify_main_theorem(&dx(&ch, &[0, 1], "1"), &pts),
        Err(PresymError::NotHorizontal)
    ));
}

fn equivalence_suite(m: &PreSymplecticModel, sigma: (&Form, &Form), k_vars: &[usize], twist: usize, seed: u64) {
    let mut s = Sampler::new(seed);
    let pts = default_points(m);
    let mut tally = (0, 0);
    for i in 0..50 {
        let beta = if i % 2 == 0 {
            darboux_mc(&mut s, m, sigma, k_vars, twist).unwrap()
        } else {
            horizontal_sample(&mut s, m)
        };
        assert!(m.is_horizontal(&beta), "{beta}");
        let at = m.admissible_points(&beta, &pts);
        assert!(at.len() >= 3, "β = {beta} has poles at most sample points");
        let r = m.verify_main_theorem(&beta, &at).unwrap();
        assert!(r.agree(), "β = {beta}: {r:?}");
        if r.mc {
            tally.0 += 1;
        } else {
            tally.1 += 1;
        }
    }
    assert!(tally.0 >= 25 && tally.1 > 0, "{tally:?}");
}

#[test]
fn main_theorem_equivalence_on_the_torus() {
    let m = torus();
    let ch = m.chart().clone();
    let s1 = dx(&ch, &[2], "1");
    let s2 = dx(&ch, &[3], "1");
    equivalence_suite(&m, (&s1, &s2), &[0, 1], 2, 41);
}

#[test]
fn main_theorem_equivalence_on_the_twisted_model() {
    let m = twisted_r4();
    let ch = m.chart().clone();
    let s1 = dx(&ch, &[1], "1");
    let s2 = dx(&ch, &[2], "1");
    equivalence_suite(&m, (&s1, &s2), &[0, 3], 1, 42);
}

#[test]
fn filtration_bounds() {
    let mut s = Sampler::new(43);
    for m in [torus(), twisted_r4()] {
        let n = m.dim();
        let theta: Vec<Form> = (0..n).map(|a| m.coframe(a)).collect();
        // filtered generators: products of coframe elements with random coefficients
        let gen = |s: &mut Sampler| {
            let deg = s.small_int(0, 3) as usize;
            let mut f = Form::function(m.chart(), s.polynomial_coefficient(m.chart(), 2));
            for _ in 0..deg {
                let a = s.small_int(0, n as i64 - 1) as usize;
                f = f.wedge(&theta[a]);
            }
            f
        };
        let mut samples = Vec::new();
        for arity in 1..=3 {
            for _ in 0..15 {
                samples.push((0..arity).map(|_| gen(&mut s)).collect::<Vec<_>>());
            }
        }
        for e in m.closure_and_filtration_check(&samples).unwrap() {
            assert!(e.ok, "{e:?}");
        }
    }
}

#[test]
fn g_star_forms_close_under_the_bracket() {
    let mut s = Sampler::new(44);
    for m in [torus(), twisted_r4()] {
        let (k, n) = (m.k_dim(), m.dim());
        let ch = m.chart().clone();
        let g_star = |s: &mut Sampler| {
            (k..n).fold(Form::zero(&ch, 1), |acc, a| &acc + &m.coframe(a).scale(&s.polynomial_coefficient(&ch, 2)))
        };
        for _ in 0..15 {
            let (x1, x2) = (g_star(&mut s), g_star(&mut s));
            let br = koszul2(m.koszul(), &x1, &x2).unwrap();
            let dec = m.decompose(&br).unwrap();
            assert!(dec.component(1, 0).is_zero(), "K*-component of [ξ₁,ξ₂]");
            assert!(m.sharp_bracket_defect(&x1, &x2).unwrap().is_zero());
        }
    }
}

#[test]
fn tangent_space_is_the_linear_part() {
    let mut s = Sampler::new(45);
    for m in [torus(), twisted_r4()] {
        for _ in 0..8 {
            let beta = horizontal_sample(&mut s, &m);
            // R(t) = a t + b t² + c t³; solve from t = 1, 2, 3 for a
            let r = |t: i64| mc_residual(m.koszul(), &beta.scale_q(&qi(t))).unwrap();
            let (r1, r2, r3) = (r(1), r(2), r(3));
            // a = 3 R(1) − 3/2 R(2) + 1/3 R(3)
            let a = &(&r1.scale_q(&qi(3)) - &r2.scale_q(&q(3, 2))) + &r3.scale_q(&q(1, 3));
            assert_eq!(a, d(&beta));
        }
    }
}
