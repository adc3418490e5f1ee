//! Pointwise statements about F, exp_η and I_Z over exact rationals.

use presym_core::coeffring::{q, qi, Q};
use presym_core::fiberlin::random::{boundary_instance, random_instance, random_skew, random_horizontal};
use presym_core::fiberlin::*;
use presym_core::sampling::Sampler;

fn skew(n: usize, entries: &[(usize, usize, Q)]) -> SkewMatrix {
    SkewMatrix::from_entries(n, entries)
}

#[test]
fn rank_kernel_examples() {
    let j = skew(2, &[(0, 1, qi(1))]);
    let (r, ker) = rank_kernel(&j);
    assert_eq!((r, ker.len()), (2, 0));

    let (r, ker) = rank_kernel(&SkewMatrix::zero(3));
    assert_eq!((r, ker.len()), (0, 3));

    // dθ3∧dθ4 on a 4-dimensional fiber: kernel spanned by e1, e2
    let eta = skew(4, &[(2, 3, qi(1))]);
    let (r, ker) = rank_kernel(&eta);
    assert_eq!(r, 2);
    let e = |i: usize| {
        let mut v = vec![qi(0); 4];
        v[i] = qi(1);
        v
    };
    assert!(same_span(&ker, &[e(0), e(1)]));

    assert!(SkewMatrix::new(QMatrix::identity(2)).is_err());
}

#[test]
fn f_inverse_at_a_point_halves_alpha() {
    // Z = ∂y∧∂z, α = (x dy + y dx)∧dz at x = 1, y = 2
    let z = skew(3, &[(1, 2, qi(1))]);
    let alpha = skew(3, &[(1, 2, qi(1)), (0, 2, qi(2))]);
    let beta = f_inverse(&alpha, &z).unwrap();
    assert_eq!(beta, alpha.scale(&q(1, 2)));
    assert_eq!(f_map(&beta, &z).unwrap(), alpha);
    assert_eq!(f_map(&SkewMatrix::zero(3), &z).unwrap(), SkewMatrix::zero(3));
}

#[test]
fn f_round_trip_on_six_dimensions() {
    let mut s = Sampler::new(61);
    let mut done = 0;
    while done < 20 {
        let z = random_skew(&mut s, 6);
        let b = random_skew(&mut s, 6);
        let Ok(a) = f_map(&b, &z) else { continue };
        assert_eq!(f_inverse(&a, &z).unwrap(), b);
        done += 1;
    }
}

#[test]
fn quartic_matrix_is_in_iz() {
    // frames K = {∂x, ∂w}, G = {∂y, ∂z}; Z = ∂y∧∂z; α = dx∧dy + dz∧dw (a = 0)
    let eta = skew(4, &[(1, 2, qi(1))]);
    let split = FiberSplitting::coordinate(&eta, &[0, 3], &[1, 2]).unwrap();
    let alpha = skew(4, &[(0, 1, qi(1)), (2, 3, qi(1))]);
    let t = in_iz(&alpha, split.z(), &split);
    assert!(t.direct && t.block && t.witness.is_none());
    assert!(in_iz(&SkewMatrix::zero(4), split.z(), &split).direct);
}

#[test]
fn engineered_boundary_is_rejected_with_witness() {
    let mut s = Sampler::new(62);
    for _ in 0..30 {
        let inst = random_instance(&mut s, 6, 4);
        let (beta, w) = boundary_instance(&mut s, &inst.split, &inst.eta);
        let t = in_iz(&beta, inst.split.z(), &inst.split);
        assert!(!t.direct && !t.block);
        let wit = t.witness.unwrap();
        let m = QMatrix::identity(6).add(&inst.split.z().sharp().mul(&beta.sharp()));
        assert!(m.mul_vec(&wit).iter().all(|x| *x == qi(0)));
        assert!(m.mul_vec(&w).iter().all(|x| *x == qi(0)));
        match f_map(&beta, inst.split.z()) {
            Err(FiberError::NotInIz { witness }) => {
                assert!(m.mul_vec(&witness).iter().all(|x| *x == qi(0)))
            }
            other => panic!("expected NotInIz, got {other:?}"),
        }
    }
}

#[test]
fn five_hundred_instances() {
    let mut s = Sampler::new(500);
    let mut outside = 0;
    for i in 0..500 {
        let n = s.small_int(2, 8) as usize;
        let r = 2 * s.small_int(0, (n / 2) as i64) as usize;
        let inst = random_instance(&mut s, n, r);
        let (eta, split) = (&inst.eta, &inst.split);
        assert_eq!(rank_kernel(eta).0, r);
        let beta = if i % 2 == 0 {
            random_horizontal(&mut s, split)
        } else {
            random_skew(&mut s, n)
        };
        let z = split.z();
        let t = in_iz(&beta, z, split);
        assert_eq!(t.direct, t.block, "instance {i}");
        if !t.direct {
            outside += 1;
            continue;
        }
        let f = f_map(&beta, z).unwrap();
        assert!(same_span(&rank_kernel(&f).1, &rank_kernel(&beta).1), "ker F(β) = ker β, instance {i}");
        assert!(in_iz(&f, &z.neg(), split).direct, "F(β) ∈ I_-Z, instance {i}");
        assert_eq!(f_inverse(&f, z).unwrap(), beta, "round trip, instance {i}");

        let e = exp_eta_fiber(eta, split, &beta).unwrap();
        let (rank, ker) = rank_kernel(&e);
        assert!(same_span(&ker, &kernel_lemma(split, &beta)), "kernel lemma, instance {i}");
        let horizontal = split.is_horizontal(&beta);
        assert_eq!(rank == r, horizontal, "rank iff β_K = 0, instance {i}");
        if horizontal {
            assert!(same_span(&ker, &kernel_graph(split, &beta)));
            assert!(transverse_to_g(split, &ker));
            let sigma = split.g_part(&beta);
            let rhs = eta.add(&f_map(&sigma, z).unwrap());
            assert_eq!(split.g_block(&e), split.g_block(&rhs));
        }
    }
    assert!(outside < 250, "too few instances inside I_Z: {outside}");
}

#[test]
fn symplectic_specialization() {
    let mut s = Sampler::new(63);
    for _ in 0..40 {
        let inst = random_instance(&mut s, 4, 4);
        let split = &inst.split;
        assert_eq!(split.k_dim(), 0);
        let beta = random_skew(&mut s, 4);
        let Ok(e) = exp_eta_fiber(&inst.eta, split, &beta) else { continue };
        let pi = split.z().sharp();
        let bs = beta.sharp();
        let id = QMatrix::identity(4);
        // (π − Iβ)♯ = (id + π♯β♯)π♯ and the deformed form is minus its inverse
        let dual = id.add(&pi.mul(&bs)).mul(&pi);
        assert_eq!(e.sharp(), dual.inverse().unwrap().neg());
        let direct = inst.eta.sharp().add(&bs.mul(&id.add(&pi.mul(&bs)).inverse().unwrap()));
        assert_eq!(e.sharp(), direct);
    }
}
