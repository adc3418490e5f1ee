//! Seeded random instances with exactly known rank.

use num_traits::{One, Zero};

use super::{FiberSplitting, QMatrix, SkewMatrix};
use crate::coeffring::{qi, Q};
use crate::sampling::Sampler;

pub struct Instance {
    pub eta: SkewMatrix,
    pub split: FiberSplitting,
    pub rank: usize,
}

pub fn random_skew(s: &mut Sampler, n: usize) -> SkewMatrix {
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if s.chance(0.7) {
                let c = s.small_q();
                m.set(i, j, c.clone());
                m.set(j, i, -c);
            }
        }
    }
    SkewMatrix(m)
}

/// Unimodular integer matrix from random elementary operations.
pub fn unimodular(s: &mut Sampler, n: usize) -> QMatrix {
    let mut m = QMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..3 * n {
        let i = s.small_int(0, n as i64 - 1) as usize;
        let j = s.small_int(0, n as i64 - 1) as usize;
        if i == j {
            continue;
        }
        let f = qi(s.small_int(-2, 2));
        for c in 0..n {
            let v = m.get(i, c) + &f * m.get(j, c);
            m.set(i, c, v);
        }
    }
    m
}

/// η = Qᵀ J_r Q with a random complement G to its kernel.
pub fn random_instance(s: &mut Sampler, n: usize, r: usize) -> Instance {
    assert!(r % 2 == 0 && r <= n);
    let mut j = QMatrix::zeros(n, n);
    for i in 0..r / 2 {
        j.set(2 * i, 2 * i + 1, Q::one());
        j.set(2 * i + 1, 2 * i, -Q::one());
    }
    let u = unimodular(s, n);
    let eta = SkewMatrix(u.transpose().mul(&j).mul(&u));
    let kf = eta.sharp().kernel();
    loop {
        let gf: Vec<Vec<Q>> = (0..r)
            .map(|_| (0..n).map(|_| qi(s.small_int(-2, 2))).collect())
            .collect();
        if let Ok(split) = FiberSplitting::new(&eta, &kf, &gf) {
            return Instance { eta, split, rank: r };
        }
    }
}

/// Random β with vanishing K×K block.
pub fn random_horizontal(s: &mut Sampler, split: &FiberSplitting) -> SkewMatrix {
    let n = split.dim();
    let mut ad = random_skew(s, n).0;
    for a in 0..split.k_dim() {
        for b in 0..split.k_dim() {
            ad.set(a, b, Q::zero());
        }
    }
    SkewMatrix(ad).pullback(&split.frame_inv)
}

/// A β on the boundary of I_Z together with a vector w ∈ G killed by
/// id + Z♯β♯: β = η + γ with ι_w γ = 0, so Z♯β♯w = Z♯η♯w = −w.
pub fn boundary_instance(s: &mut Sampler, split: &FiberSplitting, eta: &SkewMatrix) -> (SkewMatrix, Vec<Q>) {
    let n = split.dim();
    assert!(split.g_dim() > 0, "boundary needs a nonzero G");
    let gf = split.g_frame();
    let w: Vec<Q> = loop {
        let c: Vec<Q> = gf.iter().map(|_| qi(s.small_int(-2, 2))).collect();
        let w: Vec<Q> = (0..n)
            .map(|i| gf.iter().zip(&c).map(|(g, x)| &g[i] * x).sum())
            .collect();
        if w.iter().any(|x| !x.is_zero()) {
            break w;
        }
    };
    // basis starting with w, completed by coordinate vectors
    let mut basis = vec![w.clone()];
    for i in 0..n {
        let mut e = vec![Q::zero(); n];
        e[i] = Q::one();
        basis.push(e);
        if super::span_rank(n, &basis) < basis.len() {
            basis.pop();
        }
    }
    let b = QMatrix::from_columns(n, &basis);
    let mut gamma = random_skew(s, n).0;
    for i in 0..n {
        gamma.set(0, i, Q::zero());
        gamma.set(i, 0, Q::zero());
    }
    let gamma = SkewMatrix(gamma).pullback(&b.inverse().expect("basis"));
    (eta.add(&gamma), w)
}
