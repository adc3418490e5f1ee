//! Generalized Jacobi relations of an L∞[1]-algebra.

use std::sync::Arc;

use super::higher::unshuffles;
use super::Shifted;
use crate::coeffring::Chart;
use crate::sampling::{monomial_forms, Sampler};

/// Graded-symmetric brackets of degree +1 on a graded space.
pub trait LinfAlgebra {
    type Elem: Clone;

    fn degree(&self, x: &Self::Elem) -> i64;
    /// Brackets of higher arity vanish.
    fn max_arity(&self) -> usize;
    fn bracket(&self, args: &[Self::Elem]) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

/// Koszul sign of reordering graded elements as `order` prescribes.
pub fn koszul_sign(degrees: &[i64], order: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..order.len() {
        for j in (i + 1)..order.len() {
            if order[i] > order[j] && (degrees[order[i]] * degrees[order[j]]).rem_euclid(2) == 1 {
                odd = !odd;
            }
        }
    }
    odd
}

/// Σ_{i+j=n+1} Σ_{σ∈Sh(i,n−i)} ε(σ) λ_j(λ_i(x_σ(1..i)), x_σ(i+1..n)).
pub fn linf_relation<A: LinfAlgebra>(alg: &A, xs: &[A::Elem]) -> Option<A::Elem> {
    let n = xs.len();
    let degs: Vec<i64> = xs.iter().map(|x| alg.degree(x)).collect();
    let mut acc: Option<A::Elem> = None;
    for i in 1..=n {
        let j = n + 1 - i;
        if i > alg.max_arity() || j > alg.max_arity() {
            continue;
        }
        for (sigma, _) in unshuffles(&[i, n - i]) {
            let inner: Vec<A::Elem> = sigma[..i].iter().map(|&k| xs[k].clone()).collect();
            let mut outer = vec![alg.bracket(&inner)];
            outer.extend(sigma[i..].iter().map(|&k| xs[k].clone()));
            let mut t = alg.bracket(&outer);
            if koszul_sign(&degs, &sigma) {
                t = alg.neg(&t);
            }
            acc = Some(match acc {
                None => t,
                Some(a) => alg.add(&a, &t),
            });
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationOutcome {
    pub arity: usize,
    pub sample: usize,
    pub vanishes: bool,
}

/// Evaluates the arity-n relation on every sample tuple.
pub fn linf_relation_check<A: LinfAlgebra>(alg: &A, samples: &[Vec<A::Elem>]) -> Vec<RelationOutcome> {
    samples
        .iter()
        .enumerate()
        .map(|(i, xs)| RelationOutcome {
            arity: xs.len(),
            sample: i,
            vanishes: linf_relation(alg, xs).is_none_or(|r| alg.is_zero(&r)),
        })
        .collect()
}

/// Tuples for the arity-1..=max_arity relations: `rounds` random tuples per
/// arity plus as many drawn from the monomial basis. Higher arities use
/// sparser forms of degree ≤ 2 to keep the sums small.
pub fn relation_samples(s: &mut Sampler, chart: &Arc<Chart>, max_arity: usize, rounds: usize) -> Vec<Vec<Shifted>> {
    let mono = monomial_forms(chart);
    let mut out = Vec::new();
    for n in 1..=max_arity {
        let high = n >= 4;
        for _ in 0..rounds {
            out.push(
                (0..n)
                    .map(|_| {
                        let deg = s.small_int(0, if high { 2 } else { 3 }) as usize;
                        Shifted::new(s.form(chart, deg, if high { 1 } else { 2 }))
                    })
                    .collect(),
            );
            out.push(
                (0..n)
                    .map(|_| Shifted::new(mono[s.small_int(0, mono.len() as i64 - 1) as usize].clone()))
                    .collect(),
            );
        }
    }
    out
}
