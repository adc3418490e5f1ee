//! Higher Koszul brackets 𝒦(f)_n of an operator on forms.

use super::KoszulError;
use crate::cartan::{iota, Form, MultiVector};

/// 𝒦(f)_n by the recursion
/// 𝒦_n(a₁..a_n) = 𝒦_{n−1}(a₁..a_{n−2}, a_{n−1}a_n) − 𝒦_{n−1}(a₁..a_{n−1})a_n
///               − (−1)^{|a_{n−1}||a_n|} 𝒦_{n−1}(a₁..a_{n−2}, a_n)a_{n−1}.
pub fn koszul_brackets(f: &dyn Fn(&Form) -> Form, args: &[Form]) -> Form {
    let n = args.len();
    assert!(n >= 1, "arity must be at least 1");
    if n == 1 {
        return f(&args[0]);
    }
    let (an1, an) = (&args[n - 2], &args[n - 1]);
    let head = &args[..n - 2];

    let mut merged = head.to_vec();
    merged.push(an1.wedge(an));
    let t1 = koszul_brackets(f, &merged);

    let t2 = koszul_brackets(f, &args[..n - 1]).wedge(an);

    let mut skip = head.to_vec();
    skip.push(an.clone());
    let t3 = koszul_brackets(f, &skip).wedge(an1);

    let out = &t1 - &t2;
    if (an1.degree() * an.degree()) % 2 == 1 {
        &out + &t3
    } else {
        &out - &t3
    }
}

/// 𝒦(ι_Y)_n(a₁..a_n).
pub fn higher_koszul(y: &MultiVector, args: &[Form]) -> Result<Form, KoszulError> {
    if args.is_empty() {
        return Err(KoszulError::Arity(0));
    }
    Ok(koszul_brackets(&|w| iota(y, w), args))
}

/// All (i₁,…,i_r)-unshuffles as sequences (σ(1),…,σ(n)) with parity
/// (true = odd).
pub fn unshuffles(sizes: &[usize]) -> Vec<(Vec<usize>, bool)> {
    let n: usize = sizes.iter().sum();
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    fn rec(v: usize, n: usize, sizes: &[usize], blocks: &mut Vec<Vec<usize>>, out: &mut Vec<(Vec<usize>, bool)>) {
        if v == n {
            let seq: Vec<usize> = blocks.iter().flatten().copied().collect();
            let mut inv = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if seq[i] > seq[j] {
                        inv += 1;
                    }
                }
            }
            out.push((seq, inv % 2 == 1));
            return;
        }
        for b in 0..sizes.len() {
            if blocks[b].len() < sizes[b] {
                blocks[b].push(v);
                rec(v + 1, n, sizes, blocks, out);
                blocks[b].pop();
            }
        }
    }
    rec(0, n, sizes, &mut blocks, &mut out);
    out
}

fn compositions(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(r - 1) {
        for mut rest in compositions(n - first, r - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Closed formula for 𝒦(ι_Y)_r with Y = Y₁∧…∧Y_n decomposable:
/// Σ_{i₁+…+i_r=n} Σ_{σ} (−1)^♯ (ι_{Y_σ(1)}⋯ι_{Y_σ(i₁)}a₁)⋯, with
/// ♯ = |σ| + Σ_{p≥2} i_p(|a₁|+…+|a_{p−1}|).
pub fn koszul_unshuffle(factors: &[MultiVector], args: &[Form]) -> Form {
    let n = factors.len();
    let r = args.len();
    assert!(r >= 1, "arity must be at least 1");
    let chart = args[0].chart();
    let total: usize = args.iter().map(Form::degree).sum();
    let mut out = Form::zero(chart, total.saturating_sub(n));
    for sizes in compositions(n, r) {
        let mut shift = 0;
        let mut prefix = 0;
        for p in 0..r {
            if p > 0 {
                shift += sizes[p] * prefix;
            }
            prefix += args[p].degree();
        }
        for (sigma, odd) in unshuffles(&sizes) {
            let mut pos = 0;
            let mut term: Option<Form> = None;
            for (p, a) in args.iter().enumerate() {
                let block = &sigma[pos..pos + sizes[p]];
                pos += sizes[p];
                let mut piece = a.clone();
                for &i in block.iter().rev() {
                    piece = iota(&factors[i], &piece);
                }
                term = Some(match term {
                    None => piece,
                    Some(t) => t.wedge(&piece),
                });
            }
            let term = term.expect("r ≥ 1");
            if odd ^ (shift % 2 == 1) {
                out = &out - &term;
            } else {
                out = &out + &term;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(&[2, 1]).len(), 3);
        assert_eq!(unshuffles(&[1, 1, 1]).len(), 6);
        assert_eq!(unshuffles(&[2, 2]).len(), 6);
        assert_eq!(compositions(4, 2).len(), 3);
        assert!(compositions(2, 3).is_empty());
    }
}
