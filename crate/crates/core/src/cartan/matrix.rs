//! Square matrices over the coefficient ring, and the sharp maps.

use std::collections::HashMap;
use std::sync::Arc;

use super::calculus::iota;
use super::tensor::{same_chart, Form, Kind, MultiVector, Tensor};
use super::CartanError;
use crate::coeffring::{Chart, Coefficient, RingError, Value, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMatrix {
    n: usize,
    data: Vec<Coefficient>,
}

impl RingMatrix {
    pub fn zeros(n: usize) -> Self {
        RingMatrix {
            n,
            data: vec![Coefficient::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RingMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Coefficient::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Coefficient {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Coefficient) {
        self.data[r * self.n + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coefficient::is_zero)
    }

    pub fn add(&self, o: &RingMatrix) -> RingMatrix {
        RingMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &RingMatrix) -> RingMatrix {
        RingMatrix {
            n: self.n,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> RingMatrix {
        RingMatrix {
            n: self.n,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> RingMatrix {
        RingMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, o: &RingMatrix) -> RingMatrix {
        let n = self.n;
        let mut out = RingMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j) + &(a * b);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut out = RingMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Determinant of the submatrix on `rows` × `cols` by Laplace expansion
    /// along rows, memoized on column subsets. Uses ring operations only.
    fn det_sub(&self, rows: &[usize], cols: &[usize]) -> Coefficient {
        let k = rows.len();
        if k == 0 {
            return Coefficient::one();
        }
        let mut memo: HashMap<u32, Coefficient> = HashMap::new();
        memo.insert(0, Coefficient::one());
        // memo[mask] = det of rows[k-|mask|..] × cols in mask
        for size in 1..=k {
            let row = rows[k - size];
            let mut next: HashMap<u32, Coefficient> = HashMap::new();
            for mask in 0u32..(1 << k) {
                if mask.count_ones() as usize != size {
                    continue;
                }
                let mut acc = Coefficient::zero();
                let mut pos = 0;
                for c in 0..k {
                    if mask & (1 << c) == 0 {
                        continue;
                    }
                    let a = self.get(row, cols[c]);
                    if !a.is_zero() {
                        let minor = &memo[&(mask & !(1 << c))];
                        if !minor.is_zero() {
                            let t = a * minor;
                            acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
                        }
                    }
                    pos += 1;
                }
                next.insert(mask, acc);
            }
            memo = next;
        }
        memo.remove(&((1u32 << k) - 1)).unwrap()
    }

    pub fn det(&self) -> Coefficient {
        let idx: Vec<usize> = (0..self.n).collect();
        self.det_sub(&idx, &idx)
    }

    pub fn adjugate(&self) -> RingMatrix {
        let n = self.n;
        let mut out = RingMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != i).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                let m = self.det_sub(&rows, &cols);
                out.set(j, i, if (i + j) % 2 == 0 { m } else { -&m });
            }
        }
        out
    }

    /// Inverse when the determinant is a unit of the ring.
    pub fn inverse(&self) -> Option<RingMatrix> {
        let inv = self.det().inverse()?;
        Some(self.adjugate().scale(&inv))
    }

    /// Entrywise evaluation to exact rationals.
    pub fn eval(&self, chart: &Chart, point: &[Q]) -> Result<Vec<Vec<Q>>, RingError> {
        let mut rows = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut row = Vec::with_capacity(self.n);
            for j in 0..self.n {
                match self.get(i, j).eval(chart, point)? {
                    Value::Exact(s) => row.push(s.as_rational().ok_or(RingError::NotExact)?),
                    Value::Float(_) => return Err(RingError::NotExact),
                }
            }
            rows.push(row);
        }
        Ok(rows)
    }

    pub fn render(&self, chart: &Chart) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).render(chart)).collect())
            .collect()
    }
}

/// Matrix of v ↦ ι_v β (resp. ξ ↦ ι_ξ Z): column i is the image of the i-th
/// basis element, so entry (j, i) is β(e_i, e_j).
pub fn sharp<K: Kind>(t: &Tensor<K>) -> Result<RingMatrix, CartanError> {
    if t.degree() != 2 && !t.is_zero() {
        return Err(CartanError::WrongDegree {
            expected: 2,
            got: t.degree(),
        });
    }
    let n = t.chart().dim();
    let mut m = RingMatrix::zeros(n);
    for (b, c) in t.terms() {
        m.set(b[1], b[0], c.clone());
        m.set(b[0], b[1], -c);
    }
    Ok(m)
}

/// Inverse of [`sharp`]: reads the strictly lower triangle.
pub fn unsharp<K: Kind>(chart: &Arc<Chart>, m: &RingMatrix) -> Tensor<K> {
    let mut t = Tensor::zero(chart, 2);
    for i in 0..m.size() {
        for j in (i + 1)..m.size() {
            t.add_term(vec![i, j], m.get(j, i).clone());
        }
    }
    t
}

/// (α₁♯∧…∧α_m♯)(Y) = Σ_σ (−1)^σ ι_{v_σ(1)}α₁ ∧ … ∧ ι_{v_σ(m)}α_m on each
/// decomposable term of Y.
pub fn multi_sharp(forms: &[Form], y: &MultiVector) -> Result<Form, CartanError> {
    let m = forms.len();
    if y.degree() != m && !y.is_zero() {
        return Err(CartanError::Arity {
            forms: m,
            degree: y.degree(),
        });
    }
    for f in forms {
        if !same_chart(f.chart(), y.chart()) {
            return Err(CartanError::ChartMismatch);
        }
    }
    let total: usize = forms.iter().map(Form::degree).sum();
    let chart = y.chart();
    let mut out = Form::zero(chart, total.saturating_sub(m));
    if forms.iter().any(|f| f.degree() == 0) {
        return Ok(out);
    }
    let perms = permutations(m);
    let mut cache: HashMap<(usize, usize), Form> = HashMap::new();
    for (blade, c) in y.terms() {
        for (perm, odd) in &perms {
            let mut acc = Form::function(chart, c.clone());
            for (k, alpha) in forms.iter().enumerate() {
                let v = blade[perm[k]];
                let piece = cache
                    .entry((k, v))
                    .or_insert_with(|| iota(&MultiVector::basis(chart, v), alpha));
                acc = acc.wedge(piece);
                if acc.is_zero() {
                    break;
                }
            }
            out = if *odd { &out - &acc } else { &out + &acc };
        }
    }
    Ok(out)
}

/// All permutations of 0..m with parity (true = odd).
pub fn permutations(m: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, bool)>) {
        let m = used.len();
        if cur.len() == m {
            let mut inv = 0;
            for i in 0..m {
                for j in (i + 1)..m {
                    if cur[i] > cur[j] {
                        inv += 1;
                    }
                }
            }
            out.push((cur.clone(), inv % 2 == 1));
            return;
        }
        for i in 0..m {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}
