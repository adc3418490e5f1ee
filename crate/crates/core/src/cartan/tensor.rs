//! Sparse graded tensors: differential forms and multivector fields.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::coeffring::{Chart, Coefficient, Q};

/// A strictly increasing tuple of coordinate indices.
pub type Blade = Vec<usize>;

pub trait Kind: Clone + fmt::Debug + Send + Sync + 'static {
    /// Prefix used when printing a basis element, e.g. `d` for `dx`.
    const PREFIX: &'static str;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormKind;
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorKind;

impl Kind for FormKind {
    const PREFIX: &'static str = "d";
}
impl Kind for VectorKind {
    const PREFIX: &'static str = "D";
}

#[derive(Clone, Debug)]
pub struct Tensor<K: Kind> {
    chart: Arc<Chart>,
    degree: usize,
    terms: BTreeMap<Blade, Coefficient>,
    kind: PhantomData<K>,
}

pub type Form = Tensor<FormKind>;
pub type MultiVector = Tensor<VectorKind>;

/// Merges two blades. Returns the sorted blade and whether the sort was odd,
/// or `None` when an index repeats.
pub fn wedge_blades(a: &[usize], b: &[usize]) -> Option<(Blade, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut odd = false;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                // b[j] jumps over the remaining a's
                if (a.len() - i) % 2 == 1 {
                    odd = !odd;
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, odd))
}

/// Sorts arbitrary indices into a blade with its permutation parity.
pub fn sort_blade(idx: &[usize]) -> Option<(Blade, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

pub(crate) fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<K: Kind> PartialEq for Tensor<K> {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.degree == other.degree
            && same_chart(&self.chart, &other.chart)
            && (self.terms == other.terms || (self - other).is_zero())
    }
}

impl<K: Kind> Tensor<K> {
    pub fn zero(chart: &Arc<Chart>, degree: usize) -> Self {
        Tensor {
            chart: chart.clone(),
            degree,
            terms: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    /// A degree-0 element.
    pub fn function(chart: &Arc<Chart>, c: Coefficient) -> Self {
        Tensor::monomial(chart, &[], c)
    }

    /// `c` times the basis element on `idx`; indices need not be sorted.
    pub fn monomial(chart: &Arc<Chart>, idx: &[usize], c: Coefficient) -> Self {
        let mut t = Tensor::zero(chart, idx.len());
        if let Some((blade, odd)) = sort_blade(idx) {
            assert!(blade.iter().all(|&i| i < chart.dim()), "index out of range");
            t.add_term(blade, if odd { -&c } else { c });
        }
        t
    }

    /// `dx_i` or `∂_i`.
    pub fn basis(chart: &Arc<Chart>, i: usize) -> Self {
        Tensor::monomial(chart, &[i], Coefficient::one())
    }

    pub fn from_terms(
        chart: &Arc<Chart>,
        degree: usize,
        terms: impl IntoIterator<Item = (Blade, Coefficient)>,
    ) -> Self {
        let mut t = Tensor::zero(chart, degree);
        for (b, c) in terms {
            let (blade, odd) = match sort_blade(&b) {
                Some(x) => x,
                None => continue,
            };
            assert_eq!(blade.len(), degree, "blade length differs from degree");
            t.add_term(blade, if odd { -&c } else { c });
        }
        t
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Blade, Coefficient> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, blade: &[usize]) -> Coefficient {
        self.terms.get(blade).cloned().unwrap_or_default()
    }

    /// Adds `c` on a sorted blade.
    pub fn add_term(&mut self, blade: Blade, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        debug_assert!(blade.windows(2).all(|w| w[0] < w[1]));
        match self.terms.entry(blade) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            same_chart(&self.chart, &other.chart),
            "tensors live on different charts"
        );
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "adding tensors of degrees {} and {}",
            self.degree,
            other.degree
        );
    }

    fn merged_degree(&self, other: &Self) -> usize {
        if self.is_zero() {
            other.degree
        } else {
            self.degree
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Coefficient) -> Coefficient) -> Self {
        let mut out = Tensor::zero(&self.chart, self.degree);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), f(c));
        }
        out
    }

    /// Multiplication by a function.
    pub fn scale(&self, c: &Coefficient) -> Self {
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_q(&self, q: &Q) -> Self {
        self.map_coeffs(|x| x.scale(q))
    }

    /// Coefficientwise partial derivative.
    pub fn partial(&self, i: usize) -> Self {
        self.map_coeffs(|x| x.partial(i))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert!(
            same_chart(&self.chart, &other.chart),
            "tensors live on different charts"
        );
        let mut out = Tensor::zero(&self.chart, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((blade, odd)) = wedge_blades(a, b) {
                    let c = ca * cb;
                    out.add_term(blade, if odd { -&c } else { c });
                }
            }
        }
        out
    }

    /// Component with the given homogeneous degree filter on blades.
    pub fn filter_blades(&self, keep: impl Fn(&[usize]) -> bool) -> Self {
        let mut out = Tensor::zero(&self.chart, self.degree);
        for (b, c) in &self.terms {
            if keep(b) {
                out.add_term(b.clone(), c.clone());
            }
        }
        out
    }

    /// Sorted `(indices, coefficient text)` pairs.
    pub fn entries(&self) -> Vec<(Blade, String)> {
        self.terms
            .iter()
            .map(|(b, c)| (b.clone(), c.render(&self.chart)))
            .collect()
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let names = self.chart.names();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| {
                let basis: Vec<String> = b
                    .iter()
                    .map(|&i| format!("{}{}", K::PREFIX, names[i]))
                    .collect();
                let basis = basis.join("^");
                if b.is_empty() {
                    return c.render(&self.chart);
                }
                if c.is_one() {
                    basis
                } else if c.is_compound(&self.chart) {
                    format!("({})*{basis}", c.render(&self.chart))
                } else {
                    format!("{}*{basis}", c.render(&self.chart))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<K: Kind> fmt::Display for Tensor<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<K: Kind> Add for &Tensor<K> {
    type Output = Tensor<K>;
    fn add(self, rhs: &Tensor<K>) -> Tensor<K> {
        self.check_compatible(rhs);
        let mut out = self.clone();
        out.degree = self.merged_degree(rhs);
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }
}

impl<K: Kind> Sub for &Tensor<K> {
    type Output = Tensor<K>;
    fn sub(self, rhs: &Tensor<K>) -> Tensor<K> {
        self.check_compatible(rhs);
        let mut out = self.clone();
        out.degree = self.merged_degree(rhs);
        for (b, c) in &rhs.terms {
            out.add_term(b.clone(), -c);
        }
        out
    }
}

impl<K: Kind> Neg for &Tensor<K> {
    type Output = Tensor<K>;
    fn neg(self) -> Tensor<K> {
        self.map_coeffs(|c| -c)
    }
}

impl<K: Kind> Add for Tensor<K> {
    type Output = Tensor<K>;
    fn add(self, rhs: Tensor<K>) -> Tensor<K> {
        &self + &rhs
    }
}

impl<K: Kind> Sub for Tensor<K> {
    type Output = Tensor<K>;
    fn sub(self, rhs: Tensor<K>) -> Tensor<K> {
        &self - &rhs
    }
}

impl<K: Kind> Neg for Tensor<K> {
    type Output = Tensor<K>;
    fn neg(self) -> Tensor<K> {
        -&self
    }
}

impl<K: Kind> std::iter::Sum for Tensor<K> {
    /// Panics on an empty iterator: the chart is unknown.
    fn sum<I: Iterator<Item = Tensor<K>>>(mut iter: I) -> Tensor<K> {
        let first = iter.next().expect("sum of no tensors");
        iter.fold(first, |acc, t| &acc + &t)
    }
}
