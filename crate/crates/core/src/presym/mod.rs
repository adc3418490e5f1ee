//! Pre-symplectic models: a closed 2-form η with a splitting TM = K ⊕ G
//! given by frames, the induced bivector Z, the bigrading Ω^{j,k} and the
//! section-level exponential map.

mod samples;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::cartan::{
    bracket, d, iota, iota_form, schouten, sharp, unsharp, CartanError, Form, Kind, MultiVector, RingMatrix,
    Tensor,
};
use crate::coeffring::{Chart, Coefficient, RingError, Q};
use crate::fiberlin::{f_map, rank_kernel, QMatrix, SkewMatrix};
use crate::koszul::{lambda, mc_residual, KoszulError, KoszulStructure, Shifted};

pub use samples::{darboux_mc, default_points, horizontal_form, horizontal_sample};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PresymError {
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("η is not closed: dη = {0}")]
    NotClosed(String),
    #[error("K-frame field {0} is not in the kernel of η")]
    NotInKernel(usize),
    #[error("frames are not complementary: {0}")]
    Frames(String),
    #[error("{what} determinant {det} is not a unit in the ring")]
    NonUnit { what: &'static str, det: String },
    #[error("model invariant fails: {0}")]
    Invariant(String),
    #[error("β is not horizontal")]
    NotHorizontal,
    #[error("β is not in I_Z at {0}")]
    NotInIz(String),
}

/// (M, η) with frames for K = ker η and a complement G.
#[derive(Clone, Debug)]
pub struct PreSymplecticModel {
    eta: Form,
    k_frame: Vec<MultiVector>,
    g_frame: Vec<MultiVector>,
    /// columns: K-frame then G-frame
    frame: RingMatrix,
    frame_inv: RingMatrix,
    koszul: KoszulStructure,
}

fn vector_column(v: &MultiVector, n: usize) -> Result<Vec<Coefficient>, PresymError> {
    if v.degree() != 1 && !v.is_zero() {
        return Err(CartanError::WrongDegree {
            expected: 1,
            got: v.degree(),
        }
        .into());
    }
    Ok((0..n).map(|i| v.coeff(&[i])).collect())
}

/// Re-expresses `t` in a new basis: basis element i ↦ Σ_a m[i][a] b_a. The
/// output's indices refer to the b_a.
fn rebase<K: Kind>(t: &Tensor<K>, m: &RingMatrix) -> Tensor<K> {
    let ch = t.chart();
    let n = m.size();
    let images: Vec<Tensor<K>> = (0..n)
        .map(|i| {
            let mut v = Tensor::zero(ch, 1);
            for a in 0..n {
                v.add_term(vec![a], m.get(i, a).clone());
            }
            v
        })
        .collect();
    let mut out = Tensor::zero(ch, t.degree());
    for (blade, c) in t.terms() {
        let mut term = Tensor::function(ch, c.clone());
        for &i in blade {
            term = term.wedge(&images[i]);
        }
        out = &out + &term;
    }
    out
}

fn bigrade<K: Kind>(t: &Tensor<K>, k_dim: usize) -> BTreeMap<(usize, usize), Tensor<K>> {
    let mut out: BTreeMap<(usize, usize), Tensor<K>> = BTreeMap::new();
    for (blade, c) in t.terms() {
        let j = blade.iter().filter(|&&a| a < k_dim).count();
        let e = out
            .entry((j, blade.len() - j))
            .or_insert_with(|| Tensor::zero(t.chart(), t.degree()));
        e.add_term(blade.clone(), c.clone());
    }
    out
}

fn require_unit(m: &RingMatrix, what: &'static str, chart: &Chart) -> Result<RingMatrix, PresymError> {
    let det = m.det();
    m.inverse().ok_or_else(|| PresymError::NonUnit {
        what,
        det: det.render(chart),
    })
}

impl PreSymplecticModel {
    pub fn build(eta: Form, k_frame: Vec<MultiVector>, g_frame: Vec<MultiVector>) -> Result<Self, PresymError> {
        let ch = eta.chart().clone();
        let n = ch.dim();
        if eta.degree() != 2 && !eta.is_zero() {
            return Err(CartanError::WrongDegree {
                expected: 2,
                got: eta.degree(),
            }
            .into());
        }
        let de = d(&eta);
        if !de.is_zero() {
            return Err(PresymError::NotClosed(de.render()));
        }
        if k_frame.len() + g_frame.len() != n {
            return Err(PresymError::Frames(format!(
                "{} + {} fields in dimension {n}",
                k_frame.len(),
                g_frame.len()
            )));
        }
        for (i, x) in k_frame.iter().enumerate() {
            vector_column(x, n)?;
            if !iota(x, &eta).is_zero() {
                return Err(PresymError::NotInKernel(i));
            }
        }
        let mut frame = RingMatrix::zeros(n);
        for (a, v) in k_frame.iter().chain(&g_frame).enumerate() {
            for (i, c) in vector_column(v, n)?.into_iter().enumerate() {
                frame.set(i, a, c);
            }
        }
        let frame_inv = require_unit(&frame, "frame", &ch)?;

        let k = k_frame.len();
        let gram = sharp(&eta)?.transpose();
        let adapted = frame.transpose().mul(&gram).mul(&frame);
        let g = n - k;
        let mut e = RingMatrix::zeros(g);
        for a in 0..g {
            for b in 0..g {
                e.set(a, b, adapted.get(k + a, k + b).clone());
            }
        }
        let y = require_unit(&e, "G-block of η", &ch)?.neg();
        let mut dz = RingMatrix::zeros(n);
        for a in 0..g {
            for b in 0..g {
                dz.set(k + a, k + b, y.get(a, b).clone());
            }
        }
        let zgram = frame.mul(&dz).mul(&frame.transpose());
        let z: MultiVector = unsharp(&ch, &zgram.transpose());
        let model = PreSymplecticModel {
            eta,
            k_frame,
            g_frame,
            frame,
            frame_inv,
            koszul: KoszulStructure::new(z)?,
        };
        model.check_invariants()?;
        Ok(model)
    }

    /// Re-verifies every model invariant.
    pub fn check_invariants(&self) -> Result<(), PresymError> {
        let n = self.dim();
        let k = self.k_dim();
        if !d(&self.eta).is_zero() {
            return Err(PresymError::Invariant("dη ≠ 0".into()));
        }
        if self.k_frame.iter().any(|x| !iota(x, &self.eta).is_zero()) {
            return Err(PresymError::Invariant("K-frame leaves the kernel".into()));
        }
        // Z♯η♯ = −id on G, 0 on K
        // column a is the image of the a-th frame field, read in the frame
        let ze = self.frame_inv.mul(&sharp(self.z())?.mul(&sharp(&self.eta)?).mul(&self.frame));
        for a in 0..n {
            for i in 0..n {
                let want = if a >= k && i == a { -Coefficient::one() } else { Coefficient::zero() };
                if ze.get(i, a) != &want {
                    return Err(PresymError::Invariant(format!("Z♯η♯ on frame field {a}")));
                }
            }
        }
        // [Z,Z] ∈ Γ(∧²G⊗K)
        for ((j, _), part) in self.bigrade_vector(self.koszul.zz()) {
            if j != 1 && !part.is_zero() {
                return Err(PresymError::Invariant(format!("[Z,Z] has a component with {j} K-slots")));
            }
        }
        // image of Z♯ is G
        let mut img = RingMatrix::zeros(n - k);
        for b in 0..(n - k) {
            let v = self.to_frame_vector(&iota_form(&self.coframe(k + b), self.z()));
            for a in 0..n {
                let c = v.coeff(&[a]);
                if a < k {
                    if !c.is_zero() {
                        return Err(PresymError::Invariant("Z♯ leaves G".into()));
                    }
                } else {
                    img.set(a - k, b, c);
                }
            }
        }
        if img.inverse().is_none() {
            return Err(PresymError::Invariant("Z♯ does not span G".into()));
        }
        Ok(())
    }

    pub fn chart(&self) -> &Arc<Chart> {
        self.eta.chart()
    }

    pub fn dim(&self) -> usize {
        self.chart().dim()
    }

    pub fn k_dim(&self) -> usize {
        self.k_frame.len()
    }

    /// Rank of η.
    pub fn rank(&self) -> usize {
        self.g_frame.len()
    }

    pub fn eta(&self) -> &Form {
        &self.eta
    }

    pub fn z(&self) -> &MultiVector {
        self.koszul.z()
    }

    pub fn koszul(&self) -> &KoszulStructure {
        &self.koszul
    }

    pub fn k_frame(&self) -> &[MultiVector] {
        &self.k_frame
    }

    pub fn g_frame(&self) -> &[MultiVector] {
        &self.g_frame
    }

    /// The dual coframe element θ^a; a < k_dim are the K* directions.
    pub fn coframe(&self, a: usize) -> Form {
        let ch = self.chart();
        let mut f = Form::zero(ch, 1);
        for i in 0..self.dim() {
            f.add_term(vec![i], self.frame_inv.get(a, i).clone());
        }
        f
    }

    /// Frame-index form from a coordinate form.
    pub(crate) fn to_frame_form(&self, f: &Form) -> Form {
        rebase(f, &self.frame)
    }

    pub(crate) fn from_frame_form(&self, f: &Form) -> Form {
        rebase(f, &self.frame_inv)
    }

    pub(crate) fn to_frame_vector(&self, v: &MultiVector) -> MultiVector {
        rebase(v, &self.frame_inv.transpose())
    }

    pub(crate) fn from_frame_vector(&self, v: &MultiVector) -> MultiVector {
        rebase(v, &self.frame.transpose())
    }

    fn bigrade_vector(&self, v: &MultiVector) -> BTreeMap<(usize, usize), MultiVector> {
        bigrade(&self.to_frame_vector(v), self.k_dim())
    }

    /// Projection of a vector field to G along K.
    pub fn pr_g(&self, v: &MultiVector) -> MultiVector {
        let k = self.k_dim();
        let framed = self.to_frame_vector(v).filter_blades(|b| b.iter().all(|&a| a >= k));
        self.from_frame_vector(&framed)
    }

    /// Projection of a vector field to K along G.
    pub fn pr_k(&self, v: &MultiVector) -> MultiVector {
        v - &self.pr_g(v)
    }

    /// Bigraded components β^{j,k} ∈ Γ(∧^j K*⊗∧^k G*), in coordinates.
    pub fn decompose(&self, beta: &Form) -> Result<BigradedDecomposition, PresymError> {
        if !crate::cartan::same_chart(self.chart(), beta.chart()) {
            return Err(CartanError::ChartMismatch.into());
        }
        let framed = self.to_frame_form(beta);
        let components = bigrade(&framed, self.k_dim())
            .into_iter()
            .filter(|(_, f)| !f.is_zero())
            .map(|(jk, f)| (jk, self.from_frame_form(&f)))
            .collect();
        Ok(BigradedDecomposition {
            degree: beta.degree(),
            chart: self.chart().clone(),
            components,
        })
    }

    pub fn is_horizontal(&self, beta: &Form) -> bool {
        self.decompose(beta).map(|b| b.is_horizontal()).unwrap_or(false)
    }

    /// η + F(β), with F evaluated in the ring.
    pub fn exp_eta_section(&self, beta: &Form) -> Result<Form, PresymError> {
        let f = crate::koszul::f_section(&self.koszul, beta)?;
        Ok(&self.eta + &f)
    }

    /// η + F(β) at a point, evaluated fiberwise.
    pub fn exp_eta_at(&self, beta: &Form, point: &[Q]) -> Result<SkewMatrix, PresymError> {
        let ch = self.chart();
        let to_skew = |m: Vec<Vec<Q>>| {
            SkewMatrix::from_sharp(QMatrix::from_rows(m)).map_err(|e| PresymError::Invariant(e.to_string()))
        };
        let eta = to_skew(sharp(&self.eta)?.eval(ch, point)?)?;
        let b = to_skew(sharp(beta)?.eval(ch, point)?)?;
        let z = to_skew(sharp(self.z())?.eval(ch, point)?)?;
        let f = f_map(&b, &z).map_err(|_| PresymError::NotInIz(format!("{point:?}")))?;
        Ok(eta.add(&f))
    }

    /// The points where β evaluates without poles and lies in I_Z.
    pub fn admissible_points(&self, beta: &Form, points: &[Vec<Q>]) -> Vec<Vec<Q>> {
        points
            .iter()
            .filter(|p| self.exp_eta_at(beta, p).is_ok())
            .cloned()
            .collect()
    }

    /// Both sides of the main equivalence for a horizontal β.
    pub fn verify_main_theorem(&self, beta: &Form, points: &[Vec<Q>]) -> Result<MainTheoremReport, PresymError> {
        if !self.is_horizontal(beta) {
            return Err(PresymError::NotHorizontal);
        }
        let residual = mc_residual(&self.koszul, beta)?;
        let image = self.exp_eta_section(beta)?;
        let d_image = d(&image);
        let mut ranks = Vec::with_capacity(points.len());
        for p in points {
            let m = self.exp_eta_at(beta, p)?;
            ranks.push(rank_kernel(&m).0);
        }
        let rank_ok = ranks.iter().all(|&r| r == self.rank());
        Ok(MainTheoremReport {
            mc: residual.is_zero(),
            closed: d_image.is_zero(),
            rank_ok,
            ranks,
            residual: residual.render(),
            d_image: d_image.render(),
        })
    }

    /// Filtration bounds for λ₁, λ₂, λ₃ on tuples of forms.
    pub fn closure_and_filtration_check(&self, samples: &[Vec<Form>]) -> Result<Vec<FiltrationEntry>, PresymError> {
        let mut out = Vec::new();
        for tuple in samples {
            let mut inputs = Vec::with_capacity(tuple.len());
            for f in tuple {
                inputs.push(self.decompose(f)?.filtration_degree());
            }
            let args: Vec<Shifted> = tuple.iter().cloned().map(Shifted::new).collect();
            let value = lambda(&self.koszul, &args)?;
            let output = self.decompose(value.form())?.filtration_degree();
            // an empty filtration degree means the form vanishes
            let bound = if inputs.iter().any(Option::is_none) {
                None
            } else {
                let s: usize = inputs.iter().map(|x| x.unwrap()).sum();
                Some(s.saturating_sub(tuple.len() - 1))
            };
            let ok = match (output, bound) {
                (None, _) => true,
                (Some(_), None) => false,
                (Some(o), Some(b)) => o >= b,
            };
            out.push(FiltrationEntry {
                arity: tuple.len(),
                inputs,
                output,
                bound,
                ok,
            });
        }
        Ok(out)
    }

    /// Z♯[ξ₁,ξ₂]_Z − pr_G[Z♯ξ₁, Z♯ξ₂].
    pub fn sharp_bracket_defect(&self, x1: &Form, x2: &Form) -> Result<MultiVector, PresymError> {
        let z = self.z();
        let k2 = crate::koszul::koszul2(&self.koszul, x1, x2)?;
        let lhs = iota_form(&k2, z);
        let rhs = self.pr_g(&bracket(&iota_form(x1, z), &iota_form(x2, z)));
        Ok(&lhs - &rhs)
    }

    /// [Z,Z] recomputed from Z.
    pub fn zz(&self) -> MultiVector {
        schouten(self.z(), self.z())
    }
}

#[derive(Clone, Debug)]
pub struct BigradedDecomposition {
    degree: usize,
    chart: Arc<Chart>,
    components: BTreeMap<(usize, usize), Form>,
}

impl BigradedDecomposition {
    pub fn component(&self, j: usize, k: usize) -> Form {
        self.components
            .get(&(j, k))
            .cloned()
            .unwrap_or_else(|| Form::zero(&self.chart, self.degree))
    }

    /// Nonzero components keyed by (j, k).
    pub fn components(&self) -> &BTreeMap<(usize, usize), Form> {
        &self.components
    }

    pub fn recompose(&self) -> Form {
        self.components
            .values()
            .fold(Form::zero(&self.chart, self.degree), |a, b| &a + b)
    }

    /// Largest k with β ∈ F^k; None for β = 0.
    pub fn filtration_degree(&self) -> Option<usize> {
        self.components.keys().map(|&(_, k)| k).min()
    }

    pub fn is_horizontal(&self) -> bool {
        self.filtration_degree().is_none_or(|k| k >= 1)
    }

    /// The bidegree if β has a single component.
    pub fn pure(&self) -> Option<(usize, usize)> {
        match self.components.len() {
            1 => self.components.keys().next().copied(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainTheoremReport {
    pub mc: bool,
    pub closed: bool,
    pub rank_ok: bool,
    pub ranks: Vec<usize>,
    pub residual: String,
    pub d_image: String,
}

impl MainTheoremReport {
    /// MC ⟺ (closed and of rank k at every sample).
    pub fn agree(&self) -> bool {
        self.mc == (self.closed && self.rank_ok)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationEntry {
    pub arity: usize,
    pub inputs: Vec<Option<usize>>,
    pub output: Option<usize>,
    pub bound: Option<usize>,
    pub ok: bool,
}
