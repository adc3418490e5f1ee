//! Fiberwise linear algebra of skew bilinear forms over ℚ.
//!
//! A [`SkewMatrix`] stores the Gram matrix A_ij = β(e_i, e_j); for a bivector
//! it stores Z(e^i, e^j). The sharp map ♯ (v ↦ ι_v β, ξ ↦ ι_ξ Z) then has
//! matrix Aᵀ, matching [`crate::cartan::sharp`].

mod qmatrix;
pub mod random;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::coeffring::Q;
pub use qmatrix::{same_span, span_rank, QMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FiberError {
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("not in I_Z: id + Z♯β♯ annihilates {witness:?}")]
    NotInIz { witness: Vec<Q> },
    #[error("invalid splitting: {0}")]
    Splitting(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewMatrix(QMatrix);

impl SkewMatrix {
    pub fn new(gram: QMatrix) -> Result<Self, FiberError> {
        if !gram.is_square() || gram.transpose() != gram.neg() {
            return Err(FiberError::NotSkew);
        }
        Ok(SkewMatrix(gram))
    }

    pub fn zero(n: usize) -> Self {
        SkewMatrix(QMatrix::zeros(n, n))
    }

    /// Sets A_ij = c and A_ji = −c for each entry; later entries add.
    pub fn from_entries(n: usize, entries: &[(usize, usize, Q)]) -> Self {
        let mut m = QMatrix::zeros(n, n);
        for (i, j, c) in entries {
            let v = m.get(*i, *j) + c;
            m.set(*i, *j, v.clone());
            m.set(*j, *i, -v);
        }
        SkewMatrix(m)
    }

    pub fn from_sharp(sharp: QMatrix) -> Result<Self, FiberError> {
        SkewMatrix::new(sharp.transpose())
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn gram(&self) -> &QMatrix {
        &self.0
    }

    pub fn sharp(&self) -> QMatrix {
        self.0.transpose()
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        self.0.get(i, j)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &SkewMatrix) -> SkewMatrix {
        SkewMatrix(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &SkewMatrix) -> SkewMatrix {
        SkewMatrix(self.0.sub(&o.0))
    }

    pub fn neg(&self) -> SkewMatrix {
        SkewMatrix(self.0.neg())
    }

    pub fn scale(&self, c: &Q) -> SkewMatrix {
        SkewMatrix(self.0.scale(c))
    }

    /// Gram matrix in another basis (columns of `p`): Pᵀ A P.
    pub fn pullback(&self, p: &QMatrix) -> SkewMatrix {
        SkewMatrix(p.transpose().mul(&self.0).mul(p))
    }
}

/// V = K ⊕ G given by frames, together with the bivector Z ∈ ∧²G with
/// Z♯ = −(η|_G♯)⁻¹.
#[derive(Clone, Debug)]
pub struct FiberSplitting {
    n: usize,
    k: usize,
    /// columns: K-frame then G-frame
    frame: QMatrix,
    frame_inv: QMatrix,
    z: SkewMatrix,
}

impl FiberSplitting {
    pub fn new(eta: &SkewMatrix, k_frame: &[Vec<Q>], g_frame: &[Vec<Q>]) -> Result<Self, FiberError> {
        let n = eta.dim();
        if k_frame.len() + g_frame.len() != n {
            return Err(FiberError::Splitting(format!(
                "{} + {} frame vectors in dimension {n}",
                k_frame.len(),
                g_frame.len()
            )));
        }
        let cols: Vec<Vec<Q>> = k_frame.iter().chain(g_frame).cloned().collect();
        if cols.iter().any(|c| c.len() != n) {
            return Err(FiberError::Splitting("frame vector of wrong length".into()));
        }
        let frame = QMatrix::from_columns(n, &cols);
        let frame_inv = frame
            .inverse()
            .ok_or_else(|| FiberError::Splitting("K and G are not complementary".into()))?;
        let k = k_frame.len();
        let adapted = eta.pullback(&frame);
        let kk: Vec<usize> = (0..k).collect();
        let all: Vec<usize> = (0..n).collect();
        if !adapted.gram().select(&kk, &all).is_zero() {
            return Err(FiberError::Splitting("K-frame is not in the kernel".into()));
        }
        let gg: Vec<usize> = (k..n).collect();
        let e = adapted.gram().select(&gg, &gg);
        let y = e
            .inverse()
            .ok_or_else(|| FiberError::Splitting("η is degenerate on G".into()))?
            .neg();
        let mut zp = QMatrix::zeros(n, n);
        for a in 0..gg.len() {
            for b in 0..gg.len() {
                zp.set(k + a, k + b, y.get(a, b).clone());
            }
        }
        let z = SkewMatrix(frame.mul(&zp).mul(&frame.transpose()));
        Ok(FiberSplitting {
            n,
            k,
            frame,
            frame_inv,
            z,
        })
    }

    /// Splitting along coordinate axes.
    pub fn coordinate(eta: &SkewMatrix, k_idx: &[usize], g_idx: &[usize]) -> Result<Self, FiberError> {
        let n = eta.dim();
        let e = |i: usize| {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::one();
            v
        };
        let kf: Vec<Vec<Q>> = k_idx.iter().map(|&i| e(i)).collect();
        let gf: Vec<Vec<Q>> = g_idx.iter().map(|&i| e(i)).collect();
        FiberSplitting::new(eta, &kf, &gf)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn k_dim(&self) -> usize {
        self.k
    }

    pub fn g_dim(&self) -> usize {
        self.n - self.k
    }

    pub fn z(&self) -> &SkewMatrix {
        &self.z
    }

    pub fn frame(&self) -> &QMatrix {
        &self.frame
    }

    pub fn k_frame(&self) -> Vec<Vec<Q>> {
        (0..self.k).map(|j| self.frame.column(j)).collect()
    }

    pub fn g_frame(&self) -> Vec<Vec<Q>> {
        (self.k..self.n).map(|j| self.frame.column(j)).collect()
    }

    /// Keeps the adapted-basis entries (a, b) with `keep(a_in_k, b_in_k)`
    /// and maps back to the coordinate basis.
    fn part(&self, beta: &SkewMatrix, keep: impl Fn(bool, bool) -> bool) -> SkewMatrix {
        let mut ad = beta.pullback(&self.frame).0;
        for a in 0..self.n {
            for b in 0..self.n {
                if !keep(a < self.k, b < self.k) {
                    ad.set(a, b, Q::zero());
                }
            }
        }
        SkewMatrix(ad).pullback(&self.frame_inv)
    }

    /// β_K ∈ ∧²K*.
    pub fn k_part(&self, beta: &SkewMatrix) -> SkewMatrix {
        self.part(beta, |a, b| a && b)
    }

    /// β_m ∈ K*⊗G*.
    pub fn mixed_part(&self, beta: &SkewMatrix) -> SkewMatrix {
        self.part(beta, |a, b| a != b)
    }

    /// β_G ∈ ∧²G*.
    pub fn g_part(&self, beta: &SkewMatrix) -> SkewMatrix {
        self.part(beta, |a, b| !a && !b)
    }

    /// The G×G block of the Gram matrix in the adapted basis.
    pub fn g_block(&self, beta: &SkewMatrix) -> QMatrix {
        let gg: Vec<usize> = (self.k..self.n).collect();
        beta.pullback(&self.frame).0.select(&gg, &gg)
    }

    fn k_block(&self, beta: &SkewMatrix) -> QMatrix {
        let kk: Vec<usize> = (0..self.k).collect();
        beta.pullback(&self.frame).0.select(&kk, &kk)
    }

    /// β_K = 0.
    pub fn is_horizontal(&self, beta: &SkewMatrix) -> bool {
        self.k_block(beta).is_zero()
    }
}

/// Rank of β♯ and a basis of its kernel.
pub fn rank_kernel(beta: &SkewMatrix) -> (usize, Vec<Vec<Q>>) {
    let m = beta.sharp();
    let (_, pivots) = m.rref();
    (pivots.len(), m.kernel())
}

fn check_dims(a: &SkewMatrix, b: &SkewMatrix) -> Result<(), FiberError> {
    if a.dim() != b.dim() {
        return Err(FiberError::Dimension(a.dim(), b.dim()));
    }
    Ok(())
}

/// β♯(id + s·Z♯β♯)⁻¹ for s = ±1.
fn twisted(beta: &SkewMatrix, z: &SkewMatrix, sign: i64) -> Result<SkewMatrix, FiberError> {
    check_dims(beta, z)?;
    let b = beta.sharp();
    let zb = z.sharp().mul(&b);
    let m = if sign > 0 {
        QMatrix::identity(beta.dim()).add(&zb)
    } else {
        QMatrix::identity(beta.dim()).sub(&zb)
    };
    let inv = m.inverse().ok_or_else(|| FiberError::NotInIz {
        witness: m.kernel().swap_remove(0),
    })?;
    SkewMatrix::from_sharp(b.mul(&inv))
}

/// F(β)♯ = β♯(id + Z♯β♯)⁻¹.
pub fn f_map(beta: &SkewMatrix, z: &SkewMatrix) -> Result<SkewMatrix, FiberError> {
    twisted(beta, z, 1)
}

/// F⁻¹(α)♯ = α♯(id − Z♯α♯)⁻¹, defined on I_{−Z}.
pub fn f_inverse(alpha: &SkewMatrix, z: &SkewMatrix) -> Result<SkewMatrix, FiberError> {
    twisted(alpha, z, -1)
}

/// exp_η(β) = η + F(β).
pub fn exp_eta_fiber(eta: &SkewMatrix, split: &FiberSplitting, beta: &SkewMatrix) -> Result<SkewMatrix, FiberError> {
    check_dims(eta, beta)?;
    Ok(eta.add(&f_map(beta, split.z())?))
}

/// Outcome of the two membership tests for I_Z.
#[derive(Clone, Debug, PartialEq)]
pub struct IzTest {
    /// det(id + Z♯β♯) ≠ 0
    pub direct: bool,
    /// det(id_G + Z♯σ♯) ≠ 0 with σ = β|_G
    pub block: bool,
    /// a vector killed by id + Z♯β♯ when singular
    pub witness: Option<Vec<Q>>,
}

impl IzTest {
    pub fn agree(&self) -> bool {
        self.direct == self.block
    }
}

pub fn in_iz(beta: &SkewMatrix, z: &SkewMatrix, split: &FiberSplitting) -> IzTest {
    let n = beta.dim();
    let m = QMatrix::identity(n).add(&z.sharp().mul(&beta.sharp()));
    let direct = !m.det().is_zero();
    let witness = if direct { None } else { m.kernel().into_iter().next() };
    // Z in the adapted basis is supported on G×G
    let zad = SkewMatrix(split.frame_inv.mul(z.gram()).mul(&split.frame_inv.transpose()));
    let gg: Vec<usize> = (split.k..n).collect();
    let zg = zad.gram().select(&gg, &gg).transpose();
    let sg = split.g_block(beta).transpose();
    let block = !QMatrix::identity(gg.len()).add(&zg.mul(&sg)).det().is_zero();
    IzTest { direct, block, witness }
}

/// Image of (id + Z♯β_m♯) restricted to ker(β_K) ⊂ K.
pub fn kernel_lemma(split: &FiberSplitting, beta: &SkewMatrix) -> Vec<Vec<Q>> {
    let k = split.k;
    let n = split.n;
    let kf = split.k_frame();
    let inner = split.k_block(beta).transpose().kernel();
    let map = QMatrix::identity(n).add(&split.z.sharp().mul(&split.mixed_part(beta).sharp()));
    inner
        .iter()
        .map(|c| {
            let mut v = vec![Q::zero(); n];
            for a in 0..k {
                for (i, x) in kf[a].iter().enumerate() {
                    v[i] += &c[a] * x;
                }
            }
            map.mul_vec(&v)
        })
        .collect()
}

/// graph(Z♯μ♯: K → G) spanned by the images of the K-frame.
pub fn kernel_graph(split: &FiberSplitting, beta: &SkewMatrix) -> Vec<Vec<Q>> {
    let zm = split.z.sharp().mul(&split.mixed_part(beta).sharp());
    split
        .k_frame()
        .into_iter()
        .map(|v| {
            let w = zm.mul_vec(&v);
            v.iter().zip(&w).map(|(a, b)| a + b).collect()
        })
        .collect()
}

/// Whether `ker` ⊕ G = V.
pub fn transverse_to_g(split: &FiberSplitting, ker: &[Vec<Q>]) -> bool {
    let n = split.n;
    let all: Vec<Vec<Q>> = ker.iter().cloned().chain(split.g_frame()).collect();
    ker.len() + split.g_dim() == n && span_rank(n, &all) == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::qi;

    #[test]
    fn z_of_a_coordinate_block() {
        // η = dy∧dz gives Z = ∂y∧∂z
        let eta = SkewMatrix::from_entries(3, &[(1, 2, qi(1))]);
        let s = FiberSplitting::coordinate(&eta, &[0], &[1, 2]).unwrap();
        assert_eq!(s.z(), &SkewMatrix::from_entries(3, &[(1, 2, qi(1))]));
        // Z♯η♯ = −id on G, 0 on K
        let p = s.z().sharp().mul(&eta.sharp());
        assert_eq!(p.get(1, 1), &qi(-1));
        assert_eq!(p.get(0, 0), &qi(0));
        assert!(FiberSplitting::coordinate(&eta, &[1], &[0, 2]).is_err());
    }

    #[test]
    fn parts_sum_back() {
        let eta = SkewMatrix::from_entries(4, &[(2, 3, qi(1))]);
        let kf = vec![vec![qi(1), qi(0), qi(0), qi(0)], vec![qi(0), qi(1), qi(0), qi(0)]];
        let gf = vec![vec![qi(1), qi(0), qi(1), qi(0)], vec![qi(0), qi(2), qi(0), qi(1)]];
        let s = FiberSplitting::new(&eta, &kf, &gf).unwrap();
        let b = SkewMatrix::from_entries(4, &[(0, 1, qi(3)), (0, 2, qi(1)), (1, 3, qi(-2)), (2, 3, qi(5))]);
        let sum = s.k_part(&b).add(&s.mixed_part(&b)).add(&s.g_part(&b));
        assert_eq!(sum, b);
    }
}
