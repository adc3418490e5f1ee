//! Δ_Z = d − t𝓛_Z − ½t²ι_{[Z,Z]} squares to zero.

use super::KoszulStructure;
use crate::cartan::{d, iota, lie, Form};
use crate::coeffring::q;

/// The t^p coefficient of Δ_Z² applied to `w`, p = 0..=4:
/// d², −(d𝓛 + 𝓛d), 𝓛² − ½(dι_W + ι_W d), ½(𝓛ι_W + ι_W𝓛), ¼ι_Wι_W.
pub fn bv_coefficient(k: &KoszulStructure, p: usize, w: &Form) -> Form {
    let z = k.z();
    let ww = k.zz();
    match p {
        0 => d(&d(w)),
        1 => -&(&d(&lie(z, w)) + &lie(z, &d(w))),
        2 => {
            let a = lie(z, &lie(z, w));
            let b = &d(&iota(ww, w)) + &iota(ww, &d(w));
            &a - &b.scale_q(&q(1, 2))
        }
        3 => (&lie(z, &iota(ww, w)) + &iota(ww, &lie(z, w))).scale_q(&q(1, 2)),
        4 => iota(ww, &iota(ww, w)).scale_q(&q(1, 4)),
        _ => panic!("Δ_Z² has no t^{p} term"),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BvReport {
    pub checked: usize,
    /// (sample index, power of t)
    pub failures: Vec<(usize, usize)>,
}

impl BvReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn bv_square_check(k: &KoszulStructure, samples: &[Form]) -> BvReport {
    let mut r = BvReport::default();
    for (i, w) in samples.iter().enumerate() {
        for p in 0..=4 {
            r.checked += 1;
            if !bv_coefficient(k, p, w).is_zero() {
                r.failures.push((i, p));
            }
        }
    }
    r
}
