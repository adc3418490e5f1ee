//! Sparse exterior calculus on a chart.
//!
//! Conventions: (ι_X ω)(X₁, …) = ω(X, X₁, …), ι_{X∧X̃} = ι_X∘ι_X̃, so
//! ι_{∂y∧∂z}(dy∧dz) = −1. 𝓛_Y = ι_Y∘d − (−1)^{|Y|} d∘ι_Y. Forms are stored
//! in unshifted degree.

mod calculus;
pub mod identities;
mod matrix;
mod tensor;

use thiserror::Error;

pub use calculus::{
    apply_vector, bracket, contract_blades, d, iota, iota_form, lie, schouten, try_iota, try_lie,
    try_schouten,
};
pub use matrix::{multi_sharp, permutations, sharp, unsharp, RingMatrix};
pub(crate) use tensor::same_chart;
pub use tensor::{sort_blade, wedge_blades, Blade, Form, FormKind, Kind, MultiVector, Tensor, VectorKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CartanError {
    #[error("operands live on different charts")]
    ChartMismatch,
    #[error("expected degree {expected}, got {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("{forms} forms cannot be paired with a multivector of degree {degree}")]
    Arity { forms: usize, degree: usize },
}

impl Form {
    pub fn try_wedge(&self, other: &Form) -> Result<Form, CartanError> {
        if !tensor_same_chart(self, other) {
            return Err(CartanError::ChartMismatch);
        }
        Ok(self.wedge(other))
    }
}

fn tensor_same_chart<K: Kind>(a: &Tensor<K>, b: &Tensor<K>) -> bool {
    std::sync::Arc::ptr_eq(a.chart(), b.chart()) || **a.chart() == **b.chart()
}
