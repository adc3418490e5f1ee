//! Exact integrals over the torus cycles C_{[a,b]} = S¹×S¹×[a,b]×{0} and
//! N_{a,c} = S¹×S¹×{a}×{c}. Angles are in units of π.

use super::{FoliationAlgebra, FoliationError, VectorValuedForm};
use crate::cartan::Form;
use crate::coeffring::{qi, ChartKind, Coefficient, RingError, Value, Q};

/// An integral certificate: nonzero values certify a nontrivial class.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleValue {
    pub cycle: String,
    pub value: Value,
    pub nonzero: bool,
}

impl CycleValue {
    /// Float values count as nonzero beyond `tol`.
    pub fn new(cycle: impl Into<String>, value: Value, tol: f64) -> Self {
        let nonzero = match &value {
            Value::Exact(s) => !s.is_zero(),
            Value::Float(x) => x.abs() > tol,
        };
        CycleValue {
            cycle: cycle.into(),
            value,
            nonzero,
        }
    }
}

fn torus(chart: &crate::coeffring::Chart) -> Result<(), FoliationError> {
    if chart.kind() != ChartKind::Periodic || chart.dim() != 4 {
        return Err(FoliationError::Integral("cycle integrals need the T⁴ chart".into()));
    }
    Ok(())
}

fn exact_or(v: Value, allow_float: bool) -> Result<Value, FoliationError> {
    if !v.is_exact() && !allow_float {
        return Err(FoliationError::Integral("endpoints are not exact and float mode is off".into()));
    }
    Ok(v)
}

/// ∫_{C_{[a,b]}} ω for a 3-form ω on T⁴.
pub fn cycle_integral_presym(omega: &Form, a: &Q, b: &Q, allow_float: bool) -> Result<Value, FoliationError> {
    let ch = omega.chart();
    torus(ch)?;
    if omega.degree() != 3 && !omega.is_zero() {
        return Err(FoliationError::WrongDegree {
            expected: 3,
            got: omega.degree(),
        });
    }
    let ring = |e: RingError| FoliationError::Integral(e.to_string());
    let c = omega.coeff(&[0, 1, 2]);
    let c = c.substitute(ch, &[None, None, None, Some(qi(0))]).map_err(ring)?;
    let c = c.circle_integral(ch, 0).map_err(ring)?;
    let c = c.circle_integral(ch, 1).map_err(ring)?;
    exact_or(c.arc_integral(ch, 2, a, b).map_err(ring)?, allow_float)
}

/// ∫_{N_{a,c}} v for v ∈ Γ(∧²K*⊗G): the components along the G-frame.
pub fn cycle_integral_fol(
    alg: &FoliationAlgebra,
    v: &VectorValuedForm,
    a: &Q,
    c: &Q,
    allow_float: bool,
) -> Result<Vec<Value>, FoliationError> {
    let ch = alg.chart();
    torus(ch)?;
    if v.degree() != 2 && !v.is_zero() {
        return Err(FoliationError::WrongDegree {
            expected: 2,
            got: v.degree(),
        });
    }
    if alg.k() != 2 {
        return Err(FoliationError::Integral("N_{a,c} needs a rank-2 kernel".into()));
    }
    let ring = |e: RingError| FoliationError::Integral(e.to_string());
    let point = [qi(0), qi(0), a.clone(), c.clone()];
    (0..alg.g())
        .map(|b| {
            let coeff: Coefficient = v.coeff(&[0, 1], b);
            let i = coeff.circle_integral(ch, 0).map_err(ring)?;
            let i = i.circle_integral(ch, 1).map_err(ring)?;
            exact_or(i.eval(ch, &point).map_err(ring)?, allow_float)
        })
        .collect()
}
