//! Scenario files: a chart, a pre-symplectic model, named deformations and
//! the checks to run on them.

use std::collections::BTreeMap;
use std::sync::Arc;

use presym_core::cartan::{Form, MultiVector};
use presym_core::coeffring::{Chart, ChartKind, RingError};
use presym_core::foliation::{FoliationAlgebra, VectorValuedForm};
use presym_core::presym::PreSymplecticModel;
use presym_core::{Error, Q};
use serde::{Deserialize, Serialize};
use thiserror::Error as ThisError;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("cannot read scenario: {0}")]
    Io(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("ring error: {0}")]
    Ring(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Schema(_) => 2,
            CliError::Ring(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_ring() {
            CliError::Ring(e.to_string())
        } else {
            CliError::Schema(e.to_string())
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coordinate {
    pub name: String,
    pub kind: ChartKind,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    pub coordinates: Vec<Coordinate>,
}

/// coeff · dx_{i₁}∧…∧dx_{i_p}, 0-based coordinate indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub indices: Vec<usize>,
    pub coeff: String,
}

/// coeff · θ^{k…} ⊗ g_g, 0-based frame indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VTerm {
    pub k: Vec<usize>,
    pub g: usize,
    pub coeff: String,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Check {
    /// MC residual of a deformation, with optional expected intermediate
    /// values.
    Mc {
        id: String,
        deformation: String,
        #[serde(default = "default_true")]
        expect_mc: bool,
        /// F(β)
        #[serde(default)]
        section: Option<Vec<Term>>,
        /// dβ
        #[serde(default)]
        d: Option<Vec<Term>>,
        /// [β,β]_Z
        #[serde(default)]
        binary: Option<Vec<Term>>,
        /// [β,β,β]_Z
        #[serde(default)]
        trinary: Option<Vec<Term>>,
    },
    /// MC ⟺ (d exp_η(β) = 0 and constant rank) at the sample points.
    ExpMap {
        id: String,
        deformation: String,
        #[serde(default)]
        expect_mc: Option<bool>,
    },
    /// L∞[1] relations up to `max_arity` on both sides.
    Linf {
        id: String,
        #[serde(default = "default_arity")]
        max_arity: usize,
        #[serde(default = "default_linf_samples")]
        samples: usize,
    },
    /// Δ_Z² = 0 on the monomial basis.
    Bv { id: String },
    /// Foliation-side checks on a named φ plus seeded property suites.
    Foliation {
        id: String,
        #[serde(default)]
        phi: Option<String>,
        #[serde(default)]
        expect_mc: Option<bool>,
        /// deformation β with q(β) = φ
        #[serde(default)]
        q_of: Option<String>,
        /// l₂(φ,φ)
        #[serde(default)]
        l2: Option<Vec<VTerm>>,
        #[serde(default)]
        samples: usize,
    },
    /// Kr[w] = λ₂(w,w) paired with C_{[a,b]}.
    ObstructionPresym {
        id: String,
        deformation: String,
        a: String,
        b: String,
        #[serde(default)]
        expect: Option<String>,
        #[serde(default)]
        samples: usize,
    },
    /// Kr[φ] = −l₂(φ,φ) paired with N_{a,c}.
    ObstructionFol {
        id: String,
        phi: String,
        a: String,
        c: String,
        #[serde(default)]
        expect_abs: Option<f64>,
        #[serde(default)]
        samples: usize,
    },
}

fn default_arity() -> usize {
    5
}

fn default_linf_samples() -> usize {
    4
}

impl Check {
    pub fn id(&self) -> &str {
        match self {
            Check::Mc { id, .. }
            | Check::ExpMap { id, .. }
            | Check::Linf { id, .. }
            | Check::Bv { id }
            | Check::Foliation { id, .. }
            | Check::ObstructionPresym { id, .. }
            | Check::ObstructionFol { id, .. } => id,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Check::Mc { .. } => "mc",
            Check::ExpMap { .. } => "exp-map",
            Check::Linf { .. } => "linf",
            Check::Bv { .. } => "bv",
            Check::Foliation { .. } => "foliation",
            Check::ObstructionPresym { .. } => "obstruction-presym",
            Check::ObstructionFol { .. } => "obstruction-fol",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub chart: ChartSpec,
    pub eta: Vec<Term>,
    pub k_frame: Vec<BTreeMap<String, String>>,
    pub g_frame: Vec<BTreeMap<String, String>>,
    #[serde(default)]
    pub deformations: BTreeMap<String, Vec<Term>>,
    #[serde(default)]
    pub foliation_deformations: BTreeMap<String, Vec<VTerm>>,
    #[serde(default)]
    pub sample_points: Vec<Vec<String>>,
    #[serde(default)]
    pub checks: Vec<Check>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// A scenario with every expression parsed and the model built.
pub struct Loaded {
    pub scenario: Scenario,
    pub model: PreSymplecticModel,
    pub foliation: Option<FoliationAlgebra>,
    pub deformations: BTreeMap<String, Form>,
    pub foliation_deformations: BTreeMap<String, VectorValuedForm>,
    pub points: Vec<Vec<Q>>,
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

pub fn parse_q(s: &str) -> Result<Q, CliError> {
    s.trim().parse::<Q>().map_err(|_| schema(format!("{s:?} is not a rational number")))
}

fn ring(e: RingError) -> CliError {
    Error::from(e).into()
}

pub fn build_form(ch: &Arc<Chart>, terms: &[Term], what: &str) -> Result<Form, CliError> {
    let degree = terms.first().map_or(0, |t| t.indices.len());
    let mut f = Form::zero(ch, degree);
    for t in terms {
        if t.indices.len() != degree {
            return Err(schema(format!("{what}: mixed degrees")));
        }
        if t.indices.iter().any(|&i| i >= ch.dim()) {
            return Err(schema(format!("{what}: index out of range in {:?}", t.indices)));
        }
        let c = ch.parse(&t.coeff).map_err(|e| schema(format!("{what}: {e}")))?;
        f = &f + &Form::monomial(ch, &t.indices, c);
    }
    Ok(f)
}

fn build_vector(ch: &Arc<Chart>, v: &BTreeMap<String, String>, what: &str) -> Result<MultiVector, CliError> {
    let mut out = MultiVector::zero(ch, 1);
    for (name, expr) in v {
        let i = ch
            .index_of(name)
            .ok_or_else(|| schema(format!("{what}: unknown coordinate {name:?}")))?;
        let c = ch.parse(expr).map_err(|e| schema(format!("{what}: {e}")))?;
        out = &out + &MultiVector::monomial(ch, &[i], c);
    }
    Ok(out)
}

pub fn build_vvf(alg: &FoliationAlgebra, terms: &[VTerm], what: &str) -> Result<VectorValuedForm, CliError> {
    let degree = terms.first().map_or(1, |t| t.k.len());
    let mut out = VectorValuedForm::zero(alg, degree);
    for t in terms {
        if t.k.len() != degree {
            return Err(schema(format!("{what}: mixed degrees")));
        }
        if t.k.iter().any(|&i| i >= alg.k()) || t.g >= alg.g() {
            return Err(schema(format!("{what}: frame index out of range")));
        }
        let c = alg.chart().parse(&t.coeff).map_err(|e| schema(format!("{what}: {e}")))?;
        out = out.add(&VectorValuedForm::monomial(alg, &t.k, t.g, c));
    }
    Ok(out)
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, CliError> {
        serde_json::from_str(text).map_err(|e| schema(e.to_string()))
    }

    pub fn load(self) -> Result<Loaded, CliError> {
        let coords = &self.chart.coordinates;
        let kind = coords.first().map(|c| c.kind).ok_or_else(|| schema("chart has no coordinates"))?;
        if coords.iter().any(|c| c.kind != kind) {
            return Err(schema("all coordinates must share one kind"));
        }
        let chart = Chart::new(coords.iter().map(|c| c.name.clone()), kind).map_err(ring)?;
        let ch = Arc::new(chart);

        let eta = build_form(&ch, &self.eta, "eta")?;
        if eta.degree() != 2 && !eta.is_zero() {
            return Err(schema("eta must be a 2-form"));
        }
        let frame = |vs: &[BTreeMap<String, String>], what: &str| -> Result<Vec<MultiVector>, CliError> {
            vs.iter().map(|v| build_vector(&ch, v, what)).collect()
        };
        let k_frame = frame(&self.k_frame, "k_frame")?;
        let g_frame = frame(&self.g_frame, "g_frame")?;
        let model = PreSymplecticModel::build(eta, k_frame, g_frame).map_err(Error::from)?;
        let foliation = if model.k_dim() > 0 {
            FoliationAlgebra::new(&model).ok()
        } else {
            None
        };

        let mut deformations = BTreeMap::new();
        for (name, terms) in &self.deformations {
            deformations.insert(name.clone(), build_form(&ch, terms, name)?);
        }
        let mut foliation_deformations = BTreeMap::new();
        if !self.foliation_deformations.is_empty() {
            let alg = foliation
                .as_ref()
                .ok_or_else(|| schema("foliation deformations need an involutive nonzero kernel"))?;
            for (name, terms) in &self.foliation_deformations {
                foliation_deformations.insert(name.clone(), build_vvf(alg, terms, name)?);
            }
        }
        let mut points = Vec::new();
        for p in &self.sample_points {
            if p.len() != ch.dim() {
                return Err(schema(format!("sample point {p:?} has the wrong dimension")));
            }
            points.push(p.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>, _>>()?);
        }
        if points.is_empty() {
            points = presym_core::presym::default_points(&model);
        }

        let mut ids = std::collections::BTreeSet::new();
        for c in &self.checks {
            if !ids.insert(c.id().to_string()) {
                return Err(schema(format!("duplicate check id {:?}", c.id())));
            }
            let missing = |name: &str, map_has: bool| -> Result<(), CliError> {
                if map_has {
                    Ok(())
                } else {
                    Err(schema(format!("check {:?} names unknown deformation {name:?}", c.id())))
                }
            };
            match c {
                Check::Mc { deformation, .. }
                | Check::ExpMap { deformation, .. }
                | Check::ObstructionPresym { deformation, .. } => {
                    missing(deformation, deformations.contains_key(deformation))?
                }
                Check::Foliation { phi, q_of, .. } => {
                    if let Some(p) = phi {
                        missing(p, foliation_deformations.contains_key(p))?;
                    }
                    if let Some(b) = q_of {
                        missing(b, deformations.contains_key(b))?;
                    }
                }
                Check::ObstructionFol { phi, .. } => missing(phi, foliation_deformations.contains_key(phi))?,
                Check::Linf { .. } | Check::Bv { .. } => {}
            }
        }

        Ok(Loaded {
            scenario: self,
            model,
            foliation,
            deformations,
            foliation_deformations,
            points,
        })
    }
}

/// The four bundled scenarios.
pub const BUNDLED: [(&str, &str); 4] = [
    ("example-quadratic", include_str!("../scenarios/example-quadratic.json")),
    ("example-cubic", include_str!("../scenarios/example-cubic.json")),
    ("torus-obstruction", include_str!("../scenarios/torus-obstruction.json")),
    (
        "torus-foliation-obstruction",
        include_str!("../scenarios/torus-foliation-obstruction.json"),
    ),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_load() {
        for (name, text) in BUNDLED {
            let l = Scenario::from_json(text).unwrap().load().unwrap();
            assert_eq!(l.scenario.name, name);
            assert_eq!(l.scenario.seed, DEFAULT_SEED);
        }
    }

    #[test]
    fn duplicate_ids_and_unknown_names_are_rejected() {
        let base = r#"{"name": "d", "chart": {"coordinates": [{"name": "x", "kind": "affine"}, {"name": "y", "kind": "affine"}]},
            "eta": [{"indices": [0, 1], "coeff": "1"}], "k_frame": [], "g_frame": [{"x": "1"}, {"y": "1"}],
            "checks": CHECKS}"#;
        let dup = base.replace("CHECKS", r#"[{"kind": "bv", "id": "a"}, {"kind": "bv", "id": "a"}]"#);
        assert!(matches!(Scenario::from_json(&dup).unwrap().load(), Err(CliError::Schema(_))));
        let unknown = base.replace("CHECKS", r#"[{"kind": "mc", "id": "a", "deformation": "nope"}]"#);
        assert!(matches!(Scenario::from_json(&unknown).unwrap().load(), Err(CliError::Schema(_))));
        let kind = base.replace("CHECKS", r#"[{"kind": "bogus", "id": "a"}]"#);
        assert!(Scenario::from_json(&kind).is_err());
    }

    #[test]
    fn mixed_chart_kinds_are_rejected() {
        let text = r#"{"name": "m", "chart": {"coordinates": [{"name": "x", "kind": "affine"}, {"name": "t", "kind": "periodic"}]},
            "eta": [], "k_frame": [], "g_frame": []}"#;
        assert!(matches!(Scenario::from_json(text).unwrap().load(), Err(CliError::Schema(_))));
    }
}
