//! JSON input and output formats.
//!
//! Coxeter system: `{ "generators": ["s","t"], "labels": [[1,3],[3,1]] }`
//! with `"inf"` for the infinite label. Polytope: `{ "dim": d, "facets":
//! [ { "alpha": [...], "v": [...], "name": "..." } ] }`, or `{ "coxeter":
//! <system> }` to request the Tits simplex. Outputs carry
//! `"schema": "cvk/1"`.

use crate::coxsys::{CoxeterSystem, Label};
use crate::polytope::{Facet, MirrorPolytope, PolytopeError};
use nalgebra::DVector;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA: &str = "cvk/1";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Finite(m) => serializer.serialize_u32(*m),
            Label::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LabelVisitor;
        impl Visitor<'_> for LabelVisitor {
            type Value = Label;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a positive integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Label, E> {
                u32::try_from(v)
                    .map(Label::Finite)
                    .map_err(|_| E::custom("label out of range"))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Label, E> {
                if v < 0 {
                    return Err(E::custom("label must be positive"));
                }
                self.visit_u64(v as u64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Label, E> {
                match v {
                    "inf" | "infinity" | "∞" => Ok(Label::Infinite),
                    other => Err(E::custom(format!("unknown label {other:?}"))),
                }
            }
        }
        deserializer.deserialize_any(LabelVisitor)
    }
}

#[derive(Serialize, Deserialize)]
pub struct SystemJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub generators: Vec<String>,
    pub labels: Vec<Vec<Label>>,
}

#[derive(Serialize, Deserialize)]
pub struct FacetJson {
    pub name: String,
    pub alpha: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
pub struct PolytopeJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub dim: usize,
    pub facets: Vec<FacetJson>,
}

#[derive(Deserialize)]
struct CoxeterWrapper {
    coxeter: SystemJson,
}

/// Either input format.
pub enum Input {
    Polytope(MirrorPolytope),
    System(CoxeterSystem),
}

impl Input {
    /// The polytope to operate on: systems are realized as Tits simplices.
    pub fn into_polytope(self) -> MirrorPolytope {
        match self {
            Input::Polytope(p) => p,
            Input::System(sys) => MirrorPolytope::tits_simplex(&sys),
        }
    }
}

pub fn system_from_json(json: &SystemJson) -> Result<CoxeterSystem, IoError> {
    CoxeterSystem::new(json.generators.clone(), json.labels.clone())
        .map_err(|e| IoError::Validation(e.to_string()))
}

pub fn polytope_from_json(json: &PolytopeJson) -> Result<MirrorPolytope, IoError> {
    let n = json.dim + 1;
    let mut facets = Vec::new();
    for f in &json.facets {
        if f.alpha.len() != n || f.v.len() != n {
            return Err(IoError::Validation(format!(
                "facet {}: alpha and v must have length dim+1 = {n}",
                f.name
            )));
        }
        facets.push(Facet::new(
            f.name.clone(),
            DVector::from_column_slice(&f.alpha),
            DVector::from_column_slice(&f.v),
        ));
    }
    MirrorPolytope::build(json.dim, facets).map_err(|e: PolytopeError| IoError::Validation(e.to_string()))
}

/// Parses either a polytope, a `{"coxeter": …}` wrapper, or a bare system.
pub fn parse_input(text: &str) -> Result<Input, IoError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
    if value.get("facets").is_some() {
        let json: PolytopeJson =
            serde_json::from_value(value).map_err(|e| IoError::Parse(e.to_string()))?;
        return Ok(Input::Polytope(polytope_from_json(&json)?));
    }
    if value.get("coxeter").is_some() {
        let json: CoxeterWrapper =
            serde_json::from_value(value).map_err(|e| IoError::Parse(e.to_string()))?;
        return Ok(Input::System(system_from_json(&json.coxeter)?));
    }
    if value.get("labels").is_some() {
        let json: SystemJson =
            serde_json::from_value(value).map_err(|e| IoError::Parse(e.to_string()))?;
        return Ok(Input::System(system_from_json(&json)?));
    }
    Err(IoError::Parse(
        "input must contain \"facets\", \"coxeter\" or \"labels\"".into(),
    ))
}

pub fn system_to_json(sys: &CoxeterSystem) -> SystemJson {
    SystemJson {
        schema: Some(SCHEMA.into()),
        generators: sys.generators().to_vec(),
        labels: sys.labels().to_vec(),
    }
}

pub fn polytope_to_json(p: &MirrorPolytope) -> PolytopeJson {
    PolytopeJson {
        schema: Some(SCHEMA.into()),
        dim: p.dim(),
        facets: p
            .facets()
            .iter()
            .map(|f| FacetJson {
                name: f.name.clone(),
                alpha: f.alpha.iter().copied().collect(),
                v: f.v.iter().copied().collect(),
            })
            .collect(),
    }
}
