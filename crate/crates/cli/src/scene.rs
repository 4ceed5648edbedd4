//! JSON scene files.

use std::collections::BTreeMap;
use std::path::Path;

use dicrit_core::invariants::{Location, ReducedData, ReducedRecord};
use dicrit_core::pencil::PencilData;
use dicrit_core::{BlowUpProgram, BranchAttachment, Exact, HypothesisLedger};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SceneKind {
    Combinatorial,
    Polynomial,
    Pencil,
}

/// A regression value: the report entry `name` must render exactly as `value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(with = "loose_string")]
    pub value: String,
    /// Where the value comes from: `literature`, `derived` or `elementary`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    /// Set on scenes emitted by `resolve`, naming what they were derived from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub expected: BTreeMap<String, Expected>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorEntry {
    pub branch: String,
    pub coefficient: i64,
}

/// Location of a reduced point with 1-based component indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum SceneLocation {
    Attachment { branch: String, component: usize },
    Corner { first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedEntry {
    #[serde(flatten)]
    pub location: SceneLocation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cs: Option<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bb: Option<Exact>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen_ratio: Option<Exact>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialStanza {
    pub f: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_extension_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub kind: SceneKind,
    #[serde(default)]
    pub metadata: Metadata,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowups: Option<BlowUpProgram>,
    /// One entry per component: 1 invariant, 0 dicritical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariant: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<BranchAttachment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor: Option<Vec<DivisorEntry>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reduced: Vec<ReducedEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypotheses: Option<HypothesisLedger>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pencil: Option<PencilData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<PolynomialStanza>,
}

impl Scene {
    pub fn new(kind: SceneKind, name: impl Into<String>) -> Self {
        Scene {
            kind,
            metadata: Metadata { name: name.into(), ..Metadata::default() },
            blowups: None,
            invariant: None,
            branches: Vec::new(),
            divisor: None,
            reduced: Vec::new(),
            hypotheses: None,
            pencil: None,
            polynomial: None,
        }
    }

    pub fn load(path: &Path) -> Result<Scene> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Scene> {
        let scene: Scene = serde_json::from_str(text)
            .map_err(|e| CliError::SceneParse { path: origin.to_string(), message: e.to_string() })?;
        scene.validate().map_err(|message| CliError::SceneParse { path: origin.to_string(), message })?;
        Ok(scene)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenes serialize")
    }

    pub fn name(&self) -> &str {
        &self.metadata.name
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let need = |present: bool, stanza: &str| {
            if present {
                Ok(())
            } else {
                Err(format!("a {:?} scene needs a `{stanza}` stanza", self.kind).to_lowercase())
            }
        };
        match self.kind {
            SceneKind::Combinatorial => need(self.blowups.is_some(), "blowups"),
            SceneKind::Pencil => {
                need(self.blowups.is_some(), "blowups")?;
                need(self.invariant.is_some(), "invariant")?;
                need(self.pencil.is_some(), "pencil")
            }
            SceneKind::Polynomial => need(self.polynomial.is_some(), "polynomial"),
        }
    }

    pub fn program(&self) -> Result<&BlowUpProgram> {
        self.blowups.as_ref().ok_or_else(|| CliError::Input("missing `blowups` stanza".into()))
    }

    /// The marking; every component is invariant when the stanza is absent.
    pub fn iota(&self) -> Result<Vec<u8>> {
        let n = self.program()?.len();
        let iota = self.invariant.clone().unwrap_or_else(|| vec![1; n]);
        if iota.len() != n {
            return Err(CliError::Input(format!("`invariant` has {} entries for {n} components", iota.len())));
        }
        Ok(iota)
    }

    /// Reduced-point data with 0-based component indices.
    pub fn reduced_data(&self) -> Result<Option<ReducedData>> {
        if self.reduced.is_empty() {
            return Ok(None);
        }
        let n = self.program()?.len();
        let idx = |c: usize| {
            if c == 0 || c > n {
                Err(CliError::Input(format!("`reduced`: component {c} out of range 1..={n}")))
            } else {
                Ok(c - 1)
            }
        };
        let mut records = Vec::new();
        for r in &self.reduced {
            let location = match &r.location {
                SceneLocation::Attachment { branch, component } => {
                    Location::Attachment { branch: branch.clone(), component: idx(*component)? }
                }
                SceneLocation::Corner { first, second } => Location::Corner { first: idx(*first)?, second: idx(*second)? },
            };
            records.push(ReducedRecord {
                location,
                cs: r.cs.clone(),
                var: r.var.clone(),
                bb: r.bb.clone(),
                eigen_ratio: r.eigen_ratio.clone(),
            });
        }
        Ok(Some(ReducedData { records }))
    }
}

/// Accepts a JSON string or number, stored as its decimal text.
mod loose_string {
    use serde::{Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &str, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<String, D::Error> {
        Ok(match Raw::deserialize(d)? {
            Raw::Int(n) => n.to_string(),
            Raw::Str(s) => s,
        })
    }
}
