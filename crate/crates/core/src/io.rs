//! The JSON input document: a lattice (preset or explicit Gram matrix plus
//! canonical class) and a vertex list. One text format for everything.
//!
//! ```json
//! {
//!   "lattice": {"preset": "cp2_blowup", "k": 5},
//!   "vertices": [{"class": [1, -1, -1, -1, 0, 0], "mult": 2}]
//! }
//! ```
//!
//! Explicit form: `{"lattice": {"gram": [[1]], "canonical": [-3]}, ...}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, CurveConfiguration, Vertex};
use crate::lattice::{HomologyClass, IntersectionLattice, LatticeError};
use crate::Coefficient;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed input at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("vertex {index} has multiplicity {mult}; multiplicities must be ≥ 1")]
    NonPositiveMultiplicity { index: usize, mult: Coefficient },
    #[error("vertex {index}: {source}")]
    BadVertex {
        index: usize,
        #[source]
        source: ConfigError,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PresetKind {
    Cp2Blowup,
    RuledBlowup,
}

impl PresetKind {
    pub fn build(self, k: usize) -> IntersectionLattice<Coefficient> {
        match self {
            PresetKind::Cp2Blowup => IntersectionLattice::cp2_blowup(k),
            PresetKind::RuledBlowup => IntersectionLattice::ruled_blowup(k),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "cp2_blowup" => Some(PresetKind::Cp2Blowup),
            "ruled_blowup" => Some(PresetKind::RuledBlowup),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    Preset { preset: PresetKind, k: usize },
    Explicit {
        gram: Vec<Vec<Coefficient>>,
        canonical: Vec<Coefficient>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub class: Vec<Coefficient>,
    pub mult: Coefficient,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDocument {
    pub lattice: LatticeSpec,
    pub vertices: Vec<VertexSpec>,
}

impl InputDocument {
    /// Builds the lattice and configuration this document describes.
    pub fn build(
        &self,
    ) -> Result<(Arc<IntersectionLattice<Coefficient>>, CurveConfiguration<Coefficient>), ParseError>
    {
        let lattice = match &self.lattice {
            LatticeSpec::Preset { preset, k } => preset.clone().build(*k),
            LatticeSpec::Explicit { gram, canonical } => {
                IntersectionLattice::new(gram.clone(), HomologyClass::new(canonical.clone()))?
            }
        };
        let lattice = Arc::new(lattice);
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (index, v) in self.vertices.iter().enumerate() {
            if v.mult < 1 {
                return Err(ParseError::NonPositiveMultiplicity {
                    index,
                    mult: v.mult,
                });
            }
            if v.class.len() != lattice.rank() {
                return Err(ParseError::BadVertex {
                    index,
                    source: ConfigError::VertexDimension {
                        index,
                        expected: lattice.rank(),
                        got: v.class.len(),
                    },
                });
            }
            vertices.push(Vertex::new(HomologyClass::new(v.class.clone()), v.mult));
        }
        let config = CurveConfiguration::new(Arc::clone(&lattice), vertices)?;
        Ok((lattice, config))
    }

    /// Document for an existing configuration, in explicit lattice form and
    /// canonical vertex order.
    pub fn from_config(cfg: &CurveConfiguration<Coefficient>) -> Self {
        InputDocument {
            lattice: LatticeSpec::Explicit {
                gram: cfg.lattice().gram().to_vec(),
                canonical: cfg.lattice().canonical().coeffs().to_vec(),
            },
            vertices: cfg
                .vertices()
                .iter()
                .map(|v| VertexSpec {
                    class: v.class.coeffs().to_vec(),
                    mult: v.mult,
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

/// Parses a UTF-8 JSON input document, with line/column diagnostics on
/// syntax errors.
pub fn parse_input(bytes: &[u8]) -> Result<InputDocument, ParseError> {
    serde_json::from_slice(bytes).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CREMONA: &str = r#"{
        "lattice": {"preset": "cp2_blowup", "k": 5},
        "vertices": [
            {"class": [1, -1, -1, -1, 0, 0], "mult": 2},
            {"class": [1, -1, 0, 0, -1, -1], "mult": 2},
            {"class": [0, 1, 0, 0, 0, 0], "mult": 4},
            {"class": [2, 0, -1, -1, -1, 0], "mult": 1}
        ]
    }"#;

    #[test]
    fn parses_the_cremona_document() {
        let doc = parse_input(CREMONA.as_bytes()).unwrap();
        let (_, cfg) = doc.build().unwrap();
        assert_eq!(
            cfg.total_class().coeffs(),
            &[6, 0, -3, -3, -3, -2]
        );
    }

    #[test]
    fn round_trip_preserves_semantics() {
        let doc = parse_input(CREMONA.as_bytes()).unwrap();
        let (_, cfg) = doc.build().unwrap();
        let echoed = InputDocument::from_config(&cfg);
        let (_, cfg2) = echoed.build().unwrap();
        assert_eq!(cfg, cfg2);
        // And the serialized form parses back to the same document.
        let reparsed = parse_input(echoed.to_json().as_bytes()).unwrap();
        assert_eq!(reparsed, echoed);
    }

    #[test]
    fn rejects_asymmetric_gram() {
        let doc = r#"{"lattice": {"gram": [[1, 2], [0, 1]], "canonical": [1, 0]},
                      "vertices": [{"class": [1, 0], "mult": 1}]}"#;
        let parsed = parse_input(doc.as_bytes()).unwrap();
        let err = parsed.build().unwrap_err();
        assert!(matches!(
            err,
            ParseError::Lattice(LatticeError::AsymmetricGram { i: 0, j: 1 })
        ));
    }

    #[test]
    fn rejects_non_characteristic_canonical() {
        // K = 2H on CP²: 2H·H = 2 ≢ 1 (mod 2).
        let doc = r#"{"lattice": {"gram": [[1]], "canonical": [2]},
                      "vertices": [{"class": [1], "mult": 1}]}"#;
        let parsed = parse_input(doc.as_bytes()).unwrap();
        assert!(matches!(
            parsed.build().unwrap_err(),
            ParseError::Lattice(LatticeError::NotCharacteristic { index: 0 })
        ));
    }

    #[test]
    fn rejects_non_positive_multiplicity() {
        let doc = r#"{"lattice": {"preset": "cp2_blowup", "k": 0},
                      "vertices": [{"class": [1], "mult": 0}]}"#;
        let parsed = parse_input(doc.as_bytes()).unwrap();
        assert!(matches!(
            parsed.build().unwrap_err(),
            ParseError::NonPositiveMultiplicity { index: 0, mult: 0 }
        ));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_input(b"{\n  \"lattice\": }").unwrap_err();
        match err {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let doc = r#"{"lattice": {"preset": "cp2_blowup", "k": 1},
                      "vertices": [{"class": [1], "mult": 1}]}"#;
        let parsed = parse_input(doc.as_bytes()).unwrap();
        assert!(matches!(
            parsed.build().unwrap_err(),
            ParseError::BadVertex { index: 0, .. }
        ));
    }
}
