//! The network document: a single JSON text holding spaces, variables,
//! edges and CPTs, with names as the only cross-references.

use std::collections::HashMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::network::{BayesianNetwork, CptDecl, NetworkParts, VariableDecl};
use super::space::EventSpace;
use super::validate::ValidationReport;
use super::ModelError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub version: u32,
    pub spaces: Vec<EventSpace>,
    pub variables: Vec<VariableEntry>,
    pub edges: Vec<(String, String)>,
    pub cpts: IndexMap<String, CptEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableEntry {
    pub name: String,
    pub space: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CptEntry {
    pub parents: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unsupported document version {0}")]
    Version(u32),
    #[error("unknown {kind} reference {name:?}")]
    UnknownReference { kind: &'static str, name: String },
    #[error("variable name {0:?} is declared more than once")]
    DuplicateName(String),
    #[error("no CPT given for variable {0:?}")]
    MissingCpt(String),
    #[error("CPT of {variable:?} has {found} rows, expected {expected}")]
    RowCount {
        variable: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid network: {0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Model(ModelError),
}

impl From<ModelError> for ParseError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Invalid(report) => ParseError::Invalid(report),
            other => ParseError::Model(other),
        }
    }
}

impl NetworkDocument {
    pub fn from_network(net: &BayesianNetwork) -> Self {
        let name = |id: super::VarId| net.variable(id).name.clone();
        NetworkDocument {
            version: FORMAT_VERSION,
            spaces: net.spaces().iter().map(|s| (**s).clone()).collect(),
            variables: net
                .variables()
                .iter()
                .map(|v| VariableEntry {
                    name: v.name.clone(),
                    space: v.space.id.clone(),
                })
                .collect(),
            edges: net.edges().map(|(p, c)| (name(p), name(c))).collect(),
            cpts: net
                .cpts()
                .iter()
                .map(|c| {
                    (
                        name(c.variable),
                        CptEntry {
                            parents: c.parents.iter().map(|&p| name(p)).collect(),
                            rows: c.rows().to_vec(),
                        },
                    )
                })
                .collect(),
        }
    }

    pub fn into_network(self) -> Result<BayesianNetwork, ParseError> {
        if self.version != FORMAT_VERSION {
            return Err(ParseError::Version(self.version));
        }

        let space_ids: HashMap<&str, usize> = self
            .spaces
            .iter()
            .enumerate()
            .map(|(i, s)| (s.id.as_str(), i))
            .collect();
        let mut var_ids: HashMap<&str, usize> = HashMap::new();
        let mut variables = Vec::with_capacity(self.variables.len());
        for (i, v) in self.variables.iter().enumerate() {
            if var_ids.insert(v.name.as_str(), i).is_some() {
                return Err(ParseError::DuplicateName(v.name.clone()));
            }
            let space = *space_ids
                .get(v.space.as_str())
                .ok_or_else(|| ParseError::UnknownReference {
                    kind: "space",
                    name: v.space.clone(),
                })?;
            variables.push(VariableDecl {
                name: v.name.clone(),
                space,
            });
        }
        let resolve = |kind: &'static str, name: &str| {
            var_ids
                .get(name)
                .copied()
                .ok_or_else(|| ParseError::UnknownReference {
                    kind,
                    name: name.to_owned(),
                })
        };

        let edges = self
            .edges
            .iter()
            .map(|(p, c)| Ok((resolve("parent", p)?, resolve("variable", c)?)))
            .collect::<Result<Vec<_>, ParseError>>()?;

        for key in self.cpts.keys() {
            resolve("variable", key)?;
        }
        let mut cpts = Vec::with_capacity(variables.len());
        for decl in &variables {
            let entry = self
                .cpts
                .get(&decl.name)
                .ok_or_else(|| ParseError::MissingCpt(decl.name.clone()))?;
            let parents = entry
                .parents
                .iter()
                .map(|p| resolve("parent", p))
                .collect::<Result<Vec<_>, _>>()?;
            let expected: usize = parents
                .iter()
                .map(|&p| self.spaces[variables[p].space].len())
                .product();
            if entry.rows.len() != expected {
                return Err(ParseError::RowCount {
                    variable: decl.name.clone(),
                    expected,
                    found: entry.rows.len(),
                });
            }
            cpts.push(Some(CptDecl {
                parents,
                rows: entry.rows.clone(),
            }));
        }

        Ok(BayesianNetwork::from_parts(NetworkParts {
            spaces: self.spaces,
            variables,
            edges,
            cpts,
        })?)
    }
}

/// Parses a network document and validates the result.
pub fn parse_network(text: &str) -> Result<BayesianNetwork, ParseError> {
    let doc: NetworkDocument = serde_json::from_str(text)?;
    doc.into_network()
}

/// Canonical document text: pretty-printed JSON with a trailing newline.
pub fn serialize_network(net: &BayesianNetwork) -> String {
    let mut text = serde_json::to_string_pretty(&NetworkDocument::from_network(net))
        .expect("network documents always serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{asia4, two_var};

    #[test]
    fn round_trip_is_identity() {
        for net in [asia4(), two_var()] {
            let text = serialize_network(&net);
            let parsed = parse_network(&text).unwrap();
            assert_eq!(parsed, net);
            assert_eq!(serialize_network(&parsed), text);
        }
    }

    #[test]
    fn canonical_field_order() {
        let text = serialize_network(&two_var());
        let positions: Vec<usize> = ["\"version\"", "\"spaces\"", "\"variables\"", "\"edges\"", "\"cpts\""]
            .iter()
            .map(|k| text.find(k).unwrap())
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }

    const TWO_PARENTS: &str = r#"{
      "version": 1,
      "spaces": [{"id": "bool", "kind": "categorical", "values": ["t", "f"]}],
      "variables": [{"name": "A", "space": "bool"}, {"name": "B", "space": "bool"}, {"name": "C", "space": "bool"}],
      "edges": [["A", "C"], ["B", "C"]],
      "cpts": {
        "A": {"parents": [], "rows": [[0.5, 0.5]]},
        "B": {"parents": [], "rows": [[0.5, 0.5]]},
        "C": {"parents": ["A", "B"], "rows": [[0.1, 0.9], [0.2, 0.8], [0.3, 0.7]]}
      }
    }"#;

    #[test]
    fn missing_rows_are_reported() {
        match parse_network(TWO_PARENTS) {
            Err(ParseError::RowCount {
                variable,
                expected: 4,
                found: 3,
            }) => assert_eq!(variable, "C"),
            other => panic!("expected row-count error, got {other:?}"),
        }
        let fixed = TWO_PARENTS.replace("[0.3, 0.7]]", "[0.3, 0.7], [0.4, 0.6]]");
        assert!(parse_network(&fixed).is_ok());
        let extra = TWO_PARENTS.replace("[0.3, 0.7]]", "[0.3, 0.7], [0.4, 0.6], [0.5, 0.5]]");
        assert!(matches!(parse_network(&extra), Err(ParseError::RowCount { found: 5, .. })));
    }

    #[test]
    fn unknown_parent_is_reported() {
        let text = TWO_PARENTS.replace(r#"["B", "C"]"#, r#"["Q", "C"]"#);
        match parse_network(&text) {
            Err(ParseError::UnknownReference { name, .. }) => assert_eq!(name, "Q"),
            other => panic!("expected unknown reference, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_names_and_syntax_errors() {
        let dup = TWO_PARENTS.replace(r#"{"name": "B""#, r#"{"name": "A""#);
        assert!(matches!(parse_network(&dup), Err(ParseError::DuplicateName(n)) if n == "A"));
        assert!(matches!(parse_network("{\"version\": 1,"), Err(ParseError::Syntax(_))));
        let v2 = TWO_PARENTS.replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(parse_network(&v2), Err(ParseError::Version(2))));
    }

    #[test]
    fn invalid_probabilities_surface_the_report() {
        let text = TWO_PARENTS
            .replace("[0.3, 0.7]]", "[0.3, 0.7], [0.4, 0.6]]")
            .replace("[0.1, 0.9]", "[0.5, 0.4]");
        match parse_network(&text) {
            Err(ParseError::Invalid(report)) => assert_eq!(report.len(), 1),
            other => panic!("expected validation failure, got {other:?}"),
        }
    }
}
