//! Immutable data model for discrete Bayesian networks.

mod abbrev;
mod document;
mod evidence;
mod network;
mod space;
mod validate;

use thiserror::Error;

pub use abbrev::{abbreviate, Abbreviation};
pub use document::{
    parse_network, serialize_network, CptEntry, NetworkDocument, ParseError, VariableEntry,
    FORMAT_VERSION,
};
pub use evidence::{Distribution, EvidenceSet};
pub use network::{
    decode_mixed_radix, mixed_radix_index, row_index, BayesianNetwork, Cpt, CptDecl, NetworkParts,
    VarId, Variable, VariableDecl,
};
pub use space::{EventSpace, SpaceKind};
pub use validate::{validate_network, ValidationReport, Violation, PROBABILITY_TOLERANCE};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid variable name {name:?}: {reason}")]
    InvalidName { name: String, reason: &'static str },
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("value {value:?} is not in the event space of {variable:?}")]
    ValueNotInSpace { variable: String, value: String },
    #[error("ordinal {ordinal} is out of range for a space of {size} values")]
    OrdinalOutOfRange { ordinal: usize, size: usize },
    #[error("expected {expected} values, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("bad distribution: {0}")]
    BadDistribution(String),
    #[error("network failed validation: {0}")]
    Invalid(ValidationReport),
}
