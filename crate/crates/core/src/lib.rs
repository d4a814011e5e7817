//! Inference diffs for discrete Bayesian networks: posteriors under two
//! evidence sets, symmetric-KL relevance ranking, relevance filtering, and a
//! layered glyph view that renders to SVG.

pub mod diff;
pub mod fixtures;
pub mod inference;
pub mod layout;
pub mod learning;
pub mod model;
pub mod synth;
pub mod view;

pub use model::{BayesianNetwork, Distribution, EventSpace, EvidenceSet, VarId};
