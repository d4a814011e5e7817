//! Inference diffs between two evidence sets and the symmetric-KL relevance
//! ranking built on them.

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inference::{posterior_all, InferenceError};
use crate::model::{BayesianNetwork, Distribution, EvidenceSet, VarId};

/// Lower clamp applied to the second argument of [`kl`].
pub const KL_FLOOR: f64 = 1e-12;

/// Which of the two evidence sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "1")]
    First,
    #[serde(rename = "2")]
    Second,
}

impl Side {
    pub fn number(self) -> u8 {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "evidence set {}", self.number())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiffError {
    #[error("{side}: {source}")]
    Inference { side: Side, source: InferenceError },
    #[error("distributions are over different event spaces ({0:?} vs {1:?})")]
    SpaceMismatch(String, String),
    #[error("threshold {0} is outside [0, 100]")]
    Threshold(f64),
}

/// Per-variable posterior pairs under evidence sets E1 and E2.
#[derive(Clone, Debug, PartialEq)]
pub struct InferenceDiff {
    pub e1: EvidenceSet,
    pub e2: EvidenceSet,
    pub pairs: Vec<(Distribution, Distribution)>,
}

impl InferenceDiff {
    pub fn pair(&self, var: VarId) -> &(Distribution, Distribution) {
        &self.pairs[var.0]
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Observed in at least one of the two sets.
    pub fn is_evidence(&self, var: VarId) -> bool {
        self.e1.is_observed(var) || self.e2.is_observed(var)
    }

    pub fn swapped(&self) -> InferenceDiff {
        InferenceDiff {
            e1: self.e2.clone(),
            e2: self.e1.clone(),
            pairs: self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }
}

pub fn inference_diff(net: &BayesianNetwork, e1: &EvidenceSet, e2: &EvidenceSet) -> Result<InferenceDiff, DiffError> {
    let first = posterior_all(net, e1).map_err(|source| DiffError::Inference {
        side: Side::First,
        source,
    })?;
    let second = if e1 == e2 {
        first.clone()
    } else {
        posterior_all(net, e2).map_err(|source| DiffError::Inference {
            side: Side::Second,
            source,
        })?
    };
    Ok(InferenceDiff {
        e1: e1.clone(),
        e2: e2.clone(),
        pairs: first.posteriors.into_iter().zip(second.posteriors).collect(),
    })
}

fn check_spaces(p: &Distribution, q: &Distribution) -> Result<(), DiffError> {
    if p.space() != q.space() {
        return Err(DiffError::SpaceMismatch(p.space().id.clone(), q.space().id.clone()));
    }
    Ok(())
}

/// Kullback-Leibler divergence Σ p(i)·ln(p(i)/q(i)).
///
/// Terms with p(i) = 0 vanish, equal entries contribute exactly 0, and q is
/// clamped below at [`KL_FLOOR`] so the result stays finite.
pub fn kl(p: &Distribution, q: &Distribution) -> Result<f64, DiffError> {
    check_spaces(p, q)?;
    let sum: f64 = p
        .masses()
        .iter()
        .zip(q.masses())
        .map(|(&pi, &qi)| {
            if pi == 0.0 || pi == qi {
                0.0
            } else {
                pi * (pi / qi.max(KL_FLOOR)).ln()
            }
        })
        .sum();
    Ok(sum.max(0.0))
}

/// Symmetric KL divergence kl(p, q) + kl(q, p).
pub fn relevance(p: &Distribution, q: &Distribution) -> Result<f64, DiffError> {
    Ok(kl(p, q)? + kl(q, p)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RankEntry {
    pub var: VarId,
    pub score: f64,
}

/// Variables not observed in either evidence set, by descending relevance
/// (ties by ascending index). Observed variables are listed separately.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RelevanceRanking {
    pub entries: Vec<RankEntry>,
    pub eligible_count: usize,
    pub evidence: Vec<VarId>,
}

impl RelevanceRanking {
    pub fn order(&self) -> impl Iterator<Item = VarId> + '_ {
        self.entries.iter().map(|e| e.var)
    }
}

pub fn rank(diff: &InferenceDiff) -> RelevanceRanking {
    let mut entries = Vec::new();
    let mut evidence = Vec::new();
    for (i, (p, q)) in diff.pairs.iter().enumerate() {
        let var = VarId(i);
        if diff.is_evidence(var) {
            evidence.push(var);
            continue;
        }
        let score = relevance(p, q).expect("diff pairs share their variable's space");
        entries.push(RankEntry { var, score });
    }
    entries.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.var.cmp(&b.var)));
    RelevanceRanking {
        eligible_count: entries.len(),
        entries,
        evidence,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FilterConfig {
    threshold_percent: f64,
}

impl FilterConfig {
    pub fn new(threshold_percent: f64) -> Result<Self, DiffError> {
        if !(0.0..=100.0).contains(&threshold_percent) {
            return Err(DiffError::Threshold(threshold_percent));
        }
        Ok(FilterConfig { threshold_percent })
    }

    pub fn percent(&self) -> f64 {
        self.threshold_percent
    }

    /// floor(c/100 · eligible)
    pub fn keep_count(&self, eligible: usize) -> usize {
        // integer percent thresholds are computed exactly
        if self.threshold_percent.fract() == 0.0 {
            return self.threshold_percent as usize * eligible / 100;
        }
        ((self.threshold_percent / 100.0) * eligible as f64).floor() as usize
    }
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            threshold_percent: 100.0,
        }
    }
}

/// Outcome of relevance filtering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelevantSet {
    /// Top-ranked variables, in ranking order.
    pub top: Vec<VarId>,
    pub evidence: Vec<VarId>,
    pub retained: BTreeSet<VarId>,
}

impl RelevantSet {
    pub fn contains(&self, var: VarId) -> bool {
        self.retained.contains(&var)
    }
}

/// The first floor(c% · eligible) ranking entries, plus every evidence variable.
pub fn filter_top(ranking: &RelevanceRanking, config: &FilterConfig) -> RelevantSet {
    let k = config.keep_count(ranking.eligible_count).min(ranking.entries.len());
    let top: Vec<VarId> = ranking.entries[..k].iter().map(|e| e.var).collect();
    let retained = top.iter().chain(&ranking.evidence).copied().collect();
    RelevantSet {
        top,
        evidence: ranking.evidence.clone(),
        retained,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariableDiff {
    pub name: String,
    pub p1: Vec<f64>,
    pub p2: Vec<f64>,
    pub relevance: f64,
}

/// Exported diff, optionally with the ranking and the filtered set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiffReport {
    pub e1: IndexMap<String, String>,
    pub e2: IndexMap<String, String>,
    pub per_variable: Vec<VariableDiff>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retained: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

impl DiffReport {
    pub fn new(net: &BayesianNetwork, diff: &InferenceDiff) -> Self {
        DiffReport {
            e1: diff.e1.to_named(net),
            e2: diff.e2.to_named(net),
            per_variable: net
                .variables()
                .iter()
                .zip(&diff.pairs)
                .map(|(v, (p, q))| VariableDiff {
                    name: v.name.clone(),
                    p1: p.masses().to_vec(),
                    p2: q.masses().to_vec(),
                    relevance: relevance(p, q).expect("diff pairs share their variable's space"),
                })
                .collect(),
            ranking: None,
            retained: None,
            threshold: None,
        }
    }

    pub fn with_filter(
        mut self,
        net: &BayesianNetwork,
        ranking: &RelevanceRanking,
        relevant: &RelevantSet,
        config: &FilterConfig,
    ) -> Self {
        let name = |v: &VarId| net.variable(*v).name.clone();
        self.ranking = Some(ranking.order().map(|v| name(&v)).collect());
        self.retained = Some(relevant.retained.iter().map(name).collect());
        self.threshold = Some(config.percent());
        self
    }
}
