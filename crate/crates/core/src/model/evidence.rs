use std::sync::Arc;

use indexmap::IndexMap;

use super::network::{BayesianNetwork, VarId};
use super::space::EventSpace;
use super::validate::PROBABILITY_TOLERANCE;
use super::ModelError;

/// A partial observation: one slot per variable, `None` for unobserved ('?').
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EvidenceSet {
    slots: Vec<Option<usize>>,
}

impl EvidenceSet {
    /// All slots unobserved.
    pub fn empty(n: usize) -> Self {
        EvidenceSet {
            slots: vec![None; n],
        }
    }

    /// Builds from ordinal slots, checking each against the variable's space.
    pub fn from_slots(net: &BayesianNetwork, slots: Vec<Option<usize>>) -> Result<Self, ModelError> {
        if slots.len() != net.len() {
            return Err(ModelError::ArityMismatch {
                expected: net.len(),
                found: slots.len(),
            });
        }
        for (var, slot) in net.variables().iter().zip(&slots) {
            if let Some(o) = *slot {
                if o >= var.cardinality() {
                    return Err(ModelError::OrdinalOutOfRange {
                        ordinal: o,
                        size: var.cardinality(),
                    });
                }
            }
        }
        Ok(EvidenceSet { slots })
    }

    /// Builds from (variable name, value name) pairs; unnamed variables stay '?'.
    pub fn from_named<K, V, I>(net: &BayesianNetwork, pairs: I) -> Result<Self, ModelError>
    where
        K: AsRef<str>,
        V: AsRef<str>,
        I: IntoIterator<Item = (K, V)>,
    {
        let mut evidence = EvidenceSet::empty(net.len());
        for (name, value) in pairs {
            let var = net.lookup(name.as_ref())?;
            let ordinal = var
                .space
                .ordinal(value.as_ref())
                .ok_or_else(|| ModelError::ValueNotInSpace {
                    variable: var.name.clone(),
                    value: value.as_ref().to_owned(),
                })?;
            evidence.slots[var.id.0] = Some(ordinal);
        }
        Ok(evidence)
    }

    /// Observed slots as a name → value map, in variable order.
    pub fn to_named(&self, net: &BayesianNetwork) -> IndexMap<String, String> {
        self.observed()
            .map(|(id, o)| {
                let var = net.variable(id);
                (var.name.clone(), var.space.values[o].clone())
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn get(&self, var: VarId) -> Option<usize> {
        self.slots[var.0]
    }

    pub fn is_observed(&self, var: VarId) -> bool {
        self.slots[var.0].is_some()
    }

    pub fn slots(&self) -> &[Option<usize>] {
        &self.slots
    }

    pub fn observed(&self) -> impl Iterator<Item = (VarId, usize)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|o| (VarId(i), o)))
    }

    pub fn observed_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    /// Sets or clears one slot. Panics if the ordinal is outside `0..size`
    /// when a network is not at hand to check it.
    pub fn with(mut self, var: VarId, value: Option<usize>) -> Self {
        self.slots[var.0] = value;
        self
    }
}

/// A probability vector aligned with an event space's value order.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    space: Arc<EventSpace>,
    masses: Vec<f64>,
}

impl Distribution {
    pub fn new(space: Arc<EventSpace>, masses: Vec<f64>) -> Result<Self, ModelError> {
        if masses.len() != space.len() {
            return Err(ModelError::BadDistribution(format!(
                "{} masses for a space of {} values",
                masses.len(),
                space.len()
            )));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(ModelError::BadDistribution(format!(
                "masses must be finite and nonnegative: {masses:?}"
            )));
        }
        let sum: f64 = masses.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(ModelError::BadDistribution(format!("masses sum to {sum}")));
        }
        Ok(Distribution { space, masses })
    }

    /// Rescales nonnegative weights to sum to one. `None` if they sum to zero.
    pub fn normalized(space: Arc<EventSpace>, weights: Vec<f64>) -> Option<Self> {
        debug_assert_eq!(weights.len(), space.len());
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return None;
        }
        Some(Distribution {
            space,
            masses: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn point_mass(space: Arc<EventSpace>, ordinal: usize) -> Self {
        let mut masses = vec![0.0; space.len()];
        masses[ordinal] = 1.0;
        Distribution { space, masses }
    }

    pub fn uniform(space: Arc<EventSpace>) -> Self {
        let k = space.len();
        Distribution {
            masses: vec![1.0 / k as f64; k],
            space,
        }
    }

    pub fn space(&self) -> &Arc<EventSpace> {
        &self.space
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn mass(&self, ordinal: usize) -> f64 {
        self.masses[ordinal]
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        self.masses
            .iter()
            .zip(&other.masses)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
