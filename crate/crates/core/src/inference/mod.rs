//! Exact posteriors by variable elimination.
//!
//! Evidence is folded into the CPT factors once per evidence set; each query
//! then eliminates every other unobserved variable along a min-fill order.

mod factor;
mod order;

use rayon::prelude::*;
use thiserror::Error;

pub use factor::Factor;
pub use order::{elimination_order, max_factor_scope};

use crate::model::{BayesianNetwork, Distribution, EvidenceSet, VarId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InferenceError {
    #[error("evidence has probability zero under the model")]
    ImpossibleEvidence,
    #[error("assignment leaves {0:?} unobserved")]
    IncompleteAssignment(String),
    #[error("evidence covers {found} variables, network has {expected}")]
    EvidenceLength { expected: usize, found: usize },
    #[error("elimination order must list every unobserved variable except the target exactly once")]
    BadOrder,
}

/// Chain-rule probability of a complete assignment.
pub fn joint_probability(net: &BayesianNetwork, assignment: &EvidenceSet) -> Result<f64, InferenceError> {
    check_length(net, assignment)?;
    let mut p = 1.0;
    for cpt in net.cpts() {
        let value = assignment
            .get(cpt.variable)
            .ok_or_else(|| InferenceError::IncompleteAssignment(net.variable(cpt.variable).name.clone()))?;
        let parents = cpt
            .parents
            .iter()
            .map(|&q| {
                assignment
                    .get(q)
                    .ok_or_else(|| InferenceError::IncompleteAssignment(net.variable(q).name.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        p *= cpt.prob(value, &parents).expect("evidence sets hold in-domain ordinals");
    }
    Ok(p)
}

fn check_length(net: &BayesianNetwork, evidence: &EvidenceSet) -> Result<(), InferenceError> {
    if evidence.len() != net.len() {
        return Err(InferenceError::EvidenceLength {
            expected: net.len(),
            found: evidence.len(),
        });
    }
    Ok(())
}

/// One distribution per variable under a single evidence set.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorSet {
    pub evidence: EvidenceSet,
    pub posteriors: Vec<Distribution>,
}

impl PosteriorSet {
    pub fn get(&self, var: VarId) -> &Distribution {
        &self.posteriors[var.0]
    }
}

/// Variable-elimination engine bound to one network and evidence set.
pub struct Engine<'a> {
    net: &'a BayesianNetwork,
    evidence: EvidenceSet,
    factors: Vec<Factor>,
    order: Vec<VarId>,
}

impl<'a> Engine<'a> {
    pub fn new(net: &'a BayesianNetwork, evidence: &EvidenceSet) -> Result<Self, InferenceError> {
        check_length(net, evidence)?;
        let factors = net
            .cpts()
            .iter()
            .map(|cpt| Factor::from_cpt(net, cpt, evidence))
            .collect();
        Ok(Engine {
            net,
            evidence: evidence.clone(),
            factors,
            order: elimination_order(net, evidence),
        })
    }

    pub fn order(&self) -> &[VarId] {
        &self.order
    }

    /// P(evidence), up to the rescaling applied against underflow. Only its
    /// sign is meaningful once rescaling kicked in.
    fn evidence_weight(&self) -> f64 {
        self.eliminate(&self.order).total()
    }

    fn eliminate(&self, order: &[VarId]) -> Factor {
        let mut pool = self.factors.clone();
        for &v in order {
            let (touching, rest): (Vec<_>, Vec<_>) = pool.into_iter().partition(|f| f.contains(v));
            pool = rest;
            if let Some(merged) = touching.into_iter().reduce(|a, b| a.product(&b)) {
                pool.push(merged.sum_out(v));
            }
        }
        pool.into_iter()
            .reduce(|a, b| a.product(&b))
            .unwrap_or_else(|| Factor::scalar(1.0))
    }

    pub fn posterior(&self, target: VarId) -> Result<Distribution, InferenceError> {
        let order: Vec<VarId> = self.order.iter().copied().filter(|&v| v != target).collect();
        self.posterior_with_order(target, &order)
    }

    /// Posterior along a caller-chosen order, which must list every
    /// unobserved variable other than `target` exactly once.
    pub fn posterior_with_order(&self, target: VarId, order: &[VarId]) -> Result<Distribution, InferenceError> {
        let space = self.net.variable(target).space.clone();
        if let Some(o) = self.evidence.get(target) {
            if self.evidence_weight() <= 0.0 {
                return Err(InferenceError::ImpossibleEvidence);
            }
            return Ok(Distribution::point_mass(space, o));
        }

        let mut expected: Vec<VarId> = self.order.iter().copied().filter(|&v| v != target).collect();
        let mut given = order.to_vec();
        expected.sort_unstable();
        given.sort_unstable();
        if expected != given {
            return Err(InferenceError::BadOrder);
        }

        let result = self.eliminate(order);
        debug_assert_eq!(result.scope(), [target]);
        Distribution::normalized(space, result.table().to_vec()).ok_or(InferenceError::ImpossibleEvidence)
    }

    pub fn posterior_all(&self) -> Result<PosteriorSet, InferenceError> {
        if self.evidence.observed_count() == self.net.len() && self.evidence_weight() <= 0.0 {
            return Err(InferenceError::ImpossibleEvidence);
        }
        let posteriors = (0..self.net.len())
            .into_par_iter()
            .map(|i| {
                let v = VarId(i);
                match self.evidence.get(v) {
                    Some(o) => Ok(Distribution::point_mass(self.net.variable(v).space.clone(), o)),
                    None => self.posterior(v),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PosteriorSet {
            evidence: self.evidence.clone(),
            posteriors,
        })
    }
}

/// P(target | evidence).
pub fn posterior(net: &BayesianNetwork, evidence: &EvidenceSet, target: VarId) -> Result<Distribution, InferenceError> {
    Engine::new(net, evidence)?.posterior(target)
}

/// P(X | evidence) for every variable X.
pub fn posterior_all(net: &BayesianNetwork, evidence: &EvidenceSet) -> Result<PosteriorSet, InferenceError> {
    Engine::new(net, evidence)?.posterior_all()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{asia8, chain3, two_var};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn joint_probability_chain_rule() {
        let net = two_var();
        let tt = EvidenceSet::empty(2).with(VarId(0), Some(0)).with(VarId(1), Some(0));
        assert!((joint_probability(&net, &tt).unwrap() - 0.27).abs() < 1e-15);

        let mut total = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let e = EvidenceSet::empty(2).with(VarId(0), Some(a)).with(VarId(1), Some(b));
                total += joint_probability(&net, &e).unwrap();
            }
        }
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn joint_probability_needs_full_assignment() {
        let net = two_var();
        let partial = EvidenceSet::empty(2).with(VarId(0), Some(0));
        assert_eq!(
            joint_probability(&net, &partial),
            Err(InferenceError::IncompleteAssignment("B".into()))
        );
    }

    #[test]
    fn marginal_and_bayes_rule() {
        let net = two_var();
        let b = posterior(&net, &EvidenceSet::empty(2), VarId(1)).unwrap();
        assert!(close(b.masses(), &[0.41, 0.59], 1e-12));

        let e = EvidenceSet::empty(2).with(VarId(1), Some(0));
        let a = posterior(&net, &e, VarId(0)).unwrap();
        assert!(close(a.masses(), &[0.27 / 0.41, 0.14 / 0.41], 1e-12));
        assert!((a.mass(0) - 0.658536).abs() < 1e-6);
    }

    #[test]
    fn observed_target_is_point_mass() {
        let net = chain3();
        let e = EvidenceSet::empty(3).with(VarId(2), Some(1));
        let z = posterior(&net, &e, VarId(2)).unwrap();
        assert_eq!(z.masses(), [0.0, 1.0]);
    }

    #[test]
    fn all_observed_gives_point_masses() {
        let net = two_var();
        let e = EvidenceSet::empty(2).with(VarId(0), Some(1)).with(VarId(1), Some(0));
        let set = posterior_all(&net, &e).unwrap();
        assert_eq!(set.get(VarId(0)).masses(), [0.0, 1.0]);
        assert_eq!(set.get(VarId(1)).masses(), [1.0, 0.0]);
    }

    #[test]
    fn impossible_evidence_is_an_error() {
        // TbOrCancer is a deterministic OR: observing Tuberculosis=yes with TbOrCancer=no is impossible
        let net = asia8();
        let e = EvidenceSet::from_named(&net, [("Tuberculosis", "yes"), ("TbOrCancer", "no")]).unwrap();
        assert_eq!(posterior_all(&net, &e), Err(InferenceError::ImpossibleEvidence));
        assert_eq!(
            posterior(&net, &e, VarId(1)),
            Err(InferenceError::ImpossibleEvidence)
        );
        let mut full = EvidenceSet::empty(8);
        for i in 0..8 {
            full = full.with(VarId(i), Some(0));
        }
        full = full.with(VarId(4), Some(1));
        assert_eq!(posterior_all(&net, &full), Err(InferenceError::ImpossibleEvidence));
    }

    #[test]
    fn order_does_not_change_the_posterior() {
        let net = asia8();
        let e = EvidenceSet::from_named(&net, [("Dyspnoea", "yes")]).unwrap();
        let engine = Engine::new(&net, &e).unwrap();
        let target = VarId(3);
        let mut forward: Vec<VarId> = engine.order().iter().copied().filter(|&v| v != target).collect();
        let a = engine.posterior_with_order(target, &forward).unwrap();
        forward.reverse();
        let b = engine.posterior_with_order(target, &forward).unwrap();
        assert!(a.max_abs_diff(&b) <= 1e-9);
        assert_eq!(
            engine.posterior_with_order(target, &forward[1..]),
            Err(InferenceError::BadOrder)
        );
    }

    #[test]
    fn asia_reference_values() {
        // textbook marginals of the chest-clinic network
        let net = asia8();
        let set = posterior_all(&net, &EvidenceSet::empty(8)).unwrap();
        assert!((set.get(VarId(1)).mass(0) - 0.0104).abs() < 1e-12);
        assert!((set.get(VarId(3)).mass(0) - 0.055).abs() < 1e-12);
        assert!((set.get(VarId(4)).mass(0) - 0.064828).abs() < 1e-12);
    }
}
