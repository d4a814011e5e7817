use std::collections::BTreeSet;

use crate::model::{BayesianNetwork, EvidenceSet, VarId};

/// Moral graph restricted to the unobserved variables, as adjacency sets.
fn interaction_graph(net: &BayesianNetwork, evidence: &EvidenceSet) -> Vec<BTreeSet<usize>> {
    let n = net.len();
    let mut adj = vec![BTreeSet::new(); n];
    for cpt in net.cpts() {
        let mut family: Vec<usize> = cpt.parents.iter().map(|p| p.0).collect();
        family.push(cpt.variable.0);
        family.retain(|&v| !evidence.is_observed(VarId(v)));
        for (i, &a) in family.iter().enumerate() {
            for &b in &family[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    adj
}

fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let neighbours: Vec<usize> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in neighbours.iter().enumerate() {
        for &b in &neighbours[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Greedy min-fill elimination order over the unobserved variables.
/// Ties go to the smallest variable index.
pub fn elimination_order(net: &BayesianNetwork, evidence: &EvidenceSet) -> Vec<VarId> {
    let mut adj = interaction_graph(net, evidence);
    let mut remaining: BTreeSet<usize> = (0..net.len())
        .filter(|&v| !evidence.is_observed(VarId(v)))
        .collect();
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let v = *remaining
            .iter()
            .min_by_key(|&&v| (fill_in(&adj, v), v))
            .expect("nonempty");
        let neighbours: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in neighbours.iter().enumerate() {
            for &b in &neighbours[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &neighbours {
            adj[a].remove(&v);
        }
        adj[v].clear();
        remaining.remove(&v);
        order.push(VarId(v));
    }
    order
}

/// Largest scope of the product factor formed while eliminating `order`
/// (including the variable being eliminated). Variables left out of `order`
/// are never eliminated.
pub fn max_factor_scope(net: &BayesianNetwork, evidence: &EvidenceSet, order: &[VarId]) -> usize {
    let mut scopes: Vec<BTreeSet<VarId>> = net
        .cpts()
        .iter()
        .map(|cpt| {
            cpt.parents
                .iter()
                .copied()
                .chain(std::iter::once(cpt.variable))
                .filter(|&v| !evidence.is_observed(v))
                .collect()
        })
        .collect();
    let mut widest = 0;
    for &v in order {
        let (touching, rest): (Vec<_>, Vec<_>) = scopes.into_iter().partition(|s| s.contains(&v));
        let mut merged: BTreeSet<VarId> = touching.into_iter().flatten().collect();
        widest = widest.max(merged.len());
        merged.remove(&v);
        scopes = rest;
        scopes.push(merged);
    }
    widest
}
