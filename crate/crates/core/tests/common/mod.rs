#![allow(dead_code)]

use evidiff_core::model::{EvidenceSet, VarId};
use evidiff_core::BayesianNetwork;

/// Posterior marginals of every variable by summing the full joint over all
/// assignments consistent with `evidence`. Returns None when the evidence has
/// probability zero.
pub fn enumerate(net: &BayesianNetwork, evidence: &EvidenceSet) -> Option<Vec<Vec<f64>>> {
    let cards = net.cardinalities();
    let n = cards.len();
    let mut marg: Vec<Vec<f64>> = cards.iter().map(|&k| vec![0.0; k]).collect();
    let mut assignment = vec![0usize; n];
    let mut parents = Vec::new();
    loop {
        let consistent = (0..n).all(|i| evidence.get(VarId(i)).is_none_or(|o| o == assignment[i]));
        if consistent {
            let mut p = 1.0;
            for cpt in net.cpts() {
                parents.clear();
                parents.extend(cpt.parents.iter().map(|q| assignment[q.0]));
                p *= cpt.prob(assignment[cpt.variable.0], &parents).unwrap();
            }
            for (m, &a) in marg.iter_mut().zip(&assignment) {
                m[a] += p;
            }
        }
        // odometer, last variable fastest
        let mut k = n;
        loop {
            if k == 0 {
                let total: f64 = marg.first().map_or(1.0, |m| m.iter().sum());
                if total <= 0.0 {
                    return None;
                }
                for m in &mut marg {
                    m.iter_mut().for_each(|x| *x /= total);
                }
                return Some(marg);
            }
            k -= 1;
            assignment[k] += 1;
            if assignment[k] < cards[k] {
                break;
            }
            assignment[k] = 0;
        }
    }
}

/// Independent O(E²) crossing count between adjacent layers.
pub fn brute_crossings(layers: &[Vec<usize>], segments: &[(usize, usize)]) -> usize {
    let mut pos = std::collections::HashMap::new();
    let mut layer_of = std::collections::HashMap::new();
    for (l, layer) in layers.iter().enumerate() {
        for (i, &v) in layer.iter().enumerate() {
            pos.insert(v, i);
            layer_of.insert(v, l);
        }
    }
    let mut count = 0;
    for (i, &(a, b)) in segments.iter().enumerate() {
        for &(c, d) in &segments[i + 1..] {
            if layer_of[&a] != layer_of[&c] {
                continue;
            }
            let (pa, pb, pc, pd) = (pos[&a] as i64, pos[&b] as i64, pos[&c] as i64, pos[&d] as i64);
            if (pa - pc) * (pb - pd) < 0 {
                count += 1;
            }
        }
    }
    count
}
