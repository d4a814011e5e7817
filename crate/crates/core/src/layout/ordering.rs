use std::collections::HashMap;

/// Result of crossing minimization.
#[derive(Clone, Debug, PartialEq)]
pub struct Ordering {
    pub layers: Vec<Vec<usize>>,
    pub initial_crossings: usize,
    /// Crossing count after each accepted or rejected sweep: never increasing.
    pub history: Vec<usize>,
}

impl Ordering {
    pub fn crossings(&self) -> usize {
        self.history.last().copied().unwrap_or(self.initial_crossings)
    }
}

fn positions(layers: &[Vec<usize>]) -> HashMap<usize, usize> {
    layers
        .iter()
        .flat_map(|layer| layer.iter().enumerate().map(|(i, &v)| (v, i)))
        .collect()
}

/// Number of pairwise segment crossings between adjacent layers. Segments
/// must join nodes of consecutive layers.
pub fn count_crossings(layers: &[Vec<usize>], segments: &[(usize, usize)]) -> usize {
    let pos = positions(layers);
    let layer_of: HashMap<usize, usize> = layers
        .iter()
        .enumerate()
        .flat_map(|(l, vs)| vs.iter().map(move |&v| (v, l)))
        .collect();
    let mut by_gap: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for &(a, b) in segments {
        by_gap.entry(layer_of[&a]).or_default().push((pos[&a], pos[&b]));
    }
    let mut total = 0;
    for segs in by_gap.values() {
        for (i, &(a1, b1)) in segs.iter().enumerate() {
            for &(a2, b2) in &segs[i + 1..] {
                if (a1 < a2 && b1 > b2) || (a1 > a2 && b1 < b2) {
                    total += 1;
                }
            }
        }
    }
    total
}

/// Reorders one layer by the mean position of its neighbours in the fixed
/// adjacent layer. Nodes without neighbours keep their current position as
/// key; the sort is stable.
fn reorder(layer: &[usize], fixed: &HashMap<usize, usize>, neighbours: &HashMap<usize, Vec<usize>>) -> Vec<usize> {
    let mut keyed: Vec<(f64, usize, usize)> = layer
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let key = match neighbours.get(&v) {
                Some(ns) if !ns.is_empty() => {
                    ns.iter().map(|n| fixed[n] as f64).sum::<f64>() / ns.len() as f64
                }
                _ => i as f64,
            };
            (key, i, v)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, _, v)| v).collect()
}

fn sweep(layers: &[Vec<usize>], segments: &[(usize, usize)], downward: bool) -> Vec<Vec<usize>> {
    let mut up: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut down: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in segments {
        down.entry(a).or_default().push(b);
        up.entry(b).or_default().push(a);
    }
    let mut out = layers.to_vec();
    let depth = out.len();
    if downward {
        for l in 1..depth {
            let fixed = positions(&out[l - 1..l]);
            out[l] = reorder(&out[l], &fixed, &up);
        }
    } else {
        for l in (0..depth.saturating_sub(1)).rev() {
            let fixed = positions(&out[l + 1..l + 2]);
            out[l] = reorder(&out[l], &fixed, &down);
        }
    }
    out
}

/// Barycenter crossing minimization: `rounds` rounds of a downward then an
/// upward sweep. A sweep is kept only when it does not increase crossings.
pub fn order_layers(layers: Vec<Vec<usize>>, segments: &[(usize, usize)], rounds: usize) -> Ordering {
    let initial_crossings = count_crossings(&layers, segments);
    let mut best = layers;
    let mut best_count = initial_crossings;
    let mut history = Vec::with_capacity(rounds * 2);
    for _ in 0..rounds {
        for downward in [true, false] {
            let candidate = sweep(&best, segments, downward);
            let count = count_crossings(&candidate, segments);
            if count <= best_count {
                best = candidate;
                best_count = count;
            }
            history.push(best_count);
        }
    }
    Ordering {
        layers: best,
        initial_crossings,
        history,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_swap_removes_the_crossing() {
        // a1=0, a2=1, b1=2, b2=3; edges a1→b2, a2→b1
        let layers = vec![vec![0, 1], vec![2, 3]];
        let segments = [(0, 3), (1, 2)];
        assert_eq!(count_crossings(&layers, &segments), 1);
        // exhaustive: the only alternative orders are swaps, each with 0 crossings
        assert_eq!(count_crossings(&[vec![0, 1], vec![3, 2]], &segments), 0);
        assert_eq!(count_crossings(&[vec![1, 0], vec![2, 3]], &segments), 0);

        let result = order_layers(layers, &segments, 4);
        assert_eq!(result.crossings(), 0);
        assert_eq!(result.initial_crossings, 1);
    }

    #[test]
    fn crossing_free_input_is_unchanged() {
        let layers = vec![vec![0, 1], vec![2, 3], vec![4]];
        let segments = [(0, 2), (1, 3), (2, 4), (3, 4)];
        let result = order_layers(layers.clone(), &segments, 4);
        assert_eq!(result.layers, layers);
        assert_eq!(result.crossings(), 0);
    }

    #[test]
    fn single_layer_keeps_input_order() {
        let layers = vec![vec![3, 1, 2, 0]];
        let result = order_layers(layers.clone(), &[], 4);
        assert_eq!(result.layers, layers);
    }

    #[test]
    fn history_never_increases() {
        let layers = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]];
        let segments = [(0, 5), (1, 3), (2, 4), (0, 4), (3, 8), (4, 6), (5, 7), (5, 6)];
        let result = order_layers(layers, &segments, 4);
        let mut prev = result.initial_crossings;
        for &c in &result.history {
            assert!(c <= prev);
            prev = c;
        }
        assert_eq!(count_crossings(&result.layers, &segments), result.crossings());
    }
}
