use super::LayoutError;

/// Longest-path layering: roots sit on layer 0 and every other node one
/// below its deepest parent.
pub fn assign_layers(parents: &[Vec<usize>]) -> Result<Vec<usize>, LayoutError> {
    let n = parents.len();
    let mut layer: Vec<Option<usize>> = vec![None; n];
    // iterative DFS with an explicit "in progress" mark to catch cycles
    let mut on_stack = vec![false; n];
    for start in 0..n {
        if layer[start].is_some() {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        on_stack[start] = true;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&p) = parents[v].get(*next) {
                *next += 1;
                if layer[p].is_some() {
                    continue;
                }
                if on_stack[p] {
                    return Err(LayoutError::Cycle);
                }
                on_stack[p] = true;
                stack.push((p, 0));
            } else {
                let depth = parents[v]
                    .iter()
                    .map(|&p| layer[p].expect("parents resolved first") + 1)
                    .max()
                    .unwrap_or(0);
                layer[v] = Some(depth);
                on_stack[v] = false;
                stack.pop();
            }
        }
    }
    Ok(layer.into_iter().map(|l| l.expect("every node visited")).collect())
}

/// A layered graph whose edges all join adjacent layers: every original edge
/// spanning k > 1 layers is split into a chain through k - 1 dummy nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct ProperGraph {
    /// Number of real nodes; ids at or above this are dummies.
    pub real: usize,
    pub layer_of: Vec<usize>,
    /// Segments (upper, lower) between adjacent layers.
    pub segments: Vec<(usize, usize)>,
    /// Node chain (parent, dummies..., child) of every original edge.
    pub chains: Vec<Vec<usize>>,
    /// Initial within-layer order: real nodes by index, then dummies by creation.
    pub layers: Vec<Vec<usize>>,
}

impl ProperGraph {
    pub fn new(layer_of_real: &[usize], edges: &[(usize, usize)]) -> Self {
        let real = layer_of_real.len();
        let mut layer_of = layer_of_real.to_vec();
        let mut segments = Vec::new();
        let mut chains = Vec::with_capacity(edges.len());
        for &(p, c) in edges {
            debug_assert!(layer_of[p] < layer_of[c]);
            let mut chain = vec![p];
            for l in layer_of[p] + 1..layer_of[c] {
                layer_of.push(l);
                chain.push(layer_of.len() - 1);
            }
            chain.push(c);
            segments.extend(chain.windows(2).map(|w| (w[0], w[1])));
            chains.push(chain);
        }
        let depth = layer_of.iter().max().map_or(0, |m| m + 1);
        let mut layers = vec![Vec::new(); depth];
        for (v, &l) in layer_of.iter().enumerate() {
            layers[l].push(v);
        }
        ProperGraph {
            real,
            layer_of,
            segments,
            chains,
            layers,
        }
    }

    pub fn is_dummy(&self, v: usize) -> bool {
        v >= self.real
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_layers() {
        assert_eq!(assign_layers(&[vec![], vec![0], vec![1]]).unwrap(), [0, 1, 2]);
    }

    #[test]
    fn diamond_layers() {
        assert_eq!(
            assign_layers(&[vec![], vec![0], vec![0], vec![1, 2]]).unwrap(),
            [0, 1, 1, 2]
        );
    }

    #[test]
    fn longest_path_wins() {
        // A→B, A→C, B→C
        assert_eq!(assign_layers(&[vec![], vec![0], vec![0, 1]]).unwrap(), [0, 1, 2]);
    }

    #[test]
    fn cycles_are_rejected() {
        assert_eq!(assign_layers(&[vec![1], vec![0]]), Err(LayoutError::Cycle));
        assert_eq!(assign_layers(&[vec![0]]), Err(LayoutError::Cycle));
    }

    #[test]
    fn long_edges_get_dummies() {
        let layers = assign_layers(&[vec![], vec![0], vec![0, 1]]).unwrap();
        let g = ProperGraph::new(&layers, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.real, 3);
        assert_eq!(g.layer_of.len(), 4);
        assert_eq!(g.chains[1], [0, 3, 2]);
        assert_eq!(g.layers, [vec![0], vec![1, 3], vec![2]]);
        assert!(g
            .segments
            .iter()
            .all(|&(a, b)| g.layer_of[b] == g.layer_of[a] + 1));
    }
}
