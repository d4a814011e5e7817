//! Top-down layered drawing of the network and relevance-aware restyling.
//!
//! The within-layer order is computed once per network; threshold changes only
//! restyle (shrink, dim, dot, shorten), so retained nodes never move sideways
//! relative to each other.

mod layering;
mod ordering;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use layering::{assign_layers, ProperGraph};
pub use ordering::{count_crossings, order_layers, Ordering};

use crate::model::{BayesianNetwork, VarId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("structure has a directed cycle")]
    Cycle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LayoutConfig {
    pub node_radius: f64,
    /// Horizontal space between neighbouring slots.
    pub node_gap: f64,
    /// Vertical distance between layers.
    pub layer_gap: f64,
    pub shrink_factor: f64,
    pub dim_opacity: f64,
    pub shortened_factor: f64,
    pub barycenter_rounds: usize,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            node_radius: 20.0,
            node_gap: 36.0,
            layer_gap: 100.0,
            shrink_factor: 0.4,
            dim_opacity: 0.3,
            shortened_factor: 0.5,
            barycenter_rounds: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeStyle {
    Solid,
    Dotted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeLength {
    Normal,
    Shortened,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodePlacement {
    pub var: VarId,
    pub layer: usize,
    pub order: usize,
    pub x: f64,
    pub y: f64,
    pub radius: f64,
    pub dimmed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeRoute {
    pub parent: VarId,
    pub child: VarId,
    /// Polyline from parent center through dummy slots to child center.
    pub points: Vec<(f64, f64)>,
    pub style: EdgeStyle,
    pub length: EdgeLength,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayeredLayout {
    config: LayoutConfig,
    graph: ProperGraph,
    /// Final order of every layer, dummies included.
    slots: Vec<Vec<usize>>,
    crossings: usize,
    nodes: Vec<NodePlacement>,
    edges: Vec<EdgeRoute>,
    layer_y: Vec<f64>,
    width: f64,
    height: f64,
}

impl LayeredLayout {
    pub fn new(net: &BayesianNetwork, config: LayoutConfig) -> Result<Self, LayoutError> {
        let parents: Vec<Vec<usize>> = (0..net.len())
            .map(|i| net.parents(VarId(i)).iter().map(|p| p.0).collect())
            .collect();
        let edges: Vec<(usize, usize)> = net.edges().map(|(p, c)| (p.0, c.0)).collect();
        Self::from_structure(&parents, &edges, config)
    }

    /// Lays out a bare DAG given per-node parent lists and (parent, child) edges.
    pub fn from_structure(
        parents: &[Vec<usize>],
        edges: &[(usize, usize)],
        config: LayoutConfig,
    ) -> Result<Self, LayoutError> {
        let layers = assign_layers(parents)?;
        let graph = ProperGraph::new(&layers, edges);
        let ordering = order_layers(graph.layers.clone(), &graph.segments, config.barycenter_rounds);
        let mut layout = LayeredLayout {
            crossings: ordering.crossings(),
            slots: ordering.layers,
            graph,
            config,
            nodes: Vec::new(),
            edges: Vec::new(),
            layer_y: Vec::new(),
            width: 0.0,
            height: 0.0,
        };
        layout.restyle(&BTreeSet::new(), true);
        Ok(layout)
    }

    pub fn config(&self) -> &LayoutConfig {
        &self.config
    }

    pub fn nodes(&self) -> &[NodePlacement] {
        &self.nodes
    }

    pub fn node(&self, var: VarId) -> &NodePlacement {
        &self.nodes[var.0]
    }

    pub fn edges(&self) -> &[EdgeRoute] {
        &self.edges
    }

    pub fn crossings(&self) -> usize {
        self.crossings
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn layer_count(&self) -> usize {
        self.slots.len()
    }

    /// Real variables of one layer, left to right.
    pub fn layer_members(&self, layer: usize) -> Vec<VarId> {
        self.slots[layer]
            .iter()
            .filter(|&&v| !self.graph.is_dummy(v))
            .map(|&v| VarId(v))
            .collect()
    }

    /// Variables in reading order: by layer, then left to right.
    pub fn reading_order(&self) -> Vec<VarId> {
        (0..self.slots.len()).flat_map(|l| self.layer_members(l)).collect()
    }

    /// Shrinks and dims every node outside `relevant ∪ evidence`, dots each
    /// edge touching such a node and shortens edges between two of them.
    /// Positions within layers are untouched; vertical gaps whose adjacent
    /// layers hold only collapsed nodes are compressed.
    pub fn apply_relevance_styling(&self, relevant: &BTreeSet<VarId>, evidence: &[VarId]) -> LayeredLayout {
        let mut keep = relevant.clone();
        keep.extend(evidence.iter().copied());
        let mut out = self.clone();
        out.restyle(&keep, keep.len() == self.graph.real);
        out
    }

    fn restyle(&mut self, keep: &BTreeSet<VarId>, everything_relevant: bool) {
        let cfg = &self.config;
        let relevant = |v: usize| everything_relevant || keep.contains(&VarId(v));

        let depth = self.slots.len();
        let mut layer_y = Vec::with_capacity(depth);
        let margin = cfg.node_radius * 1.6;
        let mut y = margin;
        for l in 0..depth {
            layer_y.push(y);
            if l + 1 < depth {
                let collapsed = |layer: usize| self.slots[layer].iter().all(|&v| self.graph.is_dummy(v) || !relevant(v));
                let all_short = self
                    .graph
                    .chains
                    .iter()
                    .filter(|chain| {
                        let (top, bottom) = (self.graph.layer_of[chain[0]], self.graph.layer_of[chain[chain.len() - 1]]);
                        top <= l && l < bottom
                    })
                    .all(|chain| !relevant(chain[0]) && !relevant(chain[chain.len() - 1]));
                let gap = if collapsed(l) && collapsed(l + 1) && all_short {
                    cfg.layer_gap * cfg.shortened_factor
                } else {
                    cfg.layer_gap
                };
                y += gap;
            }
        }

        let pitch = 2.0 * cfg.node_radius + cfg.node_gap;
        let widest = self.slots.iter().map(Vec::len).max().unwrap_or(0);
        let total_width = 2.0 * margin + widest.saturating_sub(1) as f64 * pitch;
        let mut xy = vec![(0.0, 0.0); self.graph.layer_of.len()];
        let mut order = vec![0usize; self.graph.layer_of.len()];
        for (l, layer) in self.slots.iter().enumerate() {
            let offset = (widest - layer.len()) as f64 * pitch / 2.0;
            for (i, &v) in layer.iter().enumerate() {
                xy[v] = (margin + offset + i as f64 * pitch, layer_y[l]);
                order[v] = i;
            }
        }

        self.nodes = (0..self.graph.real)
            .map(|v| {
                let keep = relevant(v);
                NodePlacement {
                    var: VarId(v),
                    layer: self.graph.layer_of[v],
                    order: order[v],
                    x: xy[v].0,
                    y: xy[v].1,
                    radius: if keep {
                        cfg.node_radius
                    } else {
                        cfg.node_radius * cfg.shrink_factor
                    },
                    dimmed: !keep,
                }
            })
            .collect();
        self.edges = self
            .graph
            .chains
            .iter()
            .map(|chain| {
                let (p, c) = (chain[0], chain[chain.len() - 1]);
                EdgeRoute {
                    parent: VarId(p),
                    child: VarId(c),
                    points: chain.iter().map(|&v| xy[v]).collect(),
                    style: if relevant(p) && relevant(c) {
                        EdgeStyle::Solid
                    } else {
                        EdgeStyle::Dotted
                    },
                    length: if !relevant(p) && !relevant(c) {
                        EdgeLength::Shortened
                    } else {
                        EdgeLength::Normal
                    },
                }
            })
            .collect();
        self.width = total_width;
        self.height = layer_y.last().map_or(2.0 * margin, |y| y + margin);
        self.layer_y = layer_y;
    }
}
