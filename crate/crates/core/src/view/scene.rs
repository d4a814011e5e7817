use serde::Serialize;

use super::color::{assign_colors, Palette, Rgb};
use super::cpt::{cpt_view, CptPanel};
use super::glyph::{node_glyph, GlyphFlags, NodeGlyph};
use super::ViewError;
use crate::diff::{filter_top, FilterConfig, InferenceDiff, RelevanceRanking};
use crate::layout::{EdgeLength, EdgeStyle, LayeredLayout};
use crate::model::{BayesianNetwork, VarId};

/// A filtered-out variable: a small dim disc without charts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollapsedNode {
    pub name: String,
    pub label: String,
    pub center: (f64, f64),
    pub radius: f64,
    pub opacity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SceneEdge {
    pub parent: String,
    pub child: String,
    pub points: Vec<(f64, f64)>,
    pub style: EdgeStyle,
    pub length: EdgeLength,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Swatch {
    pub value: String,
    pub color: Rgb,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LegendRow {
    pub label: String,
    pub name: String,
    pub swatches: Vec<Swatch>,
}

/// Everything needed to draw one state of the workbench.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SceneModel {
    pub width: f64,
    pub height: f64,
    pub threshold: f64,
    pub e2_active: bool,
    /// Full glyphs of retained variables, in reading order.
    pub glyphs: Vec<NodeGlyph>,
    pub collapsed: Vec<CollapsedNode>,
    pub edges: Vec<SceneEdge>,
    /// Retained variables only, top to bottom.
    pub legend: Vec<LegendRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cpt_panels: Vec<CptPanel>,
}

impl SceneModel {
    pub fn glyph(&self, name: &str) -> Option<&NodeGlyph> {
        self.glyphs.iter().find(|g| g.name == name)
    }

    pub fn variable_count(&self) -> usize {
        self.glyphs.len() + self.collapsed.len()
    }
}

#[derive(Clone, Debug, Default)]
pub struct SceneOptions {
    pub palette: Palette,
    /// Variables whose CPT panel is open.
    pub open_cpts: Vec<VarId>,
}

/// Filters the ranking at the threshold, restyles the base layout and builds
/// glyphs, collapsed discs, edges and the pruned legend.
pub fn build_scene(
    net: &BayesianNetwork,
    diff: &InferenceDiff,
    ranking: &RelevanceRanking,
    filter: &FilterConfig,
    layout: &LayeredLayout,
    options: &SceneOptions,
) -> Result<SceneModel, ViewError> {
    let n = net.len();
    if diff.len() != n || diff.e1.len() != n || diff.e2.len() != n {
        return Err(ViewError::Inconsistent(format!(
            "diff covers {} variables, network has {n}",
            diff.len()
        )));
    }
    if layout.nodes().len() != n {
        return Err(ViewError::Inconsistent(format!(
            "layout places {} variables, network has {n}",
            layout.nodes().len()
        )));
    }
    if ranking.entries.len() + ranking.evidence.len() != n
        || ranking.order().chain(ranking.evidence.iter().copied()).any(|v| v.0 >= n)
    {
        return Err(ViewError::Inconsistent("ranking does not cover the network".into()));
    }
    for (var, (p, q)) in net.variables().iter().zip(&diff.pairs) {
        if **p.space() != *var.space || **q.space() != *var.space {
            return Err(ViewError::Inconsistent(format!(
                "diff entry for {:?} is over a different event space",
                var.name
            )));
        }
    }
    for &v in &options.open_cpts {
        if v.0 >= n {
            return Err(ViewError::Inconsistent(format!("no variable {v}")));
        }
    }

    let relevant = filter_top(ranking, filter);
    let styled = layout.apply_relevance_styling(&relevant.retained, &relevant.evidence);
    let e2_active = diff.e2.observed_count() > 0;
    let order = styled.reading_order();

    let mut glyphs = Vec::new();
    let mut collapsed = Vec::new();
    let mut legend = Vec::new();
    for &v in &order {
        let var = net.variable(v);
        let place = styled.node(v);
        let colors = assign_colors(&var.space, &options.palette);
        if relevant.contains(v) {
            glyphs.push(node_glyph(
                var,
                (place.x, place.y),
                place.radius,
                diff.pair(v),
                GlyphFlags {
                    e1_observed: diff.e1.is_observed(v),
                    e2_observed: diff.e2.is_observed(v),
                    e2_active,
                },
                &colors,
            ));
            legend.push(LegendRow {
                label: var.abbreviation.to_string(),
                name: var.name.clone(),
                swatches: var
                    .space
                    .values
                    .iter()
                    .zip(colors)
                    .map(|(value, color)| Swatch {
                        value: value.clone(),
                        color,
                    })
                    .collect(),
            });
        } else {
            collapsed.push(CollapsedNode {
                name: var.name.clone(),
                label: var.abbreviation.to_string(),
                center: (place.x, place.y),
                radius: place.radius,
                opacity: styled.config().dim_opacity,
            });
        }
    }

    let edges = styled
        .edges()
        .iter()
        .map(|e| SceneEdge {
            parent: net.variable(e.parent).name.clone(),
            child: net.variable(e.child).name.clone(),
            points: e.points.clone(),
            style: e.style,
            length: e.length,
        })
        .collect();

    Ok(SceneModel {
        width: styled.width(),
        height: styled.height(),
        threshold: filter.percent(),
        e2_active,
        glyphs,
        collapsed,
        edges,
        legend,
        cpt_panels: options
            .open_cpts
            .iter()
            .map(|&v| cpt_view(net, v, &options.palette))
            .collect(),
    })
}
