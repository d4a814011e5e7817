use serde::Serialize;

use super::color::{assign_colors, Palette, Rgb};
use crate::model::{decode_mixed_radix, BayesianNetwork, VarId};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeaderCell {
    pub label: String,
    pub value: String,
    pub color: Rgb,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityCell {
    pub value: String,
    pub probability: f64,
    pub color: Rgb,
}

/// One parent permutation: its color-coded parent values above a vertical
/// list of the child's conditional probabilities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CptBlock {
    pub header: Vec<HeaderCell>,
    pub densities: Vec<DensityCell>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CptPanel {
    pub name: String,
    pub label: String,
    pub blocks: Vec<CptBlock>,
}

/// Vertical CPT view: blocks stacked in canonical row order.
pub fn cpt_view(net: &BayesianNetwork, var: VarId, palette: &Palette) -> CptPanel {
    let variable = net.variable(var);
    let cpt = net.cpt(var);
    let own_colors = assign_colors(&variable.space, palette);
    let parents: Vec<_> = cpt.parents.iter().map(|&p| net.variable(p)).collect();
    let parent_colors: Vec<Vec<Rgb>> = parents.iter().map(|p| assign_colors(&p.space, palette)).collect();

    let blocks = cpt
        .rows()
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let ordinals = decode_mixed_radix(r, cpt.parent_cards());
            CptBlock {
                header: parents
                    .iter()
                    .zip(&ordinals)
                    .zip(&parent_colors)
                    .map(|((p, &o), colors)| HeaderCell {
                        label: p.abbreviation.to_string(),
                        value: p.space.values[o].clone(),
                        color: colors[o],
                    })
                    .collect(),
                densities: row
                    .iter()
                    .enumerate()
                    .map(|(i, &probability)| DensityCell {
                        value: variable.space.values[i].clone(),
                        probability,
                        color: own_colors[i],
                    })
                    .collect(),
            }
        })
        .collect();

    CptPanel {
        name: variable.name.clone(),
        label: variable.abbreviation.to_string(),
        blocks,
    }
}
