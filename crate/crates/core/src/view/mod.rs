//! Renderable geometry: color mapping, pie/ring glyphs, vertical CPT panels,
//! the legend, and SVG export.

mod color;
mod cpt;
mod glyph;
mod scene;
mod svg;

use thiserror::Error;

pub use color::{assign_colors, hue_distance, Palette, Rgb, PALETTE_SIZE};
pub use cpt::{cpt_view, CptBlock, CptPanel, DensityCell, HeaderCell};
pub use glyph::{
    masses_from_slices, node_glyph, pie_geometry, GlyphFlags, NodeGlyph, Ring, Slice, EVIDENCE_STROKE,
    RING_INNER, RING_OUTER,
};
pub use scene::{build_scene, CollapsedNode, LegendRow, SceneEdge, SceneModel, SceneOptions, Swatch};
pub use svg::render_svg;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ViewError {
    #[error("invalid color {0:?}")]
    Color(String),
    #[error("invalid palette: {0}")]
    Palette(String),
    #[error("inconsistent scene inputs: {0}")]
    Inconsistent(String),
}
