use serde::Serialize;

use super::color::Rgb;
use crate::model::{Distribution, Variable};

/// Ring annulus radii relative to the pie radius.
pub const RING_INNER: f64 = 1.1;
pub const RING_OUTER: f64 = 1.35;
/// Evidence stroke width relative to the pie radius.
pub const EVIDENCE_STROKE: f64 = 0.12;

/// A pie or ring slice. Angles in degrees, measured clockwise from 12 o'clock.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Slice {
    pub value: usize,
    pub start: f64,
    pub sweep: f64,
    pub color: Rgb,
}

/// Slices in value order, each sweeping 360°·mass, starting at 12 o'clock.
pub fn pie_geometry(dist: &Distribution, colors: &[Rgb]) -> Vec<Slice> {
    let mut start = 0.0;
    dist.masses()
        .iter()
        .enumerate()
        .map(|(value, &m)| {
            let sweep = 360.0 * m;
            let slice = Slice {
                value,
                start,
                sweep,
                color: colors[value],
            };
            start += sweep;
            slice
        })
        .collect()
}

/// Recovers the masses encoded by a chart.
pub fn masses_from_slices(slices: &[Slice]) -> Vec<f64> {
    slices.iter().map(|s| s.sweep / 360.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Ring {
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub slices: Vec<Slice>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NodeGlyph {
    pub name: String,
    pub label: String,
    pub center: (f64, f64),
    pub radius: f64,
    /// Posterior under E1.
    pub inner_slices: Vec<Slice>,
    /// Posterior under E2; absent while E2 observes nothing.
    pub ring: Option<Ring>,
    pub inner_stroke: bool,
    pub ring_stroke: bool,
    pub stroke_width: f64,
}

impl NodeGlyph {
    /// Radius of the outermost drawn circle.
    pub fn extent(&self) -> f64 {
        self.ring.as_ref().map_or(self.radius, |r| r.outer_radius)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GlyphFlags {
    pub e1_observed: bool,
    pub e2_observed: bool,
    pub e2_active: bool,
}

/// Pie from the E1 posterior, concentric ring from the E2 posterior, and a
/// black stroke on whichever chart belongs to a set that observes `var`.
pub fn node_glyph(
    var: &Variable,
    center: (f64, f64),
    radius: f64,
    pair: &(Distribution, Distribution),
    flags: GlyphFlags,
    colors: &[Rgb],
) -> NodeGlyph {
    let ring = flags.e2_active.then(|| Ring {
        inner_radius: radius * RING_INNER,
        outer_radius: radius * RING_OUTER,
        slices: pie_geometry(&pair.1, colors),
    });
    NodeGlyph {
        name: var.name.clone(),
        label: var.abbreviation.to_string(),
        center,
        radius,
        inner_slices: pie_geometry(&pair.0, colors),
        ring_stroke: flags.e2_active && flags.e2_observed,
        inner_stroke: flags.e1_observed,
        ring,
        stroke_width: radius * EVIDENCE_STROKE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::two_var;
    use crate::view::{assign_colors, Palette};

    fn dist(masses: &[f64]) -> Distribution {
        let net = two_var();
        let space = net.variables()[0].space.clone();
        Distribution::new(space, masses.to_vec()).unwrap()
    }

    fn colors() -> Vec<Rgb> {
        let net = two_var();
        assign_colors(&net.variables()[0].space, &Palette::default())
    }

    #[test]
    fn full_mass_is_one_full_slice() {
        let s = pie_geometry(&dist(&[1.0, 0.0]), &colors());
        assert_eq!(s[0].sweep, 360.0);
        assert_eq!(s[1].sweep, 0.0);
        assert_eq!(s[1].start, 360.0);
    }

    #[test]
    fn slices_are_proportional_and_in_value_order() {
        let c = colors();
        let s = pie_geometry(&dist(&[0.25, 0.75]), &c);
        assert_eq!((s[0].start, s[0].sweep), (0.0, 90.0));
        assert_eq!((s[1].start, s[1].sweep), (90.0, 270.0));
        let t = pie_geometry(&dist(&[0.75, 0.25]), &c);
        assert_eq!(t[0].color, c[0]);
        assert_eq!(t[0].value, 0);
    }

    fn glyph(flags: GlyphFlags) -> NodeGlyph {
        let net = two_var();
        let pair = (dist(&[1.0, 0.0]), dist(&[0.3, 0.7]));
        node_glyph(&net.variables()[0], (0.0, 0.0), 20.0, &pair, flags, &colors())
    }

    #[test]
    fn strokes_follow_the_observing_sets() {
        let both = glyph(GlyphFlags {
            e1_observed: true,
            e2_observed: true,
            e2_active: true,
        });
        assert!(both.inner_stroke && both.ring_stroke);
        assert!((both.stroke_width - 2.4).abs() < 1e-12);
        let ring = both.ring.unwrap();
        assert_eq!((ring.inner_radius, ring.outer_radius), (22.0, 27.0));

        let neither = glyph(GlyphFlags {
            e1_observed: false,
            e2_observed: false,
            e2_active: true,
        });
        assert!(!neither.inner_stroke && !neither.ring_stroke);
        assert!(neither.ring.is_some());
    }

    #[test]
    fn inactive_second_set_draws_no_ring() {
        let g = glyph(GlyphFlags {
            e1_observed: true,
            e2_observed: false,
            e2_active: false,
        });
        assert!(g.ring.is_none());
        assert!(!g.ring_stroke);
        assert_eq!(g.extent(), g.radius);
    }
}
