use std::fmt::Write;

use super::glyph::{NodeGlyph, Ring, Slice};
use super::scene::{CollapsedNode, SceneModel};
use crate::layout::EdgeStyle;

const EDGE_COLOR: &str = "#555555";
const OUTLINE_COLOR: &str = "#BBBBBB";
const COLLAPSED_FILL: &str = "#888888";
const LEGEND_ROW: f64 = 38.0;
const LEGEND_PAD: f64 = 24.0;
const CHAR_WIDTH: f64 = 7.0;

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn num(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".to_owned()
    } else {
        s
    }
}

/// Point on a circle at `angle` degrees clockwise from 12 o'clock.
fn polar(cx: f64, cy: f64, r: f64, angle: f64) -> (f64, f64) {
    let t = angle.to_radians();
    (cx + r * t.sin(), cy - r * t.cos())
}

fn is_full(sweep: f64) -> bool {
    sweep >= 360.0 - 1e-9
}

fn pie_slice(out: &mut String, c: (f64, f64), r: f64, s: &Slice) {
    if s.sweep <= 0.0 {
        return;
    }
    if is_full(s.sweep) {
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#, num(c.0), num(c.1), num(r), s.color);
        return;
    }
    let a = polar(c.0, c.1, r, s.start);
    let b = polar(c.0, c.1, r, s.start + s.sweep);
    let large = u8::from(s.sweep > 180.0);
    let _ = writeln!(
        out,
        r#"<path d="M{} {} L{} {} A{} {} 0 {} 1 {} {} Z" fill="{}"/>"#,
        num(c.0),
        num(c.1),
        num(a.0),
        num(a.1),
        num(r),
        num(r),
        large,
        num(b.0),
        num(b.1),
        s.color
    );
}

fn ring_slice(out: &mut String, c: (f64, f64), ring: &Ring, s: &Slice) {
    if s.sweep <= 0.0 {
        return;
    }
    let (ri, ro) = (ring.inner_radius, ring.outer_radius);
    if is_full(s.sweep) {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
            num(c.0),
            num(c.1),
            num((ri + ro) / 2.0),
            s.color,
            num(ro - ri)
        );
        return;
    }
    let end = s.start + s.sweep;
    let (o1, o2) = (polar(c.0, c.1, ro, s.start), polar(c.0, c.1, ro, end));
    let (i1, i2) = (polar(c.0, c.1, ri, s.start), polar(c.0, c.1, ri, end));
    let large = u8::from(s.sweep > 180.0);
    let _ = writeln!(
        out,
        r#"<path d="M{} {} A{} {} 0 {} 1 {} {} L{} {} A{} {} 0 {} 0 {} {} Z" fill="{}"/>"#,
        num(o1.0),
        num(o1.1),
        num(ro),
        num(ro),
        large,
        num(o2.0),
        num(o2.1),
        num(i2.0),
        num(i2.1),
        num(ri),
        num(ri),
        large,
        num(i1.0),
        num(i1.1),
        s.color
    );
}

fn circle_outline(out: &mut String, c: (f64, f64), r: f64, color: &str, width: f64) {
    let _ = writeln!(
        out,
        r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="{}" stroke-width="{}"/>"#,
        num(c.0),
        num(c.1),
        num(r),
        color,
        num(width)
    );
}

/// Abbreviation text with its numeric suffix as a subscript.
fn label(out: &mut String, x: f64, y: f64, text: &str, size: f64, opacity: Option<f64>) {
    let split = text.char_indices().nth(1).map_or(text.len(), |(i, _)| i);
    let (letter, sub) = text.split_at(split);
    let sub: String = sub
        .chars()
        .map(|c| match c {
            '₀'..='₉' => char::from(b'0' + (c as u32 - '₀' as u32) as u8),
            other => other,
        })
        .collect();
    let fade = opacity.map_or(String::new(), |o| format!(r#" opacity="{}""#, num(o)));
    let _ = write!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="{}" font-weight="bold"{}>{}"#,
        num(x),
        num(y),
        num(size),
        fade,
        escape(letter)
    );
    if !sub.is_empty() {
        let _ = write!(
            out,
            r#"<tspan baseline-shift="sub" font-size="{}">{}</tspan>"#,
            num(size * 0.7),
            escape(&sub)
        );
    }
    out.push_str("</text>\n");
}

fn glyph(out: &mut String, index: usize, g: &NodeGlyph) {
    let _ = writeln!(out, r#"<g class="variable" id="v{}" data-name="{}">"#, index, escape(&g.name));
    let c = g.center;
    if let Some(ring) = &g.ring {
        for s in &ring.slices {
            ring_slice(out, c, ring, s);
        }
        if g.ring_stroke {
            circle_outline(out, c, ring.outer_radius, "#000000", g.stroke_width);
            circle_outline(out, c, ring.inner_radius, "#000000", g.stroke_width);
        }
    }
    for s in &g.inner_slices {
        pie_slice(out, c, g.radius, s);
    }
    if g.inner_stroke {
        circle_outline(out, c, g.radius, "#000000", g.stroke_width);
    } else {
        circle_outline(out, c, g.radius, OUTLINE_COLOR, 0.5);
    }
    let e = g.extent();
    label(out, c.0 + e * 0.75, c.1 - e * 0.75, &g.label, 13.0, None);
    out.push_str("</g>\n");
}

fn collapsed(out: &mut String, index: usize, n: &CollapsedNode) {
    let _ = writeln!(out, r#"<g class="variable collapsed" id="v{}" data-name="{}">"#, index, escape(&n.name));
    let _ = writeln!(
        out,
        r#"<circle cx="{}" cy="{}" r="{}" fill="{}" fill-opacity="{}"/>"#,
        num(n.center.0),
        num(n.center.1),
        num(n.radius),
        COLLAPSED_FILL,
        num(n.opacity)
    );
    label(
        out,
        n.center.0 + n.radius + 2.0,
        n.center.1 - n.radius,
        &n.label,
        9.0,
        Some(n.opacity),
    );
    out.push_str("</g>\n");
}

fn legend_width(scene: &SceneModel) -> f64 {
    let widest = scene
        .legend
        .iter()
        .map(|row| {
            let name = row.label.chars().count() + row.name.chars().count() + 2;
            let swatches: usize = row.swatches.iter().map(|s| s.value.chars().count() + 4).sum();
            name.max(swatches)
        })
        .max()
        .unwrap_or(0);
    if widest == 0 {
        0.0
    } else {
        2.0 * LEGEND_PAD + widest as f64 * CHAR_WIDTH
    }
}

/// SVG 1.1 document for a scene. Output is a pure function of the scene.
pub fn render_svg(scene: &SceneModel) -> String {
    let legend_x = scene.width;
    let width = scene.width + legend_width(scene);
    let height = scene
        .height
        .max(LEGEND_PAD * 2.0 + scene.legend.len() as f64 * LEGEND_ROW);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    );
    out.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">",
        "<path d=\"M0 0 L10 5 L0 10 Z\" fill=\"#555555\"/></marker></defs>\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"#FFFFFF\"/>\n");

    out.push_str("<g class=\"edges\">\n");
    let extent = |name: &str| {
        scene
            .glyph(name)
            .map(NodeGlyph::extent)
            .or_else(|| scene.collapsed.iter().find(|c| c.name == name).map(|c| c.radius))
            .unwrap_or(0.0)
    };
    for e in &scene.edges {
        let mut points = e.points.clone();
        // stop short of the child's outermost circle so the arrowhead shows
        if let [.., a, b] = points.as_mut_slice() {
            let (dx, dy) = (b.0 - a.0, b.1 - a.1);
            let len = (dx * dx + dy * dy).sqrt();
            let cut = extent(&e.child) + 1.0;
            if len > cut {
                *b = (b.0 - dx / len * cut, b.1 - dy / len * cut);
            }
        }
        let pts: Vec<String> = points.iter().map(|p| format!("{},{}", num(p.0), num(p.1))).collect();
        let dash = match e.style {
            EdgeStyle::Solid => "",
            EdgeStyle::Dotted => r#" stroke-dasharray="2 3""#,
        };
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.2"{} marker-end="url(#arrow)"/>"#,
            pts.join(" "),
            EDGE_COLOR,
            dash
        );
    }
    out.push_str("</g>\n");

    out.push_str("<g class=\"structure\">\n");
    let mut index = 0;
    for n in &scene.collapsed {
        collapsed(&mut out, index, n);
        index += 1;
    }
    for g in &scene.glyphs {
        glyph(&mut out, index, g);
        index += 1;
    }
    out.push_str("</g>\n");

    if !scene.legend.is_empty() {
        out.push_str("<g class=\"legend\">\n");
        for (i, row) in scene.legend.iter().enumerate() {
            let y = LEGEND_PAD + i as f64 * LEGEND_ROW + 12.0;
            let x = legend_x + LEGEND_PAD;
            label(&mut out, x, y, &row.label, 12.0, None);
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
                num(x + 3.0 * CHAR_WIDTH),
                num(y),
                escape(&row.name)
            );
            let mut sx = x;
            for s in &row.swatches {
                let _ = writeln!(
                    out,
                    r#"<rect x="{}" y="{}" width="10" height="10" fill="{}"/><text x="{}" y="{}" font-family="sans-serif" font-size="10">{}</text>"#,
                    num(sx),
                    num(y + 6.0),
                    s.color,
                    num(sx + 13.0),
                    num(y + 15.0),
                    escape(&s.value)
                );
                sx += (s.value.chars().count() + 4) as f64 * CHAR_WIDTH;
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
