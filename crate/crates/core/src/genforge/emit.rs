//! SVG text and metadata records for a routed diagram.

use super::geometry::Face;
use super::{Connection, GenConfig, PlacedShape, StyleDefs};
use crate::fonts::family_list;
use crate::model::{ArrowAttributes, ArrowExtras, ArrowMeta, ShapeAttributes, ShapeExtras, ShapeMeta};
use crate::svg::{fmt_num, rebuild, Element, Rgb};

fn fill_paint(shape: &PlacedShape) -> String {
    if shape.style.fill.style().is_solid() {
        shape.style.fill_color.to_hex()
    } else {
        format!("url(#fill-{})", shape.id)
    }
}

fn shape_group(shape: &PlacedShape) -> Element {
    let st = &shape.style;
    let mut g = Element::new("g").with("id", shape.id.clone());
    for (prim, face) in &shape.geometry.parts {
        let fill = match face {
            Face::Front => fill_paint(shape),
            Face::Side if shape.kind == crate::model::ShapeKind::Cylinder => fill_paint(shape),
            Face::Side => st.fill_color.darken(0.82).to_hex(),
            Face::Layer(k) => st.fill_color.darken(1.0 - 0.1 * *k as f64).to_hex(),
        };
        let mut e = prim
            .element()
            .with("fill", fill)
            .with("stroke", st.stroke_color.to_hex())
            .with_num("stroke-width", st.stroke_width);
        if let Some(d) = &st.dasharray {
            e = e.with("stroke-dasharray", d.clone());
        }
        g.push(e);
    }
    let anchor = shape.geometry.anchor;
    g.push(
        Element::new("text")
            .with_num("x", anchor.x)
            .with_num("y", anchor.y)
            .with("text-anchor", "middle")
            .with("dominant-baseline", "central")
            .with("font-family", family_list(&st.font))
            .with_num("font-size", st.font_size)
            .with("fill", Rgb::new(0x1a, 0x1a, 0x1a).to_hex())
            .with_text(st.label.clone()),
    );
    g
}

fn marker(c: &Connection) -> Element {
    Element::new("marker")
        .with("id", format!("head-{}", c.id))
        .with("markerUnits", "userSpaceOnUse")
        .with_num("markerWidth", c.head_size)
        .with_num("markerHeight", c.head_size)
        .with("viewBox", "0 0 10 10")
        .with("refX", "10")
        .with("refY", "5")
        .with("orient", "auto")
        .with_child(Element::new("polygon").with("points", "0,0 10,5 0,10").with("fill", c.color.to_hex()))
}

fn arrow_element(c: &Connection) -> Element {
    let e = match c.control {
        None => Element::new("line")
            .with_num("x1", c.start.x)
            .with_num("y1", c.start.y)
            .with_num("x2", c.end.x)
            .with_num("y2", c.end.y),
        Some(q) => Element::new("path")
            .with(
                "d",
                format!(
                    "M {} {} Q {} {} {} {}",
                    fmt_num(c.start.x),
                    fmt_num(c.start.y),
                    fmt_num(q.x),
                    fmt_num(q.y),
                    fmt_num(c.end.x),
                    fmt_num(c.end.y)
                ),
            )
            .with("fill", "none"),
    };
    let e = e
        .with("id", c.id.clone())
        .with("stroke", c.color.to_hex())
        .with_num("stroke-width", c.stroke_width)
        .with("marker-end", format!("url(#head-{})", c.id));
    match &c.dasharray {
        Some(d) => e.with("stroke-dasharray", d.clone()),
        None => e,
    }
}

pub(crate) fn render_svg(cfg: &GenConfig, shapes: &[PlacedShape], arrows: &[Connection], defs: &StyleDefs) -> String {
    let [w, h] = cfg.canvas;
    let mut d = Element::new("defs");
    for e in &defs.elements {
        d.push(e.clone());
    }
    for c in arrows {
        d.push(marker(c));
    }
    let mut root = Element::new("svg")
        .with("xmlns", "http://www.w3.org/2000/svg")
        .with_num("width", w)
        .with_num("height", h)
        .with("viewBox", format!("0 0 {} {}", fmt_num(w), fmt_num(h)))
        .with_child(d);
    for s in shapes {
        root.push(shape_group(s));
    }
    for c in arrows {
        root.push(arrow_element(c));
    }
    rebuild(root).to_svg_string()
}

pub(crate) fn shape_meta(s: &PlacedShape) -> ShapeMeta {
    let c = s.center();
    ShapeMeta {
        id: s.id.clone(),
        attributes: ShapeAttributes {
            label: s.style.label.clone(),
            kind: s.kind,
            fill_color: s.style.fill_color,
            fill_style: s.fill_style(),
            stroke_color: s.style.stroke_color,
            border_style: s.style.border_style,
            center: [c.x, c.y],
            size: s.size(),
            font: s.style.font.clone(),
            stroke_width: s.style.stroke_width,
        },
        extras: ShapeExtras { corner_radius: s.corner_radius(), stack_layers: s.stacked() },
    }
}

pub(crate) fn arrow_meta(c: &Connection) -> ArrowMeta {
    ArrowMeta {
        id: c.id.clone(),
        attributes: ArrowAttributes {
            src: c.src.clone(),
            dst: c.dst.clone(),
            head: true,
            head_size: c.head_size,
            curved: c.curved(),
            color: c.color,
        },
        extras: ArrowExtras {
            stroke_width: c.stroke_width,
            line_pattern: c.line_pattern,
            endpoints: [[c.start.x, c.start.y], [c.end.x, c.end.y]],
            control: c.control.map(|p| [p.x, p.y]),
        },
    }
}
