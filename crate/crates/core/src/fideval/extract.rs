//! Shape and arrow candidates recovered from an SVG document.

use std::collections::BTreeMap;

use log::warn;
use serde::{Deserialize, Serialize};

use super::scorers::{classify_dasharray, FoundShape, Tiers};
use crate::model::{DashClass, FillStyle, ShapeKind};
use crate::svg::{
    parse_inline_style, parse_url_ref, Aabb, Element, ElementKind, Paint, Point, Rgb, SegmentKind, SvgDocument,
    Verb, Visit,
};

/// One drawn shape, possibly made of several touching elements.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeCandidate {
    pub id: String,
    pub found: FoundShape,
    pub kind: ShapeKind,
    pub label: String,
    pub fill_color: Option<Rgb>,
    pub fill_style: FillStyle,
    pub stroke_color: Option<Rgb>,
    pub dasharray: Option<String>,
    pub stroke_width: f64,
    pub font: Option<String>,
    pub aabb: Aabb,
    pub corner_radius: Option<f64>,
    pub stack_layers: Option<u8>,
}

impl ShapeCandidate {
    pub fn center(&self) -> Point {
        self.aabb.center()
    }

    pub fn size(&self) -> [f64; 2] {
        [self.aabb.width(), self.aabb.height()]
    }

    pub fn border_style(&self, tiers: &Tiers) -> DashClass {
        classify_dasharray(self.dasharray.as_deref(), self.stroke_width, tiers)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowCandidate {
    pub id: String,
    pub start: Point,
    pub end: Point,
    pub control: Option<Point>,
    pub curved: bool,
    pub head: bool,
    /// Head extent in px, when a head was found.
    pub head_size: Option<f64>,
    pub stroke_width: f64,
    pub color: Option<Rgb>,
    pub dasharray: Option<String>,
    /// Shape index each endpoint binds to.
    pub bound: [Option<usize>; 2],
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub shapes: Vec<ShapeCandidate>,
    pub arrows: Vec<ArrowCandidate>,
}

/// Index of the shape box nearest to `p` within `radius` (0 when inside).
/// Among boxes containing `p` the one whose center is closest wins.
pub fn bind_endpoint(p: Point, boxes: &[Aabb], radius: f64) -> Option<usize> {
    let mut best: Option<(f64, f64, usize)> = None;
    for (i, b) in boxes.iter().enumerate() {
        let d = b.distance_to(p);
        if d > radius {
            continue;
        }
        let key = (d, b.center().distance(p), i);
        if best.is_none_or(|cur| (key.0, key.1) < (cur.0, cur.1)) {
            best = Some(key);
        }
    }
    best.map(|b| b.2)
}

fn first_stop_color(doc: &SvgDocument, grad: &Element, depth: usize) -> Option<Rgb> {
    if let Some(stop) = grad.child_elements().find(|c| c.local_name().eq_ignore_ascii_case("stop")) {
        let inline = stop.attr("style").map(parse_inline_style).unwrap_or_default();
        let value = inline
            .iter()
            .rev()
            .find(|(k, _)| k == "stop-color")
            .map(|(_, v)| v.clone())
            .or_else(|| stop.attr("stop-color").map(str::to_string));
        return value.and_then(|v| Paint::parse(&v).color());
    }
    let href = grad.attr("href").or_else(|| grad.attr("xlink:href"))?;
    let target = doc.def(href.trim().strip_prefix('#')?)?;
    if depth < 4 {
        first_stop_color(doc, target, depth + 1)
    } else {
        None
    }
}

fn line_directions(e: &Element, out: &mut Vec<(f64, f64)>, dots: &mut bool, other: &mut bool, tile: Option<Aabb>) {
    for c in e.child_elements() {
        match c.kind {
            ElementKind::Circle | ElementKind::Ellipse => *dots = true,
            ElementKind::Line => {
                let n = |k: &str| c.number(k).unwrap_or(0.0);
                out.push((n("x2") - n("x1"), n("y2") - n("y1")));
            }
            ElementKind::Polyline => {
                for w in c.points().windows(2) {
                    out.push((w[1].x - w[0].x, w[1].y - w[0].y));
                }
            }
            ElementKind::Path => match c.path_data() {
                Some(Ok(p)) => {
                    for s in p.segments() {
                        match s.kind {
                            SegmentKind::Line => out.push((s.to.x - s.from.x, s.to.y - s.from.y)),
                            SegmentKind::Move => {}
                            _ => *other = true,
                        }
                    }
                }
                _ => *other = true,
            },
            ElementKind::Rect => {
                let covers = match (tile, c.bbox()) {
                    (Some(t), Ok(b)) => b.contains_box(&t.inflate(-1e-6)),
                    _ => false,
                };
                if !covers {
                    *other = true;
                }
            }
            ElementKind::Group => line_directions(c, out, dots, other, tile),
            _ => {}
        }
    }
}

/// Classifies a paint server element by its content.
pub fn infer_fill_style(def: &Element) -> FillStyle {
    match def.local_name().to_ascii_lowercase().as_str() {
        "lineargradient" => return FillStyle::LinearGradient,
        "radialgradient" => return FillStyle::RadialGradient,
        "pattern" => {}
        _ => return FillStyle::GenericPattern,
    }
    let tile = match (def.number("width"), def.number("height")) {
        (Some(w), Some(h)) if w > 0.0 && h > 0.0 => {
            let (x, y) = (def.number("x").unwrap_or(0.0), def.number("y").unwrap_or(0.0));
            Some(Aabb::new(x, y, x + w, y + h))
        }
        _ => None,
    };
    let (mut dirs, mut dots, mut other) = (Vec::new(), false, false);
    line_directions(def, &mut dirs, &mut dots, &mut other, tile);
    if dots {
        return FillStyle::Dots;
    }
    if other || dirs.is_empty() {
        return FillStyle::GenericPattern;
    }
    // Directions as angles in [0, 180), grouped within one degree.
    let mut angles: Vec<f64> = Vec::new();
    for (dx, dy) in dirs {
        if dx.hypot(dy) < 1e-9 {
            continue;
        }
        let a = dy.atan2(dx).to_degrees().rem_euclid(180.0);
        let a = if a > 179.0 { 0.0 } else { a };
        if !angles.iter().any(|b| (a - b).abs() <= 1.0) {
            angles.push(a);
        }
    }
    match angles.as_slice() {
        [] => FillStyle::GenericPattern,
        [a] if a.abs() <= 1.0 => FillStyle::HorizontalLines,
        [a] if (a - 90.0).abs() <= 1.0 => FillStyle::GenericPattern,
        [_] => FillStyle::Hatching,
        _ if angles.iter().all(|a| a.abs() <= 1.0) => FillStyle::HorizontalLines,
        _ => FillStyle::Crosshatch,
    }
}

/// Visible fill color and fill style of a paint. `none` reads as the white
/// page underneath.
pub fn resolve_fill(doc: &SvgDocument, paint: &Paint) -> (Option<Rgb>, FillStyle) {
    match paint {
        Paint::Color(c) => (Some(*c), FillStyle::Solid),
        Paint::None => (Some(Rgb::WHITE), FillStyle::Solid),
        Paint::Unknown(_) => (None, FillStyle::Solid),
        Paint::Url(id) => match doc.def(id) {
            None => {
                warn!("fill references missing paint server #{id}, treating as solid");
                (None, FillStyle::Solid)
            }
            Some(def) => {
                let style = infer_fill_style(def);
                let color = if style.is_gradient() {
                    first_stop_color(doc, def, 0)
                } else {
                    def.child_elements().find_map(|c| c.style.fill.color())
                };
                (color, style)
            }
        },
    }
}

fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn polygon_kind(pts: &[Point]) -> ShapeKind {
    let Some(b) = Aabb::from_points(pts.iter().copied()) else { return ShapeKind::Other };
    let tol = 0.02 * b.width().max(b.height()).max(1.0);
    match pts.len() {
        3 => ShapeKind::Prism,
        6 => ShapeKind::Hexagon,
        4 => {
            let c = b.center();
            let mids = [
                Point::new(c.x, b.min_y),
                Point::new(b.max_x, c.y),
                Point::new(c.x, b.max_y),
                Point::new(b.min_x, c.y),
            ];
            if pts.iter().all(|p| mids.iter().any(|m| m.distance(*p) <= tol)) {
                return ShapeKind::Diamond;
            }
            let top: Vec<&Point> = pts.iter().filter(|p| approx(p.y, b.min_y, tol)).collect();
            let bottom: Vec<&Point> = pts.iter().filter(|p| approx(p.y, b.max_y, tol)).collect();
            if top.len() != 2 || bottom.len() != 2 {
                return ShapeKind::Other;
            }
            let span = |v: &[&Point]| {
                let (a, b) = (v[0].x.min(v[1].x), v[0].x.max(v[1].x));
                (a, b)
            };
            let (t0, t1) = span(&top);
            let (b0, b1) = span(&bottom);
            if approx(t0, b0, tol) && approx(t1, b1, tol) {
                if approx(b.width(), b.height(), tol) {
                    ShapeKind::Square
                } else {
                    ShapeKind::Rectangle
                }
            } else if approx(t1 - t0, b1 - b0, tol) {
                ShapeKind::Parallelogram
            } else {
                ShapeKind::Trapezoid
            }
        }
        _ => ShapeKind::Other,
    }
}

fn element_kind(e: &Element, b: &Aabb) -> ShapeKind {
    let tol = 1e-6 * b.width().max(b.height()).max(1.0);
    match e.kind {
        ElementKind::Rect => {
            let (w, h) = (b.width(), b.height());
            let r = e.number("rx").or_else(|| e.number("ry")).unwrap_or(0.0);
            if w > h && r >= h.min(w) / 2.0 - 1e-3 {
                ShapeKind::TextLabel
            } else if approx(w, h, tol) {
                ShapeKind::Square
            } else {
                ShapeKind::Rectangle
            }
        }
        ElementKind::Circle => ShapeKind::Circle,
        ElementKind::Ellipse => {
            if approx(b.width(), b.height(), tol) {
                ShapeKind::Circle
            } else {
                ShapeKind::Ellipse
            }
        }
        ElementKind::Polygon => polygon_kind(&e.points()),
        ElementKind::Path => match e.path_data() {
            Some(Ok(p)) => {
                let verbs: Vec<Verb> = p.commands.iter().map(|c| c.verb).collect();
                if verbs.contains(&Verb::A) {
                    ShapeKind::Cloud
                } else if p.contains_curve() {
                    if verbs.iter().any(|v| matches!(v, Verb::L | Verb::H | Verb::V)) {
                        ShapeKind::WaveRect
                    } else {
                        ShapeKind::Blob
                    }
                } else {
                    let pts: Vec<Point> = p
                        .segments()
                        .iter()
                        .filter(|s| s.kind != SegmentKind::Move)
                        .map(|s| s.to)
                        .collect();
                    let mut ring = pts.clone();
                    ring.dedup_by(|a, b| a.distance(*b) < 1e-9);
                    if ring.len() > 1 && ring[0].distance(ring[ring.len() - 1]) < 1e-9 {
                        ring.pop();
                    }
                    polygon_kind(&ring)
                }
            }
            _ => ShapeKind::Other,
        },
        _ => ShapeKind::Other,
    }
}

struct Member<'a> {
    visit: Visit<'a>,
    bbox: Aabb,
}

fn composite_kind(members: &[Member<'_>]) -> (ShapeKind, Option<u8>) {
    let front = members.last().expect("non-empty unit");
    let front_kind = element_kind(front.visit.element, &front.bbox);
    if members.len() == 1 {
        return (front_kind, None);
    }
    let same_tag = members.iter().all(|m| m.visit.element.kind == front.visit.element.kind);
    let tol = 1e-3 * front.bbox.width().max(front.bbox.height()).max(1.0);
    let same_size = members
        .iter()
        .all(|m| approx(m.bbox.width(), front.bbox.width(), tol) && approx(m.bbox.height(), front.bbox.height(), tol));
    if same_tag && same_size {
        return (front_kind, Some(members.len().min(u8::MAX as usize) as u8));
    }
    let has = |k: ElementKind| members.iter().any(|m| m.visit.element.kind == k);
    if has(ElementKind::Ellipse) && has(ElementKind::Path) && members.len() == 2 {
        return (ShapeKind::Cylinder, None);
    }
    let kind = match front_kind {
        ShapeKind::Rectangle | ShapeKind::Square => ShapeKind::Cube,
        ShapeKind::Diamond => ShapeKind::Diamond3d,
        ShapeKind::Hexagon => ShapeKind::Hexagon3d,
        ShapeKind::Trapezoid => ShapeKind::Trapezoid3d,
        ShapeKind::Prism => ShapeKind::Prism,
        _ => ShapeKind::Other,
    };
    (kind, None)
}

fn is_open(e: &Element) -> bool {
    match e.kind {
        ElementKind::Line | ElementKind::Polyline => true,
        ElementKind::Path => matches!(e.path_data(), Some(Ok(p)) if !p.is_closed()),
        _ => false,
    }
}

fn is_closed_shape(e: &Element) -> bool {
    match e.kind {
        ElementKind::Rect | ElementKind::Circle | ElementKind::Ellipse | ElementKind::Polygon => true,
        ElementKind::Path => matches!(e.path_data(), Some(Ok(p)) if p.is_closed()),
        _ => false,
    }
}

/// Property from an attribute or inline style, searching ancestors too.
fn inherited_prop(v: &Visit<'_>, name: &str) -> Option<String> {
    let own = |e: &Element| -> Option<String> {
        let inline = e.attr("style").map(parse_inline_style).unwrap_or_default();
        inline
            .iter()
            .rev()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.clone())
            .or_else(|| e.attr(name).map(str::to_string))
    };
    std::iter::once(v.element).chain(v.ancestors.iter().rev().copied()).find_map(own)
}

fn marker_size(doc: &SvgDocument, value: &str, stroke_width: f64) -> Option<f64> {
    let id = parse_url_ref(value)?;
    let m = doc.def(&id).filter(|m| m.kind == ElementKind::MarkerDef)?;
    let w = m.number("markerWidth").unwrap_or(3.0);
    let h = m.number("markerHeight").unwrap_or(3.0);
    let size = w.max(h);
    let user = m.attr("markerUnits").is_some_and(|u| u.trim() == "userSpaceOnUse");
    Some(if user { size } else { size * stroke_width })
}

fn text_anchor(v: &Visit<'_>, content: &str) -> Point {
    let e = v.element;
    let x = e.attr("x").and_then(|s| crate::svg::parse_number_list(s).first().copied()).unwrap_or(0.0);
    let y = e.attr("y").and_then(|s| crate::svg::parse_number_list(s).first().copied()).unwrap_or(0.0);
    let fs = inherited_prop(v, "font-size").and_then(|s| crate::svg::parse_length(&s)).unwrap_or(16.0);
    let width = 0.55 * fs * content.chars().count() as f64;
    let dx = match inherited_prop(v, "text-anchor").as_deref().map(str::trim) {
        Some("middle") => 0.0,
        Some("end") => -width / 2.0,
        _ => width / 2.0,
    };
    let dy = match inherited_prop(v, "dominant-baseline").as_deref().map(str::trim) {
        Some("central") | Some("middle") => 0.0,
        Some("hanging") | Some("text-before-edge") => 0.35 * fs,
        _ => -0.35 * fs,
    };
    Point::new(x + dx + v.offset.x, y + dy + v.offset.y)
}

fn open_endpoints(e: &Element) -> Option<(Point, Point, Option<Point>, bool)> {
    match e.kind {
        ElementKind::Line => {
            let n = |k: &str| e.number(k).unwrap_or(0.0);
            Some((Point::new(n("x1"), n("y1")), Point::new(n("x2"), n("y2")), None, false))
        }
        ElementKind::Polyline => {
            let pts = e.points();
            Some((*pts.first()?, *pts.last()?, None, false))
        }
        ElementKind::Path => {
            let p = e.path_data()?.ok()?;
            let control = p.segments().iter().find_map(|s| match s.kind {
                SegmentKind::Quad(c) => Some(c),
                _ => None,
            });
            Some((p.first_point()?, p.last_point()?, control, p.contains_curve()))
        }
        _ => None,
    }
}

fn parent_key(v: &Visit<'_>) -> Option<usize> {
    // The root is never a grouping parent.
    if v.ancestors.len() < 2 {
        return None;
    }
    v.parent().filter(|p| p.kind == ElementKind::Group).map(|p| p as *const Element as usize)
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Recovers shapes and arrows from `doc`.
pub fn extract(doc: &SvgDocument, tiers: &Tiers) -> Extraction {
    let visits = doc.visits();
    let mut closed: Vec<Member<'_>> = Vec::new();
    let mut opens: Vec<Visit<'_>> = Vec::new();
    let mut heads: Vec<Member<'_>> = Vec::new();
    let mut texts: Vec<(Point, String, Option<String>)> = Vec::new();

    for v in visits.into_iter().skip(1) {
        if v.in_definition || is_definition_like(v.element) {
            continue;
        }
        let e = v.element;
        if e.kind == ElementKind::Text {
            let content = e.text_content().split_whitespace().collect::<Vec<_>>().join(" ");
            if !content.is_empty() {
                texts.push((text_anchor(&v, &content), content, e.style.primary_font()));
            }
            continue;
        }
        if is_open(e) {
            opens.push(v);
            continue;
        }
        if !is_closed_shape(e) {
            continue;
        }
        let Ok(bbox) = v.bbox() else { continue };
        if e.style.fill == Paint::None && e.style.stroke == Paint::None {
            continue;
        }
        let sibling_open = parent_key(&v).is_some()
            && v.parent().is_some_and(|p| p.child_elements().any(is_open));
        let member = Member { visit: v, bbox };
        if matches!(e.kind, ElementKind::Polygon | ElementKind::Path) && sibling_open {
            heads.push(member);
        } else {
            closed.push(member);
        }
    }

    // Merge touching siblings of one group, unless one encloses the other.
    let n = closed.len();
    let mut uf: Vec<usize> = (0..n).collect();
    let mut by_parent: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, m) in closed.iter().enumerate() {
        if let Some(k) = parent_key(&m.visit) {
            by_parent.entry(k).or_default().push(i);
        }
    }
    for idx in by_parent.values() {
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                let (bi, bj) = (closed[i].bbox, closed[j].bbox);
                if bi.inflate(0.5).intersects(&bj) && !bi.contains_box(&bj) && !bj.contains_box(&bi) {
                    let (ri, rj) = (find(&mut uf, i), find(&mut uf, j));
                    if ri != rj {
                        uf[rj.max(ri)] = ri.min(rj);
                    }
                }
            }
        }
    }
    let mut units: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut uf, i);
        units.entry(r).or_default().push(i);
    }
    let mut unit_list: Vec<Vec<usize>> = units.into_values().collect();
    unit_list.sort_by_key(|u| u[0]);

    let mut slots: Vec<Option<Member<'_>>> = closed.into_iter().map(Some).collect();
    let mut groups: Vec<Vec<Member<'_>>> = unit_list
        .iter()
        .map(|u| u.iter().map(|&i| slots[i].take().expect("each member used once")).collect())
        .collect();

    let aabbs: Vec<Aabb> = groups
        .iter()
        .map(|g| g.iter().map(|m| m.bbox).reduce(|a, b| a.union(&b)).expect("non-empty"))
        .collect();

    // Labels: each text goes to the nearest unit around its anchor.
    let mut labels: Vec<Vec<(String, Option<String>)>> = vec![Vec::new(); groups.len()];
    for (p, content, font) in texts {
        let best = aabbs
            .iter()
            .enumerate()
            .filter(|(_, b)| b.inflate(10.0).contains(p))
            .min_by(|(_, a), (_, b)| {
                let ka = (a.distance_to(p), a.width() * a.height());
                let kb = (b.distance_to(p), b.width() * b.height());
                ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i);
        if let Some(i) = best {
            labels[i].push((content, font));
        }
    }

    // Parents holding exactly one unit lend it their id.
    let mut per_parent: BTreeMap<usize, usize> = BTreeMap::new();
    for g in &groups {
        if let Some(k) = parent_key(&g[0].visit) {
            *per_parent.entry(k).or_default() += 1;
        }
    }

    let mut shapes = Vec::with_capacity(groups.len());
    for (i, g) in groups.iter_mut().enumerate() {
        let (kind, stack_layers) = composite_kind(g);
        let front = g.last().expect("non-empty unit");
        let e = front.visit.element;
        let (fill_color, fill_style) = resolve_fill(doc, &e.style.fill);
        let id = match (parent_key(&front.visit), front.visit.parent().and_then(Element::id)) {
            (Some(k), Some(pid)) if per_parent.get(&k) == Some(&1) => pid.to_string(),
            _ => format!("s{i}"),
        };
        let label = labels[i].iter().map(|(t, _)| t.as_str()).collect::<Vec<_>>().join(" ");
        let font = labels[i].iter().find_map(|(_, f)| f.clone());
        let corner_radius = match e.kind {
            ElementKind::Rect if matches!(kind, ShapeKind::Rectangle | ShapeKind::Square) => {
                e.number("rx").or_else(|| e.number("ry")).filter(|r| *r > 0.0)
            }
            _ => None,
        };
        shapes.push(ShapeCandidate {
            id,
            found: FoundShape { tag: e.kind, composite: g.len() > 1 },
            kind,
            label,
            fill_color,
            fill_style,
            // An unstroked outline shows the fill color.
            stroke_color: if e.style.stroke == Paint::None { fill_color } else { e.style.stroke.color() },
            dasharray: e.style.stroke_dasharray.clone().filter(|d| !d.trim().eq_ignore_ascii_case("none")),
            stroke_width: e.style.stroke_width,
            font,
            aabb: aabbs[i],
            corner_radius,
            stack_layers,
        });
    }

    // Arrows.
    let mut arrows = Vec::new();
    let mut head_used = vec![false; heads.len()];
    for v in &opens {
        let e = v.element;
        let Some((s, t, control, curved)) = open_endpoints(e) else { continue };
        let (ox, oy) = (v.offset.x, v.offset.y);
        let (mut start, mut end) = (s.offset(ox, oy), t.offset(ox, oy));
        let control = control.map(|c| c.offset(ox, oy));
        let sw = e.style.stroke_width;
        let mut head = false;
        let mut head_size = None;
        if let Some(m) = inherited_prop(v, "marker-end").and_then(|m| marker_size(doc, &m, sw)) {
            head = true;
            head_size = Some(m);
        } else if let Some(m) = inherited_prop(v, "marker-start").and_then(|m| marker_size(doc, &m, sw)) {
            head = true;
            head_size = Some(m);
            std::mem::swap(&mut start, &mut end);
        } else {
            let key = parent_key(v);
            let near = heads
                .iter()
                .enumerate()
                .filter(|(j, h)| !head_used[*j] && key.is_some() && parent_key(&h.visit) == key)
                .min_by(|(_, a), (_, b)| {
                    let da = a.bbox.center().distance(start).min(a.bbox.center().distance(end));
                    let db = b.bbox.center().distance(start).min(b.bbox.center().distance(end));
                    da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
                })
                .map(|(j, h)| (j, h.bbox));
            if let Some((j, hb)) = near {
                head_used[j] = true;
                head = true;
                head_size = Some(hb.width().max(hb.height()));
                if hb.center().distance(start) < hb.center().distance(end) {
                    std::mem::swap(&mut start, &mut end);
                }
            }
        }
        let bound = [
            bind_endpoint(start, &aabbs, tiers.bind_radius),
            bind_endpoint(end, &aabbs, tiers.bind_radius),
        ];
        let connects = matches!(bound, [Some(a), Some(b)] if a != b);
        if !(head || connects) {
            continue;
        }
        arrows.push(ArrowCandidate {
            id: e.id().map_or_else(|| format!("a{}", arrows.len()), str::to_string),
            start,
            end,
            control,
            curved,
            head,
            head_size,
            stroke_width: sw,
            color: e.style.stroke.color(),
            dasharray: e.style.stroke_dasharray.clone().filter(|d| !d.trim().eq_ignore_ascii_case("none")),
            bound,
        });
    }
    Extraction { shapes, arrows }
}

fn is_definition_like(e: &Element) -> bool {
    crate::svg::is_definition_container(&e.name)
}
