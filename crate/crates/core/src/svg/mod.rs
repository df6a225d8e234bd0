//! A read-only model of the practical SVG subset diagrams use.
//!
//! Parsing yields an [`SvgDocument`] whose elements already carry their
//! resolved inheritable style. Everything outside the modelled subset is kept
//! as [`ElementKind::Other`] so documents survive a serialize/parse cycle.

mod color;
mod counts;
mod geom;
mod parse;
mod path;
mod style;
mod write;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use color::{named_color, parse_color, Rgb};
pub use counts::{classify_elements, ElementCounts};
pub use geom::{
    fmt_num, point_segment_distance, quantize, ray_segment_hit, Aabb, Point,
};
pub use parse::{parse_svg, rebuild, MAX_DEPTH};
pub use path::{
    arc_center, arc_to_cubics, parse_path_data, ArcCenter, ArcParams, MalformedPath, PathCommand,
    PathData, Segment, SegmentKind, Verb,
};
pub use style::{
    parse_inline_style, parse_length, parse_url_ref, primary_family, resolve_style, Paint,
    ResolvedStyle,
};

pub(crate) use path::scan_number;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SvgError {
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("element nesting exceeds {limit} levels")]
    DepthExceeded { limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementKind {
    Rect,
    Circle,
    Ellipse,
    Line,
    Polyline,
    Polygon,
    Path,
    Text,
    Group,
    PatternDef,
    GradientDef,
    MarkerDef,
    Other,
}

impl ElementKind {
    /// Classifies a tag, ignoring case and any namespace prefix.
    pub fn from_tag(tag: &str) -> ElementKind {
        let local = local_name(tag).to_ascii_lowercase();
        match local.as_str() {
            "rect" => ElementKind::Rect,
            "circle" => ElementKind::Circle,
            "ellipse" => ElementKind::Ellipse,
            "line" => ElementKind::Line,
            "polyline" => ElementKind::Polyline,
            "polygon" => ElementKind::Polygon,
            "path" => ElementKind::Path,
            "text" => ElementKind::Text,
            "g" => ElementKind::Group,
            "pattern" => ElementKind::PatternDef,
            "lineargradient" | "radialgradient" => ElementKind::GradientDef,
            "marker" => ElementKind::MarkerDef,
            _ => ElementKind::Other,
        }
    }

    pub fn is_geometric(self) -> bool {
        matches!(
            self,
            ElementKind::Rect
                | ElementKind::Circle
                | ElementKind::Ellipse
                | ElementKind::Line
                | ElementKind::Polyline
                | ElementKind::Polygon
                | ElementKind::Path
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ElementKind::Rect => "rect",
            ElementKind::Circle => "circle",
            ElementKind::Ellipse => "ellipse",
            ElementKind::Line => "line",
            ElementKind::Polyline => "polyline",
            ElementKind::Polygon => "polygon",
            ElementKind::Path => "path",
            ElementKind::Text => "text",
            ElementKind::Group => "g",
            ElementKind::PatternDef => "pattern",
            ElementKind::GradientDef => "gradient",
            ElementKind::MarkerDef => "marker",
            ElementKind::Other => "other",
        }
    }
}

pub fn local_name(tag: &str) -> &str {
    tag.rsplit_once(':').map_or(tag, |(_, l)| l)
}

/// Tags whose subtrees are never drawn directly.
pub fn is_definition_container(tag: &str) -> bool {
    matches!(
        local_name(tag).to_ascii_lowercase().as_str(),
        "defs" | "pattern" | "marker" | "clippath" | "mask" | "symbol"
    )
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Element(Element),
    Text(String),
    Comment(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    /// Tag as written, including any namespace prefix.
    pub name: String,
    pub kind: ElementKind,
    pub attrs: BTreeMap<String, String>,
    pub style: ResolvedStyle,
    pub children: Vec<Node>,
}

impl Element {
    /// A bare element; style is filled in when the tree is rebuilt.
    pub fn new(name: &str) -> Element {
        Element {
            name: name.to_string(),
            kind: ElementKind::from_tag(name),
            attrs: BTreeMap::new(),
            style: ResolvedStyle::default(),
            children: Vec::new(),
        }
    }

    pub fn with(mut self, name: &str, value: impl Into<String>) -> Element {
        self.attrs.insert(name.to_string(), value.into());
        self
    }

    /// Sets a numeric attribute using the three-decimal output format.
    pub fn with_num(self, name: &str, value: f64) -> Element {
        self.with(name, fmt_num(value))
    }

    pub fn with_child(mut self, child: Element) -> Element {
        self.children.push(Node::Element(child));
        self
    }

    pub fn with_text(mut self, text: impl Into<String>) -> Element {
        self.children.push(Node::Text(text.into()));
        self
    }

    pub fn push(&mut self, child: Element) {
        self.children.push(Node::Element(child));
    }

    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs.get(name).map(String::as_str)
    }

    /// Numeric attribute (plain number or `px` length).
    pub fn number(&self, name: &str) -> Option<f64> {
        self.attr(name).and_then(parse_length)
    }

    pub fn id(&self) -> Option<&str> {
        self.attr("id")
    }

    pub fn local_name(&self) -> &str {
        local_name(&self.name)
    }

    pub fn child_elements(&self) -> impl Iterator<Item = &Element> {
        self.children.iter().filter_map(|c| match c {
            Node::Element(e) => Some(e),
            _ => None,
        })
    }

    /// Concatenated character data of this element and its descendants.
    pub fn text_content(&self) -> String {
        let mut out = String::new();
        collect_text(self, &mut out);
        out
    }

    /// Parsed `points` of a polyline or polygon.
    pub fn points(&self) -> Vec<Point> {
        let nums = parse_number_list(self.attr("points").unwrap_or(""));
        nums.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect()
    }

    pub fn path_data(&self) -> Option<Result<PathData, MalformedPath>> {
        self.attr("d").map(parse_path_data)
    }

    /// Translation applied by this element's `transform`, and whether the
    /// transform also contained something we do not apply.
    pub fn translation(&self) -> (Point, bool) {
        match self.attr("transform") {
            Some(t) => parse_translate(t),
            None => (Point::default(), false),
        }
    }

    /// Bounding box in the element's own coordinates.
    pub fn bbox(&self) -> Result<Aabb, NoGeometry> {
        element_bbox(self)
    }
}

fn collect_text(e: &Element, out: &mut String) {
    for c in &e.children {
        match c {
            Node::Text(t) => out.push_str(t),
            Node::Element(child) => collect_text(child, out),
            Node::Comment(_) => {}
        }
    }
}

/// Parses a whitespace/comma separated list of numbers, stopping at the first
/// token that is not a number.
pub fn parse_number_list(s: &str) -> Vec<f64> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() || bytes[i] == b',' {
            i += 1;
            continue;
        }
        match scan_number(bytes, i) {
            Some(end) => {
                match s[i..end].parse::<f64>() {
                    Ok(v) => out.push(v),
                    Err(_) => break,
                }
                i = end;
            }
            None => break,
        }
    }
    out
}

/// Sums `translate(...)` entries of a transform list. The flag is set when the
/// list holds any other transform, which is recorded but not applied.
pub fn parse_translate(transform: &str) -> (Point, bool) {
    let mut offset = Point::default();
    let mut approximate = false;
    let mut rest = transform.trim();
    while !rest.is_empty() {
        let Some(open) = rest.find('(') else {
            approximate = true;
            break;
        };
        let Some(close) = rest[open..].find(')').map(|c| c + open) else {
            approximate = true;
            break;
        };
        let name = rest[..open].trim().trim_start_matches(',').trim();
        let args = parse_number_list(&rest[open + 1..close]);
        if name == "translate" && !args.is_empty() {
            offset.x += args[0];
            offset.y += args.get(1).copied().unwrap_or(0.0);
        } else {
            approximate = true;
        }
        rest = rest[close + 1..].trim_start_matches(|c: char| c.is_whitespace() || c == ',');
    }
    (offset, approximate)
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("<{tag}> has no resolvable extent")]
pub struct NoGeometry {
    pub tag: String,
}

/// Bounds of a geometric element in its own user space. Exact for the basic
/// shapes and connectors; for paths, the hull of all endpoints and control points.
pub fn element_bbox(e: &Element) -> Result<Aabb, NoGeometry> {
    let none = || NoGeometry { tag: e.name.clone() };
    let num = |n: &str| e.number(n).unwrap_or(0.0);
    match e.kind {
        ElementKind::Rect => {
            let (w, h) = (e.number("width").ok_or_else(none)?, e.number("height").ok_or_else(none)?);
            let (x, y) = (num("x"), num("y"));
            Ok(Aabb::new(x, y, x + w, y + h))
        }
        ElementKind::Circle => {
            let r = e.number("r").ok_or_else(none)?.abs();
            let (cx, cy) = (num("cx"), num("cy"));
            Ok(Aabb::new(cx - r, cy - r, cx + r, cy + r))
        }
        ElementKind::Ellipse => {
            let rx = e.number("rx").ok_or_else(none)?.abs();
            let ry = e.number("ry").ok_or_else(none)?.abs();
            let (cx, cy) = (num("cx"), num("cy"));
            Ok(Aabb::new(cx - rx, cy - ry, cx + rx, cy + ry))
        }
        ElementKind::Line => Ok(Aabb::new(num("x1"), num("y1"), num("x2"), num("y2"))),
        ElementKind::Polyline | ElementKind::Polygon => {
            Aabb::from_points(e.points()).ok_or_else(none)
        }
        ElementKind::Path => match e.path_data() {
            Some(Ok(p)) => p.control_hull_bbox().ok_or_else(none),
            _ => Err(none()),
        },
        ElementKind::Group => {
            let mut acc: Option<Aabb> = None;
            for child in e.child_elements() {
                if is_definition_container(&child.name) {
                    continue;
                }
                if let Ok(b) = element_bbox(child) {
                    let (t, _) = child.translation();
                    let b = b.translate(t.x, t.y);
                    acc = Some(acc.map_or(b, |a| a.union(&b)));
                }
            }
            acc.ok_or_else(none)
        }
        _ => Err(none()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Canvas {
    pub width: f64,
    pub height: f64,
    pub view_box: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DanglingRef {
    pub attr: String,
    pub id: String,
}

/// A parsed SVG document. Immutable; safe to share across threads.
#[derive(Clone, Debug, PartialEq)]
pub struct SvgDocument {
    pub canvas: Canvas,
    pub root: Element,
    /// Paint servers and markers by id.
    pub defs: BTreeMap<String, Element>,
    pub ids: BTreeSet<String>,
    pub dangling: Vec<DanglingRef>,
}

/// One element visited in document order with its drawing context.
#[derive(Clone, Debug)]
pub struct Visit<'a> {
    pub element: &'a Element,
    /// Ancestors, root first.
    pub ancestors: Vec<&'a Element>,
    /// Accumulated translation of the ancestors and the element itself.
    pub offset: Point,
    /// Some transform on the chain was not applied.
    pub approximate: bool,
    /// Inside defs, pattern, marker or a similar non-rendered container.
    pub in_definition: bool,
}

impl Visit<'_> {
    /// Bounding box in document coordinates.
    pub fn bbox(&self) -> Result<Aabb, NoGeometry> {
        element_bbox(self.element).map(|b| b.translate(self.offset.x, self.offset.y))
    }

    pub fn parent(&self) -> Option<&Element> {
        self.ancestors.last().copied()
    }
}

impl SvgDocument {
    pub fn def(&self, id: &str) -> Option<&Element> {
        self.defs.get(id)
    }

    /// All elements in document order (root included).
    pub fn visits(&self) -> Vec<Visit<'_>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        visit(&self.root, &mut stack, Point::default(), false, false, &mut out);
        out
    }

    pub fn to_svg_string(&self) -> String {
        write::serialize(self)
    }

    /// Applies `edit` to a copy of the element tree and rebuilds the document.
    pub fn edited(&self, edit: impl FnOnce(&mut Element)) -> SvgDocument {
        let mut root = self.root.clone();
        edit(&mut root);
        rebuild(root)
    }
}

fn visit<'a>(
    e: &'a Element,
    stack: &mut Vec<&'a Element>,
    offset: Point,
    approximate: bool,
    in_def: bool,
    out: &mut Vec<Visit<'a>>,
) {
    let (t, approx_here) = e.translation();
    let offset = offset.offset(t.x, t.y);
    let approximate = approximate || approx_here;
    out.push(Visit {
        element: e,
        ancestors: stack.clone(),
        offset,
        approximate,
        in_definition: in_def,
    });
    let child_in_def = in_def || is_definition_container(&e.name);
    stack.push(e);
    for child in e.child_elements() {
        visit(child, stack, offset, approximate, child_in_def, out);
    }
    stack.pop();
}
