use std::collections::{BTreeMap, BTreeSet};

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::style::{parse_length, parse_url_ref, ResolvedStyle};
use super::{Canvas, DanglingRef, Element, ElementKind, Node, SvgDocument, SvgError};

pub const MAX_DEPTH: usize = 128;

// Elements whose whitespace-only character data is meaningful.
fn keeps_whitespace(tag: &str) -> bool {
    matches!(
        super::local_name(tag).to_ascii_lowercase().as_str(),
        "text" | "tspan" | "textpath" | "title" | "desc" | "style"
    )
}

fn line_of(text: &str, pos: usize) -> usize {
    let end = pos.min(text.len());
    text.as_bytes()[..end].iter().filter(|&&b| b == b'\n').count() + 1
}

/// Parses SVG text into a document. Never panics on malformed input.
pub fn parse_svg(text: &str) -> Result<SvgDocument, SvgError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().check_end_names = true;

    let err = |reader: &Reader<&[u8]>, reason: String| SvgError::Parse {
        line: line_of(text, reader.error_position() as usize),
        reason,
    };
    let err_at = |pos: u64, reason: String| SvgError::Parse { line: line_of(text, pos as usize), reason };

    let mut stack: Vec<Element> = Vec::new();
    let mut root: Option<Element> = None;

    loop {
        let pos = reader.buffer_position();
        let event = reader.read_event().map_err(|e| err(&reader, e.to_string()))?;
        match event {
            Event::Start(start) => {
                if root.is_some() {
                    return Err(err_at(pos, "content after the root element".into()));
                }
                if stack.len() + 1 > MAX_DEPTH {
                    return Err(SvgError::DepthExceeded { limit: MAX_DEPTH });
                }
                let el = open_element(&start, stack.last()).map_err(|r| err_at(pos, r))?;
                stack.push(el);
            }
            Event::Empty(start) => {
                if root.is_some() {
                    return Err(err_at(pos, "content after the root element".into()));
                }
                if stack.len() + 1 > MAX_DEPTH {
                    return Err(SvgError::DepthExceeded { limit: MAX_DEPTH });
                }
                let el = open_element(&start, stack.last()).map_err(|r| err_at(pos, r))?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(Node::Element(el)),
                    None => root = Some(el),
                }
            }
            Event::End(_) => {
                let el = stack.pop().ok_or_else(|| err_at(pos, "unexpected end tag".into()))?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(Node::Element(el)),
                    None => root = Some(el),
                }
            }
            Event::Text(t) => {
                let s = t.unescape().map_err(|e| err_at(pos, e.to_string()))?;
                push_text(&mut stack, &s, root.is_some()).map_err(|r| err_at(pos, r))?;
            }
            Event::CData(t) => {
                let s = String::from_utf8_lossy(&t).into_owned();
                push_text(&mut stack, &s, root.is_some()).map_err(|r| err_at(pos, r))?;
            }
            Event::Comment(c) => {
                if let Some(parent) = stack.last_mut() {
                    let s = String::from_utf8_lossy(&c).into_owned();
                    parent.children.push(Node::Comment(s));
                }
            }
            Event::Decl(_) | Event::PI(_) | Event::DocType(_) => {}
            Event::Eof => break,
        }
    }

    if !stack.is_empty() {
        return Err(err_at(
            text.len() as u64,
            format!("unclosed element <{}>", stack.last().unwrap().name),
        ));
    }
    let root = root.ok_or_else(|| err_at(0, "no root element".into()))?;
    if !root.local_name().eq_ignore_ascii_case("svg") {
        return Err(err_at(0, format!("root element is <{}>, not <svg>", root.name)));
    }
    Ok(finish(root))
}

fn push_text(stack: &mut [Element], s: &str, after_root: bool) -> Result<(), String> {
    match stack.last_mut() {
        Some(parent) => {
            if s.trim().is_empty() && !keeps_whitespace(&parent.name) {
                return Ok(());
            }
            if let Some(Node::Text(prev)) = parent.children.last_mut() {
                prev.push_str(s);
            } else {
                parent.children.push(Node::Text(s.to_string()));
            }
            Ok(())
        }
        None if s.trim().is_empty() => Ok(()),
        None if after_root => Err("text after the root element".into()),
        None => Err("text before the root element".into()),
    }
}

fn open_element(start: &BytesStart<'_>, parent: Option<&Element>) -> Result<Element, String> {
    let name = std::str::from_utf8(start.name().as_ref())
        .map_err(|e| e.to_string())?
        .to_string();
    let mut attrs = BTreeMap::new();
    for attr in start.attributes().with_checks(true) {
        let attr = attr.map_err(|e| e.to_string())?;
        let key = std::str::from_utf8(attr.key.as_ref()).map_err(|e| e.to_string())?.to_string();
        let value = attr.unescape_value().map_err(|e| e.to_string())?.into_owned();
        attrs.insert(key, value);
    }
    let inherited = parent.map(|p| p.style.clone()).unwrap_or_default();
    let style = inherited.cascade(&attrs);
    Ok(Element { kind: ElementKind::from_tag(&name), name, attrs, style, children: Vec::new() })
}

const REF_ATTRS: [&str; 9] = [
    "fill",
    "stroke",
    "marker-start",
    "marker-mid",
    "marker-end",
    "clip-path",
    "mask",
    "filter",
    "style",
];

/// Rebuilds a document from an edited element tree, recomputing every
/// resolved style and the id/definition tables.
pub fn rebuild(mut root: Element) -> SvgDocument {
    restyle(&mut root, &ResolvedStyle::default());
    finish(root)
}

fn restyle(e: &mut Element, inherited: &ResolvedStyle) {
    e.kind = ElementKind::from_tag(&e.name);
    e.style = inherited.cascade(&e.attrs);
    let style = e.style.clone();
    for child in &mut e.children {
        if let Node::Element(c) = child {
            restyle(c, &style);
        }
    }
}

fn finish(root: Element) -> SvgDocument {
    let mut defs = BTreeMap::new();
    let mut ids = BTreeSet::new();
    let mut refs = Vec::new();
    gather(&root, &mut defs, &mut ids, &mut refs);
    let dangling = refs.into_iter().filter(|r| !ids.contains(&r.id)).collect();
    SvgDocument { canvas: canvas_of(&root), root, defs, ids, dangling }
}

fn gather(
    e: &Element,
    defs: &mut BTreeMap<String, Element>,
    ids: &mut BTreeSet<String>,
    refs: &mut Vec<DanglingRef>,
) {
    if let Some(id) = e.id() {
        ids.insert(id.to_string());
        if matches!(
            e.kind,
            ElementKind::PatternDef | ElementKind::GradientDef | ElementKind::MarkerDef
        ) {
            defs.entry(id.to_string()).or_insert_with(|| e.clone());
        }
    }
    for name in REF_ATTRS {
        if let Some(value) = e.attr(name) {
            if name == "style" {
                for (prop, v) in super::style::parse_inline_style(value) {
                    if let Some(id) = parse_url_ref(&v) {
                        refs.push(DanglingRef { attr: prop, id });
                    }
                }
            } else if let Some(id) = parse_url_ref(value) {
                refs.push(DanglingRef { attr: name.to_string(), id });
            }
        }
    }
    for name in ["href", "xlink:href"] {
        if let Some(id) = e.attr(name).and_then(|v| v.trim().strip_prefix('#')) {
            refs.push(DanglingRef { attr: name.to_string(), id: id.to_string() });
        }
    }
    for child in e.child_elements() {
        gather(child, defs, ids, refs);
    }
}

fn canvas_of(root: &Element) -> Canvas {
    let vb: Option<[f64; 4]> = root.attr("viewBox").and_then(|v| {
        let n = super::parse_number_list(v);
        (n.len() == 4).then(|| [n[0], n[1], n[2], n[3]])
    });
    let width = root.attr("width").and_then(parse_length).or(vb.map(|v| v[2])).unwrap_or(0.0);
    let height = root.attr("height").and_then(parse_length).or(vb.map(|v| v[3])).unwrap_or(0.0);
    Canvas { width, height, view_box: vb.unwrap_or([0.0, 0.0, width, height]) }
}
