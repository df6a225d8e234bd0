use std::fmt::Write;

use super::{Element, Node, SvgDocument};

/// Deterministic serialization: attributes in alphabetical order, attribute
/// values written verbatim (escaped), one element per line outside text.
pub fn serialize(doc: &SvgDocument) -> String {
    let mut out = String::new();
    write_element(&doc.root, &mut out, true);
    out.push('\n');
    out
}

fn inline_content(e: &Element) -> bool {
    matches!(
        e.local_name().to_ascii_lowercase().as_str(),
        "text" | "tspan" | "textpath" | "title" | "desc" | "style"
    )
}

fn write_element(e: &Element, out: &mut String, pretty: bool) {
    out.push('<');
    out.push_str(&e.name);
    for (k, v) in &e.attrs {
        let _ = write!(out, " {}=\"{}\"", k, escape(v, true));
    }
    if e.children.is_empty() {
        out.push_str("/>");
        return;
    }
    out.push('>');
    let has_text = e.children.iter().any(|c| matches!(c, Node::Text(_)));
    let pretty_children = pretty && !has_text && !inline_content(e);
    for child in &e.children {
        if pretty_children {
            out.push('\n');
        }
        match child {
            Node::Element(c) => write_element(c, out, pretty_children),
            Node::Text(t) => out.push_str(&escape(t, false)),
            Node::Comment(c) => {
                out.push_str("<!--");
                out.push_str(&c.replace("--", "- -"));
                out.push_str("-->");
            }
        }
    }
    if pretty_children {
        out.push('\n');
    }
    out.push_str("</");
    out.push_str(&e.name);
    out.push('>');
}

fn escape(s: &str, attr: bool) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' if attr => out.push_str("&quot;"),
            '\n' if attr => out.push_str("&#10;"),
            '\t' if attr => out.push_str("&#9;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
    out
}
