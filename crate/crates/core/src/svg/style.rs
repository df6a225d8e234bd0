use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::color::{parse_color, Rgb};

/// A fill or stroke value after parsing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Paint {
    None,
    Color(Rgb),
    /// Reference to a paint server (`url(#id)`), id without the hash.
    Url(String),
    /// Anything we could not parse; scored as a mismatch downstream.
    Unknown(String),
}

impl Paint {
    pub fn parse(value: &str) -> Paint {
        let v = value.trim();
        if v.eq_ignore_ascii_case("none") || v.eq_ignore_ascii_case("transparent") {
            return Paint::None;
        }
        if let Some(id) = parse_url_ref(v) {
            return Paint::Url(id);
        }
        match parse_color(v) {
            Some(c) => Paint::Color(c),
            None => Paint::Unknown(v.to_string()),
        }
    }

    pub fn color(&self) -> Option<Rgb> {
        match self {
            Paint::Color(c) => Some(*c),
            _ => None,
        }
    }
}

/// Extracts `id` from `url(#id)` (optionally quoted, optionally followed by a fallback).
pub fn parse_url_ref(value: &str) -> Option<String> {
    let v = value.trim();
    let rest = v.strip_prefix("url(")?;
    let close = rest.find(')')?;
    let inner = rest[..close].trim().trim_matches(|c| c == '\'' || c == '"');
    let id = inner.strip_prefix('#')?;
    if id.is_empty() {
        None
    } else {
        Some(id.to_string())
    }
}

/// Effective inheritable presentation properties of an element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedStyle {
    pub fill: Paint,
    pub stroke: Paint,
    pub stroke_width: f64,
    pub stroke_dasharray: Option<String>,
    pub font_family: Option<String>,
}

impl Default for ResolvedStyle {
    fn default() -> Self {
        ResolvedStyle {
            fill: Paint::Color(Rgb::BLACK),
            stroke: Paint::None,
            stroke_width: 1.0,
            stroke_dasharray: None,
            font_family: None,
        }
    }
}

impl ResolvedStyle {
    /// Applies the declarations of one element on top of the inherited style.
    pub fn cascade(&self, attrs: &BTreeMap<String, String>) -> ResolvedStyle {
        let mut out = self.clone();
        let inline = attrs.get("style").map(|s| parse_inline_style(s)).unwrap_or_default();
        let lookup = |name: &str| -> Option<&str> {
            inline
                .iter()
                .rev()
                .find(|(k, _)| k == name)
                .map(|(_, v)| v.as_str())
                .or_else(|| attrs.get(name).map(String::as_str))
                .map(str::trim)
                .filter(|v| !v.is_empty() && !v.eq_ignore_ascii_case("inherit"))
        };
        if let Some(v) = lookup("fill") {
            out.fill = Paint::parse(v);
        }
        if let Some(v) = lookup("stroke") {
            out.stroke = Paint::parse(v);
        }
        if let Some(w) = lookup("stroke-width").and_then(parse_length) {
            if w >= 0.0 {
                out.stroke_width = w;
            }
        }
        if let Some(v) = lookup("stroke-dasharray") {
            out.stroke_dasharray = Some(v.to_string());
        }
        if let Some(v) = lookup("font-family") {
            out.font_family = Some(v.to_string());
        }
        out
    }

    /// First family of the font-family list, unquoted.
    pub fn primary_font(&self) -> Option<String> {
        self.font_family.as_deref().and_then(primary_family)
    }
}

pub fn primary_family(list: &str) -> Option<String> {
    list.split(',')
        .map(|f| f.trim().trim_matches(|c| c == '\'' || c == '"').trim())
        .find(|f| !f.is_empty())
        .map(str::to_string)
}

/// Splits a `style` attribute into lowercase property names and values.
pub fn parse_inline_style(style: &str) -> Vec<(String, String)> {
    style
        .split(';')
        .filter_map(|decl| {
            let (name, value) = decl.split_once(':')?;
            let name = name.trim().to_ascii_lowercase();
            let value = value.trim();
            let value = value.strip_suffix("!important").unwrap_or(value).trim();
            if name.is_empty() {
                None
            } else {
                Some((name, value.to_string()))
            }
        })
        .collect()
}

/// Parses a length, accepting a trailing `px`. Other units are rejected.
pub fn parse_length(value: &str) -> Option<f64> {
    let v = value.trim();
    let v = v.strip_suffix("px").unwrap_or(v).trim();
    let n: f64 = v.parse().ok()?;
    n.is_finite().then_some(n)
}

/// Computes the style of an element from scratch given its ancestors
/// (root first). Nearest declaration wins; inline style beats presentation
/// attributes on the same element.
pub fn resolve_style(
    node: &BTreeMap<String, String>,
    ancestors: &[&BTreeMap<String, String>],
) -> ResolvedStyle {
    let inherited = ancestors
        .iter()
        .fold(ResolvedStyle::default(), |acc, attrs| acc.cascade(attrs));
    inherited.cascade(node)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn attrs(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn inherits_from_group() {
        let g = attrs(&[("stroke", "#f00")]);
        let line = attrs(&[]);
        let s = resolve_style(&line, &[&g]);
        assert_eq!(s.stroke, Paint::Color(Rgb::new(255, 0, 0)));
    }

    #[test]
    fn inline_beats_inherited() {
        let g = attrs(&[("stroke", "#f00")]);
        let line = attrs(&[("style", "stroke:#00f")]);
        assert_eq!(resolve_style(&line, &[&g]).stroke, Paint::Color(Rgb::new(0, 0, 255)));
    }

    #[test]
    fn inline_beats_attribute_on_same_node() {
        let n = attrs(&[("fill", "red"), ("style", "fill: blue !important")]);
        assert_eq!(resolve_style(&n, &[]).fill, Paint::Color(Rgb::new(0, 0, 255)));
    }

    #[test]
    fn nearest_ancestor_wins() {
        let outer = attrs(&[("stroke", "red")]);
        let inner = attrs(&[("stroke", "blue")]);
        let leaf = attrs(&[]);
        assert_eq!(
            resolve_style(&leaf, &[&outer, &inner]).stroke,
            Paint::Color(Rgb::new(0, 0, 255))
        );
    }

    #[test]
    fn defaults() {
        let s = resolve_style(&attrs(&[]), &[]);
        assert_eq!(s.fill, Paint::Color(Rgb::BLACK));
        assert_eq!(s.stroke, Paint::None);
        assert_eq!(s.stroke_width, 1.0);
        assert_eq!(s.stroke_dasharray, None);
    }

    #[test]
    fn unknown_color_is_sentinel() {
        let s = resolve_style(&attrs(&[("fill", "hsl(1,2%,3%)")]), &[]);
        assert!(matches!(s.fill, Paint::Unknown(_)));
    }

    #[test]
    fn url_refs() {
        assert_eq!(parse_url_ref("url(#p1)"), Some("p1".into()));
        assert_eq!(parse_url_ref("url('#p1') red"), Some("p1".into()));
        assert_eq!(parse_url_ref("url(p1)"), None);
        assert_eq!(Paint::parse("url(#g)"), Paint::Url("g".into()));
    }

    #[test]
    fn font_list() {
        assert_eq!(primary_family("'Times New Roman', serif"), Some("Times New Roman".into()));
    }
}
