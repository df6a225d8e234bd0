//! Code filtering, cleaning and corruption screening for SVG corpora.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::svg::{
    classify_elements, fmt_num, local_name, parse_number_list, parse_path_data, parse_svg,
    quantize, scan_number, Element, ElementCounts, Node, SvgDocument,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterThresholds {
    pub min_ratio: f64,
    pub max_complex: u64,
}

impl Default for FilterThresholds {
    fn default() -> Self {
        FilterThresholds { min_ratio: 0.40, max_complex: 50 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    RatioBelowThreshold,
    ComplexCountExceeded,
    Corrupted,
    ParseFailed,
    /// No geometric elements, so the ratio is undefined.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterVerdict {
    pub keep: bool,
    pub reasons: Vec<RejectReason>,
    /// `(B + K) / N`, absent when N = 0 or the input did not parse.
    pub ratio: Option<f64>,
    pub complex_count: u64,
}

impl FilterVerdict {
    fn from_reasons(reasons: Vec<RejectReason>, ratio: Option<f64>, complex_count: u64) -> Self {
        FilterVerdict { keep: reasons.is_empty(), reasons, ratio, complex_count }
    }
}

/// The filtering rule as a function of the element tallies alone.
pub fn filter_counts(counts: &ElementCounts, thresholds: &FilterThresholds) -> FilterVerdict {
    let n = counts.geometric();
    let mut reasons = Vec::new();
    let ratio = if n == 0 {
        reasons.push(RejectReason::Degenerate);
        None
    } else {
        let r = (counts.basic + counts.connectors) as f64 / n as f64;
        if r < thresholds.min_ratio {
            reasons.push(RejectReason::RatioBelowThreshold);
        }
        Some(r)
    };
    if counts.complex > thresholds.max_complex {
        reasons.push(RejectReason::ComplexCountExceeded);
    }
    FilterVerdict::from_reasons(reasons, ratio, counts.complex)
}

pub fn filter_code(doc: &SvgDocument, thresholds: &FilterThresholds) -> FilterVerdict {
    filter_counts(&classify_elements(doc), thresholds)
}

/// Full screening of raw text: parse, corruption check, then the ratio rule.
pub fn filter_text(
    text: &str,
    thresholds: &FilterThresholds,
    corruption: &CorruptionConfig,
) -> FilterVerdict {
    let corrupt = detect_corruption_with(text, corruption).corrupted;
    let mut verdict = match parse_svg(text) {
        Ok(doc) => filter_code(&doc, thresholds),
        Err(_) => FilterVerdict::from_reasons(vec![RejectReason::ParseFailed], None, 0),
    };
    if corrupt {
        verdict.reasons.insert(0, RejectReason::Corrupted);
        verdict.keep = false;
    }
    verdict
}

// ---------------------------------------------------------------------------
// corruption

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptionConfig {
    pub min_unit: usize,
    pub min_repeats: usize,
    /// Longest repeating unit searched for.
    pub max_period: usize,
    pub numeric_repeats: usize,
}

impl Default for CorruptionConfig {
    fn default() -> Self {
        CorruptionConfig { min_unit: 8, min_repeats: 20, max_period: 256, numeric_repeats: 50 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CorruptionEvidence {
    RepeatedSubstring { offset: usize, unit: String, repeats: usize },
    RepeatedNumber { offset: usize, literal: String, repeats: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorruptionReport {
    pub corrupted: bool,
    pub evidence: Option<CorruptionEvidence>,
}

pub fn detect_corruption(text: &str) -> CorruptionReport {
    detect_corruption_with(text, &CorruptionConfig::default())
}

pub fn detect_corruption_with(text: &str, cfg: &CorruptionConfig) -> CorruptionReport {
    let evidence = repeated_substring(text, cfg).or_else(|| repeated_number(text, cfg));
    CorruptionReport { corrupted: evidence.is_some(), evidence }
}

// A unit of length p repeated k times is a run of p*(k-1) positions where
// s[i] == s[i+p]. Any shorter period also shows up at some multiple in range.
fn repeated_substring(text: &str, cfg: &CorruptionConfig) -> Option<CorruptionEvidence> {
    let s = text.as_bytes();
    let min_unit = cfg.min_unit.max(1);
    let repeats = cfg.min_repeats.max(2);
    for p in min_unit..=cfg.max_period.max(min_unit) {
        let need = p * (repeats - 1);
        if p + need > s.len() {
            break;
        }
        let mut run = 0usize;
        for i in 0..s.len() - p {
            if s[i] == s[i + p] {
                run += 1;
                if run >= need {
                    let start = i + 1 - run;
                    let mut end = i + p + 1;
                    while end < s.len() && s[end] == s[end - p] {
                        end += 1;
                    }
                    let unit = String::from_utf8_lossy(&s[start..start + p]).into_owned();
                    return Some(CorruptionEvidence::RepeatedSubstring {
                        offset: start,
                        unit,
                        repeats: (end - start) / p,
                    });
                }
            } else {
                run = 0;
            }
        }
    }
    None
}

fn repeated_number(text: &str, cfg: &CorruptionConfig) -> Option<CorruptionEvidence> {
    let s = text.as_bytes();
    let mut i = 0;
    // current run: literal, offset of its first occurrence, length
    let mut run: Option<(&str, usize, usize)> = None;
    while i < s.len() {
        if s[i].is_ascii_whitespace() || s[i] == b',' {
            i += 1;
            continue;
        }
        let Some(end) = scan_number(s, i) else {
            run = None;
            i += text[i..].chars().next().map_or(1, char::len_utf8);
            continue;
        };
        let lit = &text[i..end];
        run = match run {
            Some((p, at, n)) if p == lit => Some((p, at, n + 1)),
            _ => Some((lit, i, 1)),
        };
        if let Some((literal, offset, repeats)) = run {
            if repeats >= cfg.numeric_repeats {
                return Some(CorruptionEvidence::RepeatedNumber {
                    offset,
                    literal: literal.to_string(),
                    repeats,
                });
            }
        }
        i = end;
    }
    None
}

// ---------------------------------------------------------------------------
// cleaning

const NUMERIC_ATTRS: &[&str] = &[
    "x", "y", "x1", "y1", "x2", "y2", "cx", "cy", "r", "rx", "ry", "fx", "fy", "dx", "dy",
    "width", "height", "points", "viewBox", "transform", "stroke-width", "stroke-dasharray",
    "stroke-dashoffset", "font-size", "refX", "refY", "markerWidth", "markerHeight",
    "patternTransform", "gradientTransform",
];

const KEPT_PREFIXES: &[&str] = &["xlink", "xml", "svg"];

pub const ORIGINAL_VIEWBOX_ATTR: &str = "data-original-viewbox";

/// Drops metadata, comments and foreign-namespace nodes, moves the viewBox
/// origin to (0, 0), and rounds numeric attributes to three decimals.
/// Geometry and element kinds are left alone, so counts are preserved.
pub fn clean_svg(doc: &SvgDocument) -> SvgDocument {
    doc.edited(|root| {
        strip(root);
        anchor_view_box(root);
        round_numbers(root);
    })
}

fn is_foreign(name: &str) -> bool {
    match name.split_once(':') {
        Some(("xmlns", p)) => !KEPT_PREFIXES.contains(&p),
        Some((p, _)) => !KEPT_PREFIXES.contains(&p),
        None => false,
    }
}

fn strip(e: &mut Element) {
    e.attrs.retain(|k, _| !is_foreign(k));
    e.children.retain(|c| match c {
        Node::Comment(_) => false,
        Node::Element(child) => {
            !is_foreign(&child.name) && !local_name(&child.name).eq_ignore_ascii_case("metadata")
        }
        Node::Text(_) => true,
    });
    for c in &mut e.children {
        if let Node::Element(child) = c {
            strip(child);
        }
    }
}

fn anchor_view_box(root: &mut Element) {
    let Some(vb) = root.attr("viewBox").map(str::to_string) else {
        return;
    };
    let n = parse_number_list(&vb);
    if n.len() != 4 || (n[0] == 0.0 && n[1] == 0.0) {
        return;
    }
    let mut attrs = std::collections::BTreeMap::new();
    attrs.insert(
        "transform".to_string(),
        format!("translate({},{})", fmt_num(-n[0]), fmt_num(-n[1])),
    );
    let wrapper = Element {
        name: "g".into(),
        kind: crate::svg::ElementKind::Group,
        attrs,
        style: Default::default(),
        children: std::mem::take(&mut root.children),
    };
    root.children.push(Node::Element(wrapper));
    root.attrs.insert("viewBox".into(), format!("0 0 {} {}", fmt_num(n[2]), fmt_num(n[3])));
    root.attrs.entry(ORIGINAL_VIEWBOX_ATTR.into()).or_insert(vb);
}

fn round_numbers(e: &mut Element) {
    for (k, v) in e.attrs.iter_mut() {
        if k == "d" {
            if let Some(d) = round_path(v) {
                *v = d;
            }
        } else if NUMERIC_ATTRS.contains(&k.as_str()) {
            if let Some(r) = round_tokens(v) {
                *v = r;
            }
        }
    }
    for c in &mut e.children {
        if let Node::Element(child) = c {
            round_numbers(child);
        }
    }
}

fn round_path(d: &str) -> Option<String> {
    let mut path = parse_path_data(d).ok()?;
    let mut changed = false;
    for cmd in &mut path.commands {
        for p in &mut cmd.params {
            let q = quantize(*p);
            if q != *p {
                *p = q;
                changed = true;
            }
        }
    }
    changed.then(|| path.to_string())
}

/// Rewrites only the numeric tokens that carry more than three decimals;
/// everything else is copied verbatim. `None` when nothing changed.
fn round_tokens(value: &str) -> Option<String> {
    let s = value.as_bytes();
    let mut out = String::with_capacity(value.len());
    let mut changed = false;
    let mut i = 0;
    while i < s.len() {
        let starts_number = s[i].is_ascii_digit() || matches!(s[i], b'.' | b'-' | b'+');
        let end = if starts_number { scan_number(s, i) } else { None };
        let Some(end) = end else {
            let ch = value[i..].chars().next().unwrap();
            out.push(ch);
            i += ch.len_utf8();
            continue;
        };
        let token = &value[i..end];
        match token.parse::<f64>() {
            Ok(v) if quantize(v) != v || token.contains(['e', 'E']) => {
                let formatted = fmt_num(v);
                let glued = out.ends_with(|c: char| c.is_ascii_digit() || c == '.')
                    && !formatted.starts_with('-');
                if glued {
                    out.push(' ');
                }
                out.push_str(&formatted);
                if s.get(end).is_some_and(|b| b.is_ascii_digit() || *b == b'.') {
                    out.push(' ');
                }
                changed = true;
            }
            _ => out.push_str(token),
        }
        i = end;
    }
    changed.then_some(out)
}

// ---------------------------------------------------------------------------
// figure classifier labels

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ImageClass {
    Keep,
    Image,
    Math,
    Plot,
}

impl ImageClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ImageClass::Keep => "KEEP",
            ImageClass::Image => "IMAGE",
            ImageClass::Math => "MATH",
            ImageClass::Plot => "PLOT",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("classifier response is not one of IMAGE, PLOT, MATH, KEEP: {raw:?}")]
pub struct UnparseableLabel {
    pub raw: String,
}

pub fn parse_classifier_label(response: &str) -> Result<ImageClass, UnparseableLabel> {
    match response.trim().to_ascii_uppercase().as_str() {
        "KEEP" => Ok(ImageClass::Keep),
        "IMAGE" => Ok(ImageClass::Image),
        "MATH" => Ok(ImageClass::Math),
        "PLOT" => Ok(ImageClass::Plot),
        _ => Err(UnparseableLabel { raw: response.to_string() }),
    }
}

/// The prompt sent to the figure classifier.
pub fn classifier_prompt() -> &'static str {
    crate::judge::prompts::CLASSIFIER
}
