//! Per-attribute scores. Every scorer returns a value in `[0, 1]`.

use std::collections::BTreeSet;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::fonts::font_class;
use crate::model::{DashClass, FillStyle, ShapeKind};
use crate::svg::{parse_number_list, ElementKind, Rgb};

/// Tier constants used by the scorers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tiers {
    pub type_substitute: f64,
    pub type_group: f64,
    pub patterned_mismatch: f64,
    pub dash_mismatch: f64,
    pub font_same_class: f64,
    pub aspect_full: f64,
    pub aspect_zero: f64,
    /// `(max ratio, score)` steps for head size; anything beyond scores `head_floor`.
    pub head_steps: Vec<(f64, f64)>,
    pub head_floor: f64,
    pub overlap_one: f64,
    /// Endpoint binding radius in px.
    pub bind_radius: f64,
    /// Dashes up to this multiple of the stroke width count as dots.
    pub dot_ratio: f64,
}

impl Default for Tiers {
    fn default() -> Self {
        Tiers {
            type_substitute: 0.4,
            type_group: 0.3,
            patterned_mismatch: 0.5,
            dash_mismatch: 0.5,
            font_same_class: 0.5,
            aspect_full: 1.2,
            aspect_zero: 3.0,
            head_steps: vec![(1.3, 1.0), (1.8, 0.6), (2.5, 0.3)],
            head_floor: 0.1,
            overlap_one: 0.4,
            bind_radius: 100.0,
            dot_ratio: 1.5,
        }
    }
}

const CUBE_DIAMETER: f64 = 441.672_955_930_063_7; // 255 * sqrt(3)

/// `1 - |a - b| / (255 sqrt 3)`; an unknown color scores 0.
pub fn score_color(a: Option<Rgb>, b: Option<Rgb>) -> f64 {
    let (Some(a), Some(b)) = (a, b) else { return 0.0 };
    let d = |x: u8, y: u8| (x as f64 - y as f64).powi(2);
    let dist = (d(a.r, b.r) + d(a.g, b.g) + d(a.b, b.b)).sqrt();
    (1.0 - dist / CUBE_DIAMETER).clamp(0.0, 1.0)
}

fn words(s: &str) -> BTreeSet<String> {
    s.split_whitespace().map(|w| w.to_lowercase()).collect()
}

/// Case-folded exact match scores 1 (two blank labels included); otherwise
/// Jaccard overlap of word sets.
pub fn score_label(gt: &str, pred: &str) -> f64 {
    let norm = |s: &str| s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    if norm(gt) == norm(pred) {
        return 1.0;
    }
    let (a, b) = (words(gt), words(pred));
    let union = a.union(&b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(&b).count() as f64 / union as f64
}

/// How the predicted shape was drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoundShape {
    /// Tag of the front element.
    pub tag: ElementKind,
    /// Several elements were merged into one shape.
    pub composite: bool,
}

impl FoundShape {
    pub fn single(tag: ElementKind) -> Self {
        FoundShape { tag, composite: false }
    }
}

/// Tags that draw `kind` natively.
pub fn accepted_tags(kind: ShapeKind) -> &'static [ElementKind] {
    use ElementKind::*;
    match kind {
        ShapeKind::Rectangle | ShapeKind::Square | ShapeKind::TextLabel => &[Rect],
        ShapeKind::Circle => &[Circle, Ellipse],
        ShapeKind::Ellipse => &[Ellipse],
        ShapeKind::Diamond
        | ShapeKind::Hexagon
        | ShapeKind::Parallelogram
        | ShapeKind::Trapezoid
        | ShapeKind::Prism => &[Polygon, Path],
        ShapeKind::Blob | ShapeKind::WaveRect | ShapeKind::Cloud => &[Path],
        _ => &[],
    }
}

/// 1 for a native drawing, a substitute tier for path/polygon or group
/// stand-ins, 0 otherwise.
pub fn score_type(expected: ShapeKind, found: FoundShape, tiers: &Tiers) -> f64 {
    let native = accepted_tags(expected).contains(&found.tag);
    let outline = matches!(found.tag, ElementKind::Path | ElementKind::Polygon);
    if expected.is_3d() {
        return if found.composite {
            1.0
        } else if outline {
            tiers.type_substitute
        } else {
            0.0
        };
    }
    if expected == ShapeKind::Other {
        return if found.tag.is_geometric() { 1.0 } else { 0.0 };
    }
    if native {
        1.0
    } else if found.composite {
        tiers.type_group
    } else if outline {
        tiers.type_substitute
    } else {
        0.0
    }
}

pub fn score_fill_style(gt: FillStyle, pred: FillStyle, tiers: &Tiers) -> f64 {
    if gt == pred {
        1.0
    } else if !gt.is_solid() && !pred.is_solid() {
        tiers.patterned_mismatch
    } else {
        0.0
    }
}

/// Dash class of a `stroke-dasharray` value drawn at `stroke_width`.
pub fn classify_dasharray(value: Option<&str>, stroke_width: f64, tiers: &Tiers) -> DashClass {
    let Some(v) = value.map(str::trim) else { return DashClass::Solid };
    if v.is_empty() || v.eq_ignore_ascii_case("none") {
        return DashClass::Solid;
    }
    let mut nums = parse_number_list(v);
    let tokens = v.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).count();
    if nums.len() != tokens || nums.iter().any(|n| *n < 0.0 || !n.is_finite()) {
        warn!("unparseable stroke-dasharray {v:?}, treating as solid");
        return DashClass::Solid;
    }
    if nums.iter().all(|n| *n == 0.0) {
        return DashClass::Solid;
    }
    if nums.len() % 2 == 1 {
        nums.extend(nums.clone());
    }
    let dashes: Vec<f64> = nums.iter().step_by(2).copied().collect();
    let sw = if stroke_width > 0.0 { stroke_width } else { 1.0 };
    if dashes.iter().all(|d| *d <= tiers.dot_ratio * sw) {
        return DashClass::Dotted;
    }
    let mut distinct: Vec<f64> = Vec::new();
    for d in dashes {
        if !distinct.iter().any(|x| (x - d).abs() <= 1e-6 * x.abs().max(1.0)) {
            distinct.push(d);
        }
    }
    if distinct.len() >= 2 {
        DashClass::DashDot
    } else {
        DashClass::Dashed
    }
}

pub fn score_dash_class(gt: DashClass, pred: DashClass, tiers: &Tiers) -> f64 {
    if gt == pred {
        1.0
    } else if gt != DashClass::Solid && pred != DashClass::Solid {
        tiers.dash_mismatch
    } else {
        0.0
    }
}

pub fn score_border_style(gt: DashClass, pred: Option<&str>, stroke_width: f64, tiers: &Tiers) -> f64 {
    score_dash_class(gt, classify_dasharray(pred, stroke_width, tiers), tiers)
}

/// `1 - min(1, |gt - pred|)` on frame-normalized offsets.
pub fn score_position(gt: [f64; 2], pred: [f64; 2]) -> f64 {
    let d = (gt[0] - pred[0]).hypot(gt[1] - pred[1]);
    // Offsets are ratios of rounded coordinates; ignore float residue.
    if d < 1e-9 {
        return 1.0;
    }
    1.0 - d.min(1.0)
}

/// A shape without text has no font; a prediction without text matches it.
pub fn score_font(gt: &str, pred: Option<&str>, tiers: &Tiers) -> f64 {
    let Some(pred) = pred else { return if gt.trim().is_empty() { 1.0 } else { 0.0 } };
    let norm = |s: &str| s.trim().trim_matches(|c| c == '\'' || c == '"').to_lowercase();
    if norm(gt) == norm(pred) {
        1.0
    } else if font_class(gt) == font_class(pred) {
        tiers.font_same_class
    } else {
        0.0
    }
}

/// Ratio deviation `max(p/g, g/p)`: full credit up to the first bound, zero
/// from the second, linear between.
pub fn score_aspect_ratio(gt: f64, pred: f64, tiers: &Tiers) -> f64 {
    if !(gt > 0.0 && pred > 0.0 && gt.is_finite() && pred.is_finite()) {
        return 0.0;
    }
    let rho = (pred / gt).max(gt / pred);
    if rho <= tiers.aspect_full {
        1.0
    } else if rho >= tiers.aspect_zero {
        0.0
    } else {
        (tiers.aspect_zero - rho) / (tiers.aspect_zero - tiers.aspect_full)
    }
}

/// Head sizes compared after dividing by their stroke widths.
pub fn score_head_size(gt: f64, gt_stroke: f64, pred: f64, pred_stroke: f64, tiers: &Tiers) -> f64 {
    if !(gt > 0.0 && pred > 0.0 && gt_stroke > 0.0 && pred_stroke > 0.0) {
        return tiers.head_floor;
    }
    let (a, b) = (gt / gt_stroke, pred / pred_stroke);
    let rho = (a / b).max(b / a);
    for &(bound, score) in &tiers.head_steps {
        if rho <= bound + 1e-12 {
            return score;
        }
    }
    tiers.head_floor
}

pub fn score_curve(gt_curved: bool, pred_curved: bool) -> f64 {
    if gt_curved == pred_curved {
        1.0
    } else {
        0.0
    }
}

/// Number of endpoints buried in shapes other than the expected pair.
pub fn score_overlap(buried_endpoints: usize, tiers: &Tiers) -> f64 {
    match buried_endpoints {
        0 => 1.0,
        1 => tiers.overlap_one,
        _ => 0.0,
    }
}

/// A drawn head matches; a missing head is excused when the ground-truth tip
/// is hidden under another shape.
pub fn score_arrow_head(gt_head: bool, pred_head: bool, gt_tip_occluded: bool) -> f64 {
    if gt_head == pred_head || (gt_head && !pred_head && gt_tip_occluded) {
        1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Tiers {
        Tiers::default()
    }

    #[test]
    fn cube_diameter_constant() {
        assert!((CUBE_DIAMETER - 255.0 * 3f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn color_tiers() {
        let red = Some(Rgb::new(255, 0, 0));
        let blue = Some(Rgb::new(0, 0, 255));
        assert_eq!(score_color(red, red), 1.0);
        assert_eq!(score_color(Some(Rgb::BLACK), Some(Rgb::WHITE)), 0.0);
        assert!((score_color(red, blue) - (1.0 - 2f64.sqrt() / 3f64.sqrt())).abs() < 1e-12);
        assert_eq!(score_color(red, None), 0.0);
        assert_eq!(score_color(red, blue), score_color(blue, red));
    }

    #[test]
    fn label_tiers() {
        assert_eq!(score_label("Filter Norm.", "Filter Norm."), 1.0);
        assert_eq!(score_label("Filter  norm.", "filter Norm."), 1.0);
        assert_eq!(score_label("Lookup Int.", "Lookup"), 0.5);
        assert_eq!(score_label("Decoder", "Encoder"), 0.0);
        assert_eq!(score_label("", ""), 1.0);
        assert_eq!(score_label("Box", ""), 0.0);
    }

    #[test]
    fn type_tiers() {
        let t = t();
        assert_eq!(score_type(ShapeKind::Rectangle, FoundShape::single(ElementKind::Rect), &t), 1.0);
        assert_eq!(score_type(ShapeKind::Circle, FoundShape::single(ElementKind::Path), &t), 0.4);
        assert_eq!(score_type(ShapeKind::Ellipse, FoundShape::single(ElementKind::Text), &t), 0.0);
        let group = FoundShape { tag: ElementKind::Path, composite: true };
        assert_eq!(score_type(ShapeKind::Rectangle, group, &t), 0.3);
        assert_eq!(score_type(ShapeKind::Cube, group, &t), 1.0);
        assert_eq!(score_type(ShapeKind::Cube, FoundShape::single(ElementKind::Polygon), &t), 0.4);
        let stack = FoundShape { tag: ElementKind::Ellipse, composite: true };
        assert_eq!(score_type(ShapeKind::Ellipse, stack, &t), 1.0);
    }

    #[test]
    fn fill_tiers() {
        let t = t();
        assert_eq!(score_fill_style(FillStyle::Dots, FillStyle::Dots, &t), 1.0);
        assert_eq!(score_fill_style(FillStyle::Hatching, FillStyle::Crosshatch, &t), 0.5);
        assert_eq!(score_fill_style(FillStyle::LinearGradient, FillStyle::Dots, &t), 0.5);
        assert_eq!(score_fill_style(FillStyle::Solid, FillStyle::Dots, &t), 0.0);
        assert_eq!(score_fill_style(FillStyle::GenericPattern, FillStyle::Solid, &t), 0.0);
    }

    #[test]
    fn dash_classes() {
        let t = t();
        assert_eq!(classify_dasharray(None, 1.0, &t), DashClass::Solid);
        assert_eq!(classify_dasharray(Some("none"), 1.0, &t), DashClass::Solid);
        assert_eq!(classify_dasharray(Some("1 3"), 2.0, &t), DashClass::Dotted);
        assert_eq!(classify_dasharray(Some("10 4 2 4"), 1.0, &t), DashClass::DashDot);
        assert_eq!(classify_dasharray(Some("8 4"), 1.0, &t), DashClass::Dashed);
        assert_eq!(classify_dasharray(Some("8,4,8,4"), 1.0, &t), DashClass::Dashed);
        // Odd lists repeat: "5 2 1" means dashes 5 and 1.
        assert_eq!(classify_dasharray(Some("5 2 1"), 1.0, &t), DashClass::DashDot);
        assert_eq!(classify_dasharray(Some("oops"), 1.0, &t), DashClass::Solid);
        assert_eq!(classify_dasharray(Some("0 0"), 1.0, &t), DashClass::Solid);
    }

    #[test]
    fn border_tiers() {
        let t = t();
        assert_eq!(score_border_style(DashClass::Dashed, Some("8 4"), 1.0, &t), 1.0);
        assert_eq!(score_border_style(DashClass::Dotted, Some("8 4"), 1.0, &t), 0.5);
        assert_eq!(score_border_style(DashClass::Solid, Some("8 4"), 1.0, &t), 0.0);
        assert_eq!(score_border_style(DashClass::Solid, None, 1.0, &t), 1.0);
    }

    #[test]
    fn position_tiers() {
        assert_eq!(score_position([0.1, 0.2], [0.1, 0.2]), 1.0);
        assert!((score_position([0.0, 0.0], [0.3, 0.4]) - 0.5).abs() < 1e-12);
        assert_eq!(score_position([0.0, 0.0], [1.0, 1.0]), 0.0);
    }

    #[test]
    fn font_tiers() {
        let t = t();
        assert_eq!(score_font("Georgia", Some("Georgia"), &t), 1.0);
        assert_eq!(score_font("Georgia", Some("Times"), &t), 0.5);
        assert_eq!(score_font("Georgia", Some("Courier"), &t), 0.0);
        assert_eq!(score_font("Georgia", None, &t), 0.0);
        assert_eq!(score_font("", None, &t), 1.0);
    }

    #[test]
    fn aspect_tiers() {
        let t = t();
        assert_eq!(score_aspect_ratio(2.0, 2.0, &t), 1.0);
        assert_eq!(score_aspect_ratio(1.0, 1.2, &t), 1.0);
        assert_eq!(score_aspect_ratio(1.0, 3.0, &t), 0.0);
        assert_eq!(score_aspect_ratio(3.0, 1.0, &t), 0.0);
        assert!((score_aspect_ratio(1.0, 1.6, &t) - 1.4 / 1.8).abs() < 1e-12);
        assert_eq!(score_aspect_ratio(1.0, 1.6, &t), score_aspect_ratio(1.6, 1.0, &t));
    }

    #[test]
    fn head_size_tiers() {
        let t = t();
        assert_eq!(score_head_size(10.0, 2.0, 10.0, 2.0, &t), 1.0);
        assert_eq!(score_head_size(10.0, 1.0, 13.0, 1.0, &t), 1.0);
        assert_eq!(score_head_size(10.0, 1.0, 30.0, 1.0, &t), 0.1);
        assert_eq!(score_head_size(10.0, 1.0, 20.0, 1.0, &t), 0.3);
        assert_eq!(score_head_size(10.0, 1.0, 17.0, 1.0, &t), 0.6);
        // Normalization by stroke width.
        assert_eq!(score_head_size(10.0, 1.0, 20.0, 2.0, &t), 1.0);
    }

    #[test]
    fn overlap_and_head_and_curve() {
        let t = t();
        assert_eq!(score_overlap(0, &t), 1.0);
        assert_eq!(score_overlap(1, &t), 0.4);
        assert_eq!(score_overlap(2, &t), 0.0);
        assert_eq!(score_arrow_head(true, true, false), 1.0);
        assert_eq!(score_arrow_head(true, false, false), 0.0);
        assert_eq!(score_arrow_head(true, false, true), 1.0);
        assert_eq!(score_curve(true, true), 1.0);
        assert_eq!(score_curve(false, true), 0.0);
    }
}
