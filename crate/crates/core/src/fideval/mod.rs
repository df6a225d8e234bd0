//! Attribute-level fidelity scoring of a predicted SVG against ground truth.
//!
//! Ground truth is either a generated metadata record or a reference SVG run
//! through the same extractor as the prediction ("standalone" mode).

mod extract;
mod matching;
mod report;
mod scorers;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use extract::{bind_endpoint, extract, infer_fill_style, resolve_fill, ArrowCandidate, Extraction, ShapeCandidate};
pub use matching::{match_arrow_endpoints, match_shapes, ArrowPair, Frame, POSITION_FALLBACK};
pub use report::{Aggregate, ARROW_COLUMNS, SHAPE_COLUMNS};
pub use scorers::*;

use crate::model::{
    ArrowAttributes, ArrowExtras, ArrowMeta, SampleMetadata, ShapeAttributes, ShapeExtras, ShapeMeta,
};
use crate::svg::{parse_svg, Point, Rgb, SvgDocument, SvgError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FidevalError {
    #[error("reference SVG could not be parsed: {0}")]
    Reference(SvgError),
    #[error("no shapes could be extracted from the SVG")]
    ExtractionEmpty,
}

/// Scores of one ground-truth shape, in column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeScore {
    pub id: String,
    pub matched: Option<String>,
    pub label: f64,
    pub kind: f64,
    pub fill_color: f64,
    pub fill_style: f64,
    pub stroke_color: f64,
    pub border_style: f64,
    pub position: f64,
    pub font: f64,
    pub aspect_ratio: f64,
}

impl ShapeScore {
    fn missed(id: &str) -> Self {
        ShapeScore {
            id: id.to_string(),
            matched: None,
            label: 0.0,
            kind: 0.0,
            fill_color: 0.0,
            fill_style: 0.0,
            stroke_color: 0.0,
            border_style: 0.0,
            position: 0.0,
            font: 0.0,
            aspect_ratio: 0.0,
        }
    }

    pub fn values(&self) -> [f64; 9] {
        [
            self.label,
            self.kind,
            self.fill_color,
            self.fill_style,
            self.stroke_color,
            self.border_style,
            self.position,
            self.font,
            self.aspect_ratio,
        ]
    }

    pub fn composite(&self) -> f64 {
        self.values().iter().sum::<f64>() / 9.0
    }
}

/// Scores of one ground-truth arrow, in column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowScore {
    pub id: String,
    pub matched: Option<String>,
    pub src: f64,
    pub dst: f64,
    pub head: f64,
    pub head_size: f64,
    pub curve: f64,
    pub overlap: f64,
    pub color: f64,
}

impl ArrowScore {
    fn missed(id: &str) -> Self {
        ArrowScore {
            id: id.to_string(),
            matched: None,
            src: 0.0,
            dst: 0.0,
            head: 0.0,
            head_size: 0.0,
            curve: 0.0,
            overlap: 0.0,
            color: 0.0,
        }
    }

    pub fn values(&self) -> [f64; 7] {
        [self.src, self.dst, self.head, self.head_size, self.curve, self.overlap, self.color]
    }

    pub fn composite(&self) -> f64 {
        self.values().iter().sum::<f64>() / 7.0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    /// No prediction file.
    pub missing: bool,
    /// The prediction could not be parsed or held no shapes.
    pub parse_error: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreCard {
    pub shapes: Vec<ShapeScore>,
    pub arrows: Vec<ArrowScore>,
    pub extra_shapes: usize,
    pub extra_arrows: usize,
    pub r_s: f64,
    /// Absent when the ground truth has no arrows.
    pub r_a: Option<f64>,
    pub r: f64,
    pub coverage: Coverage,
}

/// Mean composite discounted by unmatched predictions:
/// `mean * n / (n + extra)`.
pub fn composite(scores: &[f64], extra: usize) -> f64 {
    if scores.is_empty() {
        return if extra == 0 { 1.0 } else { 0.0 };
    }
    let n = scores.len() as f64;
    let mean = scores.iter().sum::<f64>() / n;
    mean * n / (n + extra as f64)
}

/// Overall reward from the shape and arrow composites.
pub fn overall(r_s: f64, r_a: Option<f64>) -> f64 {
    match r_a {
        Some(a) => (r_s + a) / 2.0,
        None => r_s,
    }
}

impl ScoreCard {
    fn assemble(shapes: Vec<ShapeScore>, arrows: Vec<ArrowScore>, extra_shapes: usize, extra_arrows: usize, gt_arrows: usize) -> Self {
        let sc: Vec<f64> = shapes.iter().map(ShapeScore::composite).collect();
        let ac: Vec<f64> = arrows.iter().map(ArrowScore::composite).collect();
        let r_s = composite(&sc, extra_shapes);
        let r_a = (gt_arrows > 0).then(|| composite(&ac, extra_arrows));
        ScoreCard {
            shapes,
            arrows,
            extra_shapes,
            extra_arrows,
            r_s,
            r_a,
            r: overall(r_s, r_a),
            coverage: Coverage::default(),
        }
    }

    /// All-zero card for a prediction that is missing or unreadable.
    pub fn failed(gt: &SampleMetadata, coverage: Coverage) -> Self {
        let shapes = gt.shapes.iter().map(|s| ShapeScore::missed(&s.id)).collect();
        let arrows = gt.arrows.iter().map(|a| ArrowScore::missed(&a.id)).collect();
        let mut card = ScoreCard::assemble(shapes, arrows, 0, 0, gt.arrows.len());
        card.coverage = coverage;
        card
    }
}

fn pt(p: [f64; 2]) -> Point {
    Point::new(p[0], p[1])
}

/// Scores an already parsed prediction against `gt`.
pub fn evaluate(gt: &SampleMetadata, pred: &SvgDocument, tiers: &Tiers) -> ScoreCard {
    let ex = extract(pred, tiers);
    if ex.shapes.is_empty() {
        return ScoreCard::failed(gt, Coverage { missing: false, parse_error: true });
    }
    evaluate_extraction(gt, &ex, tiers)
}

/// Scores an extraction against `gt`.
pub fn evaluate_extraction(gt: &SampleMetadata, ex: &Extraction, tiers: &Tiers) -> ScoreCard {
    let shape_match = match_shapes(&gt.shapes, &ex.shapes);
    let gf = Frame::of(&gt.shapes.iter().map(ShapeMeta::aabb).collect::<Vec<_>>());
    let pf = Frame::of(&ex.shapes.iter().map(|s| s.aabb).collect::<Vec<_>>());

    let shapes: Vec<ShapeScore> = gt
        .shapes
        .iter()
        .zip(&shape_match)
        .map(|(g, m)| {
            let Some(pi) = m else { return ShapeScore::missed(&g.id) };
            let p = &ex.shapes[*pi];
            let a = &g.attributes;
            let [gw, gh] = a.size;
            let [pw, ph] = p.size();
            ShapeScore {
                id: g.id.clone(),
                matched: Some(p.id.clone()),
                label: score_label(&a.label, &p.label),
                kind: score_type(a.kind, p.found, tiers),
                fill_color: score_color(Some(a.fill_color), p.fill_color),
                fill_style: score_fill_style(a.fill_style, p.fill_style, tiers),
                stroke_color: score_color(Some(a.stroke_color), p.stroke_color),
                border_style: score_border_style(a.border_style, p.dasharray.as_deref(), p.stroke_width, tiers),
                position: score_position(gf.offset(pt(a.center)), pf.offset(p.center())),
                font: score_font(&a.font, p.font.as_deref(), tiers),
                aspect_ratio: if gh > 0.0 && ph > 0.0 {
                    score_aspect_ratio(gw / gh, pw / ph, tiers)
                } else {
                    0.0
                },
            }
        })
        .collect();
    let extra_shapes = ex.shapes.len() - shape_match.iter().flatten().count();

    let arrow_match = match_arrow_endpoints(&gt.arrows, &gt.shapes, &ex.arrows, &shape_match);
    let gt_index = |id: &str| gt.shapes.iter().position(|s| s.id == id);
    let arrows: Vec<ArrowScore> = gt
        .arrows
        .iter()
        .zip(&arrow_match)
        .map(|(g, m)| {
            let Some(pair) = m else { return ArrowScore::missed(&g.id) };
            let p = &ex.arrows[pair.pred];
            let a = &g.attributes;
            let (gs, gd) = (gt_index(&a.src), gt_index(&a.dst));
            // The tip is hidden when it sits inside a shape other than its ends.
            let tip = pt(g.extras.endpoints[1]);
            let occluded = gt
                .shapes
                .iter()
                .enumerate()
                .any(|(i, s)| Some(i) != gs && Some(i) != gd && s.aabb().contains(tip));
            let expected: Vec<usize> = [gs, gd].iter().flatten().filter_map(|&i| shape_match[i]).collect();
            let buried = [p.start, p.end]
                .iter()
                .filter(|e| {
                    ex.shapes
                        .iter()
                        .enumerate()
                        .any(|(i, s)| !expected.contains(&i) && !p.bound.contains(&Some(i)) && s.aabb.contains(**e))
                })
                .count();
            let head_size = match (a.head, p.head_size) {
                (true, Some(ps)) => score_head_size(a.head_size, g.extras.stroke_width, ps, p.stroke_width, tiers),
                (false, None) => 1.0,
                _ => 0.0,
            };
            ArrowScore {
                id: g.id.clone(),
                matched: Some(p.id.clone()),
                src: pair.src_ok as u8 as f64,
                dst: pair.dst_ok as u8 as f64,
                head: score_arrow_head(a.head, p.head, occluded),
                head_size,
                curve: score_curve(a.curved, p.curved),
                overlap: score_overlap(buried, tiers),
                color: score_color(Some(a.color), p.color),
            }
        })
        .collect();
    let extra_arrows = ex.arrows.len() - arrow_match.iter().flatten().count();
    ScoreCard::assemble(shapes, arrows, extra_shapes, extra_arrows, gt.arrows.len())
}

/// Scores prediction text, recording a missing or unreadable prediction in
/// the coverage flags.
pub fn evaluate_text(gt: &SampleMetadata, pred: Option<&str>, tiers: &Tiers) -> ScoreCard {
    let Some(text) = pred else {
        return ScoreCard::failed(gt, Coverage { missing: true, parse_error: false });
    };
    match parse_svg(text) {
        Ok(doc) => evaluate(gt, &doc, tiers),
        Err(_) => ScoreCard::failed(gt, Coverage { missing: false, parse_error: true }),
    }
}

/// Ground-truth records recovered from a reference SVG.
pub fn extract_groundtruth_from_svg(doc: &SvgDocument, tiers: &Tiers) -> Result<SampleMetadata, FidevalError> {
    let ex = extract(doc, tiers);
    if ex.shapes.is_empty() {
        return Err(FidevalError::ExtractionEmpty);
    }
    let shapes: Vec<ShapeMeta> = ex
        .shapes
        .iter()
        .map(|s| {
            let fill_color = s.fill_color.unwrap_or(Rgb::WHITE);
            ShapeMeta {
                id: s.id.clone(),
                attributes: ShapeAttributes {
                    label: s.label.clone(),
                    kind: s.kind,
                    fill_color,
                    fill_style: s.fill_style,
                    stroke_color: s.stroke_color.unwrap_or(fill_color),
                    border_style: s.border_style(tiers),
                    center: [s.center().x, s.center().y],
                    size: s.size(),
                    font: s.font.clone().unwrap_or_default(),
                    stroke_width: s.stroke_width,
                },
                extras: ShapeExtras { corner_radius: s.corner_radius, stack_layers: s.stack_layers },
            }
        })
        .collect();
    let arrows = ex
        .arrows
        .iter()
        .map(|a| {
            let id_of = |b: Option<usize>| b.map(|i| ex.shapes[i].id.clone()).unwrap_or_default();
            ArrowMeta {
                id: a.id.clone(),
                attributes: ArrowAttributes {
                    src: id_of(a.bound[0]),
                    dst: id_of(a.bound[1]),
                    head: a.head,
                    head_size: a.head_size.unwrap_or(0.0),
                    curved: a.curved,
                    color: a.color.unwrap_or(Rgb::BLACK),
                },
                extras: ArrowExtras {
                    stroke_width: a.stroke_width,
                    line_pattern: classify_dasharray(a.dasharray.as_deref(), a.stroke_width, tiers),
                    endpoints: [[a.start.x, a.start.y], [a.end.x, a.end.y]],
                    control: a.control.map(|c| [c.x, c.y]),
                },
            }
        })
        .collect();
    Ok(SampleMetadata::from_records(
        [doc.canvas.width, doc.canvas.height],
        shapes,
        arrows,
    ))
}

/// Scores `pred` against ground truth extracted from `reference`.
pub fn evaluate_standalone(reference: &str, pred: Option<&str>, tiers: &Tiers) -> Result<ScoreCard, FidevalError> {
    let doc = parse_svg(reference).map_err(FidevalError::Reference)?;
    let gt = extract_groundtruth_from_svg(&doc, tiers)?;
    Ok(evaluate_text(&gt, pred, tiers))
}
