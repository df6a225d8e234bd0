//! Greedy correspondence between ground-truth records and predicted candidates.

use std::cmp::Ordering;

use super::extract::{ArrowCandidate, ShapeCandidate};
use super::scorers::score_label;
use crate::model::{ArrowMeta, ShapeMeta};
use crate::svg::{Aabb, Point};

/// Unlabeled shapes pair up only when their offsets are this close.
pub const POSITION_FALLBACK: f64 = 0.25;

/// Anchor and scale used to express centers as layout offsets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub anchor: Point,
    pub scale: f64,
}

impl Frame {
    /// Centroid of the centers, scaled by the diagonal of the union of boxes.
    pub fn of(boxes: &[Aabb]) -> Frame {
        if boxes.is_empty() {
            return Frame { anchor: Point::default(), scale: 1.0 };
        }
        let n = boxes.len() as f64;
        let (sx, sy) = boxes.iter().fold((0.0, 0.0), |(x, y), b| (x + b.center().x, y + b.center().y));
        let union = boxes.iter().skip(1).fold(boxes[0], |a, b| a.union(b));
        let d = union.diagonal();
        Frame { anchor: Point::new(sx / n, sy / n), scale: if d > 1e-9 { d } else { 1.0 } }
    }

    pub fn offset(&self, p: Point) -> [f64; 2] {
        [(p.x - self.anchor.x) / self.scale, (p.y - self.anchor.y) / self.scale]
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn meta_center(m: &ShapeMeta) -> Point {
    Point::new(m.attributes.center[0], m.attributes.center[1])
}

/// For each ground-truth shape, the index of its predicted partner.
///
/// Pairs with overlapping labels are taken first, best label score then
/// nearest offset. Remaining shapes without labels pair by offset alone.
pub fn match_shapes(gt: &[ShapeMeta], pred: &[ShapeCandidate]) -> Vec<Option<usize>> {
    let gf = Frame::of(&gt.iter().map(ShapeMeta::aabb).collect::<Vec<_>>());
    let pf = Frame::of(&pred.iter().map(|p| p.aabb).collect::<Vec<_>>());
    let mut pairs: Vec<(f64, f64, usize, usize)> = Vec::new();
    for (gi, g) in gt.iter().enumerate() {
        let go = gf.offset(meta_center(g));
        for (pi, p) in pred.iter().enumerate() {
            if g.attributes.label.trim().is_empty() || p.label.trim().is_empty() {
                continue;
            }
            let l = score_label(&g.attributes.label, &p.label);
            if l > 0.0 {
                pairs.push((l, dist(go, pf.offset(p.center())), gi, pi));
            }
        }
    }
    pairs.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
            .then((a.2, a.3).cmp(&(b.2, b.3)))
    });
    let mut out = vec![None; gt.len()];
    let mut taken = vec![false; pred.len()];
    let mut assign = |pairs: &[(f64, f64, usize, usize)], out: &mut Vec<Option<usize>>| {
        for &(_, _, gi, pi) in pairs {
            if out[gi].is_none() && !taken[pi] {
                out[gi] = Some(pi);
                taken[pi] = true;
            }
        }
    };
    assign(&pairs, &mut out);

    let blank = |s: &str| s.trim().is_empty();
    let mut fallback = Vec::new();
    for (gi, g) in gt.iter().enumerate() {
        if out[gi].is_some() {
            continue;
        }
        let go = gf.offset(meta_center(g));
        for (pi, p) in pred.iter().enumerate() {
            if !(blank(&g.attributes.label) || blank(&p.label)) {
                continue;
            }
            let d = dist(go, pf.offset(p.center()));
            if d <= POSITION_FALLBACK {
                fallback.push((0.0, d, gi, pi));
            }
        }
    }
    fallback.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal).then((a.2, a.3).cmp(&(b.2, b.3))));
    assign(&fallback, &mut out);
    out
}

/// A ground-truth arrow paired with a predicted one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArrowPair {
    pub pred: usize,
    /// Whether the predicted source and target correspond to the
    /// ground-truth source and target.
    pub src_ok: bool,
    pub dst_ok: bool,
}

/// Pairs arrows by how many endpoints land on the right shapes, preferring
/// the drawn direction when both orientations tie.
pub fn match_arrow_endpoints(
    gt_arrows: &[ArrowMeta],
    gt_shapes: &[ShapeMeta],
    pred_arrows: &[ArrowCandidate],
    shape_match: &[Option<usize>],
) -> Vec<Option<ArrowPair>> {
    // Predicted shape index -> ground-truth shape index.
    let mut back = std::collections::BTreeMap::new();
    for (gi, p) in shape_match.iter().enumerate() {
        if let Some(p) = p {
            back.insert(*p, gi);
        }
    }
    let gt_index = |id: &str| gt_shapes.iter().position(|s| s.id == id);
    let mut cands: Vec<(usize, bool, usize, usize, ArrowPair)> = Vec::new();
    for (gi, g) in gt_arrows.iter().enumerate() {
        let (gs, gd) = (gt_index(&g.attributes.src), gt_index(&g.attributes.dst));
        for (pi, p) in pred_arrows.iter().enumerate() {
            let ends = p.bound.map(|b| b.and_then(|b| back.get(&b).copied()));
            let hit = |a: Option<usize>, b: Option<usize>| a.is_some() && a == b;
            let fwd = (hit(ends[0], gs), hit(ends[1], gd));
            let rev = (hit(ends[1], gs), hit(ends[0], gd));
            let count = |c: (bool, bool)| c.0 as usize + c.1 as usize;
            let (forward, c) = if count(fwd) >= count(rev) { (true, fwd) } else { (false, rev) };
            if count(c) == 0 {
                continue;
            }
            cands.push((count(c), forward, gi, pi, ArrowPair { pred: pi, src_ok: c.0, dst_ok: c.1 }));
        }
    }
    cands.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)).then((a.2, a.3).cmp(&(b.2, b.3))));
    let mut out = vec![None; gt_arrows.len()];
    let mut taken = vec![false; pred_arrows.len()];
    for (_, _, gi, pi, pair) in cands {
        if out[gi].is_none() && !taken[pi] {
            out[gi] = Some(pair);
            taken[pi] = true;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fideval::scorers::FoundShape;
    use crate::model::{DashClass, FillStyle, ShapeAttributes, ShapeExtras, ShapeKind};
    use crate::svg::{ElementKind, Rgb};

    fn gt(id: &str, label: &str, x: f64) -> ShapeMeta {
        ShapeMeta {
            id: id.into(),
            attributes: ShapeAttributes {
                label: label.into(),
                kind: ShapeKind::Rectangle,
                fill_color: Rgb::WHITE,
                fill_style: FillStyle::Solid,
                stroke_color: Rgb::BLACK,
                border_style: DashClass::Solid,
                center: [x, 50.0],
                size: [40.0, 20.0],
                font: "Arial".into(),
                stroke_width: 1.0,
            },
            extras: ShapeExtras::default(),
        }
    }

    fn pred(label: &str, x: f64) -> ShapeCandidate {
        ShapeCandidate {
            id: String::new(),
            found: FoundShape::single(ElementKind::Rect),
            kind: ShapeKind::Rectangle,
            label: label.into(),
            fill_color: None,
            fill_style: FillStyle::Solid,
            stroke_color: None,
            dasharray: None,
            stroke_width: 1.0,
            font: None,
            aabb: Aabb::new(x - 20.0, 40.0, x + 20.0, 60.0),
            corner_radius: None,
            stack_layers: None,
        }
    }

    #[test]
    fn labels_win_over_position() {
        let g = [gt("s0", "Alpha", 0.0), gt("s1", "Beta", 200.0)];
        let p = [pred("Beta", 0.0), pred("Alpha", 200.0)];
        assert_eq!(match_shapes(&g, &p), vec![Some(1), Some(0)]);
    }

    #[test]
    fn partial_labels_rank_below_exact() {
        let g = [gt("s0", "Query Encoder", 0.0), gt("s1", "Query", 200.0)];
        let p = [pred("Query", 0.0), pred("Query Encoder", 200.0)];
        assert_eq!(match_shapes(&g, &p), vec![Some(1), Some(0)]);
    }

    #[test]
    fn unlabeled_fall_back_to_position() {
        let g = [gt("s0", "", 0.0), gt("s1", "", 200.0), gt("s2", "Gamma", 400.0)];
        let p = [pred("", 200.0), pred("", 0.0), pred("Delta", 400.0)];
        assert_eq!(match_shapes(&g, &p), vec![Some(1), Some(0), None]);
    }
}
