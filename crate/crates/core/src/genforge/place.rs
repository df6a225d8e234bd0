//! Collision-free shape placement.

use rand::Rng;

use super::geometry::{build_geometry, Geometry, ShapeSpec};
use super::{GenConfig, GenError, GenRng, LayoutPlan, PlacedShape, ShapeStyle};
use crate::model::ShapeKind;
use crate::svg::{quantize, Aabb, Point};

/// Placed shapes plus, for every plan position, the index it landed at.
#[derive(Clone, Debug)]
pub struct Placement {
    pub shapes: Vec<PlacedShape>,
    pub slot: Vec<Option<usize>>,
}

fn weighted<T: Copy>(rng: &mut GenRng, items: &[(T, f64)]) -> T {
    let total: f64 = items.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return items[rng.random_range(0..items.len())].0;
    }
    let mut x = rng.random_range(0.0..total);
    for &(item, w) in items {
        if x < w {
            return item;
        }
        x -= w;
    }
    items[items.len() - 1].0
}

pub(crate) fn pick_weighted<T: Copy>(rng: &mut GenRng, items: &[(T, f64)]) -> T {
    weighted(rng, items)
}

fn u(rng: &mut GenRng, r: [f64; 2]) -> f64 {
    if r[0] >= r[1] {
        r[0]
    } else {
        rng.random_range(r[0]..=r[1])
    }
}

/// Draws the proportions of one shape of `kind`.
fn draw_spec(kind: ShapeKind, cfg: &GenConfig, rng: &mut GenRng) -> ShapeSpec {
    let [w0, w1] = cfg.shape_width;
    let [h0, h1] = cfg.shape_height;
    let (w, h) = match kind {
        ShapeKind::Square | ShapeKind::Circle => {
            let s = u(rng, [h0 + 10.0, h1 + 10.0]);
            (s, s)
        }
        ShapeKind::TextLabel => (u(rng, [w0, w1]), u(rng, [34.0, 44.0])),
        ShapeKind::Diamond | ShapeKind::Diamond3d => (u(rng, [w0 + 10.0, w1]), u(rng, [h0 + 14.0, h1 + 12.0])),
        ShapeKind::Cylinder => (u(rng, [60.0, 90.0]), u(rng, [70.0, 100.0])),
        ShapeKind::Prism => (u(rng, [80.0, 110.0]), u(rng, [60.0, 84.0])),
        k if k.is_3d() => (u(rng, [w0 - 10.0, w1 - 20.0]), u(rng, [h0, h1 - 4.0])),
        _ => (u(rng, [w0, w1]), u(rng, [h0, h1])),
    };
    let (w, h) = (quantize(w), quantize(h));
    let depth = if kind.is_3d() { quantize(rng.random_range(8.0..=16.0)) } else { 0.0 };
    let param = quantize(match kind {
        ShapeKind::Hexagon | ShapeKind::Hexagon3d => rng.random_range(0.18..=0.28) * w,
        ShapeKind::Parallelogram => rng.random_range(0.15..=0.25) * w,
        ShapeKind::Trapezoid | ShapeKind::Trapezoid3d => rng.random_range(0.12..=0.2) * w,
        ShapeKind::WaveRect => rng.random_range(0.08..=0.13) * h,
        ShapeKind::Cloud => rng.random_range(0.16..=0.22) * w.min(h),
        ShapeKind::Cylinder => rng.random_range(0.12..=0.18) * h,
        _ => 0.0,
    });
    let mut blob = [0.0; 8];
    if kind == ShapeKind::Blob {
        for b in &mut blob[..4] {
            *b = rng.random_range(0.35..=0.65);
        }
        for b in &mut blob[4..] {
            *b = rng.random_range(0.5..=0.6);
        }
    }
    let (lobes, lobe_phase) = if kind == ShapeKind::Cloud {
        (rng.random_range(6..=9), rng.random_range(0.0..std::f64::consts::TAU))
    } else {
        (0, 0.0)
    };
    let stack = (!kind.is_3d() && rng.random_bool(cfg.stack_prob)).then(|| {
        let n = rng.random_range(cfg.stack_layers[0]..=cfg.stack_layers[1]);
        (n, quantize(rng.random_range(5.0..=8.0)))
    });
    ShapeSpec { kind, w, h, depth, param, blob, lobes, lobe_phase, stack, corner_radius: 0.0 }
}

fn choose_palette(cfg: &GenConfig, rng: &mut GenRng) -> Vec<ShapeKind> {
    let size = rng.random_range(cfg.kind_palette[0]..=cfg.kind_palette[1]);
    let mut pool = cfg.kind_weights.clone();
    let mut out = Vec::with_capacity(size);
    while out.len() < size && !pool.is_empty() {
        let k = weighted(rng, &pool);
        pool.retain(|(p, _)| *p != k);
        out.push(k);
    }
    out
}

fn fits(g: &Geometry, placed: &[PlacedShape], canvas: &Aabb, cfg: &GenConfig) -> bool {
    if !canvas.contains_box(&g.aabb) {
        return false;
    }
    let half = cfg.min_gap / 2.0;
    let mine = g.aabb.inflate(half);
    let c = g.aabb.center();
    placed.iter().all(|p| {
        !mine.intersects(&p.aabb.inflate(half)) && c.distance(p.center()) >= cfg.min_center_distance
    })
}

/// Places one shape per plan position, retrying on rings of growing radius
/// and skipping positions that never fit.
pub fn place_shapes(plan: &LayoutPlan, cfg: &GenConfig, rng: &mut GenRng) -> Result<Placement, GenError> {
    let palette = choose_palette(cfg, rng);
    let canvas = Aabb::new(0.0, 0.0, cfg.canvas[0], cfg.canvas[1]).inflate(-cfg.canvas_margin);
    let mut shapes: Vec<PlacedShape> = Vec::new();
    let mut slot = Vec::with_capacity(plan.positions.len());
    let mut prev: Option<ShapeKind> = None;
    for &pos in &plan.positions {
        let choices: Vec<(ShapeKind, f64)> = palette
            .iter()
            .map(|&k| (k, if Some(k) == prev && palette.len() > 1 { cfg.repeat_weight } else { 1.0 }))
            .collect();
        let kind = weighted(rng, &choices);
        let spec = draw_spec(kind, cfg, rng);
        let mut found = None;
        'rings: for ring in 0..=cfg.placement_rings {
            let radius = ring as f64 * cfg.placement_step;
            let dirs = if ring == 0 { 1 } else { 8 };
            for d in 0..dirs {
                let a = std::f64::consts::TAU * d as f64 / 8.0;
                let c = Point::new(pos.x + radius * a.cos(), pos.y + radius * a.sin());
                // The front face is offset from the bounds for stacks and extrusions;
                // center the whole drawing on the candidate point.
                let probe = build_geometry(&spec, c);
                let shift = Point::new(c.x - probe.aabb.center().x, c.y - probe.aabb.center().y);
                let g = build_geometry(&spec, Point::new(c.x + shift.x, c.y + shift.y));
                if fits(&g, &shapes, &canvas, cfg) {
                    found = Some(g);
                    break 'rings;
                }
            }
        }
        match found {
            Some(geometry) => {
                slot.push(Some(shapes.len()));
                prev = Some(kind);
                shapes.push(PlacedShape {
                    id: format!("s{}", shapes.len()),
                    kind,
                    spec,
                    aabb: geometry.aabb,
                    geometry,
                    style: ShapeStyle::default(),
                });
            }
            None => slot.push(None),
        }
    }
    if shapes.is_empty() {
        return Err(GenError::EmptyDiagram);
    }
    Ok(Placement { shapes, slot })
}
